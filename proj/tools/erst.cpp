// Command-line front end: validate, binarize, score, align, induce, stats,
// extract and render over document files.
//
// Exit codes: 0 success, 1 usage error, 2 validation failure, 3 scoring
// input mismatch.

#include <atomic>
#include <filesystem>
#include <future>
#include <iostream>
#include <optional>

#include "CLI11.hpp"
#include "erst/align.hpp"
#include "erst/induce.hpp"
#include "erst/io.hpp"
#include "erst/metrics.hpp"
#include "erst/render.hpp"
#include "erst/stats.hpp"
#include "erst/treeops.hpp"
#include "erst/validate.hpp"

namespace fs = std::filesystem;
using namespace erst;

namespace {

constexpr int kOk = 0;
constexpr int kUsage = 1;
constexpr int kInvalid = 2;
constexpr int kScoreMismatch = 3;

// Files or directories (expanded to their *.xml members, sorted).
std::vector<std::string> expand_paths(const std::vector<std::string>& args) {
  std::vector<std::string> out;
  for (const auto& arg : args) {
    if (fs::is_directory(arg)) {
      std::vector<std::string> inside;
      for (const auto& entry : fs::directory_iterator(arg))
        if (entry.is_regular_file() && entry.path().extension() == ".xml")
          inside.push_back(entry.path().string());
      std::sort(inside.begin(), inside.end());
      out.insert(out.end(), inside.begin(), inside.end());
    } else {
      out.push_back(arg);
    }
  }
  return out;
}

template <typename Fn>
void parallel_over(std::size_t count, int jobs, Fn&& fn) {
  jobs = std::max(1, jobs);
  if (jobs == 1 || count < 2) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < count; i = next++) fn(i);
  };
  std::vector<std::future<void>> futures;
  for (int j = 0; j < jobs; ++j) futures.push_back(std::async(std::launch::async, worker));
  for (auto& f : futures) f.get();
}

void print_violations(const std::string& name, const ValidationReport& report) {
  for (const auto& v : report.violations) {
    std::cerr << name << '\t' << (v.severity == Severity::Error ? "error" : "warning") << '\t'
              << v.code << '\t';
    for (std::size_t i = 0; i < v.nodes.size(); ++i) {
      if (i) std::cerr << ',';
      std::cerr << v.nodes[i];
    }
    std::cerr << '\t' << v.message << '\n';
  }
}

int cmd_validate(const std::vector<std::string>& docs, bool strict_secedge, int jobs) {
  auto paths = expand_paths(docs);
  ValidationPolicy policy;
  policy.secedge_signal = strict_secedge ? Severity::Error : Severity::Warning;
  std::vector<std::string> outputs(paths.size());
  std::vector<char> ok(paths.size(), 0);
  parallel_over(paths.size(), jobs, [&](std::size_t i) {
    try {
      DocumentGraph g = read_document_lenient(paths[i]);
      ValidationReport report = validate(g, policy);
      ok[i] = report.valid();
      std::ostringstream os;
      for (const auto& v : report.violations) {
        os << paths[i] << '\t' << (v.severity == Severity::Error ? "error" : "warning") << '\t'
           << v.code << '\t';
        for (std::size_t k = 0; k < v.nodes.size(); ++k) os << (k ? "," : "") << v.nodes[k];
        os << '\t' << v.message << '\n';
      }
      outputs[i] = os.str();
    } catch (const std::exception& ex) {
      outputs[i] = paths[i] + "\terror\tparse-error\t\t" + ex.what() + "\n";
    }
  });
  bool all_ok = true;
  for (std::size_t i = 0; i < paths.size(); ++i) {
    std::cerr << outputs[i];
    all_ok = all_ok && ok[i];
    std::cout << paths[i] << '\t' << (ok[i] ? "valid" : "INVALID") << '\n';
  }
  return all_ok ? kOk : kInvalid;
}

int cmd_binarize(const std::string& input, const std::string& out_dir) {
  auto paths = expand_paths({input});
  fs::create_directories(out_dir);
  for (const auto& path : paths) {
    DocumentGraph g = read_document(path);
    DocumentGraph b = binarize(g);
    fs::path out = fs::path(out_dir) / fs::path(path).filename();
    write_document(b, out.string());
    std::cout << path << " -> " << out.string() << '\n';
  }
  return kOk;
}

std::vector<DocumentGraph> load_corpus(const std::vector<std::string>& paths,
                                       std::vector<std::string>* problems,
                                       const ValidationPolicy& policy = {}) {
  std::vector<DocumentGraph> out;
  for (const auto& path : paths) {
    try {
      DocumentGraph g = read_document_lenient(path);
      ValidationReport report = validate(g, policy);
      if (!report.valid()) {
        if (problems)
          problems->push_back(path + ": invalid (" +
                              (report.error_codes().empty() ? "?" : report.error_codes()[0]) +
                              "), skipped");
        continue;
      }
      out.push_back(std::move(g));
    } catch (const std::exception& ex) {
      if (problems) problems->push_back(std::string(ex.what()) + ", skipped");
    }
  }
  return out;
}

int cmd_score(const std::string& gold_dir, const std::string& pred_dir, bool per_doc, bool types,
              const std::string& format, bool exclude_same_unit, int jobs) {
  ValidationPolicy lenient;
  lenient.secedge_signal = Severity::Warning;
  std::vector<std::string> problems;
  // Directories pair by identical filenames, so documents are keyed by
  // their file stem rather than the doc attribute.
  auto load_by_stem = [&](const std::string& dir) {
    std::vector<DocumentGraph> out;
    for (const auto& path : expand_paths({dir})) {
      try {
        DocumentGraph g = read_document_lenient(path);
        ValidationReport report = validate(g, lenient);
        if (!report.valid()) {
          problems.push_back(path + ": invalid, skipped");
          continue;
        }
        g.doc_id = fs::path(path).stem().string();
        out.push_back(std::move(g));
      } catch (const std::exception& ex) {
        problems.push_back(std::string(ex.what()) + ", skipped");
      }
    }
    return out;
  };
  std::vector<DocumentGraph> gold = load_by_stem(gold_dir);
  std::vector<DocumentGraph> pred = load_by_stem(pred_dir);
  for (const auto& p : problems) std::cerr << "warning: " << p << '\n';

  ScoreOptions options;
  options.exclude_same_unit = exclude_same_unit;
  options.jobs = jobs;
  CorpusScore score = score_corpus(gold, pred, options);
  for (const auto& w : score.warnings) std::cerr << "warning: " << w << '\n';
  if (format == "kv")
    std::cout << format_corpus_kv(score, per_doc);
  else
    std::cout << format_corpus_table(score, per_doc, types);
  if (score.per_doc.empty()) return kScoreMismatch;
  return score.warnings.empty() && problems.empty() ? kOk : kScoreMismatch;
}

int cmd_align(const std::vector<std::string>& docs, const std::string& lexicon_path,
              const std::string& map_path, bool emit_candidates, bool incoming) {
  DMLexicon lexicon = read_dm_lexicon(lexicon_path);
  DMRelationMap map = read_dm_relation_map(map_path);
  AlignOptions options;
  options.incoming_fallback = incoming;
  ValidationPolicy lenient;
  lenient.secedge_signal = Severity::Warning;

  bool any_invalid = false;
  for (const auto& path : expand_paths(docs)) {
    DocumentGraph g = read_document_lenient(path);
    ValidationReport report = validate(g, lenient);
    if (!report.valid()) {
      std::cerr << "error: " << path << " is invalid; skipped\n";
      print_violations(path, report);
      any_invalid = true;
      continue;
    }
    AlignResult result = associate(g, detect_dms(g, lexicon), map, options);
    DocumentGraph updated = merge_signals(g, result.signals);
    write_document(updated, path, lenient);

    for (const auto& occ : result.occurrences) {
      std::cout << g.doc_id << '\t';
      switch (occ.status) {
        case DMStatus::Attached: std::cout << "attached"; break;
        case DMStatus::Orphan:
          std::cout << (occ.orphan_edge ? "orphan" : "orphan-unanchored");
          break;
        case DMStatus::Unassigned: std::cout << "unassigned"; break;
      }
      std::cout << '\t' << occ.surface << '\t';
      for (std::size_t i = 0; i < occ.tokens.size(); ++i)
        std::cout << (i ? "," : "") << occ.tokens[i];
      if (occ.status == DMStatus::Attached)
        std::cout << "\tedge=" << *occ.attached_child;
      else if (occ.orphan_edge)
        std::cout << "\tedge=" << format_edge_ref(*occ.orphan_edge);
      std::cout << '\n';
    }
    if (emit_candidates) {
      for (const auto& c : enumerate_secedge_candidates(g, result.occurrences, map))
        std::cout << g.doc_id << "\tcandidate\t" << c.edge.source << "-" << c.edge.target << '\t'
                  << c.edge.relation << "\torphan="
                  << result.occurrences[c.orphan_index].surface << '\n';
    }
  }
  return any_invalid ? kInvalid : kOk;
}

int cmd_induce(const std::vector<std::string>& docs, const std::string& aux_path,
               const std::string& coref_path, const std::string& eligibility_path,
               const std::string& indicative_path, const std::string& ingest_path) {
  auto aux_docs = read_aux(aux_path);
  std::map<std::string, std::vector<Mention>> coref;
  if (!coref_path.empty()) coref = read_coref(coref_path);
  EligibilityTable eligibility =
      eligibility_path.empty() ? default_eligibility() : read_eligibility(eligibility_path);
  IndicativeLexicon indicative = indicative_path.empty()
                                     ? default_indicative_lexicon()
                                     : read_indicative_lexicon(indicative_path);
  std::vector<ExternalSignal> external;
  if (!ingest_path.empty()) external = read_signal_list(ingest_path);
  ValidationPolicy lenient;
  lenient.secedge_signal = Severity::Warning;

  auto paths = expand_paths(docs);
  for (const auto& path : paths) {
    DocumentGraph g = read_document(path);
    auto aux_it = aux_docs.find(g.doc_id);
    if (aux_it == aux_docs.end() && aux_docs.size() == 1 && paths.size() == 1)
      aux_it = aux_docs.begin();
    if (aux_it == aux_docs.end()) {
      std::cerr << "error: no auxiliary annotations for document '" << g.doc_id << "'\n";
      continue;
    }
    AuxAnnotations aux = aux_it->second;
    auto coref_it = coref.find(g.doc_id);
    if (coref_it != coref.end()) {
      aux.mentions = coref_it->second;
      aux.has_coref = true;
    }

    std::vector<Signal> signals;
    std::vector<std::string> review;
    auto run = [&](const char* family, auto&& fn) {
      try {
        InduceResult result = fn();
        signals.insert(signals.end(), result.signals.begin(), result.signals.end());
        review.insert(review.end(), result.review.begin(), result.review.end());
      } catch (const Error& ex) {
        std::cerr << "warning: " << g.doc_id << ": " << family << ": " << ex.what() << '\n';
      }
    };
    run("graphical", [&] { return induce_graphical(g, aux, eligibility); });
    run("syntactic/morphological",
        [&] { return induce_syntactic_morphological(g, aux, eligibility); });
    run("reference/semantic", [&] { return induce_reference_semantic(g, aux, eligibility); });
    run("lexical", [&] { return induce_lexical(g, aux, eligibility, indicative); });

    DocumentGraph updated = merge_signals(g, signals);
    if (!external.empty()) updated = ingest_external_signals(updated, external);
    write_document(updated, path, lenient);
    std::cout << g.doc_id << "\tadded\t" << (updated.signals.size() - g.signals.size())
              << "\tsignals\n";
    for (const auto& note : review) std::cout << g.doc_id << "\treview\t" << note << '\n';
  }
  return kOk;
}

int cmd_stats(const std::vector<std::string>& docs, const std::string& report,
              const std::string& by, const std::string& klass, const std::string& kind,
              std::size_t top, bool tsv, bool include_same_unit) {
  std::vector<std::string> problems;
  ValidationPolicy lenient;
  lenient.secedge_signal = Severity::Warning;
  std::vector<DocumentGraph> corpus = load_corpus(expand_paths(docs), &problems, lenient);
  for (const auto& p : problems) std::cerr << "warning: " << p << '\n';
  StatsOptions options;
  options.include_same_unit = include_same_unit;

  if (report == "marking") {
    StatsGroupBy group = by == "genre"      ? StatsGroupBy::Genre
                         : by == "document" ? StatsGroupBy::Document
                                            : StatsGroupBy::None;
    auto rows = relation_marking_stats(corpus, group, options);
    std::cout << (tsv ? format_marking_tsv(rows) : format_marking_table(rows));
  } else if (report == "signals") {
    SignalDistBy dist = by == "genre" ? SignalDistBy::Genre : SignalDistBy::CoarseClass;
    auto rows = signal_distribution(corpus, dist, options);
    std::cout << (tsv ? format_signal_dist_tsv(rows) : format_signal_dist_table(rows));
  } else if (report == "top-markers") {
    if (klass.empty()) {
      std::cerr << "error: --report top-markers requires --class\n";
      return kUsage;
    }
    MarkerKind mk = kind == "lexical" ? MarkerKind::Lexical : MarkerKind::Dm;
    auto rows = top_markers(corpus, klass, mk, top, options);
    std::cout << format_markers_tsv(rows);
  } else if (report == "secondary") {
    auto rows = secondary_proportions(corpus, 5, options);
    std::cout << (tsv ? format_secondary_tsv(rows) : format_secondary_table(rows));
  } else {
    std::cerr << "error: unknown report '" << report << "'\n";
    return kUsage;
  }
  return kOk;
}

int cmd_extract(const std::vector<std::string>& docs, const std::string& relation,
                const std::string& signal_type, const std::string& surface, bool attribution) {
  std::vector<std::string> problems;
  ValidationPolicy lenient;
  lenient.secedge_signal = Severity::Warning;
  std::vector<DocumentGraph> corpus = load_corpus(expand_paths(docs), &problems, lenient);
  for (const auto& p : problems) std::cerr << "warning: " << p << '\n';

  ExtractQuery query;
  query.relation = relation;
  query.surface = surface;
  query.attribution_bundle = attribution;
  if (!signal_type.empty()) {
    std::string major = signal_type, subtype;
    if (auto colon = signal_type.find(':'); colon != std::string::npos) {
      major = signal_type.substr(0, colon);
      subtype = signal_type.substr(colon + 1);
    }
    auto parsed = signal_major_from_string(major);
    if (!parsed) {
      std::cerr << "error: unknown signal type '" << signal_type << "'\n";
      return kUsage;
    }
    query.signal_major = *parsed;
    query.signal_subtype = subtype;
  }
  std::cout << format_extract_tsv(extract(corpus, query));
  return kOk;
}

int cmd_render(const std::string& doc, const std::string& svg_path, bool text) {
  RenderOptions options;
  options.policy.secedge_signal = Severity::Warning;
  DocumentGraph g = read_document(doc);
  if (text) {
    std::cout << render_text(g, options);
  } else if (!svg_path.empty()) {
    write_file(svg_path, render_svg(g, options));
    std::cout << doc << " -> " << svg_path << '\n';
  } else {
    std::cerr << "error: render needs --svg FILE or --text\n";
    return kUsage;
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"discourse graph toolkit: validation, scoring, alignment and statistics"};
  app.require_subcommand(1);
  int jobs = 1;
  app.add_option("--jobs", jobs, "parallel workers for corpus commands")->capture_default_str();

  std::vector<std::string> docs;
  bool strict_secedge = false;
  auto* validate_cmd = app.add_subcommand("validate", "check structural constraints");
  validate_cmd->add_option("docs", docs, "document files or directories")->required();
  validate_cmd->add_flag("--strict-secedge-signals", strict_secedge,
                         "treat unsignaled secondary edges as errors");

  std::string in_path, out_dir;
  auto* binarize_cmd = app.add_subcommand("binarize", "write CNF versions of documents");
  binarize_cmd->add_option("in", in_path, "input file or directory")->required();
  binarize_cmd->add_option("out-dir", out_dir, "output directory")->required();

  std::string gold_dir, pred_dir, format = "table";
  bool per_doc = false, types = false, exclude_same_unit = false;
  auto* score_cmd = app.add_subcommand("score", "score predicted against gold documents");
  score_cmd->add_option("gold", gold_dir, "gold directory")->required();
  score_cmd->add_option("pred", pred_dir, "predicted directory")->required();
  score_cmd->add_flag("--per-doc", per_doc, "emit per-document reports");
  score_cmd->add_flag("--types", types, "emit per-signal-type breakdown");
  score_cmd->add_option("--format", format, "table or kv")->capture_default_str();
  score_cmd->add_flag("--exclude-same-unit", exclude_same_unit,
                      "drop same-unit decisions before scoring");

  std::string lexicon_path, map_path;
  bool emit_candidates = false, incoming = false;
  auto* align_cmd = app.add_subcommand("align", "detect DMs and attach them to relations");
  align_cmd->add_option("docs", docs, "document files or directories")->required();
  align_cmd->add_option("--lexicon", lexicon_path, "DM lexicon file")->required();
  align_cmd->add_option("--map", map_path, "DM-to-relation map file")->required();
  align_cmd->add_flag("--emit-candidates", emit_candidates,
                      "print candidate secondary edges for orphans");
  align_cmd->add_flag("--incoming", incoming, "also search incoming relations (recall mode)");

  std::string aux_path, coref_path, eligibility_path, indicative_path, ingest_path;
  auto* induce_cmd = app.add_subcommand("induce", "add rule-derived non-DM signals");
  induce_cmd->add_option("docs", docs, "document files or directories")->required();
  induce_cmd->add_option("--aux", aux_path, "token annotation file")->required();
  induce_cmd->add_option("--coref", coref_path, "coreference spans file");
  induce_cmd->add_option("--eligibility", eligibility_path, "eligibility table override");
  induce_cmd->add_option("--indicative", indicative_path, "indicative lexicon override");
  induce_cmd->add_option("--ingest", ingest_path, "external signal list to merge");

  std::string report, by, klass, kind = "dm";
  std::size_t top = 20;
  bool tsv = false, include_same_unit = false;
  auto* stats_cmd = app.add_subcommand("stats", "corpus statistics");
  stats_cmd->add_option("docs", docs, "document files or directories")->required();
  stats_cmd->add_option("--report", report, "marking|signals|top-markers|secondary")->required();
  stats_cmd->add_option("--by", by, "genre|class|document");
  stats_cmd->add_option("--class", klass, "coarse relation class for top-markers");
  stats_cmd->add_option("--kind", kind, "dm|lexical for top-markers")->capture_default_str();
  stats_cmd->add_option("--top", top, "list length for top-markers")->capture_default_str();
  stats_cmd->add_flag("--tsv", tsv, "tab-separated output");
  stats_cmd->add_flag("--include-same-unit", include_same_unit,
                      "count same-unit as a relation");

  std::string relation, signal_type, surface;
  bool attribution = false;
  auto* extract_cmd = app.add_subcommand("extract", "pull out matching relation instances");
  extract_cmd->add_option("docs", docs, "document files or directories")->required();
  extract_cmd->add_option("--relation", relation, "relation label or coarse class")->required();
  extract_cmd->add_option("--signal-type", signal_type, "major or major:subtype filter");
  extract_cmd->add_option("--surface", surface, "required anchored token text");
  extract_cmd->add_flag("--attribution", attribution, "collect source/predicate bundles");

  std::string render_doc, svg_path;
  bool text = false;
  auto* render_cmd = app.add_subcommand("render", "draw one document");
  render_cmd->add_option("doc", render_doc, "document file")->required();
  render_cmd->add_option("--svg", svg_path, "write SVG to this path");
  render_cmd->add_flag("--text", text, "print the indented outline");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kOk : kUsage;  // stable usage-error contract
  }

  try {
    if (*validate_cmd) return cmd_validate(docs, strict_secedge, jobs);
    if (*binarize_cmd) return cmd_binarize(in_path, out_dir);
    if (*score_cmd)
      return cmd_score(gold_dir, pred_dir, per_doc, types, format, exclude_same_unit, jobs);
    if (*align_cmd) return cmd_align(docs, lexicon_path, map_path, emit_candidates, incoming);
    if (*induce_cmd)
      return cmd_induce(docs, aux_path, coref_path, eligibility_path, indicative_path,
                        ingest_path);
    if (*stats_cmd)
      return cmd_stats(docs, report, by, klass, kind, top, tsv, include_same_unit);
    if (*extract_cmd) return cmd_extract(docs, relation, signal_type, surface, attribution);
    if (*render_cmd) return cmd_render(render_doc, svg_path, text);
  } catch (const InvalidGraphError& ex) {
    std::cerr << "error: " << ex.what() << '\n';
    return kInvalid;
  } catch (const std::exception& ex) {
    std::cerr << "error: " << ex.what() << '\n';
    return kUsage;
  }
  return kUsage;
}

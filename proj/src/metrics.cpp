#include "erst/metrics.hpp"

#include <algorithm>
#include <cstdio>
#include <future>
#include <set>
#include <sstream>
#include <tuple>

#include "erst/assignment.hpp"
#include "erst/validate.hpp"

namespace erst {

double ratio_with_convention(long long numerator, long long denominator, long long other_side) {
  if (denominator > 0) return static_cast<double>(numerator) / static_cast<double>(denominator);
  return other_side == 0 ? 1.0 : 0.0;
}

namespace {

double f1_of(double p, double r) { return p + r > 0 ? 2.0 * p * r / (p + r) : 0.0; }

using SpanKey = std::tuple<int, int, int, int>;

SpanKey span_key(const EduSpan& a, const EduSpan& b) {
  return {a.first, a.last, b.first, b.last};
}

}  // namespace

ParsevalScores parseval(const DecisionSequence& gold, const DecisionSequence& pred) {
  if (gold.edu_count != pred.edu_count)
    throw Error("parseval: EDU counts differ (" + std::to_string(gold.edu_count) + " vs " +
                std::to_string(pred.edu_count) + ")");

  std::map<SpanKey, const Decision*> gold_by_span;
  for (const auto& d : gold.decisions) gold_by_span.emplace(span_key(d.left, d.right), &d);

  ParsevalScores out;
  out.counts.gold_decisions = static_cast<long long>(gold.decisions.size());
  out.counts.pred_decisions = static_cast<long long>(pred.decisions.size());
  for (const auto& d : pred.decisions) {
    auto it = gold_by_span.find(span_key(d.left, d.right));
    if (it == gold_by_span.end()) continue;
    const Decision& g = *it->second;
    ++out.counts.matched_span;
    if (g.nuclearity == d.nuclearity) ++out.counts.matched_nuclearity;
    if (g.label == d.label) ++out.counts.matched_relation;
    if (g.nuclearity == d.nuclearity && g.label == d.label) ++out.counts.matched_full;
  }
  const auto& c = out.counts;
  out.S = ratio_with_convention(c.matched_span, c.pred_decisions, c.gold_decisions);
  out.N = ratio_with_convention(c.matched_nuclearity, c.pred_decisions, c.gold_decisions);
  out.R = ratio_with_convention(c.matched_relation, c.pred_decisions, c.gold_decisions);
  out.F = ratio_with_convention(c.matched_full, c.pred_decisions, c.gold_decisions);
  return out;
}

ParsevalScores parseval_secondary(const std::vector<SecondaryDecision>& gold,
                                  const std::vector<SecondaryDecision>& pred) {
  // Unordered span pair for S; direction fills the nuclearity slot.
  auto norm_key = [](const SecondaryDecision& d) {
    EduSpan a = d.source, b = d.target;
    if (std::pair(b.first, b.last) < std::pair(a.first, a.last)) std::swap(a, b);
    return span_key(a, b);
  };
  std::multimap<SpanKey, const SecondaryDecision*> gold_by_span;
  for (const auto& d : gold) gold_by_span.emplace(norm_key(d), &d);

  ParsevalScores out;
  out.counts.gold_decisions = static_cast<long long>(gold.size());
  out.counts.pred_decisions = static_cast<long long>(pred.size());
  for (const auto& d : pred) {
    auto [lo, hi] = gold_by_span.equal_range(norm_key(d));
    bool span = false, nuc = false, rel = false, full = false;
    for (auto it = lo; it != hi; ++it) {
      const SecondaryDecision& g = *it->second;
      span = true;
      if (g.direction == d.direction) nuc = true;
      if (g.label == d.label) rel = true;
      if (g.direction == d.direction && g.label == d.label) full = true;
    }
    out.counts.matched_span += span;
    out.counts.matched_nuclearity += nuc;
    out.counts.matched_relation += rel;
    out.counts.matched_full += full;
  }
  const auto& c = out.counts;
  out.S = ratio_with_convention(c.matched_span, c.pred_decisions, c.gold_decisions);
  out.N = ratio_with_convention(c.matched_nuclearity, c.pred_decisions, c.gold_decisions);
  out.R = ratio_with_convention(c.matched_relation, c.pred_decisions, c.gold_decisions);
  out.F = ratio_with_convention(c.matched_full, c.pred_decisions, c.gold_decisions);
  return out;
}

namespace {

struct ResolvedSignal {
  bool resolved = false;
  bool secondary = false;
  EduSpan source;
  EduSpan target;
  SignalType type;
  std::vector<int> tokens;
};

// Edges are identified by the EDU yields of their endpoints; a primary edge
// is the outgoing attachment of its child node.
std::vector<ResolvedSignal> resolve_signals(const DocumentGraph& graph) {
  GraphIndex idx = GraphIndex::build(graph);
  std::vector<ResolvedSignal> out;
  out.reserve(graph.signals.size());
  for (const auto& signal : graph.signals) {
    ResolvedSignal r;
    r.type = signal.type;
    r.tokens = signal.tokens;
    if (signal.edge.is_secondary) {
      if (idx.has_node(signal.edge.source) && idx.has_node(signal.edge.target)) {
        r.resolved = true;
        r.secondary = true;
        r.source = idx.yield_span(signal.edge.source);
        r.target = idx.yield_span(signal.edge.target);
      }
    } else if (const Attachment* att = idx.attachment_of(signal.edge.child)) {
      r.resolved = true;
      r.source = idx.yield_span(att->child);
      r.target = idx.yield_span(att->parent);
    }
    out.push_back(std::move(r));
  }
  return out;
}

using GroupKey = std::tuple<bool, int, int, int, int, SignalMajor, std::string>;

GroupKey group_key(const ResolvedSignal& s) {
  return {s.secondary, s.source.first, s.source.last, s.target.first,
          s.target.last, s.type.major,  s.type.subtype};
}

void check_same_segmentation(const DocumentGraph& gold, const DocumentGraph& pred) {
  if (gold.tokens.size() != pred.tokens.size())
    throw Error("signal metrics: token counts differ");
  for (std::size_t i = 0; i < gold.tokens.size(); ++i)
    if (gold.tokens[i].form != pred.tokens[i].form)
      throw Error("signal metrics: token " + std::to_string(i + 1) + " differs");
  if (gold.edus.size() != pred.edus.size())
    throw Error("signal metrics: EDU counts differ");
  for (std::size_t i = 0; i < gold.edus.size(); ++i)
    if (gold.edus[i].first_token != pred.edus[i].first_token ||
        gold.edus[i].last_token != pred.edus[i].last_token)
      throw Error("signal metrics: EDU segmentation differs at EDU " + std::to_string(i + 1));
}

long long overlap_size(const std::vector<int>& a, const std::vector<int>& b) {
  long long n = 0;
  auto it = a.begin();
  for (int t : b) {
    it = std::lower_bound(it, a.end(), t);
    if (it == a.end()) break;
    if (*it == t) ++n;
  }
  return n;
}

enum class Mode { Unanchored, Anchored };

SignalScores score_signals(const DocumentGraph& gold, const DocumentGraph& pred, Mode mode) {
  check_same_segmentation(gold, pred);
  std::vector<ResolvedSignal> gold_signals = resolve_signals(gold);
  std::vector<ResolvedSignal> pred_signals = resolve_signals(pred);

  auto compute = [&](std::optional<SignalMajor> filter) {
    std::map<GroupKey, std::vector<const ResolvedSignal*>> gold_groups, pred_groups;
    SignalCounts counts;
    for (const auto& s : gold_signals) {
      if (filter && s.type.major != *filter) continue;
      ++counts.gold_signals;
      counts.gold_tokens += static_cast<long long>(s.tokens.size());
      if (s.resolved) gold_groups[group_key(s)].push_back(&s);
    }
    for (const auto& s : pred_signals) {
      if (filter && s.type.major != *filter) continue;
      ++counts.pred_signals;
      counts.pred_tokens += static_cast<long long>(s.tokens.size());
      if (s.resolved) pred_groups[group_key(s)].push_back(&s);
    }
    for (const auto& [key, gs] : gold_groups) {
      auto it = pred_groups.find(key);
      if (it == pred_groups.end()) continue;
      const auto& ps = it->second;
      counts.matched_signals +=
          std::min(static_cast<long long>(gs.size()), static_cast<long long>(ps.size()));
      if (mode == Mode::Anchored) {
        std::vector<std::vector<long long>> weights(gs.size(),
                                                    std::vector<long long>(ps.size(), 0));
        for (std::size_t i = 0; i < gs.size(); ++i)
          for (std::size_t j = 0; j < ps.size(); ++j)
            weights[i][j] = overlap_size(gs[i]->tokens, ps[j]->tokens);
        counts.matched_tokens += max_weight_assignment(weights).total;
      }
    }
    Prf prf;
    if (mode == Mode::Unanchored) {
      prf.precision =
          ratio_with_convention(counts.matched_signals, counts.pred_signals, counts.gold_signals);
      prf.recall =
          ratio_with_convention(counts.matched_signals, counts.gold_signals, counts.pred_signals);
    } else {
      prf.precision =
          ratio_with_convention(counts.matched_tokens, counts.pred_tokens, counts.gold_tokens);
      prf.recall =
          ratio_with_convention(counts.matched_tokens, counts.gold_tokens, counts.pred_tokens);
    }
    prf.f1 = f1_of(prf.precision, prf.recall);
    return std::pair(prf, counts);
  };

  SignalScores out;
  std::tie(out.overall, out.counts) = compute(std::nullopt);
  static const SignalMajor majors[] = {
      SignalMajor::Dm,        SignalMajor::Orphan,        SignalMajor::Graphical,
      SignalMajor::Lexical,   SignalMajor::Morphological, SignalMajor::Numerical,
      SignalMajor::Reference, SignalMajor::Semantic,      SignalMajor::Syntactic,
  };
  for (SignalMajor major : majors) {
    auto [prf, counts] = compute(major);
    out.by_type[major] = prf;
    out.counts_by_type[major] = counts;
  }
  return out;
}

}  // namespace

SignalScores signal_prf(const DocumentGraph& gold, const DocumentGraph& pred) {
  return score_signals(gold, pred, Mode::Unanchored);
}

SignalScores signal_token_prf(const DocumentGraph& gold, const DocumentGraph& pred) {
  return score_signals(gold, pred, Mode::Anchored);
}

namespace {

DecisionSequence filtered_decisions(const DocumentGraph& graph, const ScoreOptions& options) {
  DecisionSequence seq = extract_decisions(binarize(graph));
  if (options.exclude_same_unit) {
    std::erase_if(seq.decisions, [](const Decision& d) { return d.label == "same-unit"; });
  }
  return seq;
}

}  // namespace

ScoreReport score_pair(const DocumentGraph& gold, const DocumentGraph& pred,
                       const ScoreOptions& options) {
  check_same_segmentation(gold, pred);
  ScoreReport report;
  report.primary = parseval(filtered_decisions(gold, options), filtered_decisions(pred, options));
  report.secondary =
      parseval_secondary(extract_secondary_decisions(gold), extract_secondary_decisions(pred));
  report.unanchored = signal_prf(gold, pred);
  report.anchored = signal_token_prf(gold, pred);
  return report;
}

namespace {

void pool_parseval(ParsevalScores& into, const ParsevalScores& from) {
  into.counts.gold_decisions += from.counts.gold_decisions;
  into.counts.pred_decisions += from.counts.pred_decisions;
  into.counts.matched_span += from.counts.matched_span;
  into.counts.matched_nuclearity += from.counts.matched_nuclearity;
  into.counts.matched_relation += from.counts.matched_relation;
  into.counts.matched_full += from.counts.matched_full;
}

void finish_parseval(ParsevalScores& scores) {
  const auto& c = scores.counts;
  scores.S = ratio_with_convention(c.matched_span, c.pred_decisions, c.gold_decisions);
  scores.N = ratio_with_convention(c.matched_nuclearity, c.pred_decisions, c.gold_decisions);
  scores.R = ratio_with_convention(c.matched_relation, c.pred_decisions, c.gold_decisions);
  scores.F = ratio_with_convention(c.matched_full, c.pred_decisions, c.gold_decisions);
}

void pool_signal_counts(SignalCounts& into, const SignalCounts& from) {
  into.gold_signals += from.gold_signals;
  into.pred_signals += from.pred_signals;
  into.matched_signals += from.matched_signals;
  into.gold_tokens += from.gold_tokens;
  into.pred_tokens += from.pred_tokens;
  into.matched_tokens += from.matched_tokens;
}

void finish_signals(SignalScores& scores, Mode mode) {
  auto value = [&](const SignalCounts& c) {
    Prf prf;
    if (mode == Mode::Unanchored) {
      prf.precision = ratio_with_convention(c.matched_signals, c.pred_signals, c.gold_signals);
      prf.recall = ratio_with_convention(c.matched_signals, c.gold_signals, c.pred_signals);
    } else {
      prf.precision = ratio_with_convention(c.matched_tokens, c.pred_tokens, c.gold_tokens);
      prf.recall = ratio_with_convention(c.matched_tokens, c.gold_tokens, c.pred_tokens);
    }
    prf.f1 = f1_of(prf.precision, prf.recall);
    return prf;
  };
  scores.overall = value(scores.counts);
  for (auto& [major, counts] : scores.counts_by_type) scores.by_type[major] = value(counts);
}

}  // namespace

CorpusScore score_corpus(const std::vector<DocumentGraph>& gold,
                         const std::vector<DocumentGraph>& pred, const ScoreOptions& options) {
  CorpusScore result;
  std::map<std::string, const DocumentGraph*> gold_by_id, pred_by_id;
  for (const auto& g : gold) gold_by_id.emplace(g.doc_id, &g);
  for (const auto& p : pred) pred_by_id.emplace(p.doc_id, &p);

  std::vector<std::pair<const DocumentGraph*, const DocumentGraph*>> pairs;
  std::vector<std::string> ids;
  for (const auto& [id, g] : gold_by_id) {
    auto it = pred_by_id.find(id);
    if (it == pred_by_id.end()) {
      result.warnings.push_back("document '" + id + "' missing from predictions; skipped");
      continue;
    }
    pairs.emplace_back(g, it->second);
    ids.push_back(id);
  }
  for (const auto& [id, p] : pred_by_id)
    if (!gold_by_id.count(id))
      result.warnings.push_back("document '" + id + "' missing from gold; skipped");

  std::vector<std::optional<ScoreReport>> reports(pairs.size());
  std::vector<std::string> errors(pairs.size());
  auto worker = [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      try {
        reports[i] = score_pair(*pairs[i].first, *pairs[i].second, options);
      } catch (const std::exception& ex) {
        errors[i] = ex.what();
      }
    }
  };
  int jobs = std::max(1, options.jobs);
  if (jobs == 1 || pairs.size() < 2) {
    worker(0, pairs.size());
  } else {
    std::vector<std::future<void>> futures;
    std::size_t chunk = (pairs.size() + jobs - 1) / jobs;
    for (std::size_t begin = 0; begin < pairs.size(); begin += chunk)
      futures.push_back(std::async(std::launch::async, worker, begin,
                                   std::min(begin + chunk, pairs.size())));
    for (auto& f : futures) f.get();
  }

  std::map<std::string, std::pair<double, int>> macro_acc;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    if (!reports[i]) {
      result.warnings.push_back("document '" + ids[i] + "' not scorable: " + errors[i]);
      continue;
    }
    const ScoreReport& r = *reports[i];
    pool_parseval(result.micro.primary, r.primary);
    pool_parseval(result.micro.secondary, r.secondary);
    pool_signal_counts(result.micro.unanchored.counts, r.unanchored.counts);
    pool_signal_counts(result.micro.anchored.counts, r.anchored.counts);
    for (const auto& [major, counts] : r.unanchored.counts_by_type)
      pool_signal_counts(result.micro.unanchored.counts_by_type[major], counts);
    for (const auto& [major, counts] : r.anchored.counts_by_type)
      pool_signal_counts(result.micro.anchored.counts_by_type[major], counts);
    for (const auto& [name, value] : flatten_scores(r)) {
      auto& acc = macro_acc[name];
      acc.first += value;
      acc.second += 1;
    }
    result.per_doc.emplace_back(ids[i], r);
  }
  finish_parseval(result.micro.primary);
  finish_parseval(result.micro.secondary);
  finish_signals(result.micro.unanchored, Mode::Unanchored);
  finish_signals(result.micro.anchored, Mode::Anchored);
  for (const auto& [name, _] : flatten_scores(result.micro)) {
    auto it = macro_acc.find(name);
    double mean = it != macro_acc.end() && it->second.second > 0
                      ? it->second.first / it->second.second
                      : 0.0;
    result.macro.emplace_back(name, mean);
  }
  return result;
}

std::vector<std::pair<std::string, double>> flatten_scores(const ScoreReport& report) {
  return {
      {"primary.S", report.primary.S},
      {"primary.N", report.primary.N},
      {"primary.R", report.primary.R},
      {"primary.F", report.primary.F},
      {"secondary.S", report.secondary.S},
      {"secondary.N", report.secondary.N},
      {"secondary.R", report.secondary.R},
      {"secondary.F", report.secondary.F},
      {"signals.unanchored.S_P", report.unanchored.overall.precision},
      {"signals.unanchored.S_R", report.unanchored.overall.recall},
      {"signals.unanchored.F1", report.unanchored.overall.f1},
      {"signals.anchored.W_P", report.anchored.overall.precision},
      {"signals.anchored.W_R", report.anchored.overall.recall},
      {"signals.anchored.F1", report.anchored.overall.f1},
  };
}

namespace {

std::string fmt(double value) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6f", value);
  return buf;
}

void kv_parseval(std::ostringstream& os, const std::string& prefix, const ParsevalScores& p) {
  os << prefix << ".S " << fmt(p.S) << "\n";
  os << prefix << ".N " << fmt(p.N) << "\n";
  os << prefix << ".R " << fmt(p.R) << "\n";
  os << prefix << ".F " << fmt(p.F) << "\n";
  os << prefix << ".counts.gold " << p.counts.gold_decisions << "\n";
  os << prefix << ".counts.pred " << p.counts.pred_decisions << "\n";
  os << prefix << ".counts.matched_S " << p.counts.matched_span << "\n";
  os << prefix << ".counts.matched_N " << p.counts.matched_nuclearity << "\n";
  os << prefix << ".counts.matched_R " << p.counts.matched_relation << "\n";
  os << prefix << ".counts.matched_F " << p.counts.matched_full << "\n";
}

void kv_signal_counts(std::ostringstream& os, const std::string& prefix, const SignalCounts& c) {
  os << prefix << ".counts.gold " << c.gold_signals << "\n";
  os << prefix << ".counts.pred " << c.pred_signals << "\n";
  os << prefix << ".counts.matched " << c.matched_signals << "\n";
  os << prefix << ".counts.gold_tokens " << c.gold_tokens << "\n";
  os << prefix << ".counts.pred_tokens " << c.pred_tokens << "\n";
  os << prefix << ".counts.matched_tokens " << c.matched_tokens << "\n";
}

}  // namespace

std::string format_report_kv(const ScoreReport& report) {
  std::ostringstream os;
  kv_parseval(os, "primary", report.primary);
  kv_parseval(os, "secondary", report.secondary);
  os << "signals.unanchored.S_P " << fmt(report.unanchored.overall.precision) << "\n";
  os << "signals.unanchored.S_R " << fmt(report.unanchored.overall.recall) << "\n";
  os << "signals.unanchored.F1 " << fmt(report.unanchored.overall.f1) << "\n";
  kv_signal_counts(os, "signals.unanchored", report.unanchored.counts);
  os << "signals.anchored.W_P " << fmt(report.anchored.overall.precision) << "\n";
  os << "signals.anchored.W_R " << fmt(report.anchored.overall.recall) << "\n";
  os << "signals.anchored.F1 " << fmt(report.anchored.overall.f1) << "\n";
  kv_signal_counts(os, "signals.anchored", report.anchored.counts);
  for (const auto& [major, prf] : report.unanchored.by_type) {
    std::string p = std::string("signals.types.") + to_string(major) + ".detection";
    os << p << ".P " << fmt(prf.precision) << "\n";
    os << p << ".R " << fmt(prf.recall) << "\n";
    os << p << ".F1 " << fmt(prf.f1) << "\n";
  }
  for (const auto& [major, prf] : report.anchored.by_type) {
    std::string p = std::string("signals.types.") + to_string(major) + ".anchoring";
    os << p << ".P " << fmt(prf.precision) << "\n";
    os << p << ".R " << fmt(prf.recall) << "\n";
    os << p << ".F1 " << fmt(prf.f1) << "\n";
  }
  return os.str();
}

std::string format_corpus_kv(const CorpusScore& score, bool per_doc) {
  std::ostringstream os;
  os << format_report_kv(score.micro);
  for (const auto& [name, value] : score.macro) os << "macro." << name << " " << fmt(value) << "\n";
  if (per_doc)
    for (const auto& [id, report] : score.per_doc) {
      std::istringstream lines(format_report_kv(report));
      std::string line;
      while (std::getline(lines, line)) os << "doc." << id << "." << line << "\n";
    }
  return os.str();
}

namespace {

void table_row(std::ostringstream& os, const std::string& name, double s, double n, double r,
               double f) {
  char buf[160];
  std::snprintf(buf, sizeof buf, "  %-12s %8.3f %8.3f %8.3f %8.3f\n", name.c_str(), s, n, r, f);
  os << buf;
}

}  // namespace

std::string format_report_table(const ScoreReport& report, bool per_type) {
  std::ostringstream os;
  os << "parseval          S        N        R        F\n";
  table_row(os, "primary", report.primary.S, report.primary.N, report.primary.R,
            report.primary.F);
  table_row(os, "secondary", report.secondary.S, report.secondary.N, report.secondary.R,
            report.secondary.F);
  os << "signals           P        R       F1\n";
  char buf[160];
  std::snprintf(buf, sizeof buf, "  %-12s %8.3f %8.3f %8.3f\n", "detection",
                report.unanchored.overall.precision, report.unanchored.overall.recall,
                report.unanchored.overall.f1);
  os << buf;
  std::snprintf(buf, sizeof buf, "  %-12s %8.3f %8.3f %8.3f\n", "anchoring",
                report.anchored.overall.precision, report.anchored.overall.recall,
                report.anchored.overall.f1);
  os << buf;
  if (per_type) {
    os << "per type        det-P    det-R   det-F1    anc-P    anc-R   anc-F1\n";
    for (const auto& [major, det] : report.unanchored.by_type) {
      const Prf& anc = report.anchored.by_type.at(major);
      std::snprintf(buf, sizeof buf, "  %-12s %8.3f %8.3f %8.3f %8.3f %8.3f %8.3f\n",
                    to_string(major), det.precision, det.recall, det.f1, anc.precision, anc.recall,
                    anc.f1);
      os << buf;
    }
  }
  return os.str();
}

std::string format_corpus_table(const CorpusScore& score, bool per_doc, bool per_type) {
  std::ostringstream os;
  os << "== micro ==\n" << format_report_table(score.micro, per_type);
  os << "== macro ==\n";
  for (const auto& [name, value] : score.macro) {
    char buf[96];
    std::snprintf(buf, sizeof buf, "  %-28s %8.3f\n", name.c_str(), value);
    os << buf;
  }
  if (per_doc)
    for (const auto& [id, report] : score.per_doc)
      os << "== " << id << " ==\n" << format_report_table(report, per_type);
  return os.str();
}

}  // namespace erst

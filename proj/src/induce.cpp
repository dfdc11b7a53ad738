#include "erst/induce.hpp"

#include <algorithm>

#include "erst/validate.hpp"

namespace erst {

namespace {

std::string lower(const std::string& s) {
  std::string out = s;
  for (char& c : out)
    if (c >= 'A' && c <= 'Z') c += 'a' - 'A';
  return out;
}

bool starts_with(const std::string& s, const char* prefix) {
  return s.rfind(prefix, 0) == 0;
}

// Token range of a contiguous EDU position run.
std::pair<int, int> token_range(const DocumentGraph& g, const EduSpan& span) {
  if (span.empty()) return {1, 0};
  return {g.edus[span.first].first_token, g.edus[span.last].last_token};
}

struct Instance {
  const Attachment* att = nullptr;
  EduSpan child;    // the relation-bearing side (satellite or multinuc child)
  EduSpan nucleus;  // remainder of the parent's yield; may be empty
};

// Relation-bearing attachments with their satellite/nucleus scopes. The
// nucleus side of a satellite is its parent's yield minus its own; for
// multinuc children it is the parent's yield minus the child's.
std::vector<Instance> relation_instances(const DocumentGraph& g, const GraphIndex& idx) {
  std::vector<Instance> out;
  for (const auto& att : g.attachments) {
    if (!att.relation) continue;
    if (!idx.has_node(att.child) || !idx.has_node(att.parent)) continue;
    Instance inst;
    inst.att = &att;
    inst.child = idx.yield_span(att.child);
    EduSpan parent = idx.yield_span(att.parent);
    if (inst.child.empty() || parent.empty()) continue;
    // Children are contiguous inside the parent, so the remainder is one or
    // two runs; keep the run adjacent to the child (both when it wraps).
    if (parent.first < inst.child.first && parent.last > inst.child.last)
      inst.nucleus = parent;  // child in the middle; use the whole parent
    else if (parent.first < inst.child.first)
      inst.nucleus = {parent.first, inst.child.first - 1};
    else if (parent.last > inst.child.last)
      inst.nucleus = {inst.child.last + 1, parent.last};
    out.push_back(inst);
  }
  return out;
}

class AuxView {
 public:
  AuxView(const DocumentGraph& g, const AuxAnnotations& aux) : g_(g), aux_(aux) {
    if (aux.tokens.size() != g.tokens.size())
      throw Error("auxiliary annotations cover " + std::to_string(aux.tokens.size()) +
                  " tokens but the document has " + std::to_string(g.tokens.size()));
    for (std::size_t i = 0; i < aux.tokens.size(); ++i)
      if (aux.tokens[i].form != g.tokens[i].form)
        throw Error("auxiliary token " + std::to_string(i + 1) + " ('" + aux.tokens[i].form +
                    "') does not match the document token ('" + g.tokens[i].form + "')");
    children_.resize(aux.tokens.size() + 1);
    for (const auto& t : aux.tokens)
      if (t.head >= 1 && t.head <= static_cast<int>(aux.tokens.size()))
        children_[t.head].push_back(t.index);
  }

  const AuxToken& at(int index) const { return aux_.tokens[index - 1]; }
  const std::vector<int>& children(int index) const { return children_[index]; }
  int count() const { return static_cast<int>(aux_.tokens.size()); }

  bool inside(int index, std::pair<int, int> range) const {
    return index >= range.first && index <= range.second;
  }

  // Token whose head lies outside the range (or is 0); the syntactic head
  // of the span. Falls back to the last token of the range.
  int span_head(std::pair<int, int> range) const {
    for (int t = range.first; t <= range.second; ++t)
      if (!inside(at(t).head, range)) return t;
    return range.second;
  }

  std::vector<int> subtree(int index) const {
    std::vector<int> out{index};
    for (std::size_t i = 0; i < out.size(); ++i)
      for (int c : children(out[i])) out.push_back(c);
    std::sort(out.begin(), out.end());
    return out;
  }

  // Sentence token range containing a token; the whole document when no
  // boundaries are given.
  std::pair<int, int> sentence_of(int index) const {
    for (const auto& s : aux_.sentences)
      if (index >= s.first && index <= s.second) return s;
    return {1, count()};
  }

 private:
  const DocumentGraph& g_;
  const AuxAnnotations& aux_;
  std::vector<std::vector<int>> children_;
};

Signal make_signal(const Instance& inst, SignalMajor major, const std::string& subtype,
                   std::vector<int> tokens) {
  Signal s;
  s.edge = SignalEdgeRef::primary(inst.att->child);
  s.type = {major, subtype};
  std::sort(tokens.begin(), tokens.end());
  tokens.erase(std::unique(tokens.begin(), tokens.end()), tokens.end());
  s.tokens = std::move(tokens);
  return s;
}

}  // namespace

bool EligibilityTable::allows(const SignalType& type, const std::string& relation) const {
  auto it = eligible.find({type.major, type.subtype});
  if (it == eligible.end()) return false;
  if (it->second.count("*")) return true;
  return it->second.count(relation) || it->second.count(coarse_class(relation));
}

EligibilityTable default_eligibility() {
  EligibilityTable t;
  using M = SignalMajor;
  auto set = [&](M major, const char* subtype, std::set<std::string> rels) {
    t.eligible[{major, subtype}] = std::move(rels);
  };
  set(M::Graphical, "question-mark", {"topic"});
  set(M::Graphical, "parentheses", {"elaboration", "explanation-evidence"});
  set(M::Graphical, "quotation-marks", {"attribution", "elaboration", "restatement"});
  set(M::Graphical, "colon", {"organization-preparation", "restatement", "elaboration"});
  set(M::Graphical, "dash", {"elaboration", "organization"});
  set(M::Graphical, "semicolon", {"joint", "elaboration"});
  set(M::Morphological, "mood", {"explanation-motivation", "contingency-condition"});
  set(M::Morphological, "tense", {"context-background"});
  set(M::Syntactic, "relative-or-infinitival", {"elaboration-attribute", "purpose-attribute"});
  set(M::Syntactic, "modified-head", {"elaboration-attribute", "purpose-attribute"});
  set(M::Syntactic, "reported-speech", {"attribution"});
  set(M::Syntactic, "subject-auxiliary-inversion", {"contingency-condition"});
  set(M::Reference, "personal", {"elaboration", "context-background"});
  set(M::Reference, "demonstrative", {"elaboration", "context-background"});
  set(M::Semantic, "repetition",
      {"elaboration", "restatement", "context-background", "organization-preparation"});
  set(M::Semantic, "attribution-source", {"attribution"});
  set(M::Lexical, "indicative-word", {"*"});
  return t;
}

IndicativeLexicon default_indicative_lexicon() {
  IndicativeLexicon lex;
  auto add = [&](const char* lemma, const char* pos, std::set<std::string> rels) {
    lex.items[{lemma, pos}] = std::move(rels);
  };
  // Conservative defaults: high-frequency evaluation adjectives and
  // attribution predicates.
  add("good", "JJ", {"evaluation"});
  add("great", "JJ", {"evaluation"});
  add("bad", "JJ", {"evaluation"});
  add("nice", "JJ", {"evaluation"});
  add("pretty", "JJ", {"evaluation"});
  add("kind", "JJ", {"evaluation"});
  add("important", "JJ", {"evaluation"});
  add("beautiful", "JJ", {"evaluation"});
  add("say", "VBD", {"attribution"});
  add("say", "VBZ", {"attribution"});
  add("say", "VB", {"attribution"});
  add("think", "VBP", {"attribution"});
  add("think", "VBZ", {"attribution"});
  add("know", "VBP", {"attribution"});
  return lex;
}

InduceResult induce_graphical(const DocumentGraph& graph, const AuxAnnotations& aux,
                              const EligibilityTable& eligibility) {
  AuxView view(graph, aux);
  GraphIndex idx = GraphIndex::build(graph);
  InduceResult result;

  for (const Instance& inst : relation_instances(graph, idx)) {
    const std::string& rel = *inst.att->relation;
    auto child_range = token_range(graph, inst.child);

    SignalType question{SignalMajor::Graphical, "question-mark"};
    if (eligibility.allows(question, rel)) {
      int mark = 0;
      for (int t = child_range.first; t <= child_range.second; ++t)
        if (graph.tokens[t - 1].form == "?") mark = t;
      if (!mark) {
        auto sent = view.sentence_of(child_range.second);
        for (int t = sent.first; t <= sent.second; ++t)
          if (graph.tokens[t - 1].form == "?") mark = t;
      }
      if (mark)
        result.signals.push_back(make_signal(inst, SignalMajor::Graphical, "question-mark", {mark}));
    }

    // Paired marks enclosing the satellite's full yield.
    if (child_range.first < child_range.second) {
      const std::string& open = graph.tokens[child_range.first - 1].form;
      const std::string& close = graph.tokens[child_range.second - 1].form;
      const char* subtype = nullptr;
      if (open == "(" && close == ")") subtype = "parentheses";
      if ((open == "\"" && close == "\"") || (open == "“" && close == "”") ||
          (open == "``" && close == "''"))
        subtype = "quotation-marks";
      if (subtype && eligibility.allows({SignalMajor::Graphical, subtype}, rel))
        result.signals.push_back(make_signal(inst, SignalMajor::Graphical, subtype,
                                             {child_range.first, child_range.second}));
    }

    // Colon family at the boundary between the earlier and later side.
    if (!inst.nucleus.empty()) {
      auto nucleus_range = token_range(graph, inst.nucleus);
      int boundary = std::min(child_range.second, nucleus_range.second);
      if (boundary >= 1) {
        const std::string& form = graph.tokens[boundary - 1].form;
        const char* subtype = nullptr;
        if (form == ":") subtype = "colon";
        if (form == ";") subtype = "semicolon";
        if (form == "—" || form == "–" || form == "--") subtype = "dash";
        if (subtype && eligibility.allows({SignalMajor::Graphical, subtype}, rel))
          result.signals.push_back(
              make_signal(inst, SignalMajor::Graphical, subtype, {boundary}));
      }
    }
  }
  return result;
}

InduceResult induce_syntactic_morphological(const DocumentGraph& graph,
                                            const AuxAnnotations& aux,
                                            const EligibilityTable& eligibility) {
  if (!aux.has_dependencies())
    throw Error(
        "dependency layer missing; skipped rule families: relative-or-infinitival, "
        "modified-head, reported-speech, mood, tense, subject-auxiliary-inversion");
  AuxView view(graph, aux);
  GraphIndex idx = GraphIndex::build(graph);
  InduceResult result;

  for (const Instance& inst : relation_instances(graph, idx)) {
    const std::string& rel = *inst.att->relation;
    auto child = token_range(graph, inst.child);
    auto nucleus = inst.nucleus.empty() ? std::pair(1, 0) : token_range(graph, inst.nucleus);
    bool satellite = inst.att->role == NuclearityRole::Satellite;

    // Adnominal attribute clauses: a dependency from a governing head
    // outside the satellite into it, labeled acl.
    if (satellite &&
        eligibility.allows({SignalMajor::Syntactic, "relative-or-infinitival"}, rel)) {
      for (int t = child.first; t <= child.second; ++t) {
        const AuxToken& tok = view.at(t);
        if (!starts_with(tok.deprel, "acl")) continue;
        if (tok.head == 0 || view.inside(tok.head, child)) continue;
        std::vector<int> anchors;
        for (int m = child.first; m <= child.second; ++m) {
          const AuxToken& mt = view.at(m);
          bool marker = mt.deprel == "mark" && view.inside(mt.head, child);
          bool relativizer = (mt.pos == "WDT" || mt.pos == "WP" || mt.pos == "WP$" ||
                              mt.pos == "WRB") &&
                             view.inside(mt.head, child);
          if (marker || relativizer) anchors.push_back(m);
        }
        if (anchors.empty()) anchors.push_back(t);
        result.signals.push_back(
            make_signal(inst, SignalMajor::Syntactic, "relative-or-infinitival", anchors));
        if (eligibility.allows({SignalMajor::Syntactic, "modified-head"}, rel))
          result.signals.push_back(
              make_signal(inst, SignalMajor::Syntactic, "modified-head", {tok.head}));
        break;
      }
    }

    // Reported speech: complement clause from a predicate in the
    // attribution satellite into the content side.
    if (satellite && eligibility.allows({SignalMajor::Syntactic, "reported-speech"}, rel)) {
      for (int t = child.first; t <= child.second; ++t) {
        bool found = false;
        for (int c : view.children(t)) {
          if (view.inside(c, child)) continue;
          if (!starts_with(view.at(c).deprel, "ccomp") && !starts_with(view.at(c).deprel, "xcomp"))
            continue;
          std::vector<int> anchors;
          for (int m : view.children(c)) {
            const AuxToken& mt = view.at(m);
            if (mt.deprel == "mark" &&
                (lower(mt.lemma) == "that" || lower(mt.lemma) == "whether" ||
                 lower(mt.lemma) == "if"))
              anchors.push_back(m);
          }
          if (anchors.empty()) anchors.push_back(c);
          result.signals.push_back(
              make_signal(inst, SignalMajor::Syntactic, "reported-speech", anchors));
          found = true;
          break;
        }
        if (found) break;
      }
    }

    // Imperative nucleus of a motivation satellite.
    if (satellite && rel == "explanation-motivation" && !inst.nucleus.empty() &&
        eligibility.allows({SignalMajor::Morphological, "mood"}, rel)) {
      for (int t = nucleus.first; t <= nucleus.second; ++t) {
        const AuxToken& tok = view.at(t);
        if (tok.pos != "VB" || view.inside(tok.head, nucleus)) continue;
        bool has_subject = false;
        for (int c : view.children(t))
          if (starts_with(view.at(c).deprel, "nsubj")) has_subject = true;
        if (!has_subject) {
          result.signals.push_back(make_signal(inst, SignalMajor::Morphological, "mood", {t}));
          break;
        }
      }
    }

    // Conditional modal in the consequent of a condition.
    if (satellite && rel == "contingency-condition" && !inst.nucleus.empty() &&
        eligibility.allows({SignalMajor::Morphological, "mood"}, rel)) {
      for (int t = nucleus.first; t <= nucleus.second; ++t) {
        const AuxToken& tok = view.at(t);
        std::string lemma = lower(tok.lemma);
        if (tok.pos == "MD" &&
            (lemma == "would" || lemma == "could" || lemma == "might" || lemma == "should")) {
          result.signals.push_back(make_signal(inst, SignalMajor::Morphological, "mood", {t}));
          break;
        }
      }
    }

    // Past perfect inside a background satellite.
    if (satellite && eligibility.allows({SignalMajor::Morphological, "tense"}, rel) &&
        rel == "context-background") {
      for (int t = child.first; t <= child.second; ++t) {
        const AuxToken& tok = view.at(t);
        if (lower(tok.lemma) != "have" || tok.pos != "VBD") continue;
        if (!starts_with(tok.deprel, "aux")) continue;
        if (view.inside(tok.head, child) && view.at(tok.head).pos == "VBN") {
          result.signals.push_back(
              make_signal(inst, SignalMajor::Morphological, "tense", {t, tok.head}));
          break;
        }
      }
    }

    // Subject-auxiliary inversion heading a condition satellite.
    if (satellite &&
        eligibility.allows({SignalMajor::Syntactic, "subject-auxiliary-inversion"}, rel)) {
      const AuxToken& first = view.at(child.first);
      bool aux_like = first.pos == "MD" ||
                      ((lower(first.lemma) == "have" || lower(first.lemma) == "be" ||
                        lower(first.lemma) == "do") &&
                       starts_with(first.pos, "VB"));
      bool marked = false;
      for (int t = child.first; t <= child.second; ++t)
        if (view.at(t).deprel == "mark") marked = true;
      if (aux_like && !marked) {
        int verb = view.inside(first.head, child) ? first.head : child.first;
        for (int c : view.children(verb)) {
          if (starts_with(view.at(c).deprel, "nsubj") && c > child.first) {
            result.signals.push_back(make_signal(
                inst, SignalMajor::Syntactic, "subject-auxiliary-inversion", {child.first}));
            break;
          }
        }
      }
    }
  }

  // Tense sequences over joint-sequence require manual verification and are
  // only reported for review.
  std::map<NodeId, std::vector<const Attachment*>> multinucs;
  for (const auto& att : graph.attachments)
    if (att.role == NuclearityRole::MultinucChild && att.relation == "joint-sequence")
      multinucs[att.parent].push_back(&att);
  auto last_verb_tense = [&](std::pair<int, int> range) -> std::string {
    std::string tense;
    for (int t = range.first; t <= range.second; ++t) {
      const std::string& pos = view.at(t).pos;
      if (pos == "VBD" || pos == "VBN") tense = "past";
      if (pos == "VBZ" || pos == "VBP") tense = "present";
      if (pos == "MD" && lower(view.at(t).lemma) == "will") tense = "future";
    }
    return tense;
  };
  for (auto& [parent, children] : multinucs) {
    std::sort(children.begin(), children.end(), [&](const Attachment* a, const Attachment* b) {
      return idx.yield_span(a->child).first < idx.yield_span(b->child).first;
    });
    for (std::size_t i = 0; i + 1 < children.size(); ++i) {
      std::string t1 = last_verb_tense(token_range(graph, idx.yield_span(children[i]->child)));
      std::string t2 = last_verb_tense(token_range(graph, idx.yield_span(children[i + 1]->child)));
      if (!t1.empty() && !t2.empty() && t1 != t2)
        result.review.push_back("tense sequence (" + t1 + " then " + t2 +
                                ") across joint-sequence children of node " +
                                std::to_string(parent));
    }
  }
  return result;
}

InduceResult induce_reference_semantic(const DocumentGraph& graph, const AuxAnnotations& aux,
                                       const EligibilityTable& eligibility) {
  if (!aux.has_coref)
    throw Error(
        "coreference layer missing; skipped rule families: reference personal/demonstrative, "
        "semantic repetition, semantic attribution-source");
  AuxView view(graph, aux);
  GraphIndex idx = GraphIndex::build(graph);
  InduceResult result;

  std::map<int, std::vector<const Mention*>> chains;
  for (const auto& m : aux.mentions) chains[m.chain].push_back(&m);
  for (auto& [chain, mentions] : chains)
    std::sort(mentions.begin(), mentions.end(),
              [](const Mention* a, const Mention* b) { return a->start < b->start; });

  auto mention_kind = [&](const Mention& m) -> std::string {
    if (m.start == m.end) {
      const std::string& pos = view.at(m.start).pos;
      if (pos == "PRP" || pos == "PRP$") return "personal";
    }
    const std::string& form = lower(view.at(m.start).form);
    if (form == "this" || form == "that" || form == "these" || form == "those")
      return "demonstrative";
    if (m.start == m.end && (view.at(m.start).pos == "PRP" || view.at(m.start).pos == "PRP$"))
      return "personal";
    return "nominal";
  };
  auto inside_span = [&](const Mention& m, std::pair<int, int> range) {
    return m.start >= range.first && m.end <= range.second;
  };

  for (const Instance& inst : relation_instances(graph, idx)) {
    if (inst.att->role != NuclearityRole::Satellite || inst.nucleus.empty()) continue;
    const std::string& rel = *inst.att->relation;
    auto child = token_range(graph, inst.child);
    auto nucleus = token_range(graph, inst.nucleus);

    for (auto& [chain, mentions] : chains) {
      // Pronominal anaphor in the satellite, antecedent in the nucleus.
      for (const Mention* anaphor : mentions) {
        if (!inside_span(*anaphor, child)) continue;
        std::string kind = mention_kind(*anaphor);
        if (kind == "nominal") continue;
        if (!eligibility.allows({SignalMajor::Reference, kind}, rel)) continue;
        const Mention* antecedent = nullptr;
        for (const Mention* m : mentions)
          if (m->end < anaphor->start && inside_span(*m, nucleus)) antecedent = m;
        if (!antecedent) continue;
        std::vector<int> anchors;
        for (int t = antecedent->start; t <= antecedent->end; ++t) anchors.push_back(t);
        for (int t = anaphor->start; t <= anaphor->end; ++t) anchors.push_back(t);
        result.signals.push_back(make_signal(inst, SignalMajor::Reference, kind, anchors));
        break;
      }
      // Repetition: non-pronominal coreferent mentions with the same head
      // lemma straddling the relation.
      if (eligibility.allows({SignalMajor::Semantic, "repetition"}, rel)) {
        const Mention* in_nucleus = nullptr;
        const Mention* in_satellite = nullptr;
        for (const Mention* m : mentions) {
          if (mention_kind(*m) != "nominal") continue;
          if (inside_span(*m, nucleus) && !in_nucleus) in_nucleus = m;
          if (inside_span(*m, child) && !in_satellite) in_satellite = m;
        }
        if (in_nucleus && in_satellite) {
          int h1 = view.span_head({in_nucleus->start, in_nucleus->end});
          int h2 = view.span_head({in_satellite->start, in_satellite->end});
          if (lower(view.at(h1).lemma) == lower(view.at(h2).lemma)) {
            std::vector<int> anchors;
            for (int t = in_nucleus->start; t <= in_nucleus->end; ++t) anchors.push_back(t);
            for (int t = in_satellite->start; t <= in_satellite->end; ++t) anchors.push_back(t);
            result.signals.push_back(
                make_signal(inst, SignalMajor::Semantic, "repetition", anchors));
          }
        }
      }
    }

    // Attribution source: subject (or external subject) of the attribution
    // predicate in the satellite.
    if (starts_with(rel, "attribution") &&
        eligibility.allows({SignalMajor::Semantic, "attribution-source"}, rel)) {
      int predicate = view.span_head(child);
      int subject = 0;
      int probe = predicate;
      for (int hop = 0; hop < 4 && probe && !subject; ++hop) {
        for (int c : view.children(probe))
          if (starts_with(view.at(c).deprel, "nsubj")) subject = c;
        const AuxToken& pt = view.at(probe);
        if (subject || pt.head == 0) break;
        if (pt.deprel == "xcomp" || pt.deprel == "conj" || pt.deprel == "advcl" ||
            pt.deprel == "ccomp")
          probe = pt.head;
        else
          break;
      }
      if (subject) {
        result.signals.push_back(
            make_signal(inst, SignalMajor::Semantic, "attribution-source", view.subtree(subject)));
      } else {
        result.review.push_back("attribution source unresolved for satellite node " +
                                std::to_string(inst.att->child));
      }
    }
  }
  return result;
}

InduceResult induce_lexical(const DocumentGraph& graph, const AuxAnnotations& aux,
                            const EligibilityTable& eligibility,
                            const IndicativeLexicon& lexicon) {
  AuxView view(graph, aux);
  GraphIndex idx = GraphIndex::build(graph);
  InduceResult result;
  if (lexicon.items.empty()) return result;

  for (const Instance& inst : relation_instances(graph, idx)) {
    const std::string& rel = *inst.att->relation;
    if (!eligibility.allows({SignalMajor::Lexical, "indicative-word"}, rel)) continue;
    auto child = token_range(graph, inst.child);
    for (int t = child.first; t <= child.second; ++t) {
      const AuxToken& tok = view.at(t);
      auto it = lexicon.items.find({lower(tok.lemma), tok.pos});
      if (it == lexicon.items.end()) continue;
      if (it->second.count(rel) || it->second.count(coarse_class(rel)))
        result.signals.push_back(make_signal(inst, SignalMajor::Lexical, "indicative-word", {t}));
    }
  }
  return result;
}

DocumentGraph merge_signals(const DocumentGraph& graph, const std::vector<Signal>& signals) {
  DocumentGraph out = graph;
  std::set<Signal> seen(out.signals.begin(), out.signals.end());
  for (const auto& s : signals)
    if (seen.insert(s).second) out.signals.push_back(s);
  return out;
}

DocumentGraph ingest_external_signals(const DocumentGraph& graph,
                                      const std::vector<ExternalSignal>& signals) {
  GraphIndex idx = GraphIndex::build(graph);
  std::vector<Signal> to_add;
  for (const auto& ext : signals) {
    if (!ext.doc_id.empty() && ext.doc_id != graph.doc_id) continue;
    bool resolves = ext.edge.is_secondary
                        ? idx.secondary_edge(ext.edge.source, ext.edge.target) != nullptr
                        : idx.attachment_of(ext.edge.child) != nullptr;
    if (!resolves)
      throw Error("line " + std::to_string(ext.line) +
                  ": signal references an edge absent from document '" + graph.doc_id + "'");
    Signal s;
    s.edge = ext.edge;
    s.type = ext.type;
    s.tokens = ext.tokens;
    std::sort(s.tokens.begin(), s.tokens.end());
    s.tokens.erase(std::unique(s.tokens.begin(), s.tokens.end()), s.tokens.end());
    to_add.push_back(std::move(s));
  }
  DocumentGraph merged = merge_signals(graph, to_add);
  ValidationPolicy policy;
  policy.secedge_signal = Severity::Warning;
  require_valid(merged, "ingest_external_signals", policy);
  return merged;
}

}  // namespace erst

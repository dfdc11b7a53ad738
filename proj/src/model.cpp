#include "erst/model.hpp"

#include <algorithm>
#include <functional>

namespace erst {

std::string coarse_class(const std::string& relation_name) {
  auto pos = relation_name.find('-');
  if (pos == std::string::npos) return relation_name;
  return relation_name.substr(0, pos);
}

const char* to_string(SignalMajor major) {
  switch (major) {
    case SignalMajor::Dm: return "dm";
    case SignalMajor::Orphan: return "orphan";
    case SignalMajor::Graphical: return "graphical";
    case SignalMajor::Lexical: return "lexical";
    case SignalMajor::Morphological: return "morphological";
    case SignalMajor::Numerical: return "numerical";
    case SignalMajor::Reference: return "reference";
    case SignalMajor::Semantic: return "semantic";
    case SignalMajor::Syntactic: return "syntactic";
  }
  return "dm";
}

std::optional<SignalMajor> signal_major_from_string(const std::string& text) {
  static const std::pair<const char*, SignalMajor> table[] = {
      {"dm", SignalMajor::Dm},
      {"orphan", SignalMajor::Orphan},
      {"graphical", SignalMajor::Graphical},
      {"lexical", SignalMajor::Lexical},
      {"morphological", SignalMajor::Morphological},
      {"numerical", SignalMajor::Numerical},
      {"reference", SignalMajor::Reference},
      {"semantic", SignalMajor::Semantic},
      {"syntactic", SignalMajor::Syntactic},
  };
  for (const auto& [name, major] : table)
    if (text == name) return major;
  return std::nullopt;
}

GraphIndex GraphIndex::build(const DocumentGraph& graph) {
  GraphIndex idx;
  idx.graph_ = &graph;

  for (std::size_t i = 0; i < graph.nodes.size(); ++i)
    idx.node_pos_.emplace(graph.nodes[i].id, i);

  for (const auto& att : graph.attachments) {
    if (!idx.attachment_.count(att.child)) idx.attachment_.emplace(att.child, &att);
    idx.children_[att.parent].push_back(&att);
  }

  // Unique root: the single node without an outgoing attachment.
  std::vector<NodeId> roots;
  for (const auto& node : graph.nodes)
    if (!idx.attachment_.count(node.id)) roots.push_back(node.id);
  idx.root_ = roots.size() == 1 ? roots[0] : 0;

  for (std::size_t i = 0; i < graph.edus.size(); ++i)
    idx.edu_position_.emplace(graph.edus[i].id, static_cast<int>(i));

  idx.token_edu_.assign(graph.tokens.size(), 0);
  for (const auto& edu : graph.edus)
    for (int t = edu.first_token; t <= edu.last_token; ++t)
      if (t >= 1 && t <= static_cast<int>(graph.tokens.size())) idx.token_edu_[t - 1] = edu.id;

  // Yields bottom-up with cycle protection: iterative DFS over children.
  std::function<const std::vector<int>&(NodeId, std::set<NodeId>&)> compute =
      [&](NodeId id, std::set<NodeId>& visiting) -> const std::vector<int>& {
    auto it = idx.yields_.find(id);
    if (it != idx.yields_.end()) return it->second;
    std::vector<int> acc;
    if (visiting.count(id)) {
      // Cycle: leave the yield empty; the validator reports the cycle.
      return idx.yields_.emplace(id, std::move(acc)).first->second;
    }
    visiting.insert(id);
    auto pos = idx.edu_position_.find(id);
    if (pos != idx.edu_position_.end()) {
      acc.push_back(pos->second);
    } else {
      auto ch = idx.children_.find(id);
      if (ch != idx.children_.end()) {
        for (const Attachment* att : ch->second) {
          const auto& sub = compute(att->child, visiting);
          acc.insert(acc.end(), sub.begin(), sub.end());
        }
      }
    }
    visiting.erase(id);
    std::sort(acc.begin(), acc.end());
    acc.erase(std::unique(acc.begin(), acc.end()), acc.end());
    return idx.yields_.emplace(id, std::move(acc)).first->second;
  };
  for (const auto& node : graph.nodes) {
    std::set<NodeId> visiting;
    compute(node.id, visiting);
  }

  for (const auto& edge : graph.secondary) {
    auto key = std::make_pair(edge.source, edge.target);
    if (!idx.secondary_.count(key)) idx.secondary_.emplace(key, &edge);
  }
  return idx;
}

const Node& GraphIndex::node(NodeId id) const {
  auto it = node_pos_.find(id);
  if (it == node_pos_.end()) throw Error("unknown node id " + std::to_string(id));
  return graph_->nodes[it->second];
}

bool GraphIndex::is_edu(NodeId id) const { return edu_position_.count(id) != 0; }

const Attachment* GraphIndex::attachment_of(NodeId child) const {
  auto it = attachment_.find(child);
  return it == attachment_.end() ? nullptr : it->second;
}

const std::vector<const Attachment*>& GraphIndex::children_of(NodeId parent) const {
  auto it = children_.find(parent);
  return it == children_.end() ? no_children_ : it->second;
}

int GraphIndex::edu_position(NodeId id) const {
  auto it = edu_position_.find(id);
  return it == edu_position_.end() ? -1 : it->second;
}

NodeId GraphIndex::edu_of_token(int token_index) const {
  if (token_index < 1 || token_index > static_cast<int>(token_edu_.size())) return 0;
  return token_edu_[token_index - 1];
}

const std::vector<int>& GraphIndex::yield_positions(NodeId id) const {
  auto it = yields_.find(id);
  return it == yields_.end() ? no_yield_ : it->second;
}

EduSpan GraphIndex::yield_span(NodeId id) const {
  const auto& ys = yield_positions(id);
  if (ys.empty()) return EduSpan{};
  return EduSpan{ys.front(), ys.back()};
}

bool GraphIndex::yield_contiguous(NodeId id) const {
  const auto& ys = yield_positions(id);
  if (ys.empty()) return false;
  return ys.back() - ys.front() + 1 == static_cast<int>(ys.size());
}

bool GraphIndex::has_secondary(NodeId source, NodeId target) const {
  return secondary_.count({source, target}) != 0;
}

const SecondaryEdge* GraphIndex::secondary_edge(NodeId source, NodeId target) const {
  auto it = secondary_.find({source, target});
  return it == secondary_.end() ? nullptr : it->second;
}

std::vector<NodeId> node_yield(const DocumentGraph& graph, NodeId node) {
  GraphIndex idx = GraphIndex::build(graph);
  if (!idx.has_node(node)) throw Error("node_yield: unknown node id " + std::to_string(node));
  std::vector<NodeId> out;
  for (int pos : idx.yield_positions(node)) out.push_back(graph.edus[pos].id);
  return out;
}

const RelationLabel* find_relation(const DocumentGraph& graph, const std::string& name) {
  for (const auto& rel : graph.inventory)
    if (rel.name == name) return &rel;
  return nullptr;
}

bool vocabulary_contains(const DocumentGraph& graph, const SignalType& type) {
  for (const auto& t : graph.signal_vocabulary)
    if (t == type) return true;
  return false;
}

std::vector<RelationLabel> default_relation_inventory() {
  auto sat = [](const char* n) { return RelationLabel{n, RelationKind::Satellite}; };
  auto multi = [](const char* n) { return RelationLabel{n, RelationKind::Multinuclear}; };
  return {
      sat("adversative-antithesis"),
      sat("adversative-concession"),
      multi("adversative-contrast"),
      sat("attribution-negative"),
      sat("attribution-positive"),
      sat("causal-cause"),
      sat("causal-result"),
      sat("context-background"),
      sat("context-circumstance"),
      sat("contingency-condition"),
      sat("elaboration-additional"),
      sat("elaboration-attribute"),
      sat("evaluation-comment"),
      sat("explanation-evidence"),
      sat("explanation-justify"),
      sat("explanation-motivation"),
      multi("joint-disjunction"),
      multi("joint-list"),
      multi("joint-other"),
      multi("joint-sequence"),
      sat("mode-manner"),
      sat("mode-means"),
      sat("organization-heading"),
      sat("organization-phatic"),
      sat("organization-preparation"),
      sat("purpose-attribute"),
      sat("purpose-goal"),
      sat("restatement-partial"),
      multi("restatement-repetition"),
      multi("same-unit"),
      sat("topic-question"),
      sat("topic-solutionhood"),
  };
}

std::vector<SignalType> default_signal_vocabulary() {
  using M = SignalMajor;
  return {
      {M::Dm, "dm"},
      {M::Orphan, "orphan"},
      {M::Graphical, "colon"},
      {M::Graphical, "dash"},
      {M::Graphical, "semicolon"},
      {M::Graphical, "layout"},
      {M::Graphical, "items-in-sequence"},
      {M::Graphical, "parentheses"},
      {M::Graphical, "quotation-marks"},
      {M::Graphical, "question-mark"},
      {M::Lexical, "alternate-expression"},
      {M::Lexical, "indicative-word"},
      {M::Morphological, "mood"},
      {M::Morphological, "tense"},
      {M::Numerical, "same-count"},
      {M::Reference, "comparative"},
      {M::Reference, "demonstrative"},
      {M::Reference, "personal"},
      {M::Reference, "propositional"},
      {M::Semantic, "antonymy"},
      {M::Semantic, "attribution-source"},
      {M::Semantic, "lexical-chain"},
      {M::Semantic, "meronymy"},
      {M::Semantic, "negation"},
      {M::Semantic, "repetition"},
      {M::Semantic, "synonymy"},
      {M::Syntactic, "relative-or-infinitival"},
      {M::Syntactic, "interrupted-matrix-clause"},
      {M::Syntactic, "modified-head"},
      {M::Syntactic, "nominal-modifier"},
      {M::Syntactic, "parallel-construction"},
      {M::Syntactic, "participial-clause"},
      {M::Syntactic, "reported-speech"},
      {M::Syntactic, "subject-auxiliary-inversion"},
  };
}

}  // namespace erst

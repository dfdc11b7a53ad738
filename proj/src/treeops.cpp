#include "erst/treeops.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace erst {

const char* to_string(Nuclearity n) {
  switch (n) {
    case Nuclearity::NS: return "NS";
    case Nuclearity::SN: return "SN";
    case Nuclearity::NN: return "NN";
  }
  return "NN";
}

const char* to_string(Direction d) {
  return d == Direction::SourceBeforeTarget ? "source-before-target" : "target-before-source";
}

namespace {

struct Builder {
  std::vector<Node> nodes;
  std::vector<Attachment> attachments;
  NodeId next_fresh = -1;

  NodeId fresh(NodeKind kind) {
    NodeId id = next_fresh--;
    nodes.push_back({id, kind});
    return id;
  }
  void emit_node(NodeId id, NodeKind kind) { nodes.push_back({id, kind}); }
  void attach(NodeId child, NodeId parent, std::optional<std::string> relation,
              NuclearityRole role) {
    attachments.push_back({child, parent, std::move(relation), role});
  }
};

// Emits the binarized subtree rooted at `n`. The caller attaches `n` itself.
void binarize_node(const GraphIndex& idx, NodeId n, Builder& out) {
  const Node& node = idx.node(n);
  if (idx.is_edu(n)) {
    out.emit_node(n, NodeKind::Edu);
    return;
  }

  std::vector<const Attachment*> satellites;
  std::vector<const Attachment*> multinuc_children;
  const Attachment* nucleus = nullptr;
  for (const Attachment* att : idx.children_of(n)) {
    switch (att->role) {
      case NuclearityRole::Satellite: satellites.push_back(att); break;
      case NuclearityRole::MultinucChild: multinuc_children.push_back(att); break;
      case NuclearityRole::Nucleus: nucleus = att; break;
    }
    binarize_node(idx, att->child, out);
  }
  std::sort(multinuc_children.begin(), multinuc_children.end(),
            [&](const Attachment* a, const Attachment* b) {
              return idx.yield_span(a->child).first < idx.yield_span(b->child).first;
            });

  // Core of the unit: the nucleus child of a span, or the (possibly chained)
  // multinuc over this node's multinuclear children.
  NodeId core = 0;
  if (node.kind == NodeKind::Span) {
    core = nucleus ? nucleus->child : 0;
  } else {
    if (multinuc_children.size() < 2)
      throw Error("binarize: multinuc node " + std::to_string(n) +
                  " has fewer than two multinuclear children");
    // Right-branching chain; intermediates carry the relation of their
    // leftmost covered child.
    NodeId top = satellites.empty() ? n : out.fresh(NodeKind::Multinuc);
    if (!satellites.empty()) core = top;
    if (satellites.empty()) out.emit_node(n, NodeKind::Multinuc);
    std::vector<NodeId> parents{top};
    for (std::size_t i = 1; i + 1 < multinuc_children.size(); ++i) {
      NodeId k = out.fresh(NodeKind::Multinuc);
      out.attach(k, parents.back(), multinuc_children[i]->relation,
                 NuclearityRole::MultinucChild);
      parents.push_back(k);
    }
    for (std::size_t i = 0; i < multinuc_children.size(); ++i) {
      NodeId parent = parents[std::min(i, parents.size() - 1)];
      out.attach(multinuc_children[i]->child, parent, multinuc_children[i]->relation,
                 NuclearityRole::MultinucChild);
    }
    if (satellites.empty()) return;
  }

  if (core == 0) throw Error("binarize: span node " + std::to_string(n) + " has no nucleus child");

  // Satellites nest outermost-first in attachment order; `n` is the
  // outermost wrapper so its yield is preserved.
  out.emit_node(n, NodeKind::Span);
  NodeId inner = core;
  for (std::size_t j = satellites.size(); j-- > 1;) {
    NodeId w = out.fresh(NodeKind::Span);
    out.attach(inner, w, std::nullopt, NuclearityRole::Nucleus);
    out.attach(satellites[j]->child, w, satellites[j]->relation, NuclearityRole::Satellite);
    inner = w;
  }
  out.attach(inner, n, std::nullopt, NuclearityRole::Nucleus);
  if (!satellites.empty())
    out.attach(satellites[0]->child, n, satellites[0]->relation, NuclearityRole::Satellite);
}

}  // namespace

DocumentGraph binarize(const DocumentGraph& graph) {
  ValidationPolicy policy;
  policy.secedge_signal = Severity::Warning;
  ValidationReport report = validate(graph, policy);
  for (const auto& v : report.violations)
    if (v.severity == Severity::Error && v.code != "satellite-tie")
      throw InvalidGraphError("binarize: invalid input graph", report);

  GraphIndex idx = GraphIndex::build(graph);
  if (graph.nodes.empty()) return graph;

  Builder out;
  binarize_node(idx, idx.root(), out);

  DocumentGraph result = graph;
  result.nodes = std::move(out.nodes);
  result.attachments = std::move(out.attachments);
  std::sort(result.nodes.begin(), result.nodes.end(),
            [](const Node& a, const Node& b) { return a.id < b.id; });
  return result;
}

namespace {

struct MutableTree {
  std::map<NodeId, NodeKind> kind;
  // children in attachment order per parent
  std::map<NodeId, std::vector<Attachment>> children;
  NodeId root = 0;

  static MutableTree from(const DocumentGraph& graph, const GraphIndex& idx) {
    MutableTree t;
    for (const auto& node : graph.nodes) t.kind[node.id] = node.kind;
    for (const auto& att : graph.attachments) t.children[att.parent].push_back(att);
    t.root = idx.root();
    return t;
  }
};

}  // namespace

DocumentGraph debinarize(const DocumentGraph& graph) {
  GraphIndex idx = GraphIndex::build(graph);
  for (const auto& node : graph.nodes) {
    if (idx.is_edu(node.id)) continue;
    if (idx.children_of(node.id).size() != 2)
      throw Error("debinarize: node " + std::to_string(node.id) + " is not binary");
  }

  MutableTree tree = MutableTree::from(graph, idx);
  std::set<NodeId> removed;

  bool changed = true;
  while (changed) {
    changed = false;
    for (auto& [parent, kids] : tree.children) {
      if (removed.count(parent)) continue;
      for (std::size_t i = 0; i < kids.size(); ++i) {
        NodeId c = kids[i].child;
        if (c >= 0 || removed.count(c)) continue;
        NodeKind ck = tree.kind[c];
        NodeKind pk = tree.kind[parent];
        bool chain = ck == NodeKind::Multinuc && pk == NodeKind::Multinuc &&
                     kids[i].role == NuclearityRole::MultinucChild;
        bool multinuc_core = ck == NodeKind::Multinuc && pk == NodeKind::Span &&
                             kids[i].role == NuclearityRole::Nucleus;
        bool span_wrapper = ck == NodeKind::Span && pk == NodeKind::Span &&
                            kids[i].role == NuclearityRole::Nucleus;
        if (!chain && !multinuc_core && !span_wrapper) continue;

        std::vector<Attachment> sub = tree.children[c];
        for (auto& att : sub) att.parent = parent;
        if (span_wrapper) {
          // The inner nucleus takes the wrapper's slot; the wrapper's
          // satellites append after the outer ones.
          auto nucleus = std::find_if(sub.begin(), sub.end(), [](const Attachment& att) {
            return att.role == NuclearityRole::Nucleus;
          });
          if (nucleus == sub.end()) continue;
          kids[i] = *nucleus;
          sub.erase(nucleus);
          kids.insert(kids.end(), sub.begin(), sub.end());
        } else {
          // Chain link or multinuc core: splice the children in place.
          if (multinuc_core) tree.kind[parent] = NodeKind::Multinuc;
          kids.erase(kids.begin() + i);
          kids.insert(kids.begin() + i, sub.begin(), sub.end());
        }
        tree.children.erase(c);
        removed.insert(c);
        changed = true;
        break;
      }
      if (changed) break;
    }
  }

  DocumentGraph result = graph;
  result.nodes.clear();
  result.attachments.clear();
  for (const auto& node : graph.nodes)
    if (!removed.count(node.id)) result.nodes.push_back({node.id, tree.kind[node.id]});
  for (const auto& [parent, kids] : tree.children)
    for (const auto& att : kids) result.attachments.push_back(att);
  std::sort(result.attachments.begin(), result.attachments.end(),
            [](const Attachment& a, const Attachment& b) { return a.child < b.child; });

  for (const auto& edge : result.secondary)
    if (removed.count(edge.source) || removed.count(edge.target))
      throw Error("debinarize: secondary edge anchored to a synthesized node");
  for (const auto& signal : result.signals) {
    if (signal.edge.is_secondary) {
      if (removed.count(signal.edge.source) || removed.count(signal.edge.target))
        throw Error("debinarize: signal anchored to a synthesized node");
    } else if (removed.count(signal.edge.child)) {
      throw Error("debinarize: signal anchored to a synthesized node");
    }
  }
  return result;
}

DecisionSequence extract_decisions(const DocumentGraph& graph) {
  GraphIndex idx = GraphIndex::build(graph);
  DecisionSequence seq;
  seq.edu_count = idx.edu_count();
  if (graph.nodes.empty()) return seq;

  std::vector<NodeId> order;
  std::vector<NodeId> stack{idx.root()};
  while (!stack.empty()) {  // reverse post order via parent-before-child visit
    NodeId n = stack.back();
    stack.pop_back();
    if (idx.is_edu(n)) continue;
    order.push_back(n);
    for (const Attachment* att : idx.children_of(n)) stack.push_back(att->child);
  }
  std::reverse(order.begin(), order.end());

  for (NodeId n : order) {
    const auto& children = idx.children_of(n);
    if (children.size() != 2)
      throw Error("extract_decisions: node " + std::to_string(n) + " is not binary");
    const Attachment* a = children[0];
    const Attachment* b = children[1];
    if (idx.yield_span(a->child).first > idx.yield_span(b->child).first) std::swap(a, b);

    Decision d;
    d.left = idx.yield_span(a->child);
    d.right = idx.yield_span(b->child);
    if (a->role == NuclearityRole::MultinucChild) {
      d.nuclearity = Nuclearity::NN;
      d.label = a->relation.value_or("");
    } else if (a->role == NuclearityRole::Satellite) {
      d.nuclearity = Nuclearity::SN;
      d.label = a->relation.value_or("");
    } else {
      d.nuclearity = Nuclearity::NS;
      d.label = b->relation.value_or("");
    }
    seq.decisions.push_back(std::move(d));
  }
  return seq;
}

std::vector<SecondaryDecision> extract_secondary_decisions(const DocumentGraph& graph) {
  GraphIndex idx = GraphIndex::build(graph);
  std::vector<SecondaryDecision> out;
  for (const auto& edge : graph.secondary) {
    if (!idx.has_node(edge.source) || !idx.has_node(edge.target))
      throw Error("extract_secondary_decisions: secondary edge endpoint does not resolve");
    SecondaryDecision d;
    d.source = idx.yield_span(edge.source);
    d.target = idx.yield_span(edge.target);
    d.direction = std::pair(d.source.first, d.source.last) <=
                          std::pair(d.target.first, d.target.last)
                      ? Direction::SourceBeforeTarget
                      : Direction::TargetBeforeSource;
    d.label = edge.relation;
    out.push_back(std::move(d));
  }
  return out;
}

namespace {

template <typename T>
std::vector<T> sorted(std::vector<T> v) {
  std::sort(v.begin(), v.end());
  return v;
}

}  // namespace

bool graphs_isomorphic(const DocumentGraph& a, const DocumentGraph& b) {
  auto node_key = [](const Node& n) { return std::pair(n.id, n.kind); };
  std::vector<std::pair<NodeId, NodeKind>> na, nb;
  for (const auto& n : a.nodes) na.push_back(node_key(n));
  for (const auto& n : b.nodes) nb.push_back(node_key(n));
  if (sorted(na) != sorted(nb)) return false;

  using AttKey = std::tuple<NodeId, NodeId, std::string, NuclearityRole>;
  auto att_key = [](const Attachment& att) {
    return AttKey(att.child, att.parent, att.relation.value_or("\x01none"), att.role);
  };
  std::vector<AttKey> aa, ab;
  for (const auto& att : a.attachments) aa.push_back(att_key(att));
  for (const auto& att : b.attachments) ab.push_back(att_key(att));
  if (sorted(aa) != sorted(ab)) return false;

  auto edu_key = [](const Edu& e) { return std::tuple(e.id, e.first_token, e.last_token); };
  std::vector<std::tuple<NodeId, int, int>> ea, eb;
  for (const auto& e : a.edus) ea.push_back(edu_key(e));
  for (const auto& e : b.edus) eb.push_back(edu_key(e));
  if (sorted(ea) != sorted(eb)) return false;

  std::vector<std::string> ta, tb;
  for (const auto& t : a.tokens) ta.push_back(t.form);
  for (const auto& t : b.tokens) tb.push_back(t.form);
  if (ta != tb) return false;

  using SecKey = std::tuple<NodeId, NodeId, std::string>;
  std::vector<SecKey> sa, sb;
  for (const auto& e : a.secondary) sa.push_back({e.source, e.target, e.relation});
  for (const auto& e : b.secondary) sb.push_back({e.source, e.target, e.relation});
  if (sorted(sa) != sorted(sb)) return false;

  if (sorted(a.signals) != sorted(b.signals)) return false;
  return true;
}

}  // namespace erst

#include "erst/validate.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

namespace erst {

namespace {

class Checker {
 public:
  Checker(const DocumentGraph& graph, const ValidationPolicy& policy)
      : g_(graph), policy_(policy), idx_(GraphIndex::build(graph)) {}

  ValidationReport run() {
    check_tokens();
    check_edus();
    check_node_ids();
    check_tree_shape();
    check_constituents();
    check_secondary();
    check_signals();
    std::sort(report_.violations.begin(), report_.violations.end());
    report_.violations.erase(std::unique(report_.violations.begin(), report_.violations.end()),
                             report_.violations.end());
    return std::move(report_);
  }

 private:
  void add(const std::string& code, std::vector<NodeId> nodes, const std::string& message,
           Severity severity = Severity::Error) {
    std::sort(nodes.begin(), nodes.end());
    report_.violations.push_back({code, severity, std::move(nodes), message});
  }

  void check_tokens() {
    for (std::size_t i = 0; i < g_.tokens.size(); ++i) {
      if (g_.tokens[i].index != static_cast<int>(i) + 1)
        add("token-index-mismatch", {},
            "token at position " + std::to_string(i + 1) + " carries index " +
                std::to_string(g_.tokens[i].index));
      if (g_.tokens[i].form.empty())
        add("empty-token-form", {}, "token " + std::to_string(i + 1) + " has an empty form");
    }
  }

  void check_edus() {
    int expected = 1;
    for (const auto& edu : g_.edus) {
      if (edu.first_token > edu.last_token) {
        add("edu-span-invalid", {edu.id},
            "EDU " + std::to_string(edu.id) + " has first_token > last_token");
        continue;
      }
      if (edu.first_token > expected)
        add("token-coverage-gap", {edu.id},
            "tokens " + std::to_string(expected) + ".." + std::to_string(edu.first_token - 1) +
                " are not covered by any EDU");
      if (edu.first_token < expected)
        add("token-coverage-overlap", {edu.id},
            "EDU " + std::to_string(edu.id) + " overlaps a preceding EDU at token " +
                std::to_string(edu.first_token));
      expected = std::max(expected, edu.last_token + 1);
    }
    if (expected <= static_cast<int>(g_.tokens.size()))
      add("token-coverage-gap", {},
          "tokens " + std::to_string(expected) + ".." + std::to_string(g_.tokens.size()) +
              " are not covered by any EDU");
    for (const auto& edu : g_.edus)
      if (edu.last_token > static_cast<int>(g_.tokens.size()))
        add("token-coverage-overlap", {edu.id},
            "EDU " + std::to_string(edu.id) + " extends past the last token");
  }

  void check_node_ids() {
    std::set<NodeId> seen;
    for (const auto& node : g_.nodes)
      if (!seen.insert(node.id).second)
        add("duplicate-node-id", {node.id}, "node id declared twice");
  }

  void check_tree_shape() {
    std::map<NodeId, int> parent_count;
    for (const auto& att : g_.attachments) {
      ++parent_count[att.child];
      if (!idx_.has_node(att.child))
        add("unresolved-reference", {att.child},
            "attachment child " + std::to_string(att.child) + " is not a declared node");
      if (!idx_.has_node(att.parent))
        add("unresolved-reference", {att.parent},
            "attachment parent " + std::to_string(att.parent) + " is not a declared node");
    }
    for (const auto& [child, count] : parent_count)
      if (count > 1)
        add("multiple-parents", {child},
            "node " + std::to_string(child) + " has " + std::to_string(count) + " parents");

    std::vector<NodeId> roots;
    for (const auto& node : g_.nodes)
      if (!idx_.attachment_of(node.id)) roots.push_back(node.id);
    if (roots.empty() && !g_.nodes.empty()) add("no-root", {}, "every node has a parent");
    if (roots.size() > 1)
      add("multiple-roots", roots,
          std::to_string(roots.size()) + " nodes have no parent");

    // Cycles and reachability along child -> parent links.
    std::map<NodeId, int> state;  // 0 new, 1 visiting, 2 done
    std::set<NodeId> on_cycle;
    for (const auto& node : g_.nodes) {
      NodeId cur = node.id;
      std::vector<NodeId> path;
      while (cur != 0 && idx_.has_node(cur) && state[cur] == 0) {
        state[cur] = 1;
        path.push_back(cur);
        const Attachment* att = idx_.attachment_of(cur);
        cur = att && idx_.has_node(att->parent) ? att->parent : 0;
      }
      if (cur != 0 && idx_.has_node(cur) && state[cur] == 1) {
        auto it = std::find(path.begin(), path.end(), cur);
        std::vector<NodeId> cycle(it, path.end());
        bool fresh = false;
        for (NodeId n : cycle) fresh |= on_cycle.insert(n).second;
        if (fresh) add("primary-cycle", cycle, "primary attachments form a cycle");
      }
      for (NodeId n : path) state[n] = 2;
    }
    if (roots.size() == 1) {
      std::set<NodeId> reachable{roots[0]};
      std::vector<NodeId> stack{roots[0]};
      while (!stack.empty()) {
        NodeId n = stack.back();
        stack.pop_back();
        for (const Attachment* att : idx_.children_of(n))
          if (reachable.insert(att->child).second) stack.push_back(att->child);
      }
      for (const auto& node : g_.nodes)
        if (!reachable.count(node.id) && !on_cycle.count(node.id))
          add("disconnected-node", {node.id},
              "node " + std::to_string(node.id) + " does not reach the root");
    }
  }

  void check_constituents() {
    for (const auto& att : g_.attachments) {
      if (!idx_.has_node(att.child) || !idx_.has_node(att.parent)) continue;
      NodeKind pkind = idx_.node(att.parent).kind;
      if (pkind == NodeKind::Edu)
        add("edu-with-children", {att.parent, att.child},
            "terminal node " + std::to_string(att.parent) + " has attached children");
      switch (att.role) {
        case NuclearityRole::Nucleus:
          if (att.relation)
            add("relation-kind-mismatch", {att.child},
                "nucleus span link of node " + std::to_string(att.child) + " carries a relation");
          if (pkind != NodeKind::Span && pkind != NodeKind::Edu)
            add("role-parent-mismatch", {att.child, att.parent},
                "nucleus span link must attach to a span node");
          break;
        case NuclearityRole::Satellite: {
          const RelationLabel* rel = att.relation ? find_relation(g_, *att.relation) : nullptr;
          if (!att.relation)
            add("relation-kind-mismatch", {att.child},
                "satellite attachment of node " + std::to_string(att.child) + " lacks a relation");
          else if (!rel)
            add("unknown-relation-label", {att.child},
                "relation '" + *att.relation + "' is not in the inventory");
          else if (rel->kind != RelationKind::Satellite)
            add("relation-kind-mismatch", {att.child},
                "satellite attachment of node " + std::to_string(att.child) +
                    " carries multinuclear relation '" + *att.relation + "'");
          break;
        }
        case NuclearityRole::MultinucChild: {
          const RelationLabel* rel = att.relation ? find_relation(g_, *att.relation) : nullptr;
          if (!att.relation)
            add("relation-kind-mismatch", {att.child},
                "multinuc child " + std::to_string(att.child) + " lacks a relation");
          else if (!rel)
            add("unknown-relation-label", {att.child},
                "relation '" + *att.relation + "' is not in the inventory");
          else if (rel->kind != RelationKind::Multinuclear)
            add("relation-kind-mismatch", {att.child},
                "multinuc child " + std::to_string(att.child) + " carries satellite relation '" +
                    *att.relation + "'");
          if (pkind != NodeKind::Multinuc && pkind != NodeKind::Edu)
            add("role-parent-mismatch", {att.child, att.parent},
                "multinuc child must attach to a multinuc node");
          break;
        }
      }
    }

    for (const auto& node : g_.nodes) {
      if (idx_.is_edu(node.id)) continue;
      const auto& children = idx_.children_of(node.id);
      int nuclei = 0, satellites = 0, span_links = 0, multinuc_links = 0;
      for (const Attachment* att : children) {
        if (att->role == NuclearityRole::Satellite) ++satellites;
        if (att->role == NuclearityRole::Nucleus) ++span_links;
        if (att->role == NuclearityRole::MultinucChild) ++multinuc_links;
        if (att->role != NuclearityRole::Satellite) ++nuclei;
      }
      if (children.size() < 2)
        add("no-empty-hierarchy", {node.id},
            "non-terminal " + std::to_string(node.id) + " has " +
                std::to_string(children.size()) + " children");
      else if (node.kind == NodeKind::Multinuc && multinuc_links == 1)
        add("no-empty-hierarchy", {node.id},
            "multinuc " + std::to_string(node.id) + " has a single multinuclear child");
      if (satellites > 1) {
        std::vector<NodeId> ids{node.id};
        for (const Attachment* att : children)
          if (att->role == NuclearityRole::Satellite) ids.push_back(att->child);
        add("satellite-tie", ids,
            "node " + std::to_string(node.id) + " has " + std::to_string(satellites) +
                " satellite children");
      }
      if (!children.empty() && nuclei == 0)
        add("missing-nucleus", {node.id},
            "non-terminal " + std::to_string(node.id) + " has no nucleus child");
      if (span_links > 1)
        add("multiple-nuclei", {node.id},
            "span node " + std::to_string(node.id) + " has " + std::to_string(span_links) +
                " span-link children");
    }

    // Projectivity: every node's EDU yield is a contiguous run.
    for (const auto& node : g_.nodes) {
      const auto& ys = idx_.yield_positions(node.id);
      if (ys.empty()) continue;  // cycles and empty non-terminals reported elsewhere
      if (ys.back() - ys.front() + 1 != static_cast<int>(ys.size()))
        add("non-projective", {node.id},
            "yield of node " + std::to_string(node.id) + " is not contiguous");
    }
  }

  void check_secondary() {
    std::set<std::pair<NodeId, NodeId>> seen;
    for (const auto& edge : g_.secondary) {
      if (edge.source == edge.target)
        add("secondary-self-loop", {edge.source}, "secondary edge connects a node to itself");
      if (!seen.insert({edge.source, edge.target}).second)
        add("duplicate-secondary-path", {edge.source, edge.target},
            "two secondary edges share the directed path " + std::to_string(edge.source) + " -> " +
                std::to_string(edge.target));
      if (!idx_.has_node(edge.source))
        add("secondary-dangling-endpoint", {edge.source},
            "secondary edge source " + std::to_string(edge.source) + " is not a declared node");
      if (!idx_.has_node(edge.target))
        add("secondary-dangling-endpoint", {edge.target},
            "secondary edge target " + std::to_string(edge.target) + " is not a declared node");
      if (!find_relation(g_, edge.relation))
        add("unknown-relation-label", {edge.source, edge.target},
            "relation '" + edge.relation + "' is not in the inventory");
    }
    // Constraint: every secondary edge is supported by at least one signal.
    std::set<std::pair<NodeId, NodeId>> signaled;
    for (const auto& signal : g_.signals)
      if (signal.edge.is_secondary) signaled.insert({signal.edge.source, signal.edge.target});
    for (const auto& edge : g_.secondary)
      if (!signaled.count({edge.source, edge.target}))
        add("unsignaled-secondary-edge", {edge.source, edge.target},
            "secondary edge " + std::to_string(edge.source) + " -> " +
                std::to_string(edge.target) + " has no supporting signal",
            policy_.secedge_signal);
  }

  void check_signals() {
    for (const auto& signal : g_.signals) {
      if (signal.edge.is_secondary) {
        if (!idx_.secondary_edge(signal.edge.source, signal.edge.target))
          add("dangling-signal-edge", {signal.edge.source, signal.edge.target},
              "signal references missing secondary edge " + std::to_string(signal.edge.source) +
                  " -> " + std::to_string(signal.edge.target));
      } else {
        if (!idx_.has_node(signal.edge.child) || !idx_.attachment_of(signal.edge.child))
          add("dangling-signal-edge", {signal.edge.child},
              "signal references node " + std::to_string(signal.edge.child) +
                  " which has no outgoing primary edge");
      }
      for (int t : signal.tokens)
        if (t < 1 || t > static_cast<int>(g_.tokens.size()))
          add("signal-token-out-of-range", {},
              "signal anchors token " + std::to_string(t) + " outside the document");
      if (!vocabulary_contains(g_, signal.type))
        add("unknown-signal-type", {},
            "signal type '" + signal.type.combined() + "' is not in the vocabulary");
    }
  }

  const DocumentGraph& g_;
  const ValidationPolicy& policy_;
  GraphIndex idx_;
  ValidationReport report_;
};

}  // namespace

ValidationReport validate(const DocumentGraph& graph, const ValidationPolicy& policy) {
  return Checker(graph, policy).run();
}

std::string InvalidGraphError::summarize(const ValidationReport& report) {
  std::ostringstream os;
  std::size_t shown = 0;
  for (const auto& v : report.violations) {
    if (v.severity != Severity::Error) continue;
    if (shown) os << "; ";
    if (shown == 4) {
      os << "...";
      break;
    }
    os << v.code;
    ++shown;
  }
  return os.str();
}

void require_valid(const DocumentGraph& graph, const std::string& context,
                   const ValidationPolicy& policy) {
  ValidationReport report = validate(graph, policy);
  if (!report.valid()) throw InvalidGraphError(context + ": invalid graph", std::move(report));
}

}  // namespace erst

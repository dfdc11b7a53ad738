#pragma once

#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace erst {

/// Node identifier. Positive ids come from input documents; negative ids are
/// reserved for nodes synthesized by structural transformations.
using NodeId = int;

struct Token {
  int index = 0;  // 1-based, document-wide
  std::string form;
};

struct Edu {
  NodeId id = 0;
  int first_token = 0;  // inclusive
  int last_token = 0;   // inclusive
};

enum class NodeKind { Edu, Span, Multinuc };

enum class RelationKind { Satellite, Multinuclear };

struct RelationLabel {
  std::string name;
  RelationKind kind = RelationKind::Satellite;

  bool is_pseudo() const { return name == "same-unit"; }
};

/// Coarse class of a relation name: the prefix before the first hyphen
/// ("adversative-concession" -> "adversative").
std::string coarse_class(const std::string& relation_name);

enum class NuclearityRole { Nucleus, Satellite, MultinucChild };

/// One primary attachment: the outgoing edge of a non-root node.
/// A relation is absent exactly for span children carrying nucleus status.
struct Attachment {
  NodeId child = 0;
  NodeId parent = 0;
  std::optional<std::string> relation;
  NuclearityRole role = NuclearityRole::Nucleus;
};

struct SecondaryEdge {
  NodeId source = 0;
  NodeId target = 0;
  std::string relation;

  friend auto operator<=>(const SecondaryEdge&, const SecondaryEdge&) = default;
};

enum class SignalMajor {
  Dm,
  Orphan,
  Graphical,
  Lexical,
  Morphological,
  Numerical,
  Reference,
  Semantic,
  Syntactic,
};

const char* to_string(SignalMajor major);
std::optional<SignalMajor> signal_major_from_string(const std::string& text);

struct SignalType {
  SignalMajor major = SignalMajor::Dm;
  std::string subtype;

  std::string combined() const { return std::string(to_string(major)) + ":" + subtype; }
  friend auto operator<=>(const SignalType&, const SignalType&) = default;
};

/// Reference from a signal to the edge it supports. Primary edges are
/// identified by the child node whose outgoing attachment they are; secondary
/// edges by their (source, target) endpoints.
struct SignalEdgeRef {
  bool is_secondary = false;
  NodeId child = 0;   // primary only
  NodeId source = 0;  // secondary only
  NodeId target = 0;  // secondary only

  static SignalEdgeRef primary(NodeId child) {
    SignalEdgeRef r;
    r.child = child;
    return r;
  }
  static SignalEdgeRef secondary(NodeId source, NodeId target) {
    SignalEdgeRef r;
    r.is_secondary = true;
    r.source = source;
    r.target = target;
    return r;
  }
  friend auto operator<=>(const SignalEdgeRef&, const SignalEdgeRef&) = default;
};

struct Signal {
  SignalEdgeRef edge;
  SignalType type;
  std::vector<int> tokens;  // sorted, unique; may be empty (layout signals)

  friend auto operator<=>(const Signal&, const Signal&) = default;
};

struct Node {
  NodeId id = 0;
  NodeKind kind = NodeKind::Edu;
};

/// One document's discourse graph: tokens, EDUs, the primary constituent
/// tree (attachment form), secondary edges, the label and signal
/// vocabularies, and the signals. Immutable by convention after
/// construction; all operations over it are pure functions.
struct DocumentGraph {
  std::string doc_id;
  std::vector<Token> tokens;
  std::vector<Edu> edus;   // ascending id = text order
  std::vector<Node> nodes;
  std::vector<Attachment> attachments;
  std::vector<SecondaryEdge> secondary;
  std::vector<RelationLabel> inventory;
  std::vector<SignalType> signal_vocabulary;
  std::vector<Signal> signals;
};

class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& message) : std::runtime_error(message) {}
};

/// Contiguous run of EDUs, by 0-based text-order position (inclusive).
struct EduSpan {
  int first = 0;
  int last = -1;  // first > last encodes the empty span

  bool empty() const { return first > last; }
  int size() const { return empty() ? 0 : last - first + 1; }
  friend auto operator<=>(const EduSpan&, const EduSpan&) = default;
};

/// Derived lookup structures over one graph. Building is linear in the
/// graph size; all heavier operations build one index up front.
class GraphIndex {
 public:
  static GraphIndex build(const DocumentGraph& graph);

  const DocumentGraph& graph() const { return *graph_; }

  bool has_node(NodeId id) const { return node_pos_.count(id) != 0; }
  const Node& node(NodeId id) const;
  bool is_edu(NodeId id) const;
  const Attachment* attachment_of(NodeId child) const;  // null for the root
  const std::vector<const Attachment*>& children_of(NodeId parent) const;
  NodeId root() const { return root_; }  // 0 when the graph has no unique root

  int edu_count() const { return static_cast<int>(graph_->edus.size()); }
  /// 0-based text-order position of an EDU node, -1 for non-EDUs.
  int edu_position(NodeId id) const;
  NodeId edu_at_position(int pos) const { return graph_->edus[pos].id; }
  /// EDU containing a 1-based token index, or 0.
  NodeId edu_of_token(int token_index) const;

  /// Sorted EDU positions of all terminal descendants (the node itself for
  /// an EDU). Empty for unknown ids.
  const std::vector<int>& yield_positions(NodeId id) const;
  /// Yield as a span; only meaningful when the yield is contiguous.
  EduSpan yield_span(NodeId id) const;
  bool yield_contiguous(NodeId id) const;

  bool has_secondary(NodeId source, NodeId target) const;
  const SecondaryEdge* secondary_edge(NodeId source, NodeId target) const;

 private:
  const DocumentGraph* graph_ = nullptr;
  std::map<NodeId, std::size_t> node_pos_;
  std::map<NodeId, const Attachment*> attachment_;
  std::map<NodeId, std::vector<const Attachment*>> children_;
  std::map<NodeId, std::vector<int>> yields_;
  std::map<NodeId, int> edu_position_;
  std::vector<NodeId> token_edu_;  // token index-1 -> EDU id
  std::map<std::pair<NodeId, NodeId>, const SecondaryEdge*> secondary_;
  std::vector<const Attachment*> no_children_;
  std::vector<int> no_yield_;
  NodeId root_ = 0;
};

/// Ordered EDU ids of all terminal descendants of a node.
/// Throws erst::Error for an unknown node id.
std::vector<NodeId> node_yield(const DocumentGraph& graph, NodeId node);

/// Lookup in the graph's relation inventory; null when absent.
const RelationLabel* find_relation(const DocumentGraph& graph, const std::string& name);

bool vocabulary_contains(const DocumentGraph& graph, const SignalType& type);

/// GUM-style relation inventory (Appendix-style defaults) and the closed
/// signal vocabulary shipped with the toolkit.
std::vector<RelationLabel> default_relation_inventory();
std::vector<SignalType> default_signal_vocabulary();

}  // namespace erst

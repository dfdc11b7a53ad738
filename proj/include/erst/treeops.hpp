#pragma once

#include <string>
#include <vector>

#include "erst/model.hpp"
#include "erst/validate.hpp"

namespace erst {

enum class Nuclearity { NS, SN, NN };

const char* to_string(Nuclearity n);

/// One binarized parsing decision: two adjacent constituent yields joined
/// with a nuclearity and a relation label. `left`/`right` are in text order,
/// so together they form the decision's unordered span pair.
struct Decision {
  EduSpan left;
  EduSpan right;
  Nuclearity nuclearity = Nuclearity::NN;
  std::string label;

  friend auto operator<=>(const Decision&, const Decision&) = default;
};

struct DecisionSequence {
  int edu_count = 0;
  std::vector<Decision> decisions;
};

enum class Direction { SourceBeforeTarget, TargetBeforeSource };

const char* to_string(Direction d);

/// Decision-like record for one secondary edge. Yields are each contiguous
/// but need not be adjacent or disjoint.
struct SecondaryDecision {
  EduSpan source;
  EduSpan target;
  Direction direction = Direction::SourceBeforeTarget;
  std::string label;

  friend auto operator<=>(const SecondaryDecision&, const SecondaryDecision&) = default;
};

/// Chomsky-normal-form conversion of the primary tree. N-ary multinuclear
/// nodes become right-branching chains; stacked satellites nest
/// outermost-first by attachment order. Synthesized nodes receive fresh
/// negative ids so original ids survive the round trip. Secondary edges and
/// signals are carried over unchanged (all original nodes survive).
///
/// Satellite ties are accepted and normalized into nested spans; any other
/// validation error is rejected with the report attached.
DocumentGraph binarize(const DocumentGraph& graph);

/// Inverse of binarize: collapses the synthesized (negative-id) chain and
/// wrapper nodes back into n-ary attachments. debinarize(binarize(g)) is
/// isomorphic to g. Throws on non-binary input and on secondary edges or
/// signals anchored to a node the collapse eliminates.
DocumentGraph debinarize(const DocumentGraph& graph);

/// One decision per non-terminal of a binarized graph, in post order.
/// Throws on non-binary input.
DecisionSequence extract_decisions(const DocumentGraph& graph);

/// One record per secondary edge; direction follows the text order of the
/// endpoint yields.
std::vector<SecondaryDecision> extract_secondary_decisions(const DocumentGraph& graph);

/// Structural equality up to attachment order: same nodes, attachments,
/// EDUs, tokens, secondary edges and signals.
bool graphs_isomorphic(const DocumentGraph& a, const DocumentGraph& b);

}  // namespace erst

#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "erst/model.hpp"

namespace erst {

struct DMLexiconEntry {
  std::vector<std::string> part1;  // match forms; lowercased unless case_sensitive
  std::vector<std::string> part2;  // second part of a discontinuous entry
  bool discontinuous = false;
  bool case_sensitive = false;
  std::string surface;  // canonical form, parts joined by one space

  int total_tokens() const { return static_cast<int>(part1.size() + part2.size()); }
};

struct DMLexicon {
  std::vector<DMLexiconEntry> entries;
};

/// Connective surface form -> compatible relation labels or coarse classes.
struct DMRelationMap {
  std::map<std::string, std::set<std::string>> classes;

  const std::set<std::string>* lookup(const std::string& surface) const {
    auto it = classes.find(surface);
    return it == classes.end() ? nullptr : &it->second;
  }
};

bool relation_compatible(const std::set<std::string>& wanted, const std::string& relation);

enum class DMStatus { Unassigned, Attached, Orphan };

struct DMOccurrence {
  std::vector<int> tokens;  // sorted; one contiguous run, or two for discontinuous DMs
  std::string surface;
  DMStatus status = DMStatus::Unassigned;
  std::optional<NodeId> attached_child;      // child of the chosen primary edge
  std::optional<SignalEdgeRef> orphan_edge;  // compatible secondary edge, when one exists
};

/// Greedy longest-match scan over the document tokens; matches never
/// overlap. Discontinuous entries require both parts inside one sentence
/// when boundaries are given, else inside a window of three EDUs.
std::vector<DMOccurrence> detect_dms(
    const DocumentGraph& graph, const DMLexicon& lexicon,
    const std::vector<std::pair<int, int>>* sentence_token_ranges = nullptr);

struct AlignOptions {
  /// Also consider incoming relations (attachments of a chain node's
  /// children) when no outgoing relation is compatible. Off by default:
  /// outgoing-only is the precision-oriented behavior.
  bool incoming_fallback = false;
};

struct AlignResult {
  std::vector<DMOccurrence> occurrences;
  std::vector<Signal> signals;  // dm:dm for attached, orphan:orphan when a secondary edge exists
};

/// Walks each DM's chain from its host EDU upward, attaching to the first
/// outgoing relation compatible with the map entry, else flags the DM as an
/// orphan. Orphans are tied to an existing compatible secondary edge when
/// one covers the DM's EDU; otherwise they stay unreferenced.
AlignResult associate(const DocumentGraph& graph, std::vector<DMOccurrence> dms,
                      const DMRelationMap& map, const AlignOptions& options = {});

struct SecedgeCandidate {
  SecondaryEdge edge;
  std::size_t orphan_index;  // index into the occurrence list passed in
};

/// Deterministic, unranked candidate secondary edges licensed by orphan
/// DMs: pairs drawn from each orphan's ancestor chain and their siblings
/// plus adjacent EDUs, for every compatible relation label. Candidates
/// violating the structural secondary-edge constraints are filtered out.
std::vector<SecedgeCandidate> enumerate_secedge_candidates(const DocumentGraph& graph,
                                                           const std::vector<DMOccurrence>& dms,
                                                           const DMRelationMap& map);

}  // namespace erst

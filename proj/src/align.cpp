#include "erst/align.hpp"

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

bool forms_match(const std::vector<std::string>& tokens_lower,
                 const std::vector<std::string>& tokens_exact,
                 const std::vector<std::string>& part, bool case_sensitive, int start,
                 const std::vector<bool>& consumed) {
  if (start + part.size() > tokens_lower.size()) return false;
  for (std::size_t i = 0; i < part.size(); ++i) {
    int pos = start + static_cast<int>(i);
    if (consumed[pos]) return false;
    const std::string& form = case_sensitive ? tokens_exact[pos] : tokens_lower[pos];
    if (form != part[i]) return false;
  }
  return true;
}

}  // namespace

bool relation_compatible(const std::set<std::string>& wanted, const std::string& relation) {
  return wanted.count(relation) || wanted.count(coarse_class(relation));
}

std::vector<DMOccurrence> detect_dms(
    const DocumentGraph& graph, const DMLexicon& lexicon,
    const std::vector<std::pair<int, int>>* sentence_token_ranges) {
  GraphIndex idx = GraphIndex::build(graph);
  const int n = static_cast<int>(graph.tokens.size());
  std::vector<std::string> exact(n), folded(n);
  for (int i = 0; i < n; ++i) {
    exact[i] = graph.tokens[i].form;
    folded[i] = lower(exact[i]);
  }
  std::vector<int> sentence_of(n, -1);
  if (sentence_token_ranges)
    for (std::size_t s = 0; s < sentence_token_ranges->size(); ++s)
      for (int t = (*sentence_token_ranges)[s].first; t <= (*sentence_token_ranges)[s].second; ++t)
        if (t >= 1 && t <= n) sentence_of[t - 1] = static_cast<int>(s);

  auto in_window = [&](int first_token, int second_token) {
    if (sentence_token_ranges)
      return sentence_of[first_token - 1] >= 0 &&
             sentence_of[first_token - 1] == sentence_of[second_token - 1];
    int e1 = idx.edu_position(idx.edu_of_token(first_token));
    int e2 = idx.edu_position(idx.edu_of_token(second_token));
    return e1 >= 0 && e2 >= 0 && e2 - e1 <= 2;  // fixed window of three EDUs
  };

  std::vector<bool> consumed(n, false);
  std::vector<DMOccurrence> out;
  for (int pos = 0; pos < n; ++pos) {
    if (consumed[pos]) continue;
    const DMLexiconEntry* best = nullptr;
    int best_total = 0, best_gap = 0, best_second = -1;
    bool best_discont = false;
    for (const auto& entry : lexicon.entries) {
      if (!forms_match(folded, exact, entry.part1, entry.case_sensitive, pos, consumed)) continue;
      if (!entry.discontinuous) {
        int total = entry.total_tokens();
        if (total > best_total || (total == best_total && best_discont)) {
          best = &entry;
          best_total = total;
          best_discont = false;
          best_second = -1;
        }
        continue;
      }
      // Discontinuous: the second part may follow at any gap >= 0 inside the
      // window; prefer the nearest placement.
      int p1_end = pos + static_cast<int>(entry.part1.size());
      for (int second = p1_end; second + entry.part2.size() <= static_cast<std::size_t>(n);
           ++second) {
        if (!in_window(pos + 1, second + 1)) break;
        if (!forms_match(folded, exact, entry.part2, entry.case_sensitive, second, consumed))
          continue;
        int total = entry.total_tokens();
        int gap = second - p1_end;
        bool better = total > best_total ||
                      (total == best_total && best_discont && gap < best_gap);
        if (better) {
          best = &entry;
          best_total = total;
          best_discont = true;
          best_gap = gap;
          best_second = second;
        }
        break;  // nearest placement for this entry
      }
    }
    if (!best) continue;
    DMOccurrence occ;
    occ.surface = best->surface;
    for (std::size_t i = 0; i < best->part1.size(); ++i)
      occ.tokens.push_back(pos + static_cast<int>(i) + 1);
    if (best_second >= 0)
      for (std::size_t i = 0; i < best->part2.size(); ++i)
        occ.tokens.push_back(best_second + static_cast<int>(i) + 1);
    for (int t : occ.tokens) consumed[t - 1] = true;
    out.push_back(std::move(occ));
  }
  return out;
}

namespace {

// The chain node's candidate relations at one level: its own outgoing
// attachment first, then (with the fallback enabled) the attachments of its
// children in order.
std::vector<const Attachment*> level_candidates(const GraphIndex& idx, NodeId node,
                                                bool incoming) {
  std::vector<const Attachment*> out;
  if (const Attachment* att = idx.attachment_of(node)) out.push_back(att);
  if (incoming)
    for (const Attachment* att : idx.children_of(node)) out.push_back(att);
  return out;
}

}  // namespace

AlignResult associate(const DocumentGraph& graph, std::vector<DMOccurrence> dms,
                      const DMRelationMap& map, const AlignOptions& options) {
  GraphIndex idx = GraphIndex::build(graph);
  AlignResult result;

  std::sort(dms.begin(), dms.end(), [](const DMOccurrence& a, const DMOccurrence& b) {
    return a.tokens.front() < b.tokens.front();
  });
  // Tie-breaking state: identical surfaces in one EDU skip edges already
  // chosen by an earlier occurrence.
  std::map<std::pair<NodeId, std::string>, std::set<NodeId>> taken;

  for (DMOccurrence& occ : dms) {
    NodeId host = idx.edu_of_token(occ.tokens.front());
    if (host == 0)
      throw Error("associate: DM token " + std::to_string(occ.tokens.front()) +
                  " lies outside every EDU");
    const std::set<std::string>* wanted = map.lookup(lower(occ.surface));
    std::set<NodeId>& excluded = taken[{host, lower(occ.surface)}];

    const Attachment* chosen = nullptr;
    if (wanted) {
      std::set<NodeId> seen;
      NodeId cur = host;
      while (cur != 0 && seen.insert(cur).second) {
        for (const Attachment* att : level_candidates(idx, cur, options.incoming_fallback)) {
          if (!att->relation || excluded.count(att->child)) continue;
          if (relation_compatible(*wanted, *att->relation)) {
            chosen = att;
            break;
          }
        }
        if (chosen) break;
        const Attachment* up = idx.attachment_of(cur);
        cur = up ? up->parent : 0;
      }
    }

    if (chosen) {
      occ.status = DMStatus::Attached;
      occ.attached_child = chosen->child;
      excluded.insert(chosen->child);
      Signal signal;
      signal.edge = SignalEdgeRef::primary(chosen->child);
      signal.type = {SignalMajor::Dm, "dm"};
      signal.tokens = occ.tokens;
      result.signals.push_back(std::move(signal));
    } else {
      occ.status = DMStatus::Orphan;
      // An orphan references a compatible secondary edge when one covers its
      // EDU; prefer the tightest source yield.
      const SecondaryEdge* best = nullptr;
      if (wanted) {
        int host_pos = idx.edu_position(host);
        for (const auto& edge : graph.secondary) {
          if (!idx.has_node(edge.source) || !idx.has_node(edge.target)) continue;
          if (!relation_compatible(*wanted, edge.relation)) continue;
          EduSpan src = idx.yield_span(edge.source);
          if (src.empty() || host_pos < src.first || host_pos > src.last) continue;
          if (!best) {
            best = &edge;
            continue;
          }
          EduSpan bsrc = idx.yield_span(best->source);
          EduSpan btgt = idx.yield_span(best->target);
          EduSpan tgt = idx.yield_span(edge.target);
          auto key = std::tuple(src.size(), tgt.size(), src.first, tgt.first);
          auto bkey = std::tuple(bsrc.size(), btgt.size(), bsrc.first, btgt.first);
          if (key < bkey) best = &edge;
        }
      }
      if (best) {
        occ.orphan_edge = SignalEdgeRef::secondary(best->source, best->target);
        Signal signal;
        signal.edge = *occ.orphan_edge;
        signal.type = {SignalMajor::Orphan, "orphan"};
        signal.tokens = occ.tokens;
        result.signals.push_back(std::move(signal));
      }
    }
  }
  result.occurrences = std::move(dms);
  return result;
}

std::vector<SecedgeCandidate> enumerate_secedge_candidates(const DocumentGraph& graph,
                                                           const std::vector<DMOccurrence>& dms,
                                                           const DMRelationMap& map) {
  GraphIndex idx = GraphIndex::build(graph);

  std::vector<SecedgeCandidate> out;
  std::set<std::tuple<NodeId, NodeId, std::string>> emitted;
  auto emit = [&](NodeId source, NodeId target, const std::string& label, std::size_t orphan) {
    if (source == target) return;                    // no self loops
    if (idx.has_secondary(source, target)) return;   // no duplicate directed paths
    if (!idx.has_node(source) || !idx.has_node(target)) return;
    if (!emitted.insert({source, target, label}).second) return;
    out.push_back({SecondaryEdge{source, target, label}, orphan});
  };

  for (std::size_t i = 0; i < dms.size(); ++i) {
    const DMOccurrence& occ = dms[i];
    if (occ.status != DMStatus::Orphan) continue;
    const std::set<std::string>* wanted = map.lookup(occ.surface);
    if (!wanted) {
      std::string folded;
      for (char c : occ.surface) folded += (c >= 'A' && c <= 'Z') ? char(c + 32) : c;
      wanted = map.lookup(folded);
    }
    if (!wanted) continue;
    std::vector<std::string> labels;
    for (const auto& rel : graph.inventory)
      if (relation_compatible(*wanted, rel.name)) labels.push_back(rel.name);
    if (labels.empty()) continue;

    NodeId host = idx.edu_of_token(occ.tokens.front());
    if (host == 0) continue;

    // Pairs drawn from the ancestor chain: each chain node with every
    // sibling, plus the host EDU with every sibling of its ancestors.
    std::vector<std::pair<NodeId, NodeId>> pairs;
    std::set<NodeId> seen;
    NodeId cur = host;
    while (cur != 0 && seen.insert(cur).second) {
      const Attachment* up = idx.attachment_of(cur);
      if (!up) break;
      for (const Attachment* sib : idx.children_of(up->parent)) {
        if (sib->child == cur) continue;
        pairs.emplace_back(host, sib->child);
        pairs.emplace_back(sib->child, host);
        pairs.emplace_back(cur, sib->child);
        pairs.emplace_back(sib->child, cur);
      }
      cur = up->parent;
    }
    // Adjacent EDUs, mirroring the adjacent-sentence clause.
    int host_pos = idx.edu_position(host);
    if (host_pos > 0) {
      NodeId prev = idx.edu_at_position(host_pos - 1);
      pairs.emplace_back(host, prev);
      pairs.emplace_back(prev, host);
    }
    if (host_pos + 1 < idx.edu_count()) {
      NodeId next = idx.edu_at_position(host_pos + 1);
      pairs.emplace_back(host, next);
      pairs.emplace_back(next, host);
    }

    for (const auto& [source, target] : pairs)
      for (const std::string& label : labels) emit(source, target, label, i);
  }
  return out;
}

}  // namespace erst

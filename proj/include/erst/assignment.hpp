#pragma once

#include <cstdint>
#include <vector>

namespace erst {

struct AssignmentResult {
  long long total = 0;
  std::vector<int> match_of_row;  // column index per row, -1 when unmatched
};

/// Maximum-weight bipartite assignment over a rectangular matrix of
/// non-negative weights (rows x columns, each side matched at most once).
/// Hungarian algorithm on the zero-padded square matrix, O(n^3).
AssignmentResult max_weight_assignment(const std::vector<std::vector<long long>>& weights);

}  // namespace erst

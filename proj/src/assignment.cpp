#include "erst/assignment.hpp"

#include <algorithm>
#include <limits>

namespace erst {

AssignmentResult max_weight_assignment(const std::vector<std::vector<long long>>& weights) {
  AssignmentResult result;
  const int rows = static_cast<int>(weights.size());
  const int cols = rows ? static_cast<int>(weights[0].size()) : 0;
  result.match_of_row.assign(rows, -1);
  if (rows == 0 || cols == 0) return result;

  // Pad to square and minimize negated weights with the potentials method.
  const int n = std::max(rows, cols);
  const long long kInf = std::numeric_limits<long long>::max() / 4;
  std::vector<std::vector<long long>> cost(n + 1, std::vector<long long>(n + 1, 0));
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) cost[i + 1][j + 1] = -weights[i][j];

  std::vector<long long> u(n + 1, 0), v(n + 1, 0);
  std::vector<int> p(n + 1, 0), way(n + 1, 0);
  for (int i = 1; i <= n; ++i) {
    p[0] = i;
    int j0 = 0;
    std::vector<long long> minv(n + 1, kInf);
    std::vector<bool> used(n + 1, false);
    do {
      used[j0] = true;
      int i0 = p[j0], j1 = 0;
      long long delta = kInf;
      for (int j = 1; j <= n; ++j) {
        if (used[j]) continue;
        long long cur = cost[i0][j] - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= n; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      int j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0);
  }

  for (int j = 1; j <= n; ++j) {
    int i = p[j];
    if (i >= 1 && i <= rows && j <= cols && weights[i - 1][j - 1] > 0) {
      result.match_of_row[i - 1] = j - 1;
      result.total += weights[i - 1][j - 1];
    }
  }
  return result;
}

}  // namespace erst

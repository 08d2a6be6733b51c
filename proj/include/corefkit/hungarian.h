// Copyright 2026 The corefkit Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Kuhn-Munkres assignment with row/column potentials, O(n^2 m).

#ifndef COREFKIT_HUNGARIAN_H_
#define COREFKIT_HUNGARIAN_H_

#include <algorithm>
#include <cstddef>
#include <limits>
#include <vector>

namespace corefkit {

// Assigns every row of a rows x cols weight matrix to a distinct column (or
// -1 when rows > cols) maximizing the total weight. Works for integral and
// floating weights.
template <typename T>
std::vector<int> MaxWeightAssignment(const std::vector<std::vector<T>> &weight) {
  const int rows = static_cast<int>(weight.size());
  if (rows == 0) return {};
  const int cols = static_cast<int>(weight[0].size());
  // Square, zero-padded, negated: minimizing cost maximizes weight.
  const int n = std::max(rows, cols);
  auto cost = [&](int i, int j) -> T {
    if (i >= rows || j >= cols) return T(0);
    return -weight[i][j];
  };
  const T inf = std::numeric_limits<T>::max() / 4;
  std::vector<T> u(n + 1, T(0)), v(n + 1, T(0));
  std::vector<int> p(n + 1, 0), way(n + 1, 0);
  for (int i = 1; i <= n; ++i) {
    p[0] = i;
    int j0 = 0;
    std::vector<T> minv(n + 1, inf);
    std::vector<char> used(n + 1, false);
    do {
      used[j0] = true;
      const int i0 = p[j0];
      T delta = inf;
      int j1 = 0;
      for (int j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const T cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
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
      const int j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  std::vector<int> assignment(rows, -1);
  for (int j = 1; j <= n; ++j) {
    if (p[j] >= 1 && p[j] <= rows && j <= cols) assignment[p[j] - 1] = j - 1;
  }
  return assignment;
}

template <typename T>
T AssignmentWeight(const std::vector<std::vector<T>> &weight,
                   const std::vector<int> &assignment) {
  T total = T(0);
  for (std::size_t r = 0; r < assignment.size(); ++r) {
    if (assignment[r] >= 0) total += weight[r][assignment[r]];
  }
  return total;
}

// The maximum-weight assignment that is lexicographically first when rows
// are taken in order and each row prefers lower columns to higher ones and
// any column to none. Zero weights are treated as missing edges. Needs exact
// arithmetic, so T should be integral.
template <typename T>
std::vector<int> LexFirstMaxWeightAssignment(
    std::vector<std::vector<T>> weight) {
  const int rows = static_cast<int>(weight.size());
  if (rows == 0) return {};
  const int cols = static_cast<int>(weight[0].size());
  const T best = AssignmentWeight(weight, MaxWeightAssignment(weight));
  std::vector<int> out(rows, -1);
  for (int r = 0; r < rows; ++r) {
    bool fixed = false;
    for (int c = 0; c < cols && !fixed; ++c) {
      if (weight[r][c] == T(0)) continue;
      std::vector<std::vector<T>> trial = weight;
      for (int j = 0; j < cols; ++j) {
        if (j != c) trial[r][j] = T(0);
      }
      for (int i = 0; i < rows; ++i) {
        if (i != r) trial[i][c] = T(0);
      }
      if (AssignmentWeight(trial, MaxWeightAssignment(trial)) == best) {
        weight = std::move(trial);
        out[r] = c;
        fixed = true;
      }
    }
    if (!fixed) std::fill(weight[r].begin(), weight[r].end(), T(0));
  }
  return out;
}

}  // namespace corefkit

#endif  // COREFKIT_HUNGARIAN_H_

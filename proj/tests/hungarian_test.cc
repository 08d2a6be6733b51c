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


#include "corefkit/hungarian.h"

#include <cstdint>
#include <random>
#include <vector>

#include <gtest/gtest.h>

namespace corefkit {
namespace {

using Matrix = std::vector<std::vector<std::int64_t>>;

// Enumerates partial assignments over nonzero edges in lexicographic order
// (each row tries columns in increasing order, then none) and returns the
// first one of maximum weight.
struct BruteForce {
  const Matrix &w;
  std::vector<int> current, best;
  std::vector<char> used;
  std::int64_t best_weight = -1;

  explicit BruteForce(const Matrix &weight)
      : w(weight), current(weight.size(), -1),
        used(weight.empty() ? 0 : weight[0].size(), 0) {
    Search(0, 0);
  }

  void Search(std::size_t row, std::int64_t total) {
    if (row == w.size()) {
      if (total > best_weight) {
        best_weight = total;
        best = current;
      }
      return;
    }
    for (std::size_t c = 0; c < used.size(); ++c) {
      if (used[c] || w[row][c] == 0) continue;
      used[c] = 1;
      current[row] = static_cast<int>(c);
      Search(row + 1, total + w[row][c]);
      used[c] = 0;
    }
    current[row] = -1;
    Search(row + 1, total);
  }
};

Matrix RandomMatrix(std::mt19937_64 &rng, int rows, int cols, int max_w,
                    double density) {
  std::uniform_real_distribution<double> unit(0, 1);
  Matrix m(rows, std::vector<std::int64_t>(cols, 0));
  for (auto &row : m) {
    for (auto &v : row) {
      if (unit(rng) < density) v = 1 + static_cast<int>(rng() % max_w);
    }
  }
  return m;
}

TEST(HungarianTest, SquareExample) {
  const Matrix w = {{4, 1, 3}, {2, 0, 5}, {3, 2, 2}};
  const std::vector<int> a = MaxWeightAssignment(w);
  EXPECT_EQ(AssignmentWeight(w, a), 11);
}

TEST(HungarianTest, MoreRowsThanColumns) {
  const Matrix w = {{1}, {5}, {2}};
  const std::vector<int> a = MaxWeightAssignment(w);
  EXPECT_EQ(a, (std::vector<int>{-1, 0, -1}));
}

TEST(HungarianTest, FloatingWeights) {
  const std::vector<std::vector<double>> w = {{0.5, 0.25}, {0.75, 0.125}};
  EXPECT_DOUBLE_EQ(AssignmentWeight(w, MaxWeightAssignment(w)), 1.0);
}

TEST(HungarianTest, EmptyMatrix) {
  EXPECT_TRUE(MaxWeightAssignment(Matrix{}).empty());
  EXPECT_TRUE(LexFirstMaxWeightAssignment(Matrix{}).empty());
}

TEST(HungarianTest, LexFirstPrefersEarlierColumns) {
  // Both diagonals are optimal; the first row takes column 0.
  const Matrix w = {{1, 1}, {1, 1}};
  EXPECT_EQ(LexFirstMaxWeightAssignment(w), (std::vector<int>{0, 1}));
  // Zero weights are not edges.
  const Matrix z = {{0, 0}, {0, 3}};
  EXPECT_EQ(LexFirstMaxWeightAssignment(z), (std::vector<int>{-1, 1}));
}

TEST(HungarianTest, MatchesBruteForce) {
  std::mt19937_64 rng(7);
  for (int c = 0; c < 500; ++c) {
    const int rows = 1 + static_cast<int>(rng() % 5);
    const int cols = 1 + static_cast<int>(rng() % 5);
    const Matrix w = RandomMatrix(rng, rows, cols, 1 + c % 6, 0.6);
    const BruteForce oracle(w);
    EXPECT_EQ(AssignmentWeight(w, MaxWeightAssignment(w)),
              oracle.best_weight);
    EXPECT_EQ(LexFirstMaxWeightAssignment(w), oracle.best);
  }
}

}  // namespace
}  // namespace corefkit

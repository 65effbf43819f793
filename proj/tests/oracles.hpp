// Copyright 2026 The GridPulse Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Independent reference computations for the test suites. Nothing here calls
// into the code paths it checks.
#ifndef GRIDPULSE_TESTS_ORACLES_HPP
#define GRIDPULSE_TESTS_ORACLES_HPP

#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <numbers>
#include <optional>
#include <vector>

#include "gridpulse/model.hpp"

namespace oracle {

// O(N^2) DFT amplitudes, bins 1..N/2, after mean removal; long double sums.
inline std::vector<double> naive_dft_amplitudes(const std::vector<double>& x) {
  const std::size_t n = x.size();
  long double mean = 0.0L;
  for (double v : x) mean += v;
  mean /= static_cast<long double>(n);
  std::vector<double> out;
  for (std::size_t k = 1; k <= n / 2; ++k) {
    long double re = 0.0L, im = 0.0L;
    for (std::size_t t = 0; t < n; ++t) {
      long double a = -2.0L * std::numbers::pi_v<long double> *
                      static_cast<long double>((k * t) % n) / static_cast<long double>(n);
      re += (x[t] - mean) * std::cos(a);
      im += (x[t] - mean) * std::sin(a);
    }
    out.push_back(static_cast<double>(2.0L * std::sqrt(re * re + im * im) / static_cast<long double>(n)));
  }
  return out;
}

// All-pairs shortest hops by Floyd-Warshall over the bus graph.
inline std::vector<std::vector<int>> floyd_hops(const gridpulse::GridTopology& t) {
  const auto n = t.buses().size();
  const int inf = std::numeric_limits<int>::max() / 4;
  std::vector<std::vector<int>> d(n, std::vector<int>(n, inf));
  for (std::size_t i = 0; i < n; ++i) d[i][i] = 0;
  for (const auto& e : t.edges()) {
    auto a = t.bus_index(e.bus_a), b = t.bus_index(e.bus_b);
    d[a][b] = d[b][a] = std::min(d[a][b], 1);
  }
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) d[i][j] = std::min(d[i][j], d[i][k] + d[k][j]);
  for (auto& row : d)
    for (auto& v : row)
      if (v >= inf) v = -1;
  return d;
}

inline double dist(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(s);
}

// Straightforward mean silhouette; nullopt unless 2 <= k <= n-1.
inline std::optional<double> silhouette(const std::vector<std::vector<double>>& pts,
                                        const std::vector<int>& labels) {
  int k = 0;
  for (int l : labels) k = std::max(k, l + 1);
  const int n = static_cast<int>(pts.size());
  if (k < 2 || k > n - 1) return std::nullopt;
  double total = 0.0;
  for (int i = 0; i < n; ++i) {
    double a_sum = 0.0;
    int a_n = 0;
    for (int j = 0; j < n; ++j)
      if (j != i && labels[j] == labels[i]) {
        a_sum += dist(pts[i], pts[j]);
        ++a_n;
      }
    if (a_n == 0) continue;  // singleton scores 0
    double a = a_sum / a_n;
    double b = std::numeric_limits<double>::infinity();
    for (int c = 0; c < k; ++c) {
      if (c == labels[i]) continue;
      double s = 0.0;
      int m = 0;
      for (int j = 0; j < n; ++j)
        if (labels[j] == c) {
          s += dist(pts[i], pts[j]);
          ++m;
        }
      if (m > 0) b = std::min(b, s / m);
    }
    double mx = std::max(a, b);
    total += mx > 0 ? (b - a) / mx : 0.0;
  }
  return total / n;
}

// Visits every partition of n items (restricted growth strings) with exactly k blocks.
inline void for_each_partition(int n, int k, const std::function<void(const std::vector<int>&)>& f) {
  std::vector<int> a(static_cast<std::size_t>(n), 0);
  std::function<void(int, int)> rec = [&](int i, int used) {
    if (i == n) {
      if (used == k) f(a);
      return;
    }
    if (used + (n - i) < k) return;
    for (int c = 0; c <= std::min(used, k - 1); ++c) {
      a[static_cast<std::size_t>(i)] = c;
      rec(i + 1, std::max(used, c + 1));
    }
  };
  rec(0, 0);
}

struct BestPartition {
  std::vector<int> labels;
  double score = -2.0;
  int k = 0;
};

// Highest-silhouette partition over k in [k_lo, k_hi].
inline BestPartition exhaustive_best_partition(const std::vector<std::vector<double>>& pts, int k_lo,
                                               int k_hi) {
  BestPartition best;
  for (int k = k_lo; k <= k_hi; ++k)
    for_each_partition(static_cast<int>(pts.size()), k, [&](const std::vector<int>& labels) {
      auto s = silhouette(pts, labels);
      if (s && *s > best.score + 1e-12) best = {labels, *s, k};
    });
  return best;
}

}  // namespace oracle

#endif  // GRIDPULSE_TESTS_ORACLES_HPP

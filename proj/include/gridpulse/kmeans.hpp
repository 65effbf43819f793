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

#ifndef GRIDPULSE_KMEANS_HPP
#define GRIDPULSE_KMEANS_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <vector>

#include "gridpulse/errors.hpp"

namespace gridpulse {

using FeatureMatrix = std::vector<std::vector<double>>;

inline double squared_distance(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return s;
}

inline double euclidean(const std::vector<double>& a, const std::vector<double>& b) {
  return std::sqrt(squared_distance(a, b));
}

struct KMeansResult {
  std::size_t k = 0;                // non-empty clusters
  std::vector<std::size_t> labels;  // relabelled by first appearance
  FeatureMatrix centroids;
  double inertia = 0.0;
};

struct KMeansOptions {
  std::uint64_t seed = 7;
  int restarts = 10;
  int max_iterations = 100;
};

namespace detail {

inline KMeansResult lloyd(const FeatureMatrix& pts, std::size_t k, std::size_t first,
                          int max_iterations) {
  const auto n = pts.size();
  // Farthest-point seeding.
  std::vector<std::size_t> seeds{first};
  std::vector<double> nearest(n, std::numeric_limits<double>::infinity());
  while (seeds.size() < k) {
    for (std::size_t i = 0; i < n; ++i)
      nearest[i] = std::min(nearest[i], squared_distance(pts[i], pts[seeds.back()]));
    std::size_t far = 0;
    for (std::size_t i = 1; i < n; ++i)
      if (nearest[i] > nearest[far]) far = i;
    seeds.push_back(far);
  }
  FeatureMatrix centers;
  for (auto s : seeds) centers.push_back(pts[s]);

  std::vector<std::size_t> labels(n, k);
  for (int iter = 0; iter < max_iterations; ++iter) {
    bool changed = false;
    for (std::size_t i = 0; i < n; ++i) {
      std::size_t best = 0;
      double bd = squared_distance(pts[i], centers[0]);
      for (std::size_t c = 1; c < k; ++c) {
        double d = squared_distance(pts[i], centers[c]);
        if (d < bd) {
          bd = d;
          best = c;
        }
      }
      // Ties keep the current label so repaired clusters stay populated.
      if (labels[i] < k && squared_distance(pts[i], centers[labels[i]]) == bd) best = labels[i];
      if (labels[i] != best) {
        labels[i] = best;
        changed = true;
      }
    }
    // Empty clusters take the point farthest from its centroid.
    for (std::size_t c = 0; c < k; ++c) {
      if (std::find(labels.begin(), labels.end(), c) != labels.end()) continue;
      std::size_t far = n;
      double fd = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        auto own = labels[i];
        if (std::count(labels.begin(), labels.end(), own) < 2) continue;
        double d = squared_distance(pts[i], centers[own]);
        if (far == n || d > fd) {
          fd = d;
          far = i;
        }
      }
      if (far == n) continue;  // every cluster is a singleton already
      labels[far] = c;
      changed = true;
    }
    for (std::size_t c = 0; c < k; ++c) {
      std::vector<double> sum(pts[0].size(), 0.0);
      std::size_t count = 0;
      for (std::size_t i = 0; i < n; ++i)
        if (labels[i] == c) {
          for (std::size_t d = 0; d < sum.size(); ++d) sum[d] += pts[i][d];
          ++count;
        }
      if (count == 0) continue;
      for (auto& v : sum) v /= static_cast<double>(count);
      centers[c] = std::move(sum);
    }
    if (!changed) break;
  }

  // Canonical labels: order of first appearance; drop empty clusters.
  std::vector<std::size_t> remap(k, k);
  KMeansResult out;
  out.labels.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (remap[labels[i]] == k) {
      remap[labels[i]] = out.k++;
      out.centroids.push_back(centers[labels[i]]);
    }
    out.labels[i] = remap[labels[i]];
    out.inertia += squared_distance(pts[i], out.centroids[out.labels[i]]);
  }
  return out;
}

}  // namespace detail

// Lloyd's algorithm with farthest-point seeding; the restart with the lowest
// inertia wins (earliest on ties). Deterministic for a fixed seed.
inline KMeansResult kmeans(const FeatureMatrix& points, std::size_t k,
                           const KMeansOptions& options = {}) {
  if (points.empty()) throw ArgumentError("kmeans: no points");
  if (k == 0 || k > points.size()) throw ArgumentError("kmeans: k must lie in 1..n");
  for (const auto& p : points)
    if (p.size() != points[0].size()) throw ArgumentError("kmeans: ragged feature matrix");
  std::mt19937_64 rng(options.seed);
  std::uniform_int_distribution<std::size_t> pick(0, points.size() - 1);
  std::optional<KMeansResult> best;
  for (int r = 0; r < std::max(1, options.restarts); ++r) {
    auto res = detail::lloyd(points, k, pick(rng), options.max_iterations);
    if (!best || res.inertia < best->inertia) best = std::move(res);
  }
  return *best;
}

// Per-point silhouette s(i) = (b - a) / max(a, b); singletons score 0.
inline std::vector<double> silhouette_samples(const FeatureMatrix& points,
                                              const std::vector<std::size_t>& labels) {
  const auto n = points.size();
  std::size_t k = 0;
  for (auto l : labels) k = std::max(k, l + 1);
  std::vector<double> s(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<double> sum(k, 0.0);
    std::vector<std::size_t> count(k, 0);
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      sum[labels[j]] += euclidean(points[i], points[j]);
      ++count[labels[j]];
    }
    if (count[labels[i]] == 0) continue;
    double a = sum[labels[i]] / static_cast<double>(count[labels[i]]);
    double b = std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < k; ++c)
      if (c != labels[i] && count[c] > 0) b = std::min(b, sum[c] / static_cast<double>(count[c]));
    if (!std::isfinite(b)) continue;
    double m = std::max(a, b);
    s[i] = m > 0.0 ? (b - a) / m : 0.0;
  }
  return s;
}

// Mean silhouette; defined only for 2 <= k <= n - 1.
inline std::optional<double> silhouette_score(const FeatureMatrix& points,
                                              const std::vector<std::size_t>& labels) {
  std::size_t k = 0;
  for (auto l : labels) k = std::max(k, l + 1);
  if (k < 2 || k >= points.size()) return std::nullopt;
  auto s = silhouette_samples(points, labels);
  double total = 0.0;
  for (double v : s) total += v;
  return total / static_cast<double>(s.size());
}

}  // namespace gridpulse

#endif  // GRIDPULSE_KMEANS_HPP

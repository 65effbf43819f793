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

#ifndef GRIDPULSE_EMBED_HPP
#define GRIDPULSE_EMBED_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <numbers>
#include <random>
#include <span>
#include <vector>

#include "gridpulse/errors.hpp"
#include "gridpulse/localize.hpp"
#include "gridpulse/model.hpp"

namespace gridpulse {

// Dense symmetric n x n matrix.
struct DistanceMatrix {
  std::size_t n = 0;
  std::vector<double> d;

  double operator()(std::size_t i, std::size_t j) const { return d[i * n + j]; }
  double& operator()(std::size_t i, std::size_t j) { return d[i * n + j]; }
};

inline DistanceMatrix distance_matrix(std::span<const std::vector<double>> spectra) {
  DistanceMatrix m{spectra.size(), std::vector<double>(spectra.size() * spectra.size(), 0.0)};
  for (const auto& s : spectra)
    if (s.size() != spectra[0].size()) throw ArgumentError("spectra differ in length");
  for (std::size_t i = 0; i < m.n; ++i)
    for (std::size_t j = i + 1; j < m.n; ++j) {
      double acc = 0.0;
      for (std::size_t k = 0; k < spectra[i].size(); ++k) {
        double t = spectra[i][k] - spectra[j][k];
        acc += t * t;
      }
      m(i, j) = m(j, i) = std::sqrt(acc);
    }
  return m;
}

// ---------------------------------------------------------------------------
// Exact t-SNE

struct TsneOptions {
  double perplexity = 10.0;
  int iterations = 1000;
  std::uint64_t seed = 42;
  double learning_rate = 100.0;
  double early_exaggeration = 4.0;
  int exaggeration_iterations = 100;
  double initial_momentum = 0.5;
  double final_momentum = 0.8;
  int momentum_switch = 250;
  double init_sigma = 1e-4;
  // Per-coordinate step gains: +gain_increase when the gradient flips sign
  // against the last update, x gain_decay otherwise.
  bool adaptive_gains = false;
  double gain_increase = 0.2;
  double gain_decay = 0.8;
  double min_gain = 0.01;
};

struct TsneResult {
  std::vector<Point2> points;  // centroid at the origin
  std::vector<double> kl;      // objective after each iteration (true P, no exaggeration)
};

namespace detail {

// Row-conditional affinities with per-row precision found by bisection so the
// row entropy matches log(perplexity).
inline std::vector<double> conditional_affinities(const DistanceMatrix& D, double perplexity) {
  const auto n = D.n;
  const double target = std::log(perplexity);
  std::vector<double> P(n * n, 0.0);
  std::vector<double> d2(n);
  for (std::size_t i = 0; i < n; ++i) {
    double dmin = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < n; ++j) {
      d2[j] = D(i, j) * D(i, j);
      if (j != i) dmin = std::min(dmin, d2[j]);
    }
    double beta = 1.0, lo = 0.0, hi = std::numeric_limits<double>::infinity();
    auto scale = [&]() {
      double mean = 0.0;
      for (std::size_t j = 0; j < n; ++j)
        if (j != i) mean += d2[j] - dmin;
      mean /= static_cast<double>(n - 1);
      return mean > 0.0 ? mean : 1.0;
    }();
    beta = 1.0 / scale;
    for (int it = 0; it < 200; ++it) {
      double sum = 0.0, hsum = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        if (j == i) continue;
        double p = std::exp(-(d2[j] - dmin) * beta);
        P[i * n + j] = p;
        sum += p;
        hsum += (d2[j] - dmin) * p;
      }
      double H = std::log(sum) + beta * hsum / sum;
      for (std::size_t j = 0; j < n; ++j) P[i * n + j] /= sum;
      double diff = H - target;
      if (std::abs(diff) < 1e-10) break;
      if (diff > 0) {  // too flat: sharpen
        lo = beta;
        beta = std::isinf(hi) ? beta * 2.0 : 0.5 * (beta + hi);
      } else {
        hi = beta;
        beta = 0.5 * (beta + lo);
      }
    }
  }
  return P;
}

inline double kl_divergence(std::span<const double> P, std::span<const double> Q) {
  double kl = 0.0;
  for (std::size_t i = 0; i < P.size(); ++i)
    if (P[i] > 0.0) kl += P[i] * std::log(P[i] / Q[i]);
  return kl;
}

// Student-t affinities Q for the layout Y (x0, y0, x1, y1, ...); `num` gets
// the unnormalized kernel values.
inline void student_q(std::span<const double> Y, std::size_t n, std::vector<double>& num,
                      std::vector<double>& Q) {
  double zsum = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) {
        num[i * n + j] = 0.0;
        continue;
      }
      double dx = Y[2 * i] - Y[2 * j], dy = Y[2 * i + 1] - Y[2 * j + 1];
      num[i * n + j] = 1.0 / (1.0 + dx * dx + dy * dy);
      zsum += num[i * n + j];
    }
  for (std::size_t k = 0; k < n * n; ++k) Q[k] = std::max(num[k] / zsum, 1e-12);
}

// dKL/dY with P scaled by `exaggeration`.
inline void kl_gradient(std::span<const double> P, std::span<const double> Y, std::size_t n,
                        double exaggeration, std::vector<double>& grad) {
  std::vector<double> num(n * n), Q(n * n);
  student_q(Y, n, num, Q);
  std::fill(grad.begin(), grad.end(), 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      double mult = 4.0 * (exaggeration * P[i * n + j] - Q[i * n + j]) * num[i * n + j];
      grad[2 * i] += mult * (Y[2 * i] - Y[2 * j]);
      grad[2 * i + 1] += mult * (Y[2 * i + 1] - Y[2 * j + 1]);
    }
}

// Symmetrized joint affinities p_ij = (p_j|i + p_i|j) / 2n.
inline std::vector<double> joint_affinities(const DistanceMatrix& D, double perplexity) {
  const auto n = D.n;
  auto cond = conditional_affinities(D, perplexity);
  std::vector<double> P(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (i != j)
        P[i * n + j] = std::max((cond[i * n + j] + cond[j * n + i]) / (2.0 * static_cast<double>(n)), 1e-12);
  return P;
}

}  // namespace detail

inline TsneResult tsne_embed(const DistanceMatrix& D, const TsneOptions& options = {}) {
  const auto n = D.n;
  if (n < 2) throw ArgumentError("t-SNE needs at least two points");
  if (!(options.perplexity > 0.0) || options.perplexity >= static_cast<double>(n))
    throw ArgumentError("perplexity must lie in (0, n); n = " + std::to_string(n));
  if (options.iterations < 0) throw ArgumentError("iterations must be >= 0");

  auto P = detail::joint_affinities(D, options.perplexity);

  std::mt19937_64 rng(options.seed);
  std::normal_distribution<double> init(0.0, options.init_sigma);
  std::vector<double> Y(2 * n), update(2 * n, 0.0), grad(2 * n), gains(2 * n, 1.0);
  for (auto& y : Y) y = init(rng);

  std::vector<double> num(n * n), Q(n * n);
  TsneResult out;
  out.kl.reserve(static_cast<std::size_t>(options.iterations));

  for (int iter = 0; iter < options.iterations; ++iter) {
    const double exaggeration = iter < options.exaggeration_iterations ? options.early_exaggeration : 1.0;
    const double momentum = iter < options.momentum_switch ? options.initial_momentum : options.final_momentum;
    detail::kl_gradient(P, Y, n, exaggeration, grad);
    for (std::size_t k = 0; k < 2 * n; ++k) {
      if (options.adaptive_gains) {
        gains[k] = (grad[k] > 0.0) != (update[k] > 0.0) ? gains[k] + options.gain_increase
                                                         : gains[k] * options.gain_decay;
        gains[k] = std::max(gains[k], options.min_gain);
      }
      update[k] = momentum * update[k] - options.learning_rate * gains[k] * grad[k];
      Y[k] += update[k];
    }
    double cx = 0.0, cy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      cx += Y[2 * i];
      cy += Y[2 * i + 1];
    }
    cx /= static_cast<double>(n);
    cy /= static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i) {
      Y[2 * i] -= cx;
      Y[2 * i + 1] -= cy;
    }
    detail::student_q(Y, n, num, Q);  // objective at the updated positions
    out.kl.push_back(detail::kl_divergence(P, Q));
  }

  out.points.resize(n);
  for (std::size_t i = 0; i < n; ++i) out.points[i] = {Y[2 * i], Y[2 * i + 1]};
  return out;
}

// ---------------------------------------------------------------------------
// Collision resolution

struct CollisionResult {
  std::vector<Point2> points;
  std::size_t overlaps = 0;  // pairs still closer than 2 * radius
  int iterations = 0;
};

namespace detail {

inline double pair_angle(PmuId a, PmuId b) {
  std::uint64_t h = static_cast<std::uint64_t>(a.value) * 0x9E3779B97F4A7C15ULL ^
                    (static_cast<std::uint64_t>(b.value) + 0x632BE59BD9B4E019ULL);
  h ^= h >> 33;
  h *= 0xFF51AFD7ED558CCDULL;
  h ^= h >> 33;
  return 2.0 * std::numbers::pi * static_cast<double>(h >> 11) / static_cast<double>(1ULL << 53);
}

inline std::size_t count_overlaps(const std::vector<Point2>& p, double radius) {
  std::size_t n = 0;
  for (std::size_t i = 0; i < p.size(); ++i)
    for (std::size_t j = i + 1; j < p.size(); ++j)
      if (std::hypot(p[i].x - p[j].x, p[i].y - p[j].y) < 2.0 * radius) ++n;
  return n;
}

}  // namespace detail

// Pushes overlapping circles apart, each point of a pair moving half the
// overlap along the pair axis. Coincident pairs use an axis derived from
// their ids. Pairs are separated to 2 * radius * (1 + slack); without slack,
// pairs settled exactly at contact are nudged back under it by later pushes
// and dense clumps do not finish in 50 passes. Best effort: stops after
// max_iterations.
inline CollisionResult resolve_collisions(std::vector<Point2> points, std::span<const PmuId> ids,
                                          double radius, int max_iterations = 50,
                                          double slack = 0.05) {
  if (!(radius > 0.0)) throw ArgumentError("collision radius must be positive");
  if (!(slack >= 0.0)) throw ArgumentError("collision slack must be >= 0");
  if (ids.size() != points.size()) throw ArgumentError("ids and points differ in length");
  CollisionResult out;
  const double target = 2.0 * radius * (1.0 + slack + 1e-9);
  for (int iter = 0; iter < max_iterations; ++iter) {
    if (detail::count_overlaps(points, radius) == 0) break;
    ++out.iterations;
    for (std::size_t i = 0; i < points.size(); ++i)
      for (std::size_t j = i + 1; j < points.size(); ++j) {
        double dx = points[j].x - points[i].x, dy = points[j].y - points[i].y;
        double d = std::hypot(dx, dy);
        if (d >= 2.0 * radius) continue;
        double ux, uy;
        if (d < 1e-12 * radius) {
          double a = detail::pair_angle(std::min(ids[i], ids[j]), std::max(ids[i], ids[j]));
          ux = std::cos(a);
          uy = std::sin(a);
          if (ids[j] < ids[i]) {
            ux = -ux;
            uy = -uy;
          }
        } else {
          ux = dx / d;
          uy = dy / d;
        }
        double push = 0.5 * (target - d);
        points[i].x -= ux * push;
        points[i].y -= uy * push;
        points[j].x += ux * push;
        points[j].y += uy * push;
      }
  }
  out.overlaps = detail::count_overlaps(points, radius);
  out.points = std::move(points);
  return out;
}

// ---------------------------------------------------------------------------
// Hop rings

struct HopRing {
  int hop = 0;
  double radius = 0.0;
  std::size_t count = 0;
};

// Mean embedded distance from the epicenter point (centroid of the epicenter
// PMUs' points) to the PMUs at each hop. Hops without PMUs get no ring.
inline std::vector<HopRing> hop_rings(const GridTopology& topology,
                                      std::span<const PmuId> epicenters,
                                      std::span<const PmuId> ids, std::span<const Point2> points) {
  if (ids.size() != points.size()) throw ArgumentError("ids and points differ in length");
  if (epicenters.empty()) throw ArgumentError("hop rings need an epicenter");
  std::vector<std::size_t> sources;
  for (auto e : epicenters) sources.push_back(topology.bus_index(topology.pmu(e).bus_id));
  auto d = bus_distances(topology, sources);

  Point2 center{};
  std::size_t found = 0;
  for (std::size_t i = 0; i < ids.size(); ++i)
    if (std::find(epicenters.begin(), epicenters.end(), ids[i]) != epicenters.end()) {
      center.x += points[i].x;
      center.y += points[i].y;
      ++found;
    }
  if (found == 0) throw ArgumentError("no epicenter PMU is part of the embedding");
  center.x /= static_cast<double>(found);
  center.y /= static_cast<double>(found);

  std::map<int, std::pair<double, std::size_t>> acc;
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (std::find(epicenters.begin(), epicenters.end(), ids[i]) != epicenters.end()) continue;
    int h = d.hops[topology.bus_index(topology.pmu(ids[i]).bus_id)];
    if (h == kUnreachable) continue;
    auto& [sum, count] = acc[h];
    sum += std::hypot(points[i].x - center.x, points[i].y - center.y);
    ++count;
  }
  std::vector<HopRing> out;
  for (const auto& [h, sc] : acc)
    out.push_back({h, sc.first / static_cast<double>(sc.second), sc.second});
  return out;
}

}  // namespace gridpulse

#endif  // GRIDPULSE_EMBED_HPP

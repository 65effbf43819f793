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

#ifndef GRIDPULSE_LOCALIZE_HPP
#define GRIDPULSE_LOCALIZE_HPP

#include <algorithm>
#include <cmath>
#include <optional>
#include <span>
#include <vector>

#include "gridpulse/errors.hpp"
#include "gridpulse/model.hpp"
#include "gridpulse/spectral.hpp"

namespace gridpulse {

struct Candidate {
  PmuId pmu;
  double magnitude = 0.0;  // at f*
};

// Epicenter candidates by magnitude at the frame's dominant frequency,
// descending, ties by PMU id. Invalid PMUs are left out.
inline std::vector<Candidate> rank_epicenter_candidates(const SpectrumFrame& frame) {
  std::vector<Candidate> out;
  if (frame.gap()) return out;
  for (std::size_t c = 0; c < frame.pmu_ids.size(); ++c)
    if (auto m = frame.magnitude_at_dominant(c)) out.push_back({frame.pmu_ids[c], *m});
  std::sort(out.begin(), out.end(), [](const Candidate& a, const Candidate& b) {
    return a.magnitude != b.magnitude ? a.magnitude > b.magnitude : a.pmu < b.pmu;
  });
  return out;
}

struct Point2 {
  double x = 0.0;
  double y = 0.0;
};

// Row-major scalar field over a regular grid; cell (i, j) sits at
// (x_min + i*dx, y_min + j*dy), values[j * nx + i].
struct KdeField {
  double x_min = 0.0, x_max = 1.0, y_min = 0.0, y_max = 1.0;
  std::size_t nx = 0, ny = 0;
  double bandwidth = 0.0;
  std::vector<double> values;

  double dx() const { return nx > 1 ? (x_max - x_min) / static_cast<double>(nx - 1) : 0.0; }
  double dy() const { return ny > 1 ? (y_max - y_min) / static_cast<double>(ny - 1) : 0.0; }
  double x_at(std::size_t i) const { return x_min + static_cast<double>(i) * dx(); }
  double y_at(std::size_t j) const { return y_min + static_cast<double>(j) * dy(); }
  double at(std::size_t i, std::size_t j) const { return values[j * nx + i]; }
};

struct KdeOptions {
  std::optional<double> bandwidth;  // default: 8% of the bounding-box diagonal
  std::size_t resolution = 128;
};

// field(g) = sum_p w_p exp(-|g - pos_p|^2 / (2 bw^2)) over the positions'
// bounding box grown by 10% per side.
inline KdeField kde_field(std::span<const Point2> positions, std::span<const double> weights,
                          const KdeOptions& options = {}) {
  if (positions.size() != weights.size()) throw ArgumentError("kde: positions/weights mismatch");
  if (options.resolution < 16) throw ArgumentError("kde resolution must be >= 16");
  if (options.bandwidth && !(*options.bandwidth > 0.0))
    throw ArgumentError("kde bandwidth must be positive");

  KdeField f;
  f.nx = f.ny = options.resolution;
  f.values.assign(f.nx * f.ny, 0.0);
  if (positions.empty()) {
    f.bandwidth = options.bandwidth.value_or(1.0);
    return f;
  }

  double x0 = positions[0].x, x1 = x0, y0 = positions[0].y, y1 = y0;
  for (const auto& p : positions) {
    x0 = std::min(x0, p.x);
    x1 = std::max(x1, p.x);
    y0 = std::min(y0, p.y);
    y1 = std::max(y1, p.y);
  }
  double diag = std::hypot(x1 - x0, y1 - y0);
  f.bandwidth = options.bandwidth.value_or(diag > 0.0 ? 0.08 * diag : 1.0);
  // Degenerate extents get a box of three bandwidths around the points.
  double mx = x1 > x0 ? 0.1 * (x1 - x0) : 3.0 * f.bandwidth;
  double my = y1 > y0 ? 0.1 * (y1 - y0) : 3.0 * f.bandwidth;
  f.x_min = x0 - mx;
  f.x_max = x1 + mx;
  f.y_min = y0 - my;
  f.y_max = y1 + my;

  const double inv = 1.0 / (2.0 * f.bandwidth * f.bandwidth);
  for (std::size_t j = 0; j < f.ny; ++j) {
    double gy = f.y_at(j);
    for (std::size_t i = 0; i < f.nx; ++i) {
      double gx = f.x_at(i);
      double acc = 0.0;
      for (std::size_t p = 0; p < positions.size(); ++p) {
        if (weights[p] == 0.0) continue;
        double ddx = gx - positions[p].x, ddy = gy - positions[p].y;
        acc += weights[p] * std::exp(-(ddx * ddx + ddy * ddy) * inv);
      }
      f.values[j * f.nx + i] = acc;
    }
  }
  return f;
}

}  // namespace gridpulse

#endif  // GRIDPULSE_LOCALIZE_HPP

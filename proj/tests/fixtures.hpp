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

#ifndef GRIDPULSE_TESTS_FIXTURES_HPP
#define GRIDPULSE_TESTS_FIXTURES_HPP

#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "gridpulse/model.hpp"
#include "gridpulse/series_source.hpp"
#include "gridpulse/spectral.hpp"
#include "gridpulse/synthgen.hpp"

namespace fixtures {

using namespace gridpulse;

// Buses 1..n on one substation each, joined in a 345 kV chain; PMU 100+i on bus i.
inline GridTopology chain(int n, bool with_pmus = true) {
  std::vector<Substation> subs;
  std::vector<Bus> buses;
  std::vector<Edge> edges;
  std::vector<Pmu> pmus;
  for (int i = 1; i <= n; ++i) {
    subs.push_back({SubstationId{i}, "Sub" + std::string(1, static_cast<char>('A' + i - 1)),
                    10.0 * i, 0.0});
    buses.push_back({BusId{i}, SubstationId{i}, 345});
    if (i > 1) edges.push_back({EdgeId{i - 1}, EdgeKind::line, BusId{i - 1}, BusId{i}});
    if (with_pmus) pmus.push_back({PmuId{100 + i}, BusId{i}, "PMU #" + std::to_string(100 + i)});
  }
  return GridTopology(subs, buses, edges, pmus);
}

// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  TempDir() {
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() / ("gridpulse-test-" + std::to_string(rd()) +
                                                      std::to_string(rd()));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

// Random values with random null runs; ids 1..cols.
inline SeriesMatrix random_matrix(std::mt19937_64& rng, std::size_t rows, std::size_t cols,
                                  double null_rate = 0.05, Attribute attr = Attribute::VPm) {
  std::vector<PmuId> ids;
  for (std::size_t c = 0; c < cols; ++c) ids.emplace_back(static_cast<std::int64_t>(c + 1));
  auto m = SeriesMatrix::nulls(attr, Date{std::chrono::year{2017}, std::chrono::month{4},
                                          std::chrono::day{20}},
                               0, static_cast<std::int64_t>(rows), ids);
  std::normal_distribution<double> val(1.0, 0.05);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::uniform_int_distribution<std::size_t> run(1, 500);
  for (std::size_t c = 0; c < cols; ++c) {
    std::size_t skip = 0;
    for (std::size_t r = 0; r < rows; ++r) {
      if (skip > 0) {
        --skip;
        continue;
      }
      if (u(rng) < null_rate / 250.0) {
        skip = run(rng) - 1;
        continue;
      }
      m.set(r, c, val(rng));
    }
  }
  return m;
}

// Source bus 1 (345 kV, PMU 1) with three line neighbours (buses 2-4, PMUs
// 2-4) and three transformer neighbours at 138 kV (buses 5-7, PMUs 5-7). All
// six are one hop out; the transformer side is damped further.
inline GridTopology two_path() {
  std::vector<Substation> subs;
  std::vector<Bus> buses;
  std::vector<Edge> edges;
  std::vector<Pmu> pmus;
  for (int i = 1; i <= 7; ++i) {
    subs.push_back({SubstationId{i}, "Node" + std::to_string(i), 10.0 * i, 5.0 * (i % 3)});
    buses.push_back({BusId{i}, SubstationId{i}, i <= 4 ? 345 : 138});
    pmus.push_back({PmuId{i}, BusId{i}, "PMU #" + std::to_string(i)});
    if (i > 1)
      edges.push_back({EdgeId{i}, i <= 4 ? EdgeKind::line : EdgeKind::transformer, BusId{1}, BusId{i}});
  }
  return GridTopology(subs, buses, edges, pmus);
}

struct LocalizationCase {
  GridTopology topology;
  ScenarioSpec spec;
  Simulation sim;
  PmuId source_pmu;
  TimePoint window_start;
};

// Generated grid (2-3 buses per substation, every bus metered, so about 25
// PMUs for 10 substations) with one forced 2.5 Hz event; noise sigma is a
// fraction of the source amplitude. The window sits mid-event.
inline LocalizationCase localization_case(std::uint64_t seed, double sigma_fraction,
                                          int substations = 10) {
  TopologyParams params;
  params.min_buses_per_substation = 2;
  params.pmu_coverage = 1.0;
  auto topo = generate_topology(seed, substations, params);
  std::vector<PmuId> ids = topo.pmu_ids();
  std::mt19937_64 rng(seed * 7919 + 1);
  auto pick = ids[std::uniform_int_distribution<std::size_t>(0, ids.size() - 1)(rng)];
  ScenarioSpec spec;
  spec.seed = seed;
  spec.n_ticks = 30 * 60;
  spec.attributes = {Attribute::VPm};
  const double amplitude = 0.02;
  spec.noise_sigma = sigma_fraction * amplitude;
  spec.events.push_back({EventKind::forced, topo.pmu(pick).bus_id, 2.5, amplitude, 10.0, 40.0, 0.0});
  auto sim = simulate(topo, spec);
  return {topo, spec, std::move(sim), pick, time_of(spec.date, 30 * 20)};
}

struct DendrogramCase {
  GridTopology topology;
  std::vector<PmuId> epicenters;
  std::vector<PmuId> selected;
  SpectrumFrame frame;
};

// Noisy generated scenario with one or two epicenters and a random selection.
inline DendrogramCase dendrogram_case(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  TopologyParams params;
  params.pmu_coverage = std::uniform_real_distribution<double>(0.4, 1.0)(rng);
  auto topo = generate_topology(seed, std::uniform_int_distribution<int>(4, 12)(rng), params);
  auto ids = topo.pmu_ids();
  std::shuffle(ids.begin(), ids.end(), rng);
  std::size_t n_epi = ids.size() > 3 && (rng() & 1) ? 2 : 1;
  std::vector<PmuId> epicenters(ids.begin(), ids.begin() + static_cast<std::ptrdiff_t>(n_epi));
  std::vector<PmuId> selected;
  for (auto id : ids)
    if (rng() % 4 != 0) selected.push_back(id);
  selected.insert(selected.end(), epicenters.begin(), epicenters.end());
  std::sort(selected.begin(), selected.end());
  selected.erase(std::unique(selected.begin(), selected.end()), selected.end());

  ScenarioSpec spec;
  spec.seed = seed;
  spec.n_ticks = 30 * 30;
  spec.attributes = {Attribute::VPm};
  spec.noise_sigma = 0.004;
  spec.events.push_back({EventKind::forced, topo.pmu(epicenters[0]).bus_id,
                         std::uniform_real_distribution<double>(0.5, 5.0)(rng), 0.02, 0.0, 30.0, 0.0});
  auto sim = simulate(topo, spec);
  MemorySource src(sim.series);
  auto frame = frame_at(src, Attribute::VPm, time_of(spec.date, 300), 5, selected);
  return {topo, epicenters, selected, frame};
}

}  // namespace fixtures

#endif  // GRIDPULSE_TESTS_FIXTURES_HPP

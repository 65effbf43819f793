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

#ifndef GRIDPULSE_DATASET_HPP
#define GRIDPULSE_DATASET_HPP

#include <filesystem>
#include <fstream>
#include <random>
#include <string>
#include <vector>

#include "gridpulse/json_io.hpp"
#include "gridpulse/store.hpp"
#include "gridpulse/synthgen.hpp"

namespace gridpulse {

inline constexpr std::string_view kGroundTruthSchema = "gridpulse.ground_truth/1";

struct DatasetParams {
  std::uint64_t seed = 1;
  int substations = 10;
  int days = 1;
  Date first_day{std::chrono::year{2017}, std::chrono::April, std::chrono::day{20}};
  int minutes = 60;  // simulated span per day, from midnight
  std::vector<Attribute> attributes{kAllAttributes.begin(), kAllAttributes.end()};
  TopologyParams topology;
  double amplitude = 0.02;
  double noise_fraction = 0.1;      // sigma as a fraction of the event amplitude
  double dropout_probability = 0.05;
  bool transients = true;           // one transient per day besides the forced event
  WriteOptions write{.dense = true, .compression_level = 6};
};

struct DatasetSummary {
  GridTopology topology;
  std::vector<EventRecord> events;
  std::vector<EventTruth> truth;
  std::vector<std::filesystem::path> files;
};

inline json to_json(const EventTruth& t) {
  json amps = json::array();
  for (const auto& [id, a] : t.expected_amplitude) amps.push_back({{"pmu", id}, {"amplitude", a}});
  return {{"source_bus", t.source_bus}, {"nearest_pmus", t.nearest_pmus}, {"f0_hz", t.f0_hz},
          {"expected_amplitude", amps}};
}

// Writes topology.json, data/<day>/<attr>.pmuc, ground_truth.json and
// reports/<event>.txt under `dir`. Each day carries one forced event and,
// optionally, one transient, both sourced at PMU-hosting buses.
inline DatasetSummary write_dataset(const std::filesystem::path& dir, const DatasetParams& p) {
  namespace fs = std::filesystem;
  if (p.days < 1) throw ArgumentError("days must be >= 1");
  if (p.minutes < 1 || p.minutes > 1440) throw ArgumentError("minutes must lie in [1, 1440]");
  if (p.attributes.empty()) throw ArgumentError("no attributes to generate");

  DatasetSummary out;
  out.topology = generate_topology(p.seed, p.substations, p.topology);
  const auto& topo = out.topology;
  if (topo.pmus().empty()) throw GenerationError("topology has no PMUs");
  fs::create_directories(dir / "reports");
  write_json_file((dir / "topology.json").string(), to_json(topo));

  Store store(dir / "data");
  const double span_s = p.minutes * 60.0;
  json truth_json = json::array();
  for (int day = 0; day < p.days; ++day) {
    std::mt19937_64 rng(detail::stream_seed(p.seed, 0xDA7A, static_cast<std::uint64_t>(day)));
    auto pick_pmu = [&] {
      std::uniform_int_distribution<std::size_t> d(0, topo.pmus().size() - 1);
      return topo.pmus()[d(rng)].bus_id;
    };
    ScenarioSpec s;
    s.seed = detail::stream_seed(p.seed, 0x5CE7, static_cast<std::uint64_t>(day));
    s.n_substations = p.substations;
    s.topology = p.topology;
    s.date = Date{std::chrono::sys_days{p.first_day} + std::chrono::days{day}};
    s.n_ticks = static_cast<std::int64_t>(p.minutes) * 60 * kSampleRate;
    s.noise_sigma = p.noise_fraction * p.amplitude;
    s.dropout.probability = p.dropout_probability;
    s.attributes = p.attributes;

    EventSpec forced;
    forced.kind = EventKind::forced;
    forced.source_bus = pick_pmu();
    forced.f0_hz = 0.5 * std::uniform_int_distribution<int>(1, 10)(rng);
    forced.amplitude = p.amplitude;
    forced.t_start_s = std::floor(std::uniform_real_distribution<double>(0.1, 0.4)(rng) * span_s);
    forced.duration_s = std::max(10.0, std::floor(0.3 * span_s));
    s.events.push_back(forced);
    if (p.transients) {
      EventSpec tr;
      tr.kind = EventKind::transient;
      tr.source_bus = pick_pmu();
      tr.f0_hz = 1.5;
      tr.amplitude = 2.5 * p.amplitude;
      tr.decay_tau_s = 2.0;
      tr.t_start_s = std::floor(std::uniform_real_distribution<double>(0.75, 0.85)(rng) * span_s);
      tr.duration_s = std::min(30.0, span_s - tr.t_start_s);
      s.events.push_back(tr);
    }

    auto sim = simulate(topo, s);
    for (auto& [attr, m] : sim.series) {
      store.write_day(m, p.write);
      out.files.push_back(store.path_for(attr, m.date));
    }
    for (std::size_t e = 0; e < sim.events.size(); ++e) {
      auto rec = sim.events[e];
      rec.id = format_date(s.date) + "-" + rec.id;
      auto report = report_for_event(topo, rec, sim.truth.events[e].source_bus);
      std::ofstream(dir / "reports" / (rec.id + ".txt")) << report.text;
      json j = to_json(rec);
      j["truth"] = to_json(sim.truth.events[e]);
      truth_json.push_back(j);
      out.events.push_back(std::move(rec));
      out.truth.push_back(sim.truth.events[e]);
    }
  }
  write_json_file((dir / "ground_truth.json").string(),
                  {{"schema", kGroundTruthSchema}, {"seed", p.seed}, {"events", truth_json}});
  return out;
}

}  // namespace gridpulse

#endif  // GRIDPULSE_DATASET_HPP

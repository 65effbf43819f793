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

#ifndef GRIDPULSE_SYNTHGEN_HPP
#define GRIDPULSE_SYNTHGEN_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>
#include <optional>
#include <cstdint>
#include <map>
#include <numbers>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "gridpulse/errors.hpp"
#include "gridpulse/model.hpp"
#include "gridpulse/time.hpp"

namespace gridpulse {

// Synthetic grids and 30 Hz sensor data with known oscillation sources.

struct TopologyParams {
  int min_buses_per_substation = 1;
  int max_buses_per_substation = 3;
  double chord_fraction = 0.3;  // extra lines as a fraction of the spanning-tree size
  double pmu_coverage = 0.5;    // fraction of buses that host a PMU
  double area_km = 300.0;
};

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

// Independent stream seed for (seed, a, b, c).
inline std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0,
                                 std::uint64_t c = 0) {
  return splitmix64(splitmix64(splitmix64(seed ^ splitmix64(a)) ^ b) ^ c);
}

inline std::vector<std::string> substation_names(std::size_t n, std::mt19937_64& rng) {
  static constexpr std::array<std::string_view, 24> heads = {
      "Ash",   "Bram",  "Cedar", "Delc",  "Elder", "Fern",   "Glen",  "Hollow",
      "Iron",  "Jasper", "Kes",  "Lark",  "Marsh", "North",  "Oak",   "Pine",
      "Quarry", "Raven", "Stur", "Thorn", "Umber", "Vale",   "Willow", "Yearl"};
  static constexpr std::array<std::string_view, 12> tails = {
      "ford", "ley", "ton", "wick", "mere", "geon", "ing", "dale", "crest", "field", "haven", "ino"};
  std::vector<std::string> pool;
  for (auto h : heads)
    for (auto t : tails) pool.push_back(std::string(h) + std::string(t));
  std::shuffle(pool.begin(), pool.end(), rng);
  std::vector<std::string> out;
  for (std::size_t i = 0; i < n; ++i) {
    auto base = pool[i % pool.size()];
    out.push_back(i < pool.size() ? base : base + std::to_string(i / pool.size() + 1));
  }
  return out;
}

}  // namespace detail

inline GridTopology generate_topology(std::uint64_t seed, int n_substations,
                                      const TopologyParams& params = {}) {
  if (n_substations < 2) throw GenerationError("need at least 2 substations for a network");
  if (params.min_buses_per_substation < 1 || params.max_buses_per_substation > 3 ||
      params.min_buses_per_substation > params.max_buses_per_substation)
    throw GenerationError("buses per substation must lie within 1..3");
  if (!(params.pmu_coverage > 0.0 && params.pmu_coverage <= 1.0))
    throw GenerationError("PMU coverage must lie in (0, 1]");
  if (!(params.chord_fraction >= 0.0)) throw GenerationError("chord fraction must be >= 0");
  if (!(params.area_km > 0.0)) throw GenerationError("area must be positive");

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> coord(0.0, params.area_km);
  const auto n = static_cast<std::size_t>(n_substations);
  auto names = detail::substation_names(n, rng);

  std::vector<Substation> subs;
  for (std::size_t i = 0; i < n; ++i) {
    double x = coord(rng);
    double y = coord(rng);
    subs.push_back({SubstationId{static_cast<std::int64_t>(i + 1)}, names[i], x, y});
  }

  // Voltage levels: every substation has the 345 kV backbone bus, lower levels vary.
  std::vector<Bus> buses;
  std::vector<std::vector<std::size_t>> sub_buses(n);
  std::uniform_int_distribution<int> bus_count(params.min_buses_per_substation,
                                               params.max_buses_per_substation);
  for (std::size_t i = 0; i < n; ++i) {
    int k = bus_count(rng);
    std::vector<int> lower{138, 69};
    std::shuffle(lower.begin(), lower.end(), rng);
    std::vector<int> levels{345};
    for (int j = 1; j < k; ++j) levels.push_back(lower[static_cast<std::size_t>(j - 1)]);
    std::sort(levels.rbegin(), levels.rend());
    for (int kv : levels) {
      sub_buses[i].push_back(buses.size());
      buses.push_back({BusId{static_cast<std::int64_t>(buses.size() + 1)}, subs[i].id, kv});
    }
  }

  std::vector<Edge> edges;
  auto add_edge = [&](EdgeKind kind, std::size_t a, std::size_t b) {
    edges.push_back({EdgeId{static_cast<std::int64_t>(edges.size() + 1)}, kind, buses[a].id,
                     buses[b].id});
  };
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 1; j < sub_buses[i].size(); ++j)
      add_edge(EdgeKind::transformer, sub_buses[i][j - 1], sub_buses[i][j]);

  auto dist = [&](std::size_t a, std::size_t b) {
    return std::hypot(subs[a].x - subs[b].x, subs[a].y - subs[b].y);
  };
  auto connect = [&](std::size_t a, std::size_t b) {
    std::vector<std::size_t> common;
    for (auto ba : sub_buses[a])
      for (auto bb : sub_buses[b])
        if (buses[ba].voltage_kv == buses[bb].voltage_kv) common.push_back(ba);
    std::uniform_int_distribution<std::size_t> pick(0, common.size() - 1);
    auto ba = common[pick(rng)];
    auto bb = *std::find_if(sub_buses[b].begin(), sub_buses[b].end(), [&](std::size_t x) {
      return buses[x].voltage_kv == buses[ba].voltage_kv;
    });
    add_edge(EdgeKind::line, ba, bb);
  };

  // Euclidean minimum spanning tree (Prim), then the shortest non-tree chords.
  std::set<std::pair<std::size_t, std::size_t>> tree;
  {
    std::vector<bool> in(n, false);
    std::vector<double> best(n, std::numeric_limits<double>::infinity());
    std::vector<std::size_t> parent(n, 0);
    best[0] = 0.0;
    for (std::size_t step = 0; step < n; ++step) {
      std::size_t u = n;
      for (std::size_t v = 0; v < n; ++v)
        if (!in[v] && (u == n || best[v] < best[u])) u = v;
      in[u] = true;
      if (step > 0) {
        tree.insert({std::min(u, parent[u]), std::max(u, parent[u])});
        connect(parent[u], u);
      }
      for (std::size_t v = 0; v < n; ++v)
        if (!in[v] && dist(u, v) < best[v]) {
          best[v] = dist(u, v);
          parent[v] = u;
        }
    }
  }
  auto chords = static_cast<std::size_t>(std::lround(params.chord_fraction * double(n - 1)));
  std::vector<std::pair<std::size_t, std::size_t>> candidates;
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = a + 1; b < n; ++b)
      if (!tree.contains({a, b})) candidates.push_back({a, b});
  std::sort(candidates.begin(), candidates.end(), [&](const auto& p, const auto& q) {
    return dist(p.first, p.second) < dist(q.first, q.second);
  });
  candidates.resize(std::min(candidates.size(), 3 * chords));
  std::shuffle(candidates.begin(), candidates.end(), rng);
  candidates.resize(std::min(candidates.size(), chords));
  std::sort(candidates.begin(), candidates.end());
  for (const auto& [a, b] : candidates) connect(a, b);

  // PMU placement on a seeded subset of buses.
  auto pmu_count = static_cast<std::size_t>(std::ceil(params.pmu_coverage * double(buses.size()) - 1e-9));
  std::vector<std::size_t> order(buses.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::shuffle(order.begin(), order.end(), rng);
  order.resize(pmu_count);
  std::sort(order.begin(), order.end());
  std::vector<Pmu> pmus;
  for (std::size_t i = 0; i < order.size(); ++i) {
    PmuId id{static_cast<std::int64_t>(101 + i)};
    pmus.push_back({id, buses[order[i]].id, "PMU #" + to_string(id)});
  }

  GridTopology topology(std::move(subs), std::move(buses), std::move(edges), std::move(pmus));
  topology.validate();
  return topology;
}

// ---------------------------------------------------------------------------
// Scenarios

struct EventSpec {
  EventKind kind = EventKind::forced;
  BusId source_bus;
  double f0_hz = 2.5;
  double amplitude = 0.02;  // per-unit
  double t_start_s = 0.0;   // seconds after midnight
  double duration_s = 60.0;
  double decay_tau_s = 0.5;  // transient only
};

struct DropoutSpec {
  double probability = 0.0;  // per PMU per 15-minute block
  std::int64_t min_run = 30;  // ticks
  std::int64_t max_run = 300;
};

struct ScenarioSpec {
  std::uint64_t seed = 1;
  int n_substations = 10;
  TopologyParams topology;
  Date date{std::chrono::year{2017}, std::chrono::April, std::chrono::day{20}};
  std::int64_t n_ticks = 4 * kTicksPerRowGroup;  // desk-scale day length
  std::vector<EventSpec> events;
  double noise_sigma = 0.0;
  DropoutSpec dropout;
  double hop_damping = 0.6;          // per hop
  double transformer_damping = 0.3;  // per transformer crossing
  std::vector<Attribute> attributes{kAllAttributes.begin(), kAllAttributes.end()};

  void validate() const {
    if (n_ticks <= 0 || n_ticks > kTicksPerDay) throw ArgumentError("n_ticks outside (0, 2592000]");
    if (noise_sigma < 0.0) throw ArgumentError("noise sigma must be >= 0");
    if (!(hop_damping > 0.0 && hop_damping <= 1.0) ||
        !(transformer_damping > 0.0 && transformer_damping <= 1.0))
      throw ArgumentError("damping factors must lie in (0, 1]");
    if (dropout.probability < 0.0 || dropout.probability > 1.0 || dropout.min_run < 1 ||
        dropout.max_run < dropout.min_run)
      throw ArgumentError("bad dropout parameters");
    for (const auto& e : events) {
      if (e.f0_hz >= kSampleRate / 2.0)
        throw NyquistError("f0 " + std::to_string(e.f0_hz) + " Hz is at or above 15 Hz");
      if (!(e.f0_hz > 0.0)) throw ArgumentError("f0 must be positive");
      if (!(e.amplitude > 0.0)) throw ArgumentError("amplitude must be positive");
      if (!(e.duration_s > 0.0)) throw ArgumentError("duration must be positive");
      if (e.kind == EventKind::transient && !(e.decay_tau_s > 0.0))
        throw ArgumentError("transient decay tau must be positive");
      if (e.kind == EventKind::unknown) throw ArgumentError("events must be forced or transient");
    }
  }
};

struct EventTruth {
  BusId source_bus;
  std::vector<PmuId> nearest_pmus;
  double f0_hz = 0.0;
  std::map<PmuId, double> expected_amplitude;  // at f0
};

struct GroundTruth {
  std::vector<EventTruth> events;
};

struct Simulation {
  std::map<Attribute, SeriesMatrix> series;
  GroundTruth truth;
  std::vector<EventRecord> events;
};

// a_p = A * hop_damping^hops * transformer_damping^crossings. Unreachable PMUs get 0.
inline std::map<PmuId, double> expected_amplitudes(const GridTopology& topology, BusId source,
                                                   double amplitude, double hop_damping,
                                                   double transformer_damping) {
  std::array<std::size_t, 1> src{topology.bus_index(source)};
  auto d = bus_distances(topology, src);
  std::map<PmuId, double> out;
  for (const auto& p : topology.pmus()) {
    auto b = topology.bus_index(p.bus_id);
    out[p.id] = d.hops[b] == kUnreachable
                    ? 0.0
                    : amplitude * std::pow(hop_damping, d.hops[b]) *
                          std::pow(transformer_damping, d.transformer_crossings[b]);
  }
  return out;
}

inline std::vector<PmuId> nearest_pmus(const GridTopology& topology, BusId source) {
  std::array<std::size_t, 1> src{topology.bus_index(source)};
  auto d = bus_distances(topology, src);
  int best = std::numeric_limits<int>::max();
  std::vector<PmuId> out;
  for (const auto& p : topology.pmus()) {
    int h = d.hops[topology.bus_index(p.bus_id)];
    if (h == kUnreachable) continue;
    if (h < best) {
      best = h;
      out.clear();
    }
    if (h == best) out.push_back(p.id);
  }
  std::sort(out.begin(), out.end());
  return out;
}

namespace detail {

inline double envelope(const EventSpec& e, double t) {
  if (t < e.t_start_s || t >= e.t_start_s + e.duration_s) return 0.0;
  if (e.kind == EventKind::transient) return std::exp(-(t - e.t_start_s) / e.decay_tau_s);
  return 1.0;
}

struct DropoutRun {
  std::int64_t begin, end;
};

// Null runs for one PMU; the same runs apply to every attribute of that PMU.
inline std::vector<DropoutRun> dropout_runs(const ScenarioSpec& s, PmuId pmu) {
  std::vector<DropoutRun> runs;
  if (s.dropout.probability <= 0.0) return runs;
  std::mt19937_64 rng(stream_seed(s.seed, 0xD409, static_cast<std::uint64_t>(pmu.value)));
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::uniform_int_distribution<std::int64_t> len(s.dropout.min_run, s.dropout.max_run);
  for (std::int64_t block = 0; block < s.n_ticks; block += kTicksPerRowGroup) {
    auto block_end = std::min(block + kTicksPerRowGroup, s.n_ticks);
    if (u(rng) >= s.dropout.probability) continue;
    auto l = len(rng);
    std::uniform_int_distribution<std::int64_t> start(block, block_end - 1);
    auto b = start(rng);
    runs.push_back({b, std::min(b + l, block_end)});
  }
  return runs;
}

}  // namespace detail

// Deterministic in (topology, scenario). Voltage magnitudes carry every event;
// current magnitudes carry transient events; other attributes carry noise only.
inline Simulation simulate(const GridTopology& topology, const ScenarioSpec& scenario) {
  scenario.validate();
  std::vector<PmuId> ids = topology.pmu_ids();

  Simulation sim;
  std::vector<std::map<PmuId, double>> amplitudes;
  for (std::size_t e = 0; e < scenario.events.size(); ++e) {
    const auto& ev = scenario.events[e];
    if (!topology.has_bus(ev.source_bus))
      throw IdentifierError("event source bus " + to_string(ev.source_bus) + " does not exist");
    EventTruth truth;
    truth.source_bus = ev.source_bus;
    truth.nearest_pmus = nearest_pmus(topology, ev.source_bus);
    truth.f0_hz = ev.f0_hz;
    truth.expected_amplitude = expected_amplitudes(topology, ev.source_bus, ev.amplitude,
                                                   scenario.hop_damping,
                                                   scenario.transformer_damping);
    amplitudes.push_back(truth.expected_amplitude);
    sim.truth.events.push_back(truth);

    EventRecord rec;
    rec.id = "GT-" + std::to_string(e + 1);
    auto day0 = midnight(scenario.date);
    rec.t_start = day0 + std::chrono::milliseconds{std::llround(ev.t_start_s * 1000.0)};
    rec.t_end = day0 + std::chrono::milliseconds{std::llround((ev.t_start_s + ev.duration_s) * 1000.0)};
    rec.oscillation_hz = ev.f0_hz;
    rec.epicenter_pmus = truth.nearest_pmus;
    rec.kind = ev.kind;
    rec.provenance = Provenance::synthetic_ground_truth;
    rec.source = "synthgen seed=" + std::to_string(scenario.seed);
    sim.events.push_back(std::move(rec));
  }

  const auto n_ticks = scenario.n_ticks;
  const auto cols = ids.size();

  // Per (event, PMU) phase.
  std::vector<std::vector<double>> phase(scenario.events.size(), std::vector<double>(cols));
  for (std::size_t e = 0; e < scenario.events.size(); ++e)
    for (std::size_t c = 0; c < cols; ++c) {
      std::mt19937_64 rng(detail::stream_seed(scenario.seed, 0x9A5E, e,
                                              static_cast<std::uint64_t>(ids[c].value)));
      phase[e][c] = std::uniform_real_distribution<double>(0.0, 2.0 * std::numbers::pi)(rng);
    }

  // Shared grid frequency: slow AR(1) wander around 60 Hz.
  std::vector<double> grid_freq(static_cast<std::size_t>(n_ticks));
  {
    std::mt19937_64 rng(detail::stream_seed(scenario.seed, 0xF4E0));
    std::normal_distribution<double> step(0.0, 2e-4);
    double dev = 0.0;
    for (auto& f : grid_freq) {
      dev = 0.999 * dev + step(rng);
      f = 60.0 + dev;
    }
  }

  std::vector<std::vector<detail::DropoutRun>> dropouts;
  for (auto id : ids) dropouts.push_back(detail::dropout_runs(scenario, id));

  for (auto attr : scenario.attributes) {
    auto m = SeriesMatrix::nulls(attr, scenario.date, 0, n_ticks, ids);
    const int a = static_cast<int>(attr);
    for (std::size_t c = 0; c < cols; ++c) {
      std::mt19937_64 rng(detail::stream_seed(scenario.seed, 0x5E41, static_cast<std::uint64_t>(a),
                                              static_cast<std::uint64_t>(ids[c].value)));
      std::mt19937_64 base_rng(detail::stream_seed(scenario.seed, 0xBA5E,
                                                   static_cast<std::uint64_t>(ids[c].value)));
      std::normal_distribution<double> noise(0.0, scenario.noise_sigma);
      const double current_base = 0.4 + 0.4 * std::uniform_real_distribution<double>(0.0, 1.0)(base_rng);
      const double angle_base = std::uniform_real_distribution<double>(-30.0, 30.0)(base_rng);
      const double phase_offset = (a / 2) % 4 == 2 ? -120.0 : (a / 2) % 4 == 3 ? 120.0 : 0.0;
      double prev_f = grid_freq.empty() ? 60.0 : grid_freq[0];

      for (std::int64_t tick = 0; tick < n_ticks; ++tick) {
        const double t = static_cast<double>(tick) / kSampleRate;
        double v = 0.0;
        if (attr == Attribute::F || attr == Attribute::DF) {
          double f = grid_freq[static_cast<std::size_t>(tick)] + 1e-4 * noise(rng);
          v = attr == Attribute::F ? f : (tick == 0 ? 0.0 : (f - prev_f) * kSampleRate);
          prev_f = f;
        } else if (is_magnitude(attr)) {
          bool voltage = is_voltage(attr);
          double base = voltage ? 1.0 : current_base;
          v = base;
          for (std::size_t e = 0; e < scenario.events.size(); ++e) {
            const auto& ev = scenario.events[e];
            if (!voltage && ev.kind != EventKind::transient) continue;
            double g = detail::envelope(ev, t);
            if (g == 0.0) continue;
            double amp = amplitudes[e].at(ids[c]) * (voltage ? 1.0 : current_base);
            v += amp * g * std::sin(2.0 * std::numbers::pi * ev.f0_hz * t + phase[e][c]);
          }
          v += noise(rng);
        } else {
          v = angle_base + phase_offset + (is_current(attr) ? -25.0 : 0.0) + noise(rng);
        }
        m.set(static_cast<std::size_t>(tick), c, v);
      }
      for (const auto& run : dropouts[c])
        for (auto tick = run.begin; tick < run.end; ++tick)
          m.set(static_cast<std::size_t>(tick), c, std::nullopt);
    }
    sim.series.emplace(attr, std::move(m));
  }
  return sim;
}

// ---------------------------------------------------------------------------
// Synthetic operator reports

struct SyntheticReport {
  enum class Mention { pmu_id, substation, none };

  std::string name;
  std::string text;
  Mention mention = Mention::none;
  std::vector<PmuId> expected_pmus;
  std::optional<TimePoint> expected_time;
  std::optional<double> expected_hz;
};

namespace detail {

inline std::string us_stamp(TimePoint t) {
  auto day = std::chrono::floor<std::chrono::days>(t);
  Date d{day};
  long long s = std::chrono::duration_cast<std::chrono::seconds>(t - day).count();
  char buf[48];
  std::snprintf(buf, sizeof buf, "%02lld:%02lld:%02lld, %u/%u/%d", s / 3600, (s / 60) % 60, s % 60,
                static_cast<unsigned>(d.month()), static_cast<unsigned>(d.day()),
                static_cast<int>(d.year()));
  return buf;
}

inline std::vector<PmuId> pmus_at_substation(const GridTopology& t, SubstationId sub) {
  std::vector<PmuId> out;
  for (const auto& p : t.pmus())
    if (t.buses()[t.bus_index(p.bus_id)].substation_id == sub) out.push_back(p.id);
  std::sort(out.begin(), out.end());
  return out;
}

inline std::string hz_text(double hz) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%.1f", hz);
  return buf;
}

}  // namespace detail

// Report for a known event: mentions the epicenter PMU ids when the event has
// them, else the source substation name.
inline SyntheticReport report_for_event(const GridTopology& topology, const EventRecord& event,
                                        BusId source_bus) {
  SyntheticReport r;
  r.name = event.id;
  const auto& sub = topology.substation_of_bus(topology.bus_index(source_bus));
  std::string when = event.t_start ? detail::us_stamp(*event.t_start) : "time unrecorded";
  std::string kind = event.kind == EventKind::transient ? "Transient" : "System Voltage Oscillation";
  std::string text = kind + " at " + sub.name + " Substation, " + when + ".";
  if (!event.epicenter_pmus.empty()) {
    text += " Largest swings observed on";
    for (std::size_t i = 0; i < event.epicenter_pmus.size(); ++i)
      text += (i ? " and PMU #" : " PMU #") + to_string(event.epicenter_pmus[i]);
    text += ".";
    r.mention = SyntheticReport::Mention::pmu_id;
    r.expected_pmus = event.epicenter_pmus;
  } else {
    r.mention = SyntheticReport::Mention::substation;
    r.expected_pmus = detail::pmus_at_substation(topology, sub.id);
  }
  if (event.oscillation_hz) {
    text += " Dominant mode near " + detail::hz_text(*event.oscillation_hz) + "Hz.";
    r.expected_hz = std::round(*event.oscillation_hz * 10.0) / 10.0;
  }
  r.text = text + "\n";
  if (event.t_start) r.expected_time = std::chrono::floor<std::chrono::seconds>(*event.t_start);
  return r;
}

// Mixed corpus: PMU-id mentions (sometimes alongside a substation name),
// substation-only mentions and unlinkable notes.
inline std::vector<SyntheticReport> generate_report_corpus(const GridTopology& topology,
                                                           std::size_t count, std::uint64_t seed,
                                                           Date base_date) {
  std::mt19937_64 rng(detail::stream_seed(seed, 0x4E90));
  std::vector<std::size_t> hosting;  // substations with at least one PMU
  for (std::size_t i = 0; i < topology.substations().size(); ++i)
    if (!detail::pmus_at_substation(topology, topology.substations()[i].id).empty())
      hosting.push_back(i);
  if (topology.pmus().empty() || hosting.empty())
    throw GenerationError("report corpus needs a topology with PMUs");

  std::uniform_int_distribution<std::size_t> pick_pmu(0, topology.pmus().size() - 1);
  std::uniform_int_distribution<std::size_t> pick_sub(0, hosting.size() - 1);
  std::uniform_int_distribution<int> template_kind(0, 5);
  std::uniform_int_distribution<int> second_of_day(0, 86399);
  std::uniform_int_distribution<int> day_offset(0, 27);
  std::uniform_int_distribution<int> decihertz(2, 60);

  std::vector<SyntheticReport> out;
  for (std::size_t i = 0; i < count; ++i) {
    SyntheticReport r;
    char name[32];
    std::snprintf(name, sizeof name, "report-%04zu", i + 1);
    r.name = name;
    auto t = midnight(base_date) + std::chrono::days{day_offset(rng)} +
             std::chrono::seconds{second_of_day(rng)};
    double hz = decihertz(rng) / 10.0;
    int kind = template_kind(rng);
    if (kind <= 2) {
      auto p = topology.pmus()[pick_pmu(rng)];
      const auto& sub = topology.substation_of_pmu(p.id);
      r.mention = SyntheticReport::Mention::pmu_id;
      r.expected_pmus = {p.id};
      r.expected_time = t;
      r.expected_hz = hz;
      if (kind == 0) {
        r.text = "System Voltage Oscillation at " + sub.name + " Substation, " +
                 detail::us_stamp(t) + ". Operators report sustained swings; the epicenter is at PMU #" +
                 to_string(p.id) + " with a mode of " + detail::hz_text(hz) + "Hz.";
      } else if (kind == 1) {
        auto q = topology.pmus()[pick_pmu(rng)];
        if (q.id != p.id) r.expected_pmus.push_back(q.id);
        std::sort(r.expected_pmus.begin(), r.expected_pmus.end());
        r.text = "Forced oscillation logged " + format_time(t) + ": pmu #" + to_string(p.id) +
                 " and PMU " + to_string(q.id) + " track a " + detail::hz_text(hz) +
                 " Hz mode. Field crew notified.";
      } else {
        r.text = "Alarm summary " + detail::us_stamp(t) + "\nPMU#" + to_string(p.id) +
                 " exceeded the oscillation band at " + detail::hz_text(hz) + "Hz.";
      }
    } else if (kind <= 4) {
      const auto& sub = topology.substations()[hosting[pick_sub(rng)]];
      r.mention = SyntheticReport::Mention::substation;
      r.expected_pmus = detail::pmus_at_substation(topology, sub.id);
      r.expected_time = t;
      if (kind == 3) {
        r.text = "Transient at " + sub.name + " following a breaker operation, " +
                 detail::us_stamp(t) + ".";
      } else {
        r.expected_hz = hz;
        r.text = "Oscillation observed near " + sub.name + " substation starting " + format_time(t) +
                 ", approximately " + detail::hz_text(hz) + " Hz.";
      }
    } else {
      r.mention = SyntheticReport::Mention::none;
      r.expected_time = t;
      r.text = "Routine maintenance note, " + detail::us_stamp(t) +
               ". Relay settings reviewed, no anomalies recorded.";
    }
    r.text += "\n";
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace gridpulse

#endif  // GRIDPULSE_SYNTHGEN_HPP

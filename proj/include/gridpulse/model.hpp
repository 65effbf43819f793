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

#ifndef GRIDPULSE_MODEL_HPP
#define GRIDPULSE_MODEL_HPP

#include <algorithm>
#include <array>
#include <compare>
#include <cstdint>
#include <cstring>
#include <deque>
#include <functional>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "gridpulse/errors.hpp"
#include "gridpulse/time.hpp"

namespace gridpulse {

// Integer identifier tagged with the collection it indexes.
template <class Tag>
struct Id {
  std::int64_t value = 0;

  constexpr Id() = default;
  constexpr explicit Id(std::int64_t v) : value(v) {}
  constexpr auto operator<=>(const Id&) const = default;
};

using SubstationId = Id<struct SubstationTag>;
using BusId = Id<struct BusTag>;
using EdgeId = Id<struct EdgeTag>;
using PmuId = Id<struct PmuTag>;

template <class Tag>
std::string to_string(Id<Tag> id) {
  return std::to_string(id.value);
}

}  // namespace gridpulse

template <class Tag>
struct std::hash<gridpulse::Id<Tag>> {
  std::size_t operator()(gridpulse::Id<Tag> id) const noexcept {
    return std::hash<std::int64_t>{}(id.value);
  }
};

namespace gridpulse {

// ---------------------------------------------------------------------------
// Attributes

// {V,I} x {P,A,B,C} x {magnitude, angle}, then frequency and its rate of change.
enum class Attribute : std::uint8_t {
  VPm, VPa, VAm, VAa, VBm, VBa, VCm, VCa,
  IPm, IPa, IAm, IAa, IBm, IBa, ICm, ICa,
  F, DF,
};

inline constexpr std::array<std::string_view, 18> kAttributeCodes = {
    "VPm", "VPa", "VAm", "VAa", "VBm", "VBa", "VCm", "VCa", "IPm",
    "IPa", "IAm", "IAa", "IBm", "IBa", "ICm", "ICa", "F",   "DF"};

inline constexpr std::array<Attribute, 18> kAllAttributes = {
    Attribute::VPm, Attribute::VPa, Attribute::VAm, Attribute::VAa, Attribute::VBm,
    Attribute::VBa, Attribute::VCm, Attribute::VCa, Attribute::IPm, Attribute::IPa,
    Attribute::IAm, Attribute::IAa, Attribute::IBm, Attribute::IBa, Attribute::ICm,
    Attribute::ICa, Attribute::F,   Attribute::DF};

inline std::string_view to_string(Attribute a) {
  return kAttributeCodes[static_cast<std::size_t>(a)];
}

inline Attribute parse_attribute(std::string_view code) {
  for (std::size_t i = 0; i < kAttributeCodes.size(); ++i)
    if (kAttributeCodes[i] == code) return kAllAttributes[i];
  throw ArgumentError("unknown attribute code '" + std::string(code) + "'");
}

inline bool is_voltage(Attribute a) { return static_cast<int>(a) < 8; }
inline bool is_current(Attribute a) {
  return static_cast<int>(a) >= 8 && static_cast<int>(a) < 16;
}
inline bool is_magnitude(Attribute a) {
  return static_cast<int>(a) < 16 && static_cast<int>(a) % 2 == 0;
}

// ---------------------------------------------------------------------------
// Topology

struct Substation {
  SubstationId id;
  std::string name;
  double x = 0.0;  // abstract km
  double y = 0.0;
};

struct Bus {
  BusId id;
  SubstationId substation_id;
  int voltage_kv = 345;
};

enum class EdgeKind : std::uint8_t { line, transformer };

inline std::string_view to_string(EdgeKind k) {
  return k == EdgeKind::line ? "line" : "transformer";
}

struct Edge {
  EdgeId id;
  EdgeKind kind = EdgeKind::line;
  BusId bus_a;
  BusId bus_b;
};

struct Pmu {
  PmuId id;
  BusId bus_id;
  std::string label;
};

inline bool is_valid_voltage_level(int kv) { return kv == 345 || kv == 138 || kv == 69; }

class GridTopology {
 public:
  struct Neighbor {
    std::size_t bus;  // index into buses()
    bool transformer;
  };

  GridTopology() = default;

  // Builds the lookup indexes. Dangling references and duplicate ids raise
  // IdentifierError; the electrical rules are checked by validate().
  GridTopology(std::vector<Substation> substations, std::vector<Bus> buses,
               std::vector<Edge> edges, std::vector<Pmu> pmus)
      : substations_(std::move(substations)),
        buses_(std::move(buses)),
        edges_(std::move(edges)),
        pmus_(std::move(pmus)) {
    index();
  }

  const std::vector<Substation>& substations() const { return substations_; }
  const std::vector<Bus>& buses() const { return buses_; }
  const std::vector<Edge>& edges() const { return edges_; }
  const std::vector<Pmu>& pmus() const { return pmus_; }

  std::size_t bus_index(BusId id) const {
    auto it = bus_index_.find(id);
    if (it == bus_index_.end()) throw IdentifierError("unknown bus " + to_string(id));
    return it->second;
  }
  bool has_bus(BusId id) const { return bus_index_.contains(id); }

  std::size_t pmu_index(PmuId id) const {
    auto it = pmu_index_.find(id);
    if (it == pmu_index_.end()) throw IdentifierError("unknown PMU " + to_string(id));
    return it->second;
  }
  bool has_pmu(PmuId id) const { return pmu_index_.contains(id); }
  const Pmu& pmu(PmuId id) const { return pmus_[pmu_index(id)]; }

  std::size_t substation_index(SubstationId id) const {
    auto it = substation_index_.find(id);
    if (it == substation_index_.end())
      throw IdentifierError("unknown substation " + to_string(id));
    return it->second;
  }

  const Substation& substation_of_bus(std::size_t bus) const {
    return substations_[substation_index(buses_[bus].substation_id)];
  }
  const Substation& substation_of_pmu(PmuId id) const {
    return substation_of_bus(bus_index(pmu(id).bus_id));
  }

  std::span<const Neighbor> neighbors(std::size_t bus) const {
    return {adjacency_.data() + offsets_[bus], adjacency_.data() + offsets_[bus + 1]};
  }

  std::span<const std::size_t> pmus_at_bus(std::size_t bus) const {
    return {bus_pmus_.data() + bus_pmu_offsets_[bus], bus_pmus_.data() + bus_pmu_offsets_[bus + 1]};
  }

  std::vector<PmuId> pmu_ids() const {
    std::vector<PmuId> out;
    out.reserve(pmus_.size());
    for (const auto& p : pmus_) out.push_back(p.id);
    return out;
  }

  // Electrical consistency; throws FormatError.
  void validate() const {
    for (const auto& b : buses_)
      if (!is_valid_voltage_level(b.voltage_kv))
        throw FormatError("bus " + to_string(b.id) + " has unsupported voltage level " +
                          std::to_string(b.voltage_kv) + " kV");
    for (const auto& e : edges_) {
      const auto& a = buses_[bus_index(e.bus_a)];
      const auto& b = buses_[bus_index(e.bus_b)];
      if (e.bus_a == e.bus_b) throw FormatError("edge " + to_string(e.id) + " is a self-loop");
      if (e.kind == EdgeKind::transformer && a.voltage_kv == b.voltage_kv)
        throw FormatError("transformer " + to_string(e.id) + " joins equal voltage levels");
      if (e.kind == EdgeKind::line && a.voltage_kv != b.voltage_kv)
        throw FormatError("line " + to_string(e.id) + " joins different voltage levels");
    }
    if (buses_.empty()) return;
    std::vector<bool> seen(buses_.size(), false);
    std::deque<std::size_t> queue{0};
    seen[0] = true;
    std::size_t reached = 1;
    while (!queue.empty()) {
      auto u = queue.front();
      queue.pop_front();
      for (const auto& n : neighbors(u))
        if (!seen[n.bus]) {
          seen[n.bus] = true;
          ++reached;
          queue.push_back(n.bus);
        }
    }
    if (reached != buses_.size()) throw FormatError("bus graph is not connected");
  }

 private:
  template <class T, class Key, class Map>
  static void unique_index(const std::vector<T>& items, Key key, Map& out, std::string_view what) {
    out.clear();
    for (std::size_t i = 0; i < items.size(); ++i)
      if (!out.emplace(key(items[i]), i).second)
        throw IdentifierError("duplicate " + std::string(what) + " id " +
                              to_string(key(items[i])));
  }

  void index() {
    unique_index(substations_, [](const Substation& s) { return s.id; }, substation_index_,
                 "substation");
    unique_index(buses_, [](const Bus& b) { return b.id; }, bus_index_, "bus");
    unique_index(pmus_, [](const Pmu& p) { return p.id; }, pmu_index_, "PMU");
    std::unordered_map<EdgeId, std::size_t> edge_ids;
    unique_index(edges_, [](const Edge& e) { return e.id; }, edge_ids, "edge");

    for (const auto& b : buses_) substation_index(b.substation_id);

    std::vector<std::vector<Neighbor>> adj(buses_.size());
    for (const auto& e : edges_) {
      auto a = bus_index(e.bus_a);
      auto b = bus_index(e.bus_b);
      bool tr = e.kind == EdgeKind::transformer;
      adj[a].push_back({b, tr});
      if (a != b) adj[b].push_back({a, tr});
    }
    offsets_.assign(buses_.size() + 1, 0);
    adjacency_.clear();
    for (std::size_t i = 0; i < adj.size(); ++i) {
      adjacency_.insert(adjacency_.end(), adj[i].begin(), adj[i].end());
      offsets_[i + 1] = adjacency_.size();
    }

    std::vector<std::vector<std::size_t>> at_bus(buses_.size());
    for (std::size_t i = 0; i < pmus_.size(); ++i) at_bus[bus_index(pmus_[i].bus_id)].push_back(i);
    bus_pmu_offsets_.assign(buses_.size() + 1, 0);
    bus_pmus_.clear();
    for (std::size_t i = 0; i < at_bus.size(); ++i) {
      bus_pmus_.insert(bus_pmus_.end(), at_bus[i].begin(), at_bus[i].end());
      bus_pmu_offsets_[i + 1] = bus_pmus_.size();
    }
  }

  std::vector<Substation> substations_;
  std::vector<Bus> buses_;
  std::vector<Edge> edges_;
  std::vector<Pmu> pmus_;

  std::unordered_map<SubstationId, std::size_t> substation_index_;
  std::unordered_map<BusId, std::size_t> bus_index_;
  std::unordered_map<PmuId, std::size_t> pmu_index_;
  std::vector<Neighbor> adjacency_;
  std::vector<std::size_t> offsets_{0};
  std::vector<std::size_t> bus_pmus_;
  std::vector<std::size_t> bus_pmu_offsets_{0};
};

// ---------------------------------------------------------------------------
// Graph primitives

inline constexpr int kUnreachable = -1;

// Multi-source BFS over buses. Among equally short paths the one crossing the
// fewest transformers determines transformer_crossings.
struct BusDistances {
  std::vector<int> hops;
  std::vector<int> transformer_crossings;
};

inline BusDistances bus_distances(const GridTopology& topology,
                                  std::span<const std::size_t> sources) {
  const auto n = topology.buses().size();
  BusDistances out{std::vector<int>(n, kUnreachable), std::vector<int>(n, kUnreachable)};
  std::deque<std::size_t> queue;
  for (auto s : sources) {
    if (out.hops[s] == 0) continue;
    out.hops[s] = 0;
    out.transformer_crossings[s] = 0;
    queue.push_back(s);
  }
  while (!queue.empty()) {
    auto u = queue.front();
    queue.pop_front();
    for (const auto& nb : topology.neighbors(u)) {
      int crossings = out.transformer_crossings[u] + (nb.transformer ? 1 : 0);
      if (out.hops[nb.bus] == kUnreachable) {
        out.hops[nb.bus] = out.hops[u] + 1;
        out.transformer_crossings[nb.bus] = crossings;
        queue.push_back(nb.bus);
      } else if (out.hops[nb.bus] == out.hops[u] + 1) {
        out.transformer_crossings[nb.bus] = std::min(out.transformer_crossings[nb.bus], crossings);
      }
    }
  }
  return out;
}

// Shortest path length in edges; nullopt when the buses are disconnected.
inline std::optional<int> hop_distance(const GridTopology& topology, BusId from_bus, BusId to_bus) {
  std::size_t from = topology.bus_index(from_bus);
  std::size_t to = topology.bus_index(to_bus);
  if (from == to) return 0;
  std::array<std::size_t, 1> src{from};
  int h = bus_distances(topology, src).hops[to];
  if (h == kUnreachable) return std::nullopt;
  return h;
}

using PmuPair = std::pair<PmuId, PmuId>;  // first < second

// PMU pairs whose buses share an edge. PMUs on the same bus are not paired.
inline std::set<PmuPair> pmu_adjacency(const GridTopology& topology,
                                       std::span<const PmuId> pmu_set) {
  std::unordered_map<std::size_t, std::vector<PmuId>> by_bus;
  for (auto id : pmu_set) by_bus[topology.bus_index(topology.pmu(id).bus_id)].push_back(id);
  std::set<PmuPair> out;
  for (const auto& e : topology.edges()) {
    auto a = by_bus.find(topology.bus_index(e.bus_a));
    auto b = by_bus.find(topology.bus_index(e.bus_b));
    if (a == by_bus.end() || b == by_bus.end() || a == b) continue;
    for (auto p : a->second)
      for (auto q : b->second) {
        if (p == q) continue;
        out.insert(p < q ? PmuPair{p, q} : PmuPair{q, p});
      }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Series data

// Row-major (tick x PMU) block of samples for one attribute and day. Null
// cells have present == 0; their value slot is zero.
struct SeriesMatrix {
  Attribute attribute = Attribute::VPm;
  Date date{};
  std::int64_t start_tick = 0;
  std::int64_t end_tick = 0;
  std::vector<PmuId> pmu_ids;
  std::vector<double> values;
  std::vector<std::uint8_t> present;

  static SeriesMatrix nulls(Attribute attribute, Date date, std::int64_t start_tick,
                            std::int64_t end_tick, std::vector<PmuId> pmu_ids) {
    SeriesMatrix m{attribute, date, start_tick, end_tick, std::move(pmu_ids), {}, {}};
    auto cells = m.rows() * m.cols();
    m.values.assign(cells, 0.0);
    m.present.assign(cells, 0);
    return m;
  }

  std::size_t rows() const { return static_cast<std::size_t>(end_tick - start_tick); }
  std::size_t cols() const { return pmu_ids.size(); }

  std::optional<double> at(std::size_t row, std::size_t col) const {
    auto i = row * cols() + col;
    if (!present[i]) return std::nullopt;
    return values[i];
  }

  void set(std::size_t row, std::size_t col, std::optional<double> v) {
    auto i = row * cols() + col;
    present[i] = v.has_value() ? 1 : 0;
    values[i] = v.value_or(0.0);
  }

  std::optional<std::size_t> column_of(PmuId id) const {
    auto it = std::find(pmu_ids.begin(), pmu_ids.end(), id);
    if (it == pmu_ids.end()) return std::nullopt;
    return static_cast<std::size_t>(it - pmu_ids.begin());
  }

  void validate() const {
    if (start_tick < 0 || end_tick > kTicksPerDay || start_tick > end_tick)
      throw FormatError("tick range [" + std::to_string(start_tick) + ", " +
                        std::to_string(end_tick) + ") outside the day");
    if (values.size() != rows() * cols() || present.size() != values.size())
      throw FormatError("matrix payload does not match " + std::to_string(rows()) + " x " +
                        std::to_string(cols()));
  }
};

// Equality that compares doubles by bit pattern and ignores the value slot of nulls.
inline bool bit_equal(const SeriesMatrix& a, const SeriesMatrix& b) {
  if (a.attribute != b.attribute || a.date != b.date || a.start_tick != b.start_tick ||
      a.end_tick != b.end_tick || a.pmu_ids != b.pmu_ids || a.present != b.present ||
      a.values.size() != b.values.size())
    return false;
  for (std::size_t i = 0; i < a.values.size(); ++i)
    if (a.present[i] && std::memcmp(&a.values[i], &b.values[i], sizeof(double)) != 0) return false;
  return true;
}

// ---------------------------------------------------------------------------
// Events

enum class EventKind : std::uint8_t { forced, transient, unknown };
enum class Provenance : std::uint8_t { report_text, synthetic_ground_truth };

inline std::string_view to_string(EventKind k) {
  switch (k) {
    case EventKind::forced: return "forced";
    case EventKind::transient: return "transient";
    default: return "unknown";
  }
}

inline std::string_view to_string(Provenance p) {
  return p == Provenance::report_text ? "report_text" : "synthetic_ground_truth";
}

struct EventRecord {
  std::string id;
  std::optional<TimePoint> t_start;
  std::optional<TimePoint> t_end;
  std::optional<double> oscillation_hz;  // nullopt = unknown
  std::vector<PmuId> epicenter_pmus;     // empty = unlinked
  EventKind kind = EventKind::unknown;
  Provenance provenance = Provenance::report_text;
  std::string source;                 // report file name or generator tag
  std::vector<std::string> warnings;  // e.g. "missing_timestamp"

  bool linked() const { return !epicenter_pmus.empty(); }

  void validate() const {
    if (t_start && t_end && *t_end < *t_start)
      throw FormatError("event " + id + " ends before it starts");
    if (oscillation_hz && *oscillation_hz < 0.0)
      throw FormatError("event " + id + " has negative oscillation frequency");
    if (kind == EventKind::forced && !(oscillation_hz && *oscillation_hz > 0.0))
      throw FormatError("forced event " + id + " needs a positive oscillation frequency");
  }

  bool operator==(const EventRecord&) const = default;
};

}  // namespace gridpulse

#endif  // GRIDPULSE_MODEL_HPP

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

#ifndef GRIDPULSE_JSON_IO_HPP
#define GRIDPULSE_JSON_IO_HPP

#include <fstream>
#include <sstream>
#include <string>

#include "json.hpp"

#include "gridpulse/model.hpp"

namespace gridpulse {

using json = nlohmann::json;

inline constexpr std::string_view kTopologySchema = "gridpulse.topology/1";
inline constexpr std::string_view kEventsSchema = "gridpulse.events/1";

template <class Tag>
void to_json(json& j, Id<Tag> id) {
  j = id.value;
}

template <class Tag>
void from_json(const json& j, Id<Tag>& id) {
  id.value = j.get<std::int64_t>();
}

inline json to_json(const GridTopology& t) {
  json subs = json::array(), buses = json::array(), edges = json::array(), pmus = json::array();
  for (const auto& s : t.substations())
    subs.push_back({{"id", s.id}, {"name", s.name}, {"x", s.x}, {"y", s.y}});
  for (const auto& b : t.buses())
    buses.push_back({{"id", b.id}, {"substation_id", b.substation_id}, {"voltage_kv", b.voltage_kv}});
  for (const auto& e : t.edges())
    edges.push_back({{"id", e.id}, {"kind", to_string(e.kind)}, {"bus_a", e.bus_a}, {"bus_b", e.bus_b}});
  for (const auto& p : t.pmus())
    pmus.push_back({{"id", p.id}, {"bus_id", p.bus_id}, {"label", p.label}});
  return {{"schema", kTopologySchema}, {"substations", subs}, {"buses", buses},
          {"edges", edges}, {"pmus", pmus}};
}

// Parses and validates; malformed documents raise FormatError.
inline GridTopology topology_from_json(const json& j) {
  try {
    std::vector<Substation> subs;
    std::vector<Bus> buses;
    std::vector<Edge> edges;
    std::vector<Pmu> pmus;
    for (const auto& s : j.at("substations"))
      subs.push_back({s.at("id").get<SubstationId>(), s.at("name").get<std::string>(),
                      s.at("x").get<double>(), s.at("y").get<double>()});
    for (const auto& b : j.at("buses"))
      buses.push_back({b.at("id").get<BusId>(), b.at("substation_id").get<SubstationId>(),
                       b.at("voltage_kv").get<int>()});
    for (const auto& e : j.at("edges")) {
      auto kind = e.at("kind").get<std::string>();
      if (kind != "line" && kind != "transformer")
        throw FormatError("unknown edge kind '" + kind + "'");
      edges.push_back({e.at("id").get<EdgeId>(),
                       kind == "line" ? EdgeKind::line : EdgeKind::transformer,
                       e.at("bus_a").get<BusId>(), e.at("bus_b").get<BusId>()});
    }
    for (const auto& p : j.at("pmus"))
      pmus.push_back({p.at("id").get<PmuId>(), p.at("bus_id").get<BusId>(),
                      p.value("label", std::string{})});
    GridTopology topology(std::move(subs), std::move(buses), std::move(edges), std::move(pmus));
    topology.validate();
    return topology;
  } catch (const json::exception& e) {
    throw FormatError(std::string("topology JSON: ") + e.what());
  }
}

inline json to_json(const EventRecord& e) {
  json j{{"id", e.id},
         {"kind", to_string(e.kind)},
         {"provenance", to_string(e.provenance)},
         {"epicenter_pmus", e.epicenter_pmus},
         {"source", e.source},
         {"warnings", e.warnings}};
  j["t_start"] = e.t_start ? json(format_time(*e.t_start)) : json(nullptr);
  j["t_end"] = e.t_end ? json(format_time(*e.t_end)) : json(nullptr);
  j["oscillation_hz"] = e.oscillation_hz ? json(*e.oscillation_hz) : json(nullptr);
  return j;
}

inline EventRecord event_from_json(const json& j) {
  try {
    EventRecord e;
    e.id = j.at("id").get<std::string>();
    auto kind = j.at("kind").get<std::string>();
    e.kind = kind == "forced"      ? EventKind::forced
             : kind == "transient" ? EventKind::transient
                                   : EventKind::unknown;
    e.provenance = j.value("provenance", std::string{"report_text"}) == "report_text"
                       ? Provenance::report_text
                       : Provenance::synthetic_ground_truth;
    if (j.contains("t_start") && !j["t_start"].is_null())
      e.t_start = parse_time(j["t_start"].get<std::string>());
    if (j.contains("t_end") && !j["t_end"].is_null())
      e.t_end = parse_time(j["t_end"].get<std::string>());
    if (j.contains("oscillation_hz") && !j["oscillation_hz"].is_null())
      e.oscillation_hz = j["oscillation_hz"].get<double>();
    e.epicenter_pmus = j.value("epicenter_pmus", std::vector<PmuId>{});
    e.source = j.value("source", std::string{});
    e.warnings = j.value("warnings", std::vector<std::string>{});
    e.validate();
    return e;
  } catch (const json::exception& ex) {
    throw FormatError(std::string("event JSON: ") + ex.what());
  }
}

inline json to_json(const std::vector<EventRecord>& events) {
  json arr = json::array();
  for (const auto& e : events) arr.push_back(to_json(e));
  return {{"schema", kEventsSchema}, {"events", arr}};
}

inline std::vector<EventRecord> events_from_json(const json& j) {
  std::vector<EventRecord> out;
  const json& arr = j.is_array() ? j : j.at("events");
  for (const auto& e : arr) out.push_back(event_from_json(e));
  return out;
}

inline json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw FormatError(path + ": " + e.what());
  }
}

inline void write_json_file(const std::string& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw FormatError("cannot write " + path);
  out << j.dump(2) << '\n';
}

}  // namespace gridpulse

#endif  // GRIDPULSE_JSON_IO_HPP

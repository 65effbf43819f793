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

#ifndef GRIDPULSE_SERVICE_HPP
#define GRIDPULSE_SERVICE_HPP

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <list>
#include <map>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "json.hpp"

#include "gridpulse/embed.hpp"
#include "gridpulse/epicluster.hpp"
#include "gridpulse/errors.hpp"
#include "gridpulse/json_io.hpp"
#include "gridpulse/localize.hpp"
#include "gridpulse/model.hpp"
#include "gridpulse/reports.hpp"
#include "gridpulse/spectral.hpp"
#include "gridpulse/store.hpp"

namespace gridpulse {

inline constexpr std::string_view kAnalysisSchema = "gridpulse.analysis/1";
inline constexpr std::string_view kEmbeddingSchema = "gridpulse.embedding/1";
inline constexpr std::string_view kTimelineSchema = "gridpulse.timeline/1";
inline constexpr std::string_view kFrameSchema = "gridpulse.frame/1";
inline constexpr std::string_view kErrorSchema = "gridpulse.error/1";

// ---------------------------------------------------------------------------
// LRU cache of response bodies

class ResponseCache {
 public:
  explicit ResponseCache(std::size_t capacity) : capacity_(capacity) {}

  std::optional<std::string> get(const std::string& key) {
    std::lock_guard lock(mu_);
    auto it = index_.find(key);
    if (it == index_.end()) {
      ++misses_;
      return std::nullopt;
    }
    entries_.splice(entries_.begin(), entries_, it->second);
    ++hits_;
    return it->second->second;
  }

  void put(const std::string& key, std::string value) {
    if (capacity_ == 0) return;
    std::lock_guard lock(mu_);
    if (auto it = index_.find(key); it != index_.end()) {
      it->second->second = std::move(value);
      entries_.splice(entries_.begin(), entries_, it->second);
      return;
    }
    entries_.emplace_front(key, std::move(value));
    index_[key] = entries_.begin();
    while (entries_.size() > capacity_) {
      index_.erase(entries_.back().first);
      entries_.pop_back();
    }
  }

  std::size_t size() const {
    std::lock_guard lock(mu_);
    return entries_.size();
  }
  std::uint64_t hits() const {
    std::lock_guard lock(mu_);
    return hits_;
  }
  std::uint64_t misses() const {
    std::lock_guard lock(mu_);
    return misses_;
  }

 private:
  using Entry = std::pair<std::string, std::string>;
  std::size_t capacity_;
  mutable std::mutex mu_;
  std::list<Entry> entries_;
  std::unordered_map<std::string, std::list<Entry>::iterator> index_;
  std::uint64_t hits_ = 0, misses_ = 0;
};

// ---------------------------------------------------------------------------
// Payload builders shared by the service and the CLI

inline json frame_json(const SpectrumFrame& f, std::optional<double> threshold_pct,
                       bool with_spectra) {
  json j{{"t", format_time(f.window_start)},
         {"start_tick", f.start_tick},
         {"window_s", f.window_seconds},
         {"n", f.n},
         {"gap", f.gap()},
         {"dominant_bin", f.dominant_bin},
         {"dominant_hz", f.dominant_hz},
         {"peak_pmu", f.peak_pmu ? json(*f.peak_pmu) : json(nullptr)},
         {"peak_magnitude", f.peak_magnitude}};
  json ranking = json::array();
  for (const auto& c : rank_epicenter_candidates(f))
    ranking.push_back({{"pmu", c.pmu}, {"magnitude", c.magnitude}});
  j["ranking"] = ranking;
  if (threshold_pct) {
    json flags = json::array();
    for (const auto& fl : flag_pmus(f, *threshold_pct))
      flags.push_back({{"pmu", fl.pmu}, {"magnitude", fl.magnitude}, {"rank", fl.rank}});
    j["flags"] = flags;
  }
  if (with_spectra) {
    json spectra = json::array();
    for (std::size_t c = 0; c < f.pmu_ids.size(); ++c)
      spectra.push_back({{"pmu", f.pmu_ids[c]},
                         {"valid", f.valid[c] != 0},
                         {"magnitudes", f.valid[c] ? json(f.magnitudes[c]) : json(nullptr)}});
    j["spectra"] = spectra;
  }
  return j;
}

inline json to_json(const KdeField& k) {
  return {{"x_min", k.x_min}, {"x_max", k.x_max}, {"y_min", k.y_min}, {"y_max", k.y_max},
          {"nx", k.nx},       {"ny", k.ny},       {"bandwidth", k.bandwidth},
          {"values", k.values}};
}

// ---------------------------------------------------------------------------
// Service

struct ServiceOptions {
  std::size_t cache_entries = 64;
  std::size_t kde_resolution = 128;
};

struct HttpResponse {
  int status = 200;
  std::string body;
};

// Data directory layout:
//   topology.json
//   events.json            (optional; otherwise reports/*.txt are linked at startup)
//   reports/*.txt
//   data/<YYYY-MM-DD>/<attribute>.pmuc
class AnalysisService {
 public:
  AnalysisService(GridTopology topology, std::vector<EventRecord> events, Store store,
                  ServiceOptions options = {})
      : topology_(std::move(topology)),
        events_(std::move(events)),
        store_(std::move(store)),
        options_(options),
        cache_(options.cache_entries) {}

  static AnalysisService open(const std::filesystem::path& dir, ServiceOptions options = {}) {
    namespace fs = std::filesystem;
    if (!fs::is_directory(dir)) throw ArgumentError("data directory " + dir.string() + " not found");
    auto topology = topology_from_json(read_json_file((dir / "topology.json").string()));
    std::vector<EventRecord> events;
    if (fs::exists(dir / "events.json"))
      events = events_from_json(read_json_file((dir / "events.json").string()));
    else if (fs::is_directory(dir / "reports"))
      events = link_report_dir(dir / "reports", topology);
    return AnalysisService(std::move(topology), std::move(events), Store(dir / "data"), options);
  }

  const GridTopology& topology() const { return topology_; }
  const std::vector<EventRecord>& events() const { return events_; }
  const Store& store() const { return store_; }
  const ResponseCache& cache() const { return cache_; }

  // Routes one request. Never throws; failures map to 400/404/405/422/500.
  HttpResponse handle(std::string_view method, std::string_view path,
                      const std::map<std::string, std::string>& query = {},
                      std::string_view body = {}) {
    try {
      return route(method, path, query, body);
    } catch (const json::exception& e) {
      return error(400, "malformed_request", e.what());
    } catch (const RangeError& e) {
      return error(422, "out_of_range", e.what());
    } catch (const IdentifierError& e) {
      return error(404, "not_found", e.what());
    } catch (const ArgumentError& e) {
      return error(400, "bad_parameter", e.what());
    } catch (const std::exception& e) {
      return error(500, "internal", e.what());
    }
  }

  // -------------------------------------------------------------------------
  // Endpoint bodies (also used directly by the CLI)

  json topology_payload() const { return to_json(topology_); }

  json events_payload() const { return to_json(events_); }

  const EventRecord& event(std::string_view id) const {
    for (const auto& e : events_)
      if (e.id == id) return e;
    throw IdentifierError("unknown event '" + std::string(id) + "'");
  }

  struct AnalysisRequest {
    WindowSpec spec;
    std::vector<PmuId> pmu_ids;
    double threshold_pct = 100.0;
    std::optional<std::string> event;
  };

  // Resolves an /analyze body (explicit range or event id) into a window spec.
  AnalysisRequest resolve_analysis(const json& req) const {
    require_object(req);
    AnalysisRequest out;
    auto& spec = out.spec;
    spec.attribute = attribute_of(req);
    if (req.contains("event") && !req["event"].is_null()) {
      const auto& ev = event(req["event"].get<std::string>());
      if (!ev.t_start) throw ArgumentError("event " + ev.id + " has no timestamp");
      spec.t_start = *ev.t_start;
      // Reports with a single timestamp get a 60 s span, clipped to the stored day.
      spec.t_end = ev.t_end && *ev.t_end > spec.t_start ? *ev.t_end
                                                        : spec.t_start + std::chrono::seconds{60};
      auto day = date_of(spec.t_start);
      if (store_.has(spec.attribute, day))
        spec.t_end = std::min(spec.t_end, time_of(day, store_.header(spec.attribute, day).n_ticks));
      out.event = ev.id;
    } else {
      spec.t_start = required_time(req, "from");
      spec.t_end = required_time(req, "to");
    }
    spec.window_seconds = window_of(req);
    spec.stride_seconds = int_or(req, "stride_s", 0);
    spec.spectrum.hann = req.value("hann", false);
    spec.validate();
    out.threshold_pct = req.value("threshold_pct", 100.0);
    if (!(out.threshold_pct > 0.0 && out.threshold_pct <= 100.0))
      throw ArgumentError("threshold_pct must lie in (0, 100]");
    out.pmu_ids = pmu_list(req, "pmu_ids");
    return out;
  }

  json analyze(const json& req) const {
    auto resolved = resolve_analysis(req);
    const auto& spec = resolved.spec;
    const auto& ids = resolved.pmu_ids;
    const double threshold = resolved.threshold_pct;
    json params;
    params["event"] = resolved.event ? json(*resolved.event) : json(nullptr);
    auto frames = compute_frames(store_, spec, ids);
    if (frames.empty()) throw ArgumentError("time range holds no complete window");

    std::size_t focus = 0;
    if (req.contains("focus") && !req["focus"].is_null()) {
      auto t = tick_of(parse_time(req["focus"].get<std::string>()));
      auto n = static_cast<std::int64_t>(spec.samples());
      auto it = std::find_if(frames.begin(), frames.end(), [&](const SpectrumFrame& f) {
        return t >= f.start_tick && t < f.start_tick + n;
      });
      if (it == frames.end()) throw RangeError("focus time outside the analysed windows");
      focus = static_cast<std::size_t>(it - frames.begin());
    } else {
      // Strongest frame, earliest on ties.
      for (std::size_t i = 1; i < frames.size(); ++i)
        if (frames[i].peak_magnitude > frames[focus].peak_magnitude) focus = i;
    }
    const auto& ff = frames[focus];

    params["from"] = format_time(spec.t_start);
    params["to"] = format_time(spec.t_end);
    params["window_s"] = spec.window_seconds;
    params["stride_s"] = spec.stride();
    params["attribute"] = to_string(spec.attribute);
    params["threshold_pct"] = threshold;
    params["pmu_ids"] = ids;
    params["hann"] = spec.spectrum.hann;
    params["focus"] = format_time(ff.window_start);

    json out{{"schema", kAnalysisSchema}, {"params", params}};
    json fr = json::array();
    for (const auto& f : frames) fr.push_back(frame_json(f, threshold, false));
    out["frames"] = fr;

    json focus_json = frame_json(ff, threshold, true);
    focus_json["index"] = focus;
    std::optional<PmuId> reference;
    if (req.contains("reference_pmu") && !req["reference_pmu"].is_null()) {
      reference = req["reference_pmu"].get<PmuId>();
      check_pmu(*reference);
    } else {
      reference = ff.peak_pmu;
    }
    if (reference && !ff.gap()) {
      json corr = json::array();
      for (const auto& [id, r] : correlation_to_reference(ff, *reference))
        corr.push_back({{"pmu", id}, {"r", r}});
      focus_json["correlations"] = {{"reference", *reference}, {"values", corr}};
      focus_json["kde"] = to_json(contour(ff));
    } else {
      focus_json["correlations"] = nullptr;
      focus_json["kde"] = nullptr;
    }
    out["flags"] = focus_json["flags"];
    out["ranking"] = focus_json["ranking"];
    out["focus"] = std::move(focus_json);
    return out;
  }

  json dendrogram(const json& req) const {
    require_object(req);
    auto epicenters = pmu_list(req, "epicenter_ids", false);
    if (epicenters.empty()) throw ArgumentError("epicenter_ids must not be empty");
    auto selected = pmu_list(req, "selected_ids");
    auto at = required_time(req, "at");
    int window = window_of(req);
    auto attribute = attribute_of(req);
    DendrogramOptions options;
    json k = nullptr;
    if (req.contains("k") && !req["k"].is_null()) {
      auto kv = req["k"].get<long long>();
      if (kv < 1) throw ArgumentError("k must be positive");
      options.k_policy = KPolicy::fixed(static_cast<std::size_t>(kv));
      k = kv;
    }
    std::set<PmuId> cover(epicenters.begin(), epicenters.end());
    cover.insert(selected.begin(), selected.end());
    std::vector<PmuId> ids(cover.begin(), cover.end());
    auto frame = frame_at(store_, attribute, at, window, ids);
    auto model = build_dendrogram(topology_, epicenters, selected, frame, options);
    json out = to_json(model);
    out["params"] = {{"epicenter_ids", epicenters}, {"selected_ids", selected},
                     {"at", format_time(frame.window_start)}, {"window_s", window},
                     {"attribute", to_string(attribute)}, {"k", k}};
    return out;
  }

  json embedding(const json& req) const {
    require_object(req);
    auto selected = pmu_list(req, "selected_ids");
    auto at = required_time(req, "at");
    int window = window_of(req);
    auto attribute = attribute_of(req);
    TsneOptions options;
    options.perplexity = req.value("perplexity", options.perplexity);
    options.seed = req.value("seed", options.seed);
    options.iterations = req.value("iterations", options.iterations);
    if (options.iterations < 1 || options.iterations > 10000)
      throw ArgumentError("iterations must lie in [1, 10000]");
    std::optional<double> radius;
    if (req.contains("collision_radius") && !req["collision_radius"].is_null())
      radius = req["collision_radius"].get<double>();

    auto frame = frame_at(store_, attribute, at, window, selected);
    std::vector<PmuId> ids, invalid;
    std::vector<std::vector<double>> spectra;
    for (std::size_t c = 0; c < frame.pmu_ids.size(); ++c) {
      if (frame.valid[c]) {
        ids.push_back(frame.pmu_ids[c]);
        spectra.push_back(frame.magnitudes[c]);
      } else {
        invalid.push_back(frame.pmu_ids[c]);
      }
    }
    auto tsne = tsne_embed(distance_matrix(spectra), options);

    std::vector<PmuId> epicenters;
    if (req.contains("epicenter_ids") && !req["epicenter_ids"].is_null())
      epicenters = pmu_list(req, "epicenter_ids", false);
    else if (frame.peak_pmu)
      epicenters = {*frame.peak_pmu};

    json points = json::array();
    for (std::size_t i = 0; i < ids.size(); ++i)
      points.push_back({{"pmu", ids[i]}, {"x", tsne.points[i].x}, {"y", tsne.points[i].y}});
    json out{{"schema", kEmbeddingSchema}, {"points", points}, {"invalid", invalid},
             {"kl", tsne.kl.empty() ? json(nullptr) : json(tsne.kl.back())},
             {"dominant_hz", frame.dominant_hz}};
    if (radius) {
      auto res = resolve_collisions(tsne.points, ids, *radius);
      json resolved = json::array();
      for (std::size_t i = 0; i < ids.size(); ++i)
        resolved.push_back({{"pmu", ids[i]}, {"x", res.points[i].x}, {"y", res.points[i].y}});
      out["collisions"] = {{"radius", *radius}, {"points", resolved},
                           {"overlaps", res.overlaps}, {"iterations", res.iterations}};
    } else {
      out["collisions"] = nullptr;
    }
    json rings = json::array();
    bool embedded = std::any_of(epicenters.begin(), epicenters.end(), [&](PmuId e) {
      return std::find(ids.begin(), ids.end(), e) != ids.end();
    });
    if (embedded)
      for (const auto& r : hop_rings(topology_, epicenters, ids, tsne.points))
        rings.push_back({{"hop", r.hop}, {"radius", r.radius}, {"count", r.count}});
    out["hop_rings"] = rings;
    out["params"] = {{"selected_ids", selected}, {"at", format_time(frame.window_start)},
                     {"window_s", window}, {"attribute", to_string(attribute)},
                     {"perplexity", options.perplexity}, {"seed", options.seed},
                     {"iterations", options.iterations}, {"epicenter_ids", epicenters},
                     {"collision_radius", radius ? json(*radius) : json(nullptr)}};
    return out;
  }

  json timeline(const std::map<std::string, std::string>& query) const {
    auto get = [&](const std::string& k) -> std::optional<std::string> {
      auto it = query.find(k);
      if (it == query.end() || it->second.empty()) return std::nullopt;
      return it->second;
    };
    auto from = get("from"), to = get("to");
    if (!from || !to) throw ArgumentError("timeline needs from and to");
    WindowSpec spec;
    spec.t_start = parse_time(*from);
    spec.t_end = parse_time(*to);
    spec.window_seconds = get("window_s") ? parse_int(*get("window_s"), "window_s") : 2;
    spec.stride_seconds = get("stride_s") ? parse_int(*get("stride_s"), "stride_s") : 0;
    spec.attribute = parse_attribute(get("attribute").value_or("VPm"));
    std::vector<PmuId> ids;
    if (auto list = get("pmu_ids")) {
      std::stringstream ss(*list);
      std::string item;
      while (std::getline(ss, item, ',')) ids.push_back(PmuId{parse_int(item, "pmu_ids")});
      for (auto id : ids) check_pmu(id);
    } else {
      ids = topology_.pmu_ids();
    }
    auto frames = compute_frames(store_, spec, ids);
    json entries = json::array();
    for (const auto& e : timeline_of(frames))
      entries.push_back({{"t", format_time(e.t)}, {"f_star", e.f_star}, {"gap", e.gap()},
                         {"peak_pmu", e.peak_pmu ? json(*e.peak_pmu) : json(nullptr)},
                         {"peak_magnitude", e.peak_magnitude}});
    return {{"schema", kTimelineSchema},
            {"entries", entries},
            {"params",
             {{"from", format_time(spec.t_start)}, {"to", format_time(spec.t_end)},
              {"window_s", spec.window_seconds}, {"stride_s", spec.stride()},
              {"attribute", to_string(spec.attribute)}, {"pmu_ids", ids}}}};
  }

  static json schema_index() {
    return {{"topology", kTopologySchema},   {"events", kEventsSchema},
            {"analysis", kAnalysisSchema},   {"dendrogram", kDendrogramSchema},
            {"embedding", kEmbeddingSchema}, {"timeline", kTimelineSchema},
            {"frame", kFrameSchema},         {"error", kErrorSchema}};
  }

  static json schema(std::string_view name);

 private:
  HttpResponse route(std::string_view method, std::string_view path,
                     const std::map<std::string, std::string>& query, std::string_view body) {
    auto is = [&](std::string_view m, std::string_view p) { return method == m && path == p; };
    if (is("GET", "/topology")) return ok(topology_payload());
    if (is("GET", "/events")) return ok(events_payload());
    if (method == "GET" && path.starts_with("/events/"))
      return ok(to_json(event(path.substr(8))));
    if (is("GET", "/schema")) return ok({{"schemas", schema_index()}});
    if (method == "GET" && path.starts_with("/schema/")) return ok(schema(path.substr(8)));

    static const std::set<std::string_view> posts = {"/analyze", "/dendrogram", "/embedding"};
    if (posts.contains(path) || path == "/timeline") {
      if ((path == "/timeline") != (method == "GET") || (method != "GET" && method != "POST"))
        return error(405, "method_not_allowed", std::string(method) + " " + std::string(path));
      std::string key = std::string(method) + " " + std::string(path) + "\n";
      json req;
      if (path == "/timeline") {
        key += json(query).dump();
      } else {
        req = body.empty() ? json::object() : json::parse(body);
        key += req.dump();
      }
      if (auto hit = cache_.get(key)) return {200, *hit};
      json out = path == "/analyze"      ? analyze(req)
                 : path == "/dendrogram" ? dendrogram(req)
                 : path == "/embedding"  ? embedding(req)
                                         : timeline(query);
      auto resp = ok(out);
      cache_.put(key, resp.body);
      return resp;
    }
    if (path == "/topology" || path == "/events" || path == "/schema")
      return error(405, "method_not_allowed", std::string(method) + " " + std::string(path));
    return error(404, "not_found", "no route " + std::string(path));
  }

  static HttpResponse ok(const json& j) { return {200, j.dump()}; }

  static HttpResponse error(int status, std::string_view kind, std::string_view message) {
    json j{{"schema", kErrorSchema},
           {"error", {{"status", status}, {"kind", kind}, {"message", message}}}};
    return {status, j.dump()};
  }

  static void require_object(const json& req) {
    if (!req.is_object()) throw ArgumentError("request body must be a JSON object");
  }

  static TimePoint required_time(const json& req, const char* key) {
    if (!req.contains(key) || req[key].is_null()) throw ArgumentError(std::string("missing ") + key);
    return parse_time(req[key].get<std::string>());
  }

  static int int_or(const json& req, const char* key, int fallback) {
    if (!req.contains(key) || req[key].is_null()) return fallback;
    return req[key].get<int>();
  }

  static int window_of(const json& req) {
    int w = int_or(req, "window_s", 2);
    if (w != 2 && w != 5 && w != 10) throw ArgumentError("window_s must be 2, 5 or 10");
    return w;
  }

  static Attribute attribute_of(const json& req) {
    return parse_attribute(req.value("attribute", std::string("VPm")));
  }

  static std::int64_t parse_int(const std::string& s, const char* what) {
    try {
      std::size_t pos = 0;
      auto v = std::stoll(s, &pos);
      if (pos != s.size()) throw std::invalid_argument(s);
      return v;
    } catch (const std::logic_error&) {
      throw ArgumentError(std::string("bad integer for ") + what + ": '" + s + "'");
    }
  }

  void check_pmu(PmuId id) const {
    if (!topology_.has_pmu(id)) throw IdentifierError("unknown PMU " + to_string(id));
  }

  // Sorted, de-duplicated ids; absent or null means every PMU when all_default.
  std::vector<PmuId> pmu_list(const json& req, const char* key, bool all_default = true) const {
    if (!req.contains(key) || req[key].is_null())
      return all_default ? topology_.pmu_ids() : std::vector<PmuId>{};
    auto ids = req[key].get<std::vector<PmuId>>();
    std::sort(ids.begin(), ids.end());
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
    for (auto id : ids) check_pmu(id);
    if (all_default && ids.empty()) throw ArgumentError(std::string(key) + " must not be empty");
    return ids;
  }

  // Peak-magnitude contour over substation positions.
  KdeField contour(const SpectrumFrame& f) const {
    std::vector<Point2> pos;
    std::vector<double> w;
    for (std::size_t c = 0; c < f.pmu_ids.size(); ++c) {
      auto m = f.magnitude_at_dominant(c);
      if (!m) continue;
      const auto& s = topology_.substation_of_pmu(f.pmu_ids[c]);
      pos.push_back({s.x, s.y});
      w.push_back(*m);
    }
    KdeOptions o;
    o.resolution = options_.kde_resolution;
    return kde_field(pos, w, o);
  }

  GridTopology topology_;
  std::vector<EventRecord> events_;
  Store store_;
  ServiceOptions options_;
  ResponseCache cache_;
};

// JSON Schema documents for every versioned payload.
inline json AnalysisService::schema(std::string_view name) {
  auto obj = [](json props, json required) {
    return json{{"type", "object"}, {"properties", std::move(props)}, {"required", std::move(required)}};
  };
  const json num{{"type", "number"}}, integer{{"type", "integer"}}, str{{"type", "string"}},
      boolean{{"type", "boolean"}}, time{{"type", "string"}, {"format", "date-time"}};
  const json ids{{"type", "array"}, {"items", integer}};
  const json nums{{"type", "array"}, {"items", num}};
  auto nullable = [](json t) { return json{{"anyOf", {std::move(t), {{"type", "null"}}}}}; };
  auto arr = [](json items) { return json{{"type", "array"}, {"items", std::move(items)}}; };

  json candidate = obj({{"pmu", integer}, {"magnitude", num}}, {"pmu", "magnitude"});
  json flag = obj({{"pmu", integer}, {"magnitude", num}, {"rank", integer}}, {"pmu", "magnitude", "rank"});
  json frame = obj({{"t", time}, {"start_tick", integer}, {"window_s", integer}, {"n", integer},
                    {"gap", boolean}, {"dominant_bin", integer}, {"dominant_hz", num},
                    {"peak_pmu", nullable(integer)}, {"peak_magnitude", num},
                    {"ranking", arr(candidate)}, {"flags", arr(flag)},
                    {"spectra", arr(obj({{"pmu", integer}, {"valid", boolean}, {"magnitudes", nullable(nums)}},
                                        {"pmu", "valid", "magnitudes"}))}},
                   {"t", "start_tick", "gap", "dominant_hz", "peak_pmu", "ranking"});
  json kde = obj({{"x_min", num}, {"x_max", num}, {"y_min", num}, {"y_max", num}, {"nx", integer},
                  {"ny", integer}, {"bandwidth", num}, {"values", nums}},
                 {"nx", "ny", "values"});
  json point = obj({{"pmu", integer}, {"x", num}, {"y", num}}, {"pmu", "x", "y"});

  json doc;
  if (name == "topology") {
    doc = obj({{"schema", str},
               {"substations", arr(obj({{"id", integer}, {"name", str}, {"x", num}, {"y", num}}, {"id", "name", "x", "y"}))},
               {"buses", arr(obj({{"id", integer}, {"substation_id", integer}, {"voltage_kv", integer}}, {"id", "substation_id", "voltage_kv"}))},
               {"edges", arr(obj({{"id", integer}, {"kind", {{"enum", {"line", "transformer"}}}}, {"bus_a", integer}, {"bus_b", integer}}, {"id", "kind", "bus_a", "bus_b"}))},
               {"pmus", arr(obj({{"id", integer}, {"bus_id", integer}, {"label", str}}, {"id", "bus_id"}))}},
              {"substations", "buses", "edges", "pmus"});
  } else if (name == "events") {
    json ev = obj({{"id", str}, {"kind", {{"enum", {"forced", "transient", "unknown"}}}},
                   {"provenance", {{"enum", {"report_text", "synthetic_ground_truth"}}}},
                   {"t_start", nullable(time)}, {"t_end", nullable(time)},
                   {"oscillation_hz", nullable(num)}, {"epicenter_pmus", ids}, {"source", str},
                   {"warnings", arr(str)}},
                  {"id", "kind", "epicenter_pmus"});
    doc = obj({{"schema", str}, {"events", arr(ev)}}, {"events"});
  } else if (name == "frame") {
    doc = frame;
  } else if (name == "analysis") {
    json focus = frame;
    focus["properties"]["index"] = integer;
    focus["properties"]["kde"] = nullable(kde);
    focus["properties"]["correlations"] = nullable(
        obj({{"reference", integer}, {"values", arr(obj({{"pmu", integer}, {"r", num}}, {"pmu", "r"}))}},
            {"reference", "values"}));
    doc = obj({{"schema", str}, {"params", {{"type", "object"}}}, {"frames", arr(frame)},
               {"flags", arr(flag)}, {"ranking", arr(candidate)}, {"focus", focus}},
              {"schema", "params", "frames", "flags", "ranking", "focus"});
  } else if (name == "dendrogram") {
    json box = obj({{"min", num}, {"q1", num}, {"median", num}, {"q3", num}, {"max", num}},
                   {"min", "q1", "median", "q3", "max"});
    json cluster = obj({{"id", str}, {"hop", integer}, {"pmus", ids}, {"average_spectrum", nums},
                        {"swatch", num}, {"box", box}, {"self_link_count", integer},
                        {"mean_silhouette", nullable(num)}},
                       {"id", "hop", "pmus", "average_spectrum", "swatch", "box"});
    doc = obj({{"schema", str}, {"params", {{"type", "object"}}}, {"dominant_hz", num},
               {"dominant_bin", integer}, {"root", cluster},
               {"layers", arr(obj({{"hop", integer}, {"k", integer}, {"total_pmus", integer}, {"silhouette", nullable(num)}}, {"hop", "k", "total_pmus", "silhouette"}))},
               {"clusters", arr(cluster)},
               {"links", arr(obj({{"kind", {{"enum", {"self", "intra_hop", "inter_hop"}}}}, {"from", str}, {"to", str}, {"count", integer}, {"flow_weight", nullable(num)}}, {"kind", "from", "to", "count"}))},
               {"flows", arr(obj({{"from", str}, {"to", str}, {"l1_distance", num}, {"weight", num}, {"link_count", integer}}, {"from", "to", "weight"}))},
               {"unreachable", ids}, {"invalid", ids}},
              {"schema", "root", "layers", "clusters", "links", "flows"});
  } else if (name == "embedding") {
    doc = obj({{"schema", str}, {"params", {{"type", "object"}}}, {"points", arr(point)},
               {"invalid", ids}, {"kl", nullable(num)}, {"dominant_hz", num},
               {"collisions", nullable(obj({{"radius", num}, {"points", arr(point)}, {"overlaps", integer}, {"iterations", integer}}, {"radius", "points", "overlaps"}))},
               {"hop_rings", arr(obj({{"hop", integer}, {"radius", num}, {"count", integer}}, {"hop", "radius", "count"}))}},
              {"schema", "points", "hop_rings"});
  } else if (name == "timeline") {
    doc = obj({{"schema", str}, {"params", {{"type", "object"}}},
               {"entries", arr(obj({{"t", time}, {"f_star", num}, {"gap", boolean}, {"peak_pmu", nullable(integer)}, {"peak_magnitude", num}}, {"t", "f_star", "gap", "peak_pmu"}))}},
              {"schema", "entries"});
  } else if (name == "error") {
    doc = obj({{"schema", str},
               {"error", obj({{"status", integer}, {"kind", str}, {"message", str}}, {"status", "kind", "message"})}},
              {"error"});
  } else {
    throw IdentifierError("unknown schema '" + std::string(name) + "'");
  }
  doc["$id"] = schema_index()[std::string(name)];
  doc["$schema"] = "https://json-schema.org/draft/2020-12/schema";
  return doc;
}

// Data directory from an explicit flag, else $GRIDPULSE_DATA.
inline std::filesystem::path resolve_data_dir(const std::string& flag) {
  if (!flag.empty()) return flag;
  if (const char* env = std::getenv("GRIDPULSE_DATA"); env && *env) return env;
  throw ArgumentError("no data directory: pass --data or set GRIDPULSE_DATA");
}

}  // namespace gridpulse

#endif  // GRIDPULSE_SERVICE_HPP

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

// gridpulse command-line tool.

#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"

#include "gridpulse/dataset.hpp"
#include "gridpulse/reports.hpp"
#include "gridpulse/service.hpp"
#include "gridpulse/service_http.hpp"
#include "gridpulse/store.hpp"

using namespace gridpulse;

namespace {

void print(const json& j, bool pretty) { std::cout << (pretty ? j.dump(2) : j.dump()) << '\n'; }

// CSV with a `tick` column followed by one column per PMU id; empty cells are nulls.
SeriesMatrix read_csv(const std::string& path, Attribute attribute, Date date) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open " + path);
  auto split = [](const std::string& line) {
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    return cells;
  };
  std::string line;
  if (!std::getline(in, line)) throw FormatError(path + ": empty file");
  auto head = split(line);
  if (head.empty() || head[0] != "tick") throw FormatError(path + ": first column must be 'tick'");
  std::vector<PmuId> ids;
  for (std::size_t i = 1; i < head.size(); ++i) ids.push_back(PmuId{std::stoll(head[i])});
  std::vector<std::int64_t> ticks;
  std::vector<std::vector<std::string>> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto cells = split(line);
    if (cells.size() != head.size()) throw FormatError(path + ": ragged row '" + line + "'");
    ticks.push_back(std::stoll(cells[0]));
    rows.push_back(std::move(cells));
  }
  if (rows.empty()) throw FormatError(path + ": no rows");
  for (std::size_t i = 1; i < ticks.size(); ++i)
    if (ticks[i] != ticks[i - 1] + 1) throw FormatError(path + ": ticks must be consecutive");
  auto m = SeriesMatrix::nulls(attribute, date, ticks.front(), ticks.back() + 1, ids);
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (std::size_t c = 0; c < ids.size(); ++c)
      if (!rows[r][c + 1].empty()) m.set(r, c, std::stod(rows[r][c + 1]));
  return m;
}

json inspect_file(const std::string& path, bool stats) {
  DayFileReader reader(path);
  const auto& h = reader.header();
  std::uint64_t compressed = 0;
  for (const auto& c : reader.layout().chunks) compressed += c.length;
  json out{{"attribute", to_string(h.attribute)},
           {"date", format_date(h.date)},
           {"sample_rate", h.sample_rate},
           {"row_groups", h.row_group_count},
           {"rows_per_group", h.rows_per_group},
           {"n_ticks", h.n_ticks},
           {"pmu_ids", h.pmu_ids},
           {"file_bytes", reader.layout().file_size},
           {"chunk_bytes", compressed}};
  if (!stats) return out;
  reader.verify();
  ReadStats rs;
  auto m = reader.read(h.pmu_ids, 0, h.n_ticks, &rs);
  json cols = json::array();
  std::uint64_t present_total = 0;
  for (std::size_t c = 0; c < m.cols(); ++c) {
    std::uint64_t present = 0;
    double lo = 0, hi = 0, sum = 0;
    for (std::size_t t = 0; t < m.rows(); ++t) {
      auto v = m.at(t, c);
      if (!v) continue;
      if (present == 0) lo = hi = *v;
      lo = std::min(lo, *v);
      hi = std::max(hi, *v);
      sum += *v;
      ++present;
    }
    present_total += present;
    cols.push_back({{"pmu", h.pmu_ids[c]},
                    {"present", present},
                    {"nulls", m.rows() - present},
                    {"min", present ? json(lo) : json(nullptr)},
                    {"max", present ? json(hi) : json(nullptr)},
                    {"mean", present ? json(sum / double(present)) : json(nullptr)}});
  }
  out["columns"] = cols;
  out["checksums"] = "ok";
  out["raw_value_bytes"] = present_total * 8;
  out["compression_ratio"] = compressed ? double(present_total * 8) / double(compressed) : 0.0;
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"gridpulse: oscillation analysis over synchronized grid sensor data"};
  app.require_subcommand(1);
  app.fallthrough();
  bool pretty = false;
  app.add_flag("--pretty", pretty, "Indent JSON output");

  // generate
  auto* gen = app.add_subcommand("generate", "Write a synthetic dataset with ground truth");
  DatasetParams gp;
  std::string gen_out, gen_date = "2017-04-20", gen_attrs;
  gen->add_option("--seed", gp.seed, "RNG seed")->capture_default_str();
  gen->add_option("--substations", gp.substations, "Substation count")->capture_default_str();
  gen->add_option("--days", gp.days, "Number of days")->capture_default_str();
  gen->add_option("--date", gen_date, "First day (YYYY-MM-DD)")->capture_default_str();
  gen->add_option("--minutes", gp.minutes, "Simulated minutes per day")->capture_default_str();
  gen->add_option("--attributes", gen_attrs, "Comma-separated attribute codes (default: all 18)");
  gen->add_option("--noise", gp.noise_fraction, "Noise sigma as a fraction of event amplitude")
      ->capture_default_str();
  gen->add_option("--dropout", gp.dropout_probability, "Dropout probability per PMU and block")
      ->capture_default_str();
  gen->add_option("--coverage", gp.topology.pmu_coverage, "Fraction of buses with a PMU")
      ->capture_default_str();
  bool full_day = false;
  gen->add_flag("--full-day", full_day, "Pad day files to 96 row groups");
  gen->add_option("--out", gen_out, "Output directory")->required();

  // ingest
  auto* ing = app.add_subcommand("ingest", "Write a CSV series into a store day file");
  std::string ing_csv, ing_attr = "VPm", ing_date, ing_store;
  bool ing_dense = false;
  ing->add_option("--csv", ing_csv, "CSV with a tick column and one column per PMU id")->required();
  ing->add_option("--attr", ing_attr, "Attribute code")->capture_default_str();
  ing->add_option("--date", ing_date, "Day (YYYY-MM-DD)")->required();
  ing->add_option("--store", ing_store, "Store root (the data/ directory of a dataset)")->required();
  ing->add_flag("--dense", ing_dense, "Only cover the CSV's ticks instead of a full day");

  // inspect
  auto* ins = app.add_subcommand("inspect", "Describe a day file");
  std::string ins_file;
  bool ins_stats = false;
  ins->add_option("file", ins_file, "Day file (.pmuc)")->required();
  ins->add_flag("--stats", ins_stats, "Verify checksums and report per-PMU statistics");

  // shared analysis options
  std::string data_dir, attr = "VPm", at;
  int window = 2;
  auto data_opt = [&](CLI::App* c) {
    c->add_option("--data", data_dir, "Dataset directory (default: $GRIDPULSE_DATA)");
  };

  auto* ana = app.add_subcommand("analyze", "Stream spectrum frames as JSON lines");
  std::string ana_event, ana_from, ana_to;
  double threshold = 100.0;
  int stride = 0;
  std::vector<std::int64_t> ana_pmus;
  data_opt(ana);
  auto* ev_opt = ana->add_option("--event", ana_event, "Event id");
  ana->add_option("--from", ana_from, "Range start (ISO-8601 UTC)")->excludes(ev_opt);
  ana->add_option("--to", ana_to, "Range end (ISO-8601 UTC)")->excludes(ev_opt);
  ana->add_option("--window", window, "Window seconds (2, 5 or 10)")->capture_default_str();
  ana->add_option("--stride", stride, "Stride seconds (default: window)");
  ana->add_option("--attr", attr, "Attribute code")->capture_default_str();
  ana->add_option("--threshold", threshold, "Flag threshold percentage")->capture_default_str();
  ana->add_option("--pmus", ana_pmus, "PMU ids (default: all)")->delimiter(',');

  auto* tl = app.add_subcommand("timeline", "Main oscillation frequency per window");
  std::string tl_from, tl_to;
  data_opt(tl);
  tl->add_option("--from", tl_from, "Range start")->required();
  tl->add_option("--to", tl_to, "Range end")->required();
  tl->add_option("--window", window, "Window seconds")->capture_default_str();
  tl->add_option("--stride", stride, "Stride seconds");
  tl->add_option("--attr", attr, "Attribute code")->capture_default_str();

  auto* den = app.add_subcommand("dendrogram", "Epicentric hop-layered cluster dendrogram");
  std::vector<std::int64_t> epicenters, selected;
  int k = 0;
  data_opt(den);
  den->add_option("--epicenter", epicenters, "Epicenter PMU ids")->delimiter(',')->required();
  den->add_option("--select", selected, "Selected PMU ids (default: all)")->delimiter(',');
  den->add_option("--at", at, "Window start")->required();
  den->add_option("--window", window, "Window seconds")->capture_default_str();
  den->add_option("--attr", attr, "Attribute code")->capture_default_str();
  den->add_option("--k", k, "Clusters per layer (default: silhouette choice)");

  auto* emb = app.add_subcommand("embedding", "t-SNE layout of PMU spectra");
  double perplexity = 10.0, radius = 0.0;
  std::uint64_t seed = 42;
  data_opt(emb);
  emb->add_option("--select", selected, "Selected PMU ids (default: all)")->delimiter(',');
  emb->add_option("--epicenter", epicenters, "Epicenter PMU ids for hop rings")->delimiter(',');
  emb->add_option("--at", at, "Window start")->required();
  emb->add_option("--window", window, "Window seconds")->capture_default_str();
  emb->add_option("--attr", attr, "Attribute code")->capture_default_str();
  emb->add_option("--perplexity", perplexity, "Perplexity")->capture_default_str();
  emb->add_option("--seed", seed, "Seed")->capture_default_str();
  emb->add_option("--collision-radius", radius, "Resolve overlaps at this point radius");

  auto* lr = app.add_subcommand("link-reports", "Link report text files to PMUs");
  std::string lr_dir, lr_topology;
  lr->add_option("dir", lr_dir, "Directory of .txt reports")->required();
  lr->add_option("--topology", lr_topology, "Topology JSON (default: <dir>/../topology.json)");

  auto* srv = app.add_subcommand("serve", "Run the HTTP/JSON analysis service");
  std::string host = "127.0.0.1";
  int port = 8080;
  std::size_t cache_entries = 64;
  data_opt(srv);
  srv->add_option("--host", host, "Bind address")->capture_default_str();
  srv->add_option("--port", port, "Port (0 picks a free one)")->capture_default_str();
  srv->add_option("--cache", cache_entries, "LRU cache entries")->capture_default_str();
  app.set_config("--config", "", "INI/TOML config file; serve options go under [serve]");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*gen) {
      gp.first_day = parse_date(gen_date);
      if (!gen_attrs.empty()) {
        gp.attributes.clear();
        std::stringstream ss(gen_attrs);
        std::string code;
        while (std::getline(ss, code, ',')) gp.attributes.push_back(parse_attribute(code));
      }
      gp.write.dense = !full_day;
      auto s = write_dataset(gen_out, gp);
      json events = json::array();
      for (const auto& e : s.events) events.push_back(to_json(e));
      print({{"out", gen_out},
             {"substations", s.topology.substations().size()},
             {"buses", s.topology.buses().size()},
             {"edges", s.topology.edges().size()},
             {"pmus", s.topology.pmus().size()},
             {"files", s.files.size()},
             {"events", events}},
            pretty);
    } else if (*ing) {
      auto m = read_csv(ing_csv, parse_attribute(ing_attr), parse_date(ing_date));
      Store store(ing_store);
      store.write_day(m, {.dense = ing_dense, .compression_level = 6});
      print({{"written", store.path_for(m.attribute, m.date).string()},
             {"pmus", m.cols()},
             {"ticks", m.rows()}},
            pretty);
    } else if (*ins) {
      print(inspect_file(ins_file, ins_stats), pretty);
    } else if (*lr) {
      std::filesystem::path dir(lr_dir);
      auto topo_path = lr_topology.empty() ? dir.parent_path() / "topology.json"
                                           : std::filesystem::path(lr_topology);
      auto topo = topology_from_json(read_json_file(topo_path.string()));
      print(to_json(link_report_dir(dir, topo)), pretty);
    } else {
      auto svc = AnalysisService::open(resolve_data_dir(data_dir), {.cache_entries = cache_entries,
                                                                     .kde_resolution = 128});
      if (*ana) {
        json req{{"window_s", window}, {"attribute", attr}, {"threshold_pct", threshold}};
        if (!ana_event.empty()) {
          req["event"] = ana_event;
        } else {
          if (ana_from.empty() || ana_to.empty()) throw ArgumentError("give --event or --from/--to");
          req["from"] = ana_from;
          req["to"] = ana_to;
        }
        if (stride > 0) req["stride_s"] = stride;
        if (!ana_pmus.empty()) req["pmu_ids"] = ana_pmus;
        auto r = svc.resolve_analysis(req);
        for (const auto& f : compute_frames(svc.store(), r.spec, r.pmu_ids)) {
          auto j = frame_json(f, r.threshold_pct, true);
          j["schema"] = kFrameSchema;
          print(j, pretty);
        }
      } else if (*tl) {
        std::map<std::string, std::string> q{{"from", tl_from}, {"to", tl_to},
                                             {"window_s", std::to_string(window)},
                                             {"attribute", attr}};
        if (stride > 0) q["stride_s"] = std::to_string(stride);
        print(svc.timeline(q), pretty);
      } else if (*den) {
        json req{{"epicenter_ids", epicenters}, {"at", at}, {"window_s", window}, {"attribute", attr}};
        if (!selected.empty()) req["selected_ids"] = selected;
        if (k > 0) req["k"] = k;
        print(svc.dendrogram(req), pretty);
      } else if (*emb) {
        json req{{"at", at}, {"window_s", window}, {"attribute", attr},
                 {"perplexity", perplexity}, {"seed", seed}};
        if (!selected.empty()) req["selected_ids"] = selected;
        if (!epicenters.empty()) req["epicenter_ids"] = epicenters;
        if (radius > 0.0) req["collision_radius"] = radius;
        print(svc.embedding(req), pretty);
      } else if (*srv) {
        bool ok = serve(svc, host, port, [&](int bound) {
          std::cerr << "gridpulse: serving " << svc.topology().pmus().size() << " PMUs on http://"
                    << host << ':' << bound << '\n';
        });
        if (!ok) throw ArgumentError("cannot bind " + host + ":" + std::to_string(port));
      }
    }
  } catch (const ArgumentError& e) {
    std::cerr << "gridpulse: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "gridpulse: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

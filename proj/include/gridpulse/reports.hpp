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

#ifndef GRIDPULSE_REPORTS_HPP
#define GRIDPULSE_REPORTS_HPP

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <regex>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "gridpulse/model.hpp"
#include "gridpulse/time.hpp"

namespace gridpulse {

// Links free-text operator reports to PMUs. Precedence: explicit PMU ids,
// then substation names (expanded to every PMU at the substation).

namespace detail {

inline std::string regex_escape(std::string_view s) {
  static const std::string special = R"(\^$.|?*+()[]{})";
  std::string out;
  for (char c : s) {
    if (special.find(c) != std::string::npos) out += '\\';
    out += c;
  }
  return out;
}

inline std::optional<TimePoint> make_time(int y, unsigned mo, unsigned d, unsigned h, unsigned mi,
                                          unsigned s) {
  Date date{std::chrono::year{y}, std::chrono::month{mo}, std::chrono::day{d}};
  if (!date.ok() || h > 23 || mi > 59 || s > 60) return std::nullopt;
  return midnight(date) + std::chrono::hours{h} + std::chrono::minutes{mi} + std::chrono::seconds{s};
}

struct Stamp {
  std::ptrdiff_t position;
  TimePoint time;
};

inline std::vector<Stamp> find_timestamps(const std::string& text) {
  static const std::regex iso(R"((\d{4})-(\d{2})-(\d{2})[T ](\d{2}):(\d{2}):(\d{2})(?:\.\d+)?Z?)");
  static const std::regex us(R"((\d{1,2}):(\d{2}):(\d{2}),\s*(\d{1,2})/(\d{1,2})/(\d{4}))");
  std::vector<Stamp> out;
  for (auto it = std::sregex_iterator(text.begin(), text.end(), iso); it != std::sregex_iterator(); ++it) {
    const auto& m = *it;
    if (auto t = make_time(std::stoi(m[1]), std::stoul(m[2]), std::stoul(m[3]), std::stoul(m[4]),
                           std::stoul(m[5]), std::stoul(m[6])))
      out.push_back({m.position(0), *t});
  }
  for (auto it = std::sregex_iterator(text.begin(), text.end(), us); it != std::sregex_iterator(); ++it) {
    const auto& m = *it;
    if (auto t = make_time(std::stoi(m[6]), std::stoul(m[4]), std::stoul(m[5]), std::stoul(m[1]),
                           std::stoul(m[2]), std::stoul(m[3])))
      out.push_back({m.position(0), *t});
  }
  std::sort(out.begin(), out.end(), [](const Stamp& a, const Stamp& b) { return a.position < b.position; });
  return out;
}

inline bool contains_word(const std::string& text, const std::string& word) {
  std::regex re("\\b" + regex_escape(word) + "\\b", std::regex::icase);
  return std::regex_search(text, re);
}

}  // namespace detail

// Pure text -> record. Unknown PMU ids are ignored with a warning; records
// without a timestamp carry the "missing_timestamp" warning.
inline EventRecord link_report(const std::string& text, const GridTopology& topology,
                               std::string id = {}) {
  EventRecord rec;
  rec.id = std::move(id);
  rec.provenance = Provenance::report_text;

  static const std::regex pmu_re(R"(\bPMU\s*#?\s*(\d+))", std::regex::icase);
  std::set<PmuId> pmus;
  for (auto it = std::sregex_iterator(text.begin(), text.end(), pmu_re); it != std::sregex_iterator(); ++it) {
    PmuId pid{std::stoll((*it)[1])};
    if (topology.has_pmu(pid)) pmus.insert(pid);
    else rec.warnings.push_back("unknown_pmu:" + to_string(pid));
  }

  if (pmus.empty()) {
    for (const auto& sub : topology.substations()) {
      if (!detail::contains_word(text, sub.name)) continue;
      for (const auto& p : topology.pmus())
        if (topology.buses()[topology.bus_index(p.bus_id)].substation_id == sub.id) pmus.insert(p.id);
    }
  }
  rec.epicenter_pmus.assign(pmus.begin(), pmus.end());

  auto stamps = detail::find_timestamps(text);
  if (stamps.empty()) {
    rec.warnings.push_back("missing_timestamp");
  } else {
    rec.t_start = stamps.front().time;
    rec.t_end = stamps.size() > 1 ? std::max(stamps.front().time, stamps[1].time) : stamps.front().time;
  }

  static const std::regex hz_re(R"((\d+(\.\d+)?)\s*Hz)", std::regex::icase);
  std::smatch hm;
  if (std::regex_search(text, hm, hz_re)) rec.oscillation_hz = std::stod(hm[1]);

  static const std::regex transient_re(R"(\btransient)", std::regex::icase);
  static const std::regex oscillation_re(R"(\boscillat)", std::regex::icase);
  if (std::regex_search(text, transient_re)) rec.kind = EventKind::transient;
  else if (std::regex_search(text, oscillation_re) && rec.oscillation_hz && *rec.oscillation_hz > 0.0)
    rec.kind = EventKind::forced;
  else rec.kind = EventKind::unknown;
  if (!rec.linked()) rec.warnings.push_back("unlinked");
  return rec;
}

// Links every *.txt report in a directory, ordered by file name; the record
// id is the file stem.
inline std::vector<EventRecord> link_report_dir(const std::filesystem::path& dir,
                                                const GridTopology& topology) {
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir))
    if (entry.is_regular_file() && entry.path().extension() == ".txt") files.push_back(entry.path());
  std::sort(files.begin(), files.end());
  std::vector<EventRecord> out;
  for (const auto& f : files) {
    std::ifstream in(f);
    std::stringstream ss;
    ss << in.rdbuf();
    auto rec = link_report(ss.str(), topology, f.stem().string());
    rec.source = f.filename().string();
    out.push_back(std::move(rec));
  }
  return out;
}

}  // namespace gridpulse

#endif  // GRIDPULSE_REPORTS_HPP

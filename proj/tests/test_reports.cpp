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

#include <gtest/gtest.h>

#include <fstream>

#include "fixtures.hpp"
#include "gridpulse/reports.hpp"
#include "gridpulse/synthgen.hpp"

using namespace gridpulse;

namespace {

// Yearling hosts PMUs 121 and 122, Sturgeon hosts 169 and 170, Sturgeon Bay hosts 180.
GridTopology named_grid() {
  return GridTopology(
      {{SubstationId{1}, "Yearling", 0, 0}, {SubstationId{2}, "Sturgeon", 10, 0},
       {SubstationId{3}, "Sturgeon Bay", 20, 0}},
      {{BusId{1}, SubstationId{1}, 345}, {BusId{2}, SubstationId{1}, 138},
       {BusId{3}, SubstationId{2}, 345}, {BusId{4}, SubstationId{2}, 138},
       {BusId{5}, SubstationId{3}, 345}},
      {{EdgeId{1}, EdgeKind::transformer, BusId{1}, BusId{2}},
       {EdgeId{2}, EdgeKind::line, BusId{1}, BusId{3}},
       {EdgeId{3}, EdgeKind::transformer, BusId{3}, BusId{4}},
       {EdgeId{4}, EdgeKind::line, BusId{3}, BusId{5}}},
      {{PmuId{121}, BusId{1}, "PMU #121"}, {PmuId{122}, BusId{2}, "PMU #122"},
       {PmuId{169}, BusId{3}, "PMU #169"}, {PmuId{170}, BusId{4}, "PMU #170"},
       {PmuId{180}, BusId{5}, "PMU #180"}});
}

std::vector<std::int64_t> ids(const EventRecord& r) {
  std::vector<std::int64_t> out;
  for (auto p : r.epicenter_pmus) out.push_back(p.value);
  return out;
}

bool has_warning(const EventRecord& r, std::string_view w) {
  return std::find(r.warnings.begin(), r.warnings.end(), w) != r.warnings.end();
}

}  // namespace

TEST(LinkReport, OscillationReportWithPmuId) {
  auto t = named_grid();
  auto r = link_report(
      "System Voltage Oscillation at Yearling Substation, 20:44:00, 4/20/2017. Operators saw the "
      "largest swing on PMU #122 with a 2.4Hz mode.",
      t, "r1");
  EXPECT_EQ(r.id, "r1");
  EXPECT_EQ(ids(r), std::vector<std::int64_t>{122});
  ASSERT_TRUE(r.oscillation_hz);
  EXPECT_DOUBLE_EQ(*r.oscillation_hz, 2.4);
  ASSERT_TRUE(r.t_start);
  EXPECT_EQ(*r.t_start, parse_time("2017-04-20T20:44:00Z"));
  EXPECT_EQ(r.kind, EventKind::forced);
  EXPECT_EQ(r.provenance, Provenance::report_text);
  EXPECT_TRUE(r.warnings.empty());
}

TEST(LinkReport, SubstationExpandsToItsPmus) {
  auto r = link_report("Transient at Sturgeon", named_grid());
  EXPECT_EQ(ids(r), (std::vector<std::int64_t>{169, 170}));
  EXPECT_EQ(r.kind, EventKind::transient);
  EXPECT_TRUE(has_warning(r, "missing_timestamp"));
  EXPECT_FALSE(r.t_start);
}

TEST(LinkReport, WholeWordSubstationMatch) {
  auto t = named_grid();
  EXPECT_EQ(ids(link_report("trip at sturgeon bay", t)), (std::vector<std::int64_t>{169, 170, 180}));
  EXPECT_TRUE(ids(link_report("Sturgeons everywhere", t)).empty());
}

TEST(LinkReport, RoutineNoteIsUnlinked) {
  auto r = link_report("Routine maintenance note", named_grid());
  EXPECT_TRUE(r.epicenter_pmus.empty());
  EXPECT_FALSE(r.linked());
  EXPECT_TRUE(has_warning(r, "unlinked"));
  EXPECT_EQ(r.kind, EventKind::unknown);
}

TEST(LinkReport, PmuIdsOverrideSubstations) {
  auto r = link_report("Oscillation at Sturgeon, see pmu 121 and PMU#180", named_grid());
  EXPECT_EQ(ids(r), (std::vector<std::int64_t>{121, 180}));
}

TEST(LinkReport, UnknownPmuIdWarns) {
  auto r = link_report("Event on PMU #999 near Yearling", named_grid());
  EXPECT_TRUE(has_warning(r, "unknown_pmu:999"));
  EXPECT_EQ(ids(r), (std::vector<std::int64_t>{121, 122}));
}

TEST(LinkReport, IsoTimestampsAndRange) {
  auto r = link_report("PMU 121 from 2017-04-20T10:00:05Z until 2017-04-20 10:02:00", named_grid());
  ASSERT_TRUE(r.t_start && r.t_end);
  EXPECT_EQ(*r.t_start, parse_time("2017-04-20T10:00:05Z"));
  EXPECT_EQ(*r.t_end, parse_time("2017-04-20T10:02:00Z"));
}

TEST(LinkReport, Pure) {
  auto t = named_grid();
  const std::string text = "Oscillation 0.8 Hz near Yearling at 01:02:03, 1/2/2018";
  EXPECT_EQ(link_report(text, t, "x"), link_report(text, t, "x"));
}

TEST(LinkReport, SyntheticCorpusRecovered) {
  auto t = generate_topology(12, 10);
  auto corpus = generate_report_corpus(t, 40, 6, parse_date("2017-04-01"));
  for (const auto& rep : corpus) {
    auto r = link_report(rep.text, t, rep.name);
    auto expected = rep.expected_pmus;
    std::sort(expected.begin(), expected.end());
    EXPECT_EQ(r.epicenter_pmus, expected) << rep.text;
    if (rep.expected_time) {
      EXPECT_EQ(r.t_start, rep.expected_time) << rep.text;
    }
    if (rep.expected_hz) {
      ASSERT_TRUE(r.oscillation_hz) << rep.text;
      EXPECT_NEAR(*r.oscillation_hz, *rep.expected_hz, 1e-12);
    }
  }
}

TEST(LinkReport, Directory) {
  fixtures::TempDir dir;
  std::ofstream(dir.path() / "b.txt") << "Transient at Sturgeon, 2017-04-20T01:00:00Z";
  std::ofstream(dir.path() / "a.txt") << "PMU #122 oscillating at 1.1 Hz";
  std::ofstream(dir.path() / "ignore.md") << "PMU #121";
  auto recs = link_report_dir(dir.path(), named_grid());
  ASSERT_EQ(recs.size(), 2u);
  EXPECT_EQ(recs[0].id, "a");
  EXPECT_EQ(recs[1].id, "b");
  EXPECT_EQ(ids(recs[1]), (std::vector<std::int64_t>{169, 170}));
}

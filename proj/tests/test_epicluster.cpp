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

#include <random>

#include "fixtures.hpp"
#include "gridpulse/epicluster.hpp"
#include "oracles.hpp"

using namespace gridpulse;

namespace {

SpectrumFrame frame_of(const std::vector<std::pair<std::int64_t, std::vector<double>>>& spectra) {
  SpectrumFrame f;
  f.n = 2 * spectra.front().second.size();
  for (const auto& [id, m] : spectra) {
    f.pmu_ids.emplace_back(id);
    f.magnitudes.push_back(m);
    f.valid.push_back(1);
  }
  locate_dominant(f);
  return f;
}

std::vector<double> line_spectrum(std::size_t bin, double height, double floor = 0.0) {
  std::vector<double> m(30, floor);
  m[bin - 1] = height;
  return m;
}

// Partition as a set of member sets, independent of label numbering.
template <class L>
std::set<std::set<std::size_t>> blocks(const std::vector<L>& labels) {
  std::map<L, std::set<std::size_t>> m;
  for (std::size_t i = 0; i < labels.size(); ++i) m[labels[i]].insert(i);
  std::set<std::set<std::size_t>> out;
  for (auto& [l, s] : m) out.insert(s);
  return out;
}

std::vector<std::int64_t> values(const std::vector<PmuId>& ids) {
  std::vector<std::int64_t> out;
  for (auto id : ids) out.push_back(id.value);
  return out;
}

double incoming_sum(const DendrogramModel& m, const std::string& to) {
  double s = 0.0;
  for (const auto& f : m.flows)
    if (f.to == to) s += f.weight;
  return s;
}

}  // namespace

TEST(HopLayers, ChainFromOneEnd) {
  auto t = fixtures::chain(3);
  std::vector<PmuId> epi{PmuId{101}}, sel{PmuId{101}, PmuId{102}, PmuId{103}};
  auto h = hop_layers(t, epi, sel);
  EXPECT_EQ(values(h.root), std::vector<std::int64_t>{101});
  ASSERT_EQ(h.layers.size(), 2u);
  EXPECT_EQ(values(h.layers.at(1)), std::vector<std::int64_t>{102});
  EXPECT_EQ(values(h.layers.at(2)), std::vector<std::int64_t>{103});
}

TEST(HopLayers, MinimumOverEpicenters) {
  auto t = fixtures::chain(3);
  std::vector<PmuId> epi{PmuId{101}, PmuId{103}}, sel{PmuId{102}};
  auto h = hop_layers(t, epi, sel);
  ASSERT_EQ(h.layers.size(), 1u);
  EXPECT_EQ(values(h.layers.at(1)), std::vector<std::int64_t>{102});
  std::vector<PmuId> none;
  EXPECT_THROW(hop_layers(t, none, sel), ArgumentError);
}

TEST(HopLayers, UnreachableReportedSeparately) {
  GridTopology t({{SubstationId{1}, "A", 0, 0}, {SubstationId{2}, "B", 1, 0}},
                 {{BusId{1}, SubstationId{1}, 345}, {BusId{2}, SubstationId{2}, 345}}, {},
                 {{PmuId{1}, BusId{1}, ""}, {PmuId{2}, BusId{2}, ""}});
  std::vector<PmuId> epi{PmuId{1}}, sel{PmuId{1}, PmuId{2}};
  auto h = hop_layers(t, epi, sel);
  EXPECT_TRUE(h.layers.empty());
  EXPECT_EQ(values(h.unreachable), std::vector<std::int64_t>{2});
}

TEST(ClusterLayer, TwoSpectralGroupsMatchExhaustiveOracle) {
  FeatureMatrix f;
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> jitter(0.0, 0.02);
  for (int i = 0; i < 6; ++i) {
    auto m = line_spectrum(i < 3 ? 5 : 10, 1.0 + jitter(rng));
    for (auto& v : m) v += jitter(rng) * 0.1;
    f.push_back(m);
  }
  auto c = cluster_layer(f, KPolicy::automatic());
  EXPECT_EQ(c.k, 2u);
  ASSERT_TRUE(c.silhouette);
  EXPECT_GT(*c.silhouette, 0.8);
  auto best = oracle::exhaustive_best_partition(f, 2, 5);
  EXPECT_EQ(blocks(c.labels), blocks(best.labels));
  EXPECT_NEAR(*c.silhouette, best.score, 1e-12);
}

TEST(ClusterLayer, SmallLayers) {
  FeatureMatrix one{line_spectrum(3, 1.0)};
  auto c = cluster_layer(one, KPolicy::automatic());
  EXPECT_EQ(c.k, 1u);
  EXPECT_EQ(c.labels, std::vector<std::size_t>{0});
  EXPECT_FALSE(c.silhouette);
  FeatureMatrix two{line_spectrum(3, 1.0), line_spectrum(9, 1.0)};
  auto d = cluster_layer(two, KPolicy::automatic());
  EXPECT_EQ(d.k, 1u);
  EXPECT_FALSE(d.silhouette);
}

TEST(ClusterLayer, ManualThreeOnTriplets) {
  FeatureMatrix f;
  for (std::size_t bin : {2u, 8u, 14u})
    for (int j = 0; j < 3; ++j) f.push_back(line_spectrum(bin, 1.0 + 0.01 * j));
  std::shuffle(f.begin(), f.end(), std::mt19937_64(4));
  auto c = cluster_layer(f, KPolicy::fixed(3));
  EXPECT_EQ(c.k, 3u);
  for (std::size_t i = 0; i < f.size(); ++i)
    for (std::size_t j = 0; j < f.size(); ++j) {
      bool same_bin = std::max_element(f[i].begin(), f[i].end()) - f[i].begin() ==
                      std::max_element(f[j].begin(), f[j].end()) - f[j].begin();
      EXPECT_EQ(same_bin, c.labels[i] == c.labels[j]);
    }
  auto oracle_best = oracle::exhaustive_best_partition(f, 3, 3);
  EXPECT_EQ(blocks(c.labels), blocks(oracle_best.labels));
}

TEST(ClusterLayer, ManualKOutOfRange) {
  FeatureMatrix f{line_spectrum(1, 1.0), line_spectrum(2, 1.0)};
  EXPECT_THROW(cluster_layer(f, KPolicy::fixed(3)), ArgumentError);
  EXPECT_THROW(cluster_layer(f, KPolicy::fixed(0)), ArgumentError);
  EXPECT_THROW(cluster_layer({}, KPolicy::automatic()), ArgumentError);
}

TEST(ClusterLayer, AutoKIsSilhouetteArgmaxOverCandidates) {
  std::mt19937_64 rng(9);
  std::normal_distribution<double> g(0.0, 1.0);
  for (int trial = 0; trial < 40; ++trial) {
    std::size_t n = 3 + trial % 6;
    FeatureMatrix f(n, std::vector<double>(4));
    for (auto& row : f)
      for (auto& v : row) v = g(rng);
    auto c = cluster_layer(f, KPolicy::automatic());
    double best = -2.0;
    std::size_t best_k = 0;
    for (std::size_t k = 2; k <= std::min<std::size_t>(6, n - 1); ++k) {
      auto r = kmeans(f, k);
      std::vector<int> labels(r.labels.begin(), r.labels.end());
      auto s = oracle::silhouette(f, labels);
      if (s && *s > best + 1e-12) {
        best = *s;
        best_k = k;
      }
    }
    EXPECT_EQ(c.k, best_k) << "trial " << trial;
    EXPECT_NEAR(*c.silhouette, best, 1e-12);
  }
}

TEST(Silhouette, MatchesOracle) {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> g(0.0, 1.0);
  for (int trial = 0; trial < 30; ++trial) {
    std::size_t n = 4 + trial % 5;
    FeatureMatrix f(n, std::vector<double>(3));
    for (auto& row : f)
      for (auto& v : row) v = g(rng);
    std::vector<std::size_t> labels(n);
    std::vector<int> ilabels(n);
    for (std::size_t i = 0; i < n; ++i) ilabels[i] = static_cast<int>(labels[i] = i % 3);
    auto a = silhouette_score(f, labels);
    auto b = oracle::silhouette(f, ilabels);
    ASSERT_EQ(a.has_value(), b.has_value());
    if (a) {
      EXPECT_NEAR(*a, *b, 1e-12);
    }
  }
}

TEST(KMeans, DeterministicAndCanonical) {
  FeatureMatrix f{{0, 0}, {10, 10}, {0, 1}, {10, 11}, {5, 5}};
  auto a = kmeans(f, 2);
  auto b = kmeans(f, 2);
  EXPECT_EQ(a.labels, b.labels);
  EXPECT_EQ(a.labels[0], 0u);
  EXPECT_EQ(a.inertia, b.inertia);
}

TEST(BoxStats, Quartiles) {
  auto b = box_stats({5, 1, 4, 2, 3});
  EXPECT_EQ(b.min, 1);
  EXPECT_EQ(b.q1, 2);
  EXPECT_EQ(b.median, 3);
  EXPECT_EQ(b.q3, 4);
  EXPECT_EQ(b.max, 5);
  auto c = box_stats({1, 2});
  EXPECT_DOUBLE_EQ(c.median, 1.5);
  EXPECT_DOUBLE_EQ(c.q1, 1.25);
}

TEST(Dendrogram, ChainFlowsAreOne) {
  auto t = fixtures::chain(4);
  auto frame = frame_of({{101, line_spectrum(5, 1.0)},
                         {102, line_spectrum(5, 0.6)},
                         {103, line_spectrum(5, 0.36)},
                         {104, line_spectrum(5, 0.2)}});
  std::vector<PmuId> epi{PmuId{101}}, sel{PmuId{101}, PmuId{102}, PmuId{103}, PmuId{104}};
  auto m = build_dendrogram(t, epi, sel, frame);
  ASSERT_EQ(m.layers.size(), 3u);
  ASSERT_EQ(m.flows.size(), 3u);
  for (const auto& f : m.flows) EXPECT_DOUBLE_EQ(f.weight, 1.0);
  EXPECT_EQ(m.flows[0].from, "root");
  EXPECT_EQ(m.flows[0].to, "h1.c1");
  EXPECT_EQ(m.flows[2].from, "h2.c1");
  EXPECT_NEAR(m.flows[0].l1_distance, 0.4, 1e-12);
  ASSERT_EQ(m.links.size(), 3u);
  for (const auto& l : m.links) {
    EXPECT_EQ(l.kind, LinkKind::inter_hop);
    EXPECT_EQ(l.count, 1);
    EXPECT_EQ(l.flow_weight, 1.0);
  }
  EXPECT_DOUBLE_EQ(m.root.swatch, 1.0);
  EXPECT_DOUBLE_EQ(m.dominant_hz, 2.5);
}

TEST(Dendrogram, IdenticalUpstreamSpectraSplitEvenly) {
  // Root on bus 1; buses 2 and 3 at hop 1 with identical spectra; bus 4 at hop 2.
  GridTopology t({{SubstationId{1}, "A", 0, 0}, {SubstationId{2}, "B", 1, 0},
                  {SubstationId{3}, "C", 0, 1}, {SubstationId{4}, "D", 1, 1}},
                 {{BusId{1}, SubstationId{1}, 345}, {BusId{2}, SubstationId{2}, 345},
                  {BusId{3}, SubstationId{3}, 345}, {BusId{4}, SubstationId{4}, 345}},
                 {{EdgeId{1}, EdgeKind::line, BusId{1}, BusId{2}},
                  {EdgeId{2}, EdgeKind::line, BusId{1}, BusId{3}},
                  {EdgeId{3}, EdgeKind::line, BusId{2}, BusId{4}},
                  {EdgeId{4}, EdgeKind::line, BusId{3}, BusId{4}}},
                 {{PmuId{1}, BusId{1}, ""}, {PmuId{2}, BusId{2}, ""}, {PmuId{3}, BusId{3}, ""},
                  {PmuId{4}, BusId{4}, ""}});
  auto frame = frame_of({{1, line_spectrum(5, 1.0)},
                         {2, line_spectrum(5, 0.5)},
                         {3, line_spectrum(5, 0.5)},
                         {4, line_spectrum(5, 0.2)}});
  std::vector<PmuId> epi{PmuId{1}}, sel{PmuId{1}, PmuId{2}, PmuId{3}, PmuId{4}};
  DendrogramOptions opt;
  opt.k_policy = KPolicy::fixed(2);
  auto m = build_dendrogram(t, epi, sel, frame, opt);
  ASSERT_EQ(m.layers[0].k, 2u);
  std::vector<double> into_d;
  for (const auto& f : m.flows)
    if (f.to == "h2.c1") into_d.push_back(f.weight);
  ASSERT_EQ(into_d.size(), 2u);
  EXPECT_NEAR(into_d[0], 0.5, 1e-12);
  EXPECT_NEAR(into_d[1], 0.5, 1e-12);
}

TEST(Dendrogram, LinkClassification) {
  // Chain 1-2-3-4 with root at 1; hop-1 = {2}, hop-2 = {3}, hop-3 = {4}.
  // A second PMU on bus 2 shares its cluster: same bus pairs are not adjacent.
  // Bus 5 hangs off bus 1, forming an intra-hop pair with bus 2 only if linked.
  GridTopology t({{SubstationId{1}, "A", 0, 0}, {SubstationId{2}, "B", 1, 0},
                  {SubstationId{3}, "C", 2, 0}},
                 {{BusId{1}, SubstationId{1}, 345}, {BusId{2}, SubstationId{2}, 345},
                  {BusId{3}, SubstationId{3}, 345}, {BusId{4}, SubstationId{2}, 345}},
                 {{EdgeId{1}, EdgeKind::line, BusId{1}, BusId{2}},
                  {EdgeId{2}, EdgeKind::line, BusId{1}, BusId{4}},
                  {EdgeId{3}, EdgeKind::line, BusId{2}, BusId{4}},
                  {EdgeId{4}, EdgeKind::line, BusId{2}, BusId{3}},
                  {EdgeId{5}, EdgeKind::line, BusId{4}, BusId{3}}},
                 {{PmuId{1}, BusId{1}, ""}, {PmuId{2}, BusId{2}, ""}, {PmuId{4}, BusId{4}, ""},
                  {PmuId{3}, BusId{3}, ""}});
  auto frame = frame_of({{1, line_spectrum(5, 1.0)},
                         {2, line_spectrum(5, 0.6)},
                         {4, line_spectrum(9, 0.6)},
                         {3, line_spectrum(5, 0.3)}});
  std::vector<PmuId> epi{PmuId{1}}, sel{PmuId{1}, PmuId{2}, PmuId{3}, PmuId{4}};
  DendrogramOptions two;
  two.k_policy = KPolicy::fixed(2);
  auto m = build_dendrogram(t, epi, sel, frame, two);
  std::map<LinkKind, int> kinds;
  for (const auto& l : m.links) kinds[l.kind] += l.count;
  EXPECT_EQ(kinds[LinkKind::intra_hop], 1);  // 2-4 in different hop-1 clusters
  EXPECT_EQ(kinds[LinkKind::inter_hop], 4);  // 1-2, 1-4, 2-3, 4-3
  EXPECT_EQ(kinds[LinkKind::self], 0);

  DendrogramOptions one;
  one.k_policy = KPolicy::fixed(1);
  auto n = build_dendrogram(t, epi, sel, frame, one);
  kinds.clear();
  for (const auto& l : n.links) kinds[l.kind] += l.count;
  EXPECT_EQ(kinds[LinkKind::self], 1);
  EXPECT_EQ(n.find("h1.c1")->self_link_count, 1);
}

TEST(Dendrogram, InvalidAndUncoveredPmus) {
  auto t = fixtures::chain(3);
  auto frame = frame_of({{101, line_spectrum(5, 1.0)},
                         {102, line_spectrum(5, 0.6)},
                         {103, line_spectrum(5, 0.3)}});
  frame.valid[2] = 0;
  frame.magnitudes[2].clear();
  locate_dominant(frame);
  std::vector<PmuId> epi{PmuId{101}}, sel{PmuId{101}, PmuId{102}, PmuId{103}};
  auto m = build_dendrogram(t, epi, sel, frame);
  EXPECT_EQ(values(m.invalid), std::vector<std::int64_t>{103});
  EXPECT_EQ(m.clusters.size(), 1u);
  std::vector<PmuId> wide{PmuId{101}, PmuId{102}, PmuId{103}};
  auto t4 = fixtures::chain(4);
  std::vector<PmuId> sel4{PmuId{101}, PmuId{104}};
  EXPECT_THROW(build_dendrogram(t4, epi, sel4, frame), ArgumentError);
}

TEST(Dendrogram, RandomScenarioInvariants) {
  for (std::uint64_t seed = 1; seed <= 15; ++seed) {
    auto c = fixtures::dendrogram_case(seed);
    auto m = build_dendrogram(c.topology, c.epicenters, c.selected, c.frame);
    auto layers = hop_layers(c.topology, c.epicenters, c.selected);
    std::multiset<PmuId> seen;
    for (const auto& cl : m.clusters) {
      seen.insert(cl.pmus.begin(), cl.pmus.end());
      EXPECT_GE(cl.swatch, -1.0);
      EXPECT_LE(cl.swatch, 1.0);
      EXPECT_NEAR(incoming_sum(m, cl.id), 1.0, 1e-9) << cl.id;
      for (auto id : cl.pmus) EXPECT_EQ(layers.hop_of.at(id), cl.hop);
    }
    std::multiset<PmuId> expected;
    for (const auto& [h, ids] : layers.layers) expected.insert(ids.begin(), ids.end());
    for (auto id : m.invalid) seen.insert(id);
    EXPECT_EQ(seen, expected) << "seed " << seed;
    auto again = build_dendrogram(c.topology, c.epicenters, c.selected, c.frame);
    EXPECT_EQ(to_json(m).dump(), to_json(again).dump());
  }
}

TEST(Dendrogram, NoisyTwoPathOrdersSwatches) {
  auto t = fixtures::two_path();
  int ordered = 0;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    ScenarioSpec s;
    s.seed = seed;
    s.n_ticks = 30 * 20;
    s.attributes = {Attribute::VPm};
    s.noise_sigma = 0.002;
    s.events.push_back({EventKind::forced, BusId{1}, 2.5, 0.02, 0.0, 20.0, 0.0});
    auto sim = simulate(t, s);
    MemorySource src(sim.series);
    auto ids = t.pmu_ids();
    auto frame = frame_at(src, Attribute::VPm, time_of(s.date, 150), 5, ids);
    std::vector<PmuId> epi{PmuId{1}};
    auto m = build_dendrogram(t, epi, ids, frame);
    const ClusterNode* strong = nullptr;
    const ClusterNode* damped = nullptr;
    for (const auto& c : m.clusters) {
      if (std::find(c.pmus.begin(), c.pmus.end(), PmuId{2}) != c.pmus.end()) strong = &c;
      if (std::find(c.pmus.begin(), c.pmus.end(), PmuId{5}) != c.pmus.end()) damped = &c;
    }
    ASSERT_TRUE(strong && damped);
    ordered += strong != damped && strong->swatch > damped->swatch;
  }
  EXPECT_GE(ordered, 9);
}

TEST(Dendrogram, NoiselessLineSpectraGiveEqualSwatches) {
  // Without noise and with an exact-bin window every averaged spectrum is a
  // scaled copy of the root's, and Pearson r ignores scale, so both paths read r = 1.
  auto t = fixtures::two_path();
  ScenarioSpec s;
  s.n_ticks = 30 * 20;
  s.attributes = {Attribute::VPm};
  s.events.push_back({EventKind::forced, BusId{1}, 2.5, 0.02, 0.0, 20.0, 0.0});
  auto sim = simulate(t, s);
  MemorySource src(sim.series);
  auto ids = t.pmu_ids();
  auto frame = frame_at(src, Attribute::VPm, time_of(s.date, 150), 2, ids);
  std::vector<PmuId> epi{PmuId{1}};
  auto m = build_dendrogram(t, epi, ids, frame);
  for (const auto& c : m.clusters) EXPECT_NEAR(c.swatch, 1.0, 1e-9);
}

TEST(Dendrogram, JsonShape) {
  auto t = fixtures::chain(3);
  auto frame = frame_of({{101, line_spectrum(5, 1.0)},
                         {102, line_spectrum(5, 0.6)},
                         {103, line_spectrum(5, 0.3)}});
  std::vector<PmuId> epi{PmuId{101}}, sel{PmuId{101}, PmuId{102}, PmuId{103}};
  auto j = to_json(build_dendrogram(t, epi, sel, frame));
  EXPECT_EQ(j["schema"], "gridpulse.dendrogram/1");
  EXPECT_EQ(j["root"]["id"], "root");
  EXPECT_EQ(j["layers"].size(), 2u);
  EXPECT_TRUE(j["layers"][0]["silhouette"].is_null());
  EXPECT_EQ(j["flows"][0]["weight"], 1.0);
}

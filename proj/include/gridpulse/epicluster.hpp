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

#ifndef GRIDPULSE_EPICLUSTER_HPP
#define GRIDPULSE_EPICLUSTER_HPP

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "gridpulse/errors.hpp"
#include "gridpulse/json_io.hpp"
#include "gridpulse/kmeans.hpp"
#include "gridpulse/model.hpp"
#include "gridpulse/spectral.hpp"

namespace gridpulse {

// ---------------------------------------------------------------------------
// Hop layers

struct HopLayers {
  std::vector<PmuId> root;                   // the epicenters
  std::map<int, std::vector<PmuId>> layers;  // hop -> PMUs, ids ascending
  std::vector<PmuId> unreachable;
  std::map<PmuId, int> hop_of;  // includes the root at 0
};

// Hop of each selected PMU = min over epicenters of the bus hop distance.
inline HopLayers hop_layers(const GridTopology& topology, std::span<const PmuId> epicenter_pmus,
                            std::span<const PmuId> selected_pmus) {
  if (epicenter_pmus.empty()) throw ArgumentError("at least one epicenter PMU is required");
  std::vector<std::size_t> sources;
  HopLayers out;
  std::set<PmuId> epicenters;
  for (auto id : epicenter_pmus) {
    sources.push_back(topology.bus_index(topology.pmu(id).bus_id));
    if (epicenters.insert(id).second) out.root.push_back(id);
  }
  std::sort(out.root.begin(), out.root.end());
  for (auto id : out.root) out.hop_of[id] = 0;

  auto d = bus_distances(topology, sources);
  std::set<PmuId> selected(selected_pmus.begin(), selected_pmus.end());
  for (auto id : selected) {
    int h = d.hops[topology.bus_index(topology.pmu(id).bus_id)];
    if (epicenters.contains(id)) continue;
    if (h == kUnreachable) {
      out.unreachable.push_back(id);
      continue;
    }
    out.layers[h].push_back(id);
    out.hop_of[id] = h;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Per-layer clustering

struct KPolicy {
  std::optional<std::size_t> k;  // nullopt = choose by silhouette

  static KPolicy automatic() { return {}; }
  static KPolicy fixed(std::size_t k) { return {k}; }
};

inline constexpr std::size_t kMaxAutoClusters = 6;

struct LayerClustering {
  std::size_t k = 1;
  std::vector<std::size_t> labels;
  std::optional<double> silhouette;
  std::vector<double> silhouette_samples;  // empty when silhouette is null
};

// Auto mode tries k = 2..min(6, n-1) and keeps the best silhouette (smaller k
// on ties); layers of one or two PMUs form a single cluster.
inline LayerClustering cluster_layer(const FeatureMatrix& features, KPolicy policy,
                                     const KMeansOptions& options = {}) {
  const auto n = features.size();
  if (n == 0) throw ArgumentError("cannot cluster an empty layer");
  LayerClustering out;
  auto finish = [&](const KMeansResult& r) {
    out.k = r.k;
    out.labels = r.labels;
    out.silhouette = silhouette_score(features, r.labels);
    out.silhouette_samples.clear();
    if (out.silhouette) out.silhouette_samples = gridpulse::silhouette_samples(features, r.labels);
  };
  if (policy.k) {
    if (*policy.k == 0 || *policy.k > n)
      throw ArgumentError("k = " + std::to_string(*policy.k) + " outside 1.." + std::to_string(n));
    finish(kmeans(features, *policy.k, options));
    return out;
  }
  if (n <= 2) {
    out.k = 1;
    out.labels.assign(n, 0);
    return out;
  }
  std::optional<KMeansResult> best;
  double best_score = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 2; k <= std::min(kMaxAutoClusters, n - 1); ++k) {
    auto r = kmeans(features, k, options);
    auto s = silhouette_score(features, r.labels);
    double score = s.value_or(-std::numeric_limits<double>::infinity());
    if (!best || score > best_score) {
      best = std::move(r);
      best_score = score;
    }
  }
  finish(*best);
  return out;
}

// ---------------------------------------------------------------------------
// Dendrogram model

struct BoxStats {
  double min = 0.0, q1 = 0.0, median = 0.0, q3 = 0.0, max = 0.0;
};

// Linear-interpolation quartiles.
inline BoxStats box_stats(std::vector<double> v) {
  if (v.empty()) return {};
  std::sort(v.begin(), v.end());
  auto q = [&](double p) {
    double pos = p * static_cast<double>(v.size() - 1);
    auto lo = static_cast<std::size_t>(std::floor(pos));
    auto hi = std::min(lo + 1, v.size() - 1);
    return v[lo] + (v[hi] - v[lo]) * (pos - static_cast<double>(lo));
  };
  return {v.front(), q(0.25), q(0.5), q(0.75), v.back()};
}

struct ClusterNode {
  std::string id;
  int hop = 0;
  std::vector<PmuId> pmus;
  std::vector<double> average_spectrum;
  double swatch = 0.0;  // Pearson r of the averaged spectrum against the root's
  BoxStats box;         // per-PMU magnitude at f*
  int self_link_count = 0;
  std::optional<double> mean_silhouette;  // members' mean s(i) when the layer score exists
};

enum class LinkKind { self, intra_hop, inter_hop };

inline std::string_view to_string(LinkKind k) {
  switch (k) {
    case LinkKind::self: return "self";
    case LinkKind::intra_hop: return "intra_hop";
    default: return "inter_hop";
  }
}

// Physical PMU adjacencies aggregated per cluster pair.
struct LinkRecord {
  LinkKind kind = LinkKind::self;
  std::string from;  // upstream (or lexicographically first) cluster
  std::string to;
  int count = 0;
  std::optional<double> flow_weight;  // inter_hop only
};

// Influence of an upstream cluster on a downstream one:
// weight = (1 / (eps + L1)) normalized over all upstream clusters of `to`.
struct Flow {
  std::string from;
  std::string to;
  double l1_distance = 0.0;
  double weight = 0.0;
  int link_count = 0;  // structural inter-hop links between the pair
};

struct LayerInfo {
  int hop = 0;
  std::size_t k = 0;
  std::size_t total_pmus = 0;
  std::optional<double> silhouette;
};

struct DendrogramModel {
  double dominant_hz = 0.0;
  std::size_t dominant_bin = 0;
  ClusterNode root;
  std::vector<LayerInfo> layers;
  std::vector<ClusterNode> clusters;  // by hop, then cluster index
  std::vector<LinkRecord> links;
  std::vector<Flow> flows;
  std::vector<PmuId> unreachable;
  std::vector<PmuId> invalid;  // selected PMUs without a valid spectrum in the frame

  const ClusterNode* find(std::string_view id) const {
    if (root.id == id) return &root;
    for (const auto& c : clusters)
      if (c.id == id) return &c;
    return nullptr;
  }
};

struct DendrogramOptions {
  KPolicy k_policy;
  KMeansOptions kmeans;
  double epsilon = 1e-9;
};

namespace detail {

inline std::vector<double> average_spectrum(const SpectrumFrame& frame,
                                            std::span<const std::size_t> columns) {
  std::vector<double> avg(frame.n / 2, 0.0);
  for (auto c : columns)
    for (std::size_t i = 0; i < avg.size(); ++i) avg[i] += frame.magnitudes[c][i];
  if (!columns.empty())
    for (auto& v : avg) v /= static_cast<double>(columns.size());
  return avg;
}

inline double l1(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += std::abs(a[i] - b[i]);
  return s;
}

}  // namespace detail

inline DendrogramModel build_dendrogram(const GridTopology& topology,
                                        std::span<const PmuId> epicenter_pmus,
                                        std::span<const PmuId> selected_pmus,
                                        const SpectrumFrame& frame,
                                        const DendrogramOptions& options = {}) {
  auto layers = hop_layers(topology, epicenter_pmus, selected_pmus);
  DendrogramModel model;
  model.dominant_hz = frame.dominant_hz;
  model.dominant_bin = frame.dominant_bin;
  model.unreachable = layers.unreachable;

  auto column = [&](PmuId id) {
    auto c = frame.column_of(id);
    if (!c) throw ArgumentError("PMU " + to_string(id) + " is not covered by the frame");
    return *c;
  };
  auto at_f = [&](std::size_t c) { return frame.magnitude_at_dominant(c).value_or(0.0); };

  // Root
  std::vector<std::size_t> root_cols;
  for (auto id : layers.root) {
    auto c = column(id);
    if (frame.valid[c]) root_cols.push_back(c);
    else model.invalid.push_back(id);
  }
  if (root_cols.empty()) throw ArgumentError("no epicenter PMU has a valid spectrum in the frame");
  model.root.id = "root";
  model.root.hop = 0;
  model.root.pmus = layers.root;
  model.root.average_spectrum = detail::average_spectrum(frame, root_cols);
  model.root.swatch = pearson(model.root.average_spectrum, model.root.average_spectrum);
  {
    std::vector<double> m;
    for (auto c : root_cols) m.push_back(at_f(c));
    model.root.box = box_stats(m);
  }

  std::map<PmuId, std::string> cluster_of;
  for (auto id : layers.root) cluster_of[id] = model.root.id;

  // Layers, each clustered on the full magnitude spectrum.
  for (const auto& [hop, ids] : layers.layers) {
    std::vector<PmuId> members;
    std::vector<std::size_t> cols;
    for (auto id : ids) {
      auto c = column(id);
      if (frame.valid[c]) {
        members.push_back(id);
        cols.push_back(c);
      } else {
        model.invalid.push_back(id);
      }
    }
    if (members.empty()) continue;
    FeatureMatrix features;
    for (auto c : cols) features.push_back(frame.magnitudes[c]);
    KPolicy policy = options.k_policy;
    if (policy.k) policy.k = std::min(*policy.k, members.size());
    auto clustering = cluster_layer(features, policy, options.kmeans);

    model.layers.push_back({hop, clustering.k, members.size(), clustering.silhouette});
    for (std::size_t g = 0; g < clustering.k; ++g) {
      ClusterNode node;
      node.id = "h" + std::to_string(hop) + ".c" + std::to_string(g + 1);
      node.hop = hop;
      std::vector<std::size_t> gcols;
      std::vector<double> at_peak;
      double sil = 0.0;
      for (std::size_t i = 0; i < members.size(); ++i) {
        if (clustering.labels[i] != g) continue;
        node.pmus.push_back(members[i]);
        gcols.push_back(cols[i]);
        at_peak.push_back(at_f(cols[i]));
        if (clustering.silhouette) sil += clustering.silhouette_samples[i];
        cluster_of[members[i]] = node.id;
      }
      node.average_spectrum = detail::average_spectrum(frame, gcols);
      node.swatch = pearson(node.average_spectrum, model.root.average_spectrum);
      node.box = box_stats(at_peak);
      if (clustering.silhouette) node.mean_silhouette = sil / static_cast<double>(gcols.size());
      model.clusters.push_back(std::move(node));
    }
  }
  std::sort(model.invalid.begin(), model.invalid.end());

  auto node_of = [&](const std::string& id) -> ClusterNode& {
    if (id == model.root.id) return model.root;
    for (auto& c : model.clusters)
      if (c.id == id) return c;
    throw std::logic_error("cluster " + id + " missing");
  };

  // Flows between consecutive populated levels; the root is level 0.
  std::vector<std::vector<std::string>> levels{{model.root.id}};
  std::vector<int> level_hop{0};
  for (const auto& c : model.clusters) {
    if (level_hop.size() == 1 || level_hop.back() != c.hop) {
      levels.emplace_back();
      level_hop.push_back(c.hop);
    }
    levels.back().push_back(c.id);
  }
  std::map<std::pair<std::string, std::string>, std::size_t> flow_index;
  for (std::size_t L = 1; L < levels.size(); ++L) {
    // Upstream of level L: every cluster at the previous populated hop (plus
    // the root when that hop is 0).
    std::vector<std::string> upstream = levels[L - 1];
    if (L >= 2 && level_hop[L - 1] == 0) upstream.insert(upstream.begin(), model.root.id);
    for (const auto& d : levels[L]) {
      const auto& dn = node_of(d);
      std::vector<Flow> incoming;
      double total = 0.0;
      for (const auto& c : upstream) {
        double dist = detail::l1(node_of(c).average_spectrum, dn.average_spectrum);
        double w = 1.0 / (options.epsilon + dist);
        incoming.push_back({c, d, dist, w, 0});
        total += w;
      }
      for (auto& f : incoming) {
        f.weight /= total;
        flow_index[{f.from, f.to}] = model.flows.size();
        model.flows.push_back(f);
      }
    }
  }

  // Physical links classified by cluster membership.
  std::vector<PmuId> linked;
  for (const auto& [id, cl] : cluster_of) linked.push_back(id);
  std::map<std::tuple<int, std::string, std::string>, int> counts;
  for (const auto& [p, q] : pmu_adjacency(topology, linked)) {
    const auto& cp = cluster_of.at(p);
    const auto& cq = cluster_of.at(q);
    int hp = layers.hop_of.at(p), hq = layers.hop_of.at(q);
    if (cp == cq) {
      ++node_of(cp).self_link_count;
      ++counts[{static_cast<int>(LinkKind::self), cp, cq}];
    } else if (hp == hq) {
      auto [a, b] = std::minmax(cp, cq);
      ++counts[{static_cast<int>(LinkKind::intra_hop), a, b}];
    } else {
      auto [up, down] = hp < hq ? std::pair{cp, cq} : std::pair{cq, cp};
      ++counts[{static_cast<int>(LinkKind::inter_hop), up, down}];
    }
  }
  for (const auto& [key, n] : counts) {
    const auto& [kind, from, to] = key;
    LinkRecord rec{static_cast<LinkKind>(kind), from, to, n, std::nullopt};
    if (rec.kind == LinkKind::inter_hop) {
      auto it = flow_index.find({from, to});
      if (it != flow_index.end()) {
        rec.flow_weight = model.flows[it->second].weight;
        model.flows[it->second].link_count = n;
      }
    }
    model.links.push_back(rec);
  }
  return model;
}

// ---------------------------------------------------------------------------
// JSON

inline constexpr std::string_view kDendrogramSchema = "gridpulse.dendrogram/1";

inline json to_json(const BoxStats& b) {
  return {{"min", b.min}, {"q1", b.q1}, {"median", b.median}, {"q3", b.q3}, {"max", b.max}};
}

inline json to_json(const ClusterNode& c) {
  return {{"id", c.id},
          {"hop", c.hop},
          {"pmus", c.pmus},
          {"average_spectrum", c.average_spectrum},
          {"swatch", c.swatch},
          {"box", to_json(c.box)},
          {"self_link_count", c.self_link_count},
          {"mean_silhouette", c.mean_silhouette ? json(*c.mean_silhouette) : json(nullptr)}};
}

inline json to_json(const DendrogramModel& m) {
  json layers = json::array(), clusters = json::array(), links = json::array(), flows = json::array();
  for (const auto& l : m.layers)
    layers.push_back({{"hop", l.hop},
                      {"k", l.k},
                      {"total_pmus", l.total_pmus},
                      {"silhouette", l.silhouette ? json(*l.silhouette) : json(nullptr)}});
  for (const auto& c : m.clusters) clusters.push_back(to_json(c));
  for (const auto& l : m.links)
    links.push_back({{"kind", to_string(l.kind)},
                     {"from", l.from},
                     {"to", l.to},
                     {"count", l.count},
                     {"flow_weight", l.flow_weight ? json(*l.flow_weight) : json(nullptr)}});
  for (const auto& f : m.flows)
    flows.push_back({{"from", f.from},
                     {"to", f.to},
                     {"l1_distance", f.l1_distance},
                     {"weight", f.weight},
                     {"link_count", f.link_count}});
  return {{"schema", kDendrogramSchema},
          {"dominant_hz", m.dominant_hz},
          {"dominant_bin", m.dominant_bin},
          {"root", to_json(m.root)},
          {"layers", layers},
          {"clusters", clusters},
          {"links", links},
          {"flows", flows},
          {"unreachable", m.unreachable},
          {"invalid", m.invalid}};
}

}  // namespace gridpulse

#endif  // GRIDPULSE_EPICLUSTER_HPP

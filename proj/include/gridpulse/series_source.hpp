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

#ifndef GRIDPULSE_SERIES_SOURCE_HPP
#define GRIDPULSE_SERIES_SOURCE_HPP

#include <concepts>
#include <map>
#include <span>
#include <utility>

#include "gridpulse/errors.hpp"
#include "gridpulse/model.hpp"

namespace gridpulse {

// Anything that can serve a (ticks x PMUs) block of one attribute for one day.
template <class S>
concept SeriesSource = requires(const S& s, Attribute a, Date d, std::span<const PmuId> ids,
                                std::int64_t t0, std::int64_t t1) {
  { s.read(a, d, ids, t0, t1) } -> std::same_as<SeriesMatrix>;
};

// In-memory source over whole-day matrices (e.g. straight from simulate()).
class MemorySource {
 public:
  MemorySource() = default;

  template <class Map>
  explicit MemorySource(const Map& series) {
    for (const auto& [attr, m] : series) add(m);
  }

  void add(SeriesMatrix m) {
    auto key = std::pair{m.attribute, m.date};
    data_.insert_or_assign(key, std::move(m));
  }

  SeriesMatrix read(Attribute a, Date d, std::span<const PmuId> ids, std::int64_t t0,
                    std::int64_t t1) const {
    auto it = data_.find({a, d});
    if (it == data_.end())
      throw RangeError("no " + std::string(to_string(a)) + " data for " + format_date(d));
    const auto& m = it->second;
    if (!(t0 >= m.start_tick && t0 < t1 && t1 <= m.end_tick))
      throw RangeError("tick range outside stored data");
    std::vector<std::size_t> cols;
    for (auto id : ids) {
      auto c = m.column_of(id);
      if (!c) throw IdentifierError("PMU " + to_string(id) + " has no data");
      cols.push_back(*c);
    }
    auto out = SeriesMatrix::nulls(a, d, t0, t1, {ids.begin(), ids.end()});
    for (auto t = t0; t < t1; ++t)
      for (std::size_t j = 0; j < cols.size(); ++j)
        out.set(static_cast<std::size_t>(t - t0), j,
                m.at(static_cast<std::size_t>(t - m.start_tick), cols[j]));
    return out;
  }

 private:
  struct KeyLess {
    bool operator()(const std::pair<Attribute, Date>& a, const std::pair<Attribute, Date>& b) const {
      if (a.first != b.first) return a.first < b.first;
      return std::chrono::sys_days{a.second} < std::chrono::sys_days{b.second};
    }
  };
  std::map<std::pair<Attribute, Date>, SeriesMatrix, KeyLess> data_;
};

}  // namespace gridpulse

#endif  // GRIDPULSE_SERIES_SOURCE_HPP

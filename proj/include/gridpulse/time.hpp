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

#ifndef GRIDPULSE_TIME_HPP
#define GRIDPULSE_TIME_HPP

#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <optional>
#include <string>
#include <string_view>

#include "gridpulse/errors.hpp"

namespace gridpulse {

using Date = std::chrono::year_month_day;
using TimePoint = std::chrono::sys_time<std::chrono::milliseconds>;

inline constexpr int kSampleRate = 30;
inline constexpr std::int64_t kTicksPerDay = 2'592'000;
inline constexpr std::int64_t kTicksPerRowGroup = 27'000;
inline constexpr int kRowGroupsPerDay = 96;

inline std::string format_date(Date d) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(d.year()),
                static_cast<unsigned>(d.month()), static_cast<unsigned>(d.day()));
  return buf;
}

inline Date parse_date(std::string_view s) {
  int y = 0;
  unsigned m = 0, d = 0;
  std::string tmp(s);
  char tail = 0;
  if (std::sscanf(tmp.c_str(), "%d-%u-%u%c", &y, &m, &d, &tail) != 3)
    throw ArgumentError("bad date '" + tmp + "', expected YYYY-MM-DD");
  Date out{std::chrono::year{y}, std::chrono::month{m}, std::chrono::day{d}};
  if (!out.ok()) throw ArgumentError("invalid calendar date '" + tmp + "'");
  return out;
}

inline TimePoint midnight(Date d) {
  return TimePoint{std::chrono::sys_days{d}.time_since_epoch()};
}

inline Date date_of(TimePoint t) {
  return Date{std::chrono::floor<std::chrono::days>(t)};
}

// ISO-8601 UTC, milliseconds only when non-zero.
inline std::string format_time(TimePoint t) {
  auto day = std::chrono::floor<std::chrono::days>(t);
  auto ms = (t - day).count();
  Date d{day};
  char buf[40];
  long long sec = ms / 1000;
  int milli = static_cast<int>(ms % 1000);
  int n = std::snprintf(buf, sizeof buf, "%sT%02lld:%02lld:%02lld", format_date(d).c_str(),
                        sec / 3600, (sec / 60) % 60, sec % 60);
  if (milli != 0) std::snprintf(buf + n, sizeof buf - n, ".%03d", milli);
  return std::string(buf) + "Z";
}

inline std::optional<TimePoint> try_parse_time(std::string_view s) {
  std::string tmp(s);
  int y = 0;
  unsigned mo = 0, d = 0, h = 0, mi = 0;
  double sec = 0.0;
  int consumed = 0;
  if (std::sscanf(tmp.c_str(), "%d-%u-%u%*[T ]%u:%u:%lf%n", &y, &mo, &d, &h, &mi, &sec,
                  &consumed) != 6)
    return std::nullopt;
  std::string_view rest = std::string_view(tmp).substr(static_cast<std::size_t>(consumed));
  if (!(rest.empty() || rest == "Z" || rest == "+00:00")) return std::nullopt;
  Date date{std::chrono::year{y}, std::chrono::month{mo}, std::chrono::day{d}};
  if (!date.ok() || h > 23 || mi > 59 || sec < 0.0 || sec >= 61.0) return std::nullopt;
  auto ms = std::llround(sec * 1000.0) + (static_cast<long long>(h) * 3600 + mi * 60) * 1000;
  return midnight(date) + std::chrono::milliseconds{ms};
}

inline TimePoint parse_time(std::string_view s) {
  if (auto t = try_parse_time(s)) return *t;
  throw ArgumentError("bad timestamp '" + std::string(s) + "', expected ISO-8601 UTC");
}

// Sample index at 30 Hz counted from the day's midnight, rounded to the nearest tick.
inline std::int64_t tick_of(TimePoint t) {
  auto ms = (t - midnight(date_of(t))).count();
  return (ms * kSampleRate + 500) / 1000;
}

inline TimePoint time_of(Date d, std::int64_t tick) {
  return midnight(d) + std::chrono::milliseconds{(tick * 1000 + kSampleRate / 2) / kSampleRate};
}

}  // namespace gridpulse

#endif  // GRIDPULSE_TIME_HPP

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

#ifndef GRIDPULSE_SPECTRAL_HPP
#define GRIDPULSE_SPECTRAL_HPP

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <numeric>
#include <optional>
#include <span>
#include <vector>

#include "gridpulse/errors.hpp"
#include "gridpulse/fft.hpp"
#include "gridpulse/model.hpp"
#include "gridpulse/series_source.hpp"
#include "gridpulse/time.hpp"

namespace gridpulse {

struct SpectrumOptions {
  bool hann = false;                // rectangular window by default
  double max_null_fraction = 0.10;  // more nulls than this invalidates the window
};

// One-sided amplitude spectrum of a 30 Hz window, bins k = 1..N/2 (element
// k-1 holds bin k, frequency k*30/N Hz). The mean is removed first and the
// DC bin dropped. Null samples are filled by linear interpolation between
// neighbours (edge nulls take the nearest value); windows with more nulls than
// max_null_fraction * N are invalid and yield nullopt.
inline std::optional<std::vector<double>> compute_spectrum(std::span<const double> values,
                                                           std::span<const std::uint8_t> present,
                                                           const SpectrumOptions& options = {}) {
  const std::size_t n = values.size();
  if (present.size() != n) throw ArgumentError("presence mask length differs from samples");
  if (n < 2 || n % 2 != 0) throw ArgumentError("spectrum needs an even window length >= 2");

  std::size_t nulls = static_cast<std::size_t>(std::count(present.begin(), present.end(), 0));
  if (nulls == n || static_cast<double>(nulls) > options.max_null_fraction * static_cast<double>(n))
    return std::nullopt;

  std::vector<double> x(values.begin(), values.end());
  if (nulls > 0) {
    std::optional<std::size_t> prev;
    for (std::size_t i = 0; i < n; ++i) {
      if (!present[i]) continue;
      if (!prev) {
        for (std::size_t j = 0; j < i; ++j) x[j] = values[i];
      } else if (*prev + 1 < i) {
        double a = values[*prev], b = values[i];
        double span = static_cast<double>(i - *prev);
        for (std::size_t j = *prev + 1; j < i; ++j)
          x[j] = a + (b - a) * static_cast<double>(j - *prev) / span;
      }
      prev = i;
    }
    for (std::size_t j = *prev + 1; j < n; ++j) x[j] = values[*prev];
  }

  double mean = std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(n);
  for (auto& v : x) v -= mean;
  double gain = static_cast<double>(n);
  if (options.hann) {
    gain = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double w = 0.5 * (1.0 - std::cos(2.0 * std::numbers::pi * static_cast<double>(i) /
                                       static_cast<double>(n)));
      x[i] *= w;
      gain += w;
    }
  }

  auto X = fft::forward_real(x);
  std::vector<double> mags(n / 2);
  for (std::size_t k = 1; k <= n / 2; ++k) mags[k - 1] = 2.0 * std::abs(X[k]) / gain;
  return mags;
}

inline std::optional<std::vector<double>> compute_spectrum(
    std::span<const std::optional<double>> samples, const SpectrumOptions& options = {}) {
  std::vector<double> values(samples.size(), 0.0);
  std::vector<std::uint8_t> present(samples.size(), 0);
  for (std::size_t i = 0; i < samples.size(); ++i)
    if (samples[i]) {
      values[i] = *samples[i];
      present[i] = 1;
    }
  return compute_spectrum(values, present, options);
}

inline double bin_frequency(std::size_t bin, std::size_t n) {
  return static_cast<double>(bin) * kSampleRate / static_cast<double>(n);
}

// Pearson correlation; 0 when either vector has zero variance.
inline double pearson(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw ArgumentError("pearson: length mismatch");
  if (a.empty()) return 0.0;
  const double n = static_cast<double>(a.size());
  double ma = std::accumulate(a.begin(), a.end(), 0.0) / n;
  double mb = std::accumulate(b.begin(), b.end(), 0.0) / n;
  double sab = 0.0, saa = 0.0, sbb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    sab += (a[i] - ma) * (b[i] - mb);
    saa += (a[i] - ma) * (a[i] - ma);
    sbb += (b[i] - mb) * (b[i] - mb);
  }
  if (saa <= 0.0 || sbb <= 0.0) return 0.0;
  return std::clamp(sab / std::sqrt(saa * sbb), -1.0, 1.0);
}

// ---------------------------------------------------------------------------
// Windows and frames

struct WindowSpec {
  int window_seconds = 2;  // 2, 5 or 10
  int stride_seconds = 0;  // 0 = window_seconds
  TimePoint t_start{};
  TimePoint t_end{};
  Attribute attribute = Attribute::VPm;
  SpectrumOptions spectrum;

  int stride() const { return stride_seconds > 0 ? stride_seconds : window_seconds; }
  std::size_t samples() const { return static_cast<std::size_t>(kSampleRate * window_seconds); }

  void validate() const {
    if (window_seconds != 2 && window_seconds != 5 && window_seconds != 10)
      throw ArgumentError("window must be 2, 5 or 10 seconds");
    if (stride_seconds < 0) throw ArgumentError("stride must be positive");
    if (t_end - t_start < std::chrono::seconds{window_seconds})
      throw ArgumentError("time range shorter than one window");
    if (date_of(t_start) != date_of(t_end - std::chrono::milliseconds{1}))
      throw ArgumentError("time range must lie within one day");
  }

  // Start ticks of every window that fits inside [t_start, t_end].
  std::vector<std::int64_t> window_starts() const {
    validate();
    auto first = tick_of(t_start);
    auto last = tick_of(t_end);
    if (last == 0 && t_end > t_start) last = kTicksPerDay;  // range ends at next midnight
    std::vector<std::int64_t> out;
    const auto n = static_cast<std::int64_t>(samples());
    for (auto s = first; s + n <= last; s += static_cast<std::int64_t>(stride()) * kSampleRate)
      out.push_back(s);
    return out;
  }
};

struct SpectrumFrame {
  TimePoint window_start{};
  std::int64_t start_tick = 0;
  int window_seconds = 2;
  std::size_t n = 60;
  std::vector<PmuId> pmu_ids;
  std::vector<std::vector<double>> magnitudes;  // per PMU, bins 1..N/2; empty when invalid
  std::vector<std::uint8_t> valid;
  std::size_t dominant_bin = 0;  // 1-based; 0 when no PMU is valid
  double dominant_hz = 0.0;
  std::optional<PmuId> peak_pmu;
  double peak_magnitude = 0.0;

  bool gap() const { return !peak_pmu.has_value(); }
  double bin_width() const { return kSampleRate / static_cast<double>(n); }

  std::optional<std::size_t> column_of(PmuId id) const {
    auto it = std::find(pmu_ids.begin(), pmu_ids.end(), id);
    if (it == pmu_ids.end()) return std::nullopt;
    return static_cast<std::size_t>(it - pmu_ids.begin());
  }

  // Magnitude at the frame's dominant bin; nullopt for invalid PMUs or gaps.
  std::optional<double> magnitude_at_dominant(std::size_t column) const {
    if (gap() || !valid[column]) return std::nullopt;
    return magnitudes[column][dominant_bin - 1];
  }
};

// Fills the dominant-frequency fields. Ties prefer the lower bin, then the lower PMU id.
inline void locate_dominant(SpectrumFrame& frame) {
  frame.dominant_bin = 0;
  frame.dominant_hz = 0.0;
  frame.peak_pmu.reset();
  frame.peak_magnitude = 0.0;
  for (std::size_t c = 0; c < frame.pmu_ids.size(); ++c) {
    if (!frame.valid[c]) continue;
    const auto& m = frame.magnitudes[c];
    for (std::size_t k = 1; k <= m.size(); ++k) {
      double v = m[k - 1];
      bool better = !frame.peak_pmu || v > frame.peak_magnitude ||
                    (v == frame.peak_magnitude &&
                     (k < frame.dominant_bin ||
                      (k == frame.dominant_bin && frame.pmu_ids[c] < *frame.peak_pmu)));
      if (better) {
        frame.peak_magnitude = v;
        frame.dominant_bin = k;
        frame.peak_pmu = frame.pmu_ids[c];
      }
    }
  }
  if (frame.peak_pmu) frame.dominant_hz = bin_frequency(frame.dominant_bin, frame.n);
}

// Frame from a block whose rows start at the window's first tick.
inline SpectrumFrame frame_from_block(const SeriesMatrix& block, std::size_t row_offset,
                                      int window_seconds, const SpectrumOptions& options = {}) {
  SpectrumFrame f;
  f.window_seconds = window_seconds;
  f.n = static_cast<std::size_t>(kSampleRate * window_seconds);
  f.start_tick = block.start_tick + static_cast<std::int64_t>(row_offset);
  f.window_start = time_of(block.date, f.start_tick);
  f.pmu_ids = block.pmu_ids;
  f.magnitudes.resize(block.cols());
  f.valid.assign(block.cols(), 0);
  std::vector<double> values(f.n);
  std::vector<std::uint8_t> present(f.n);
  for (std::size_t c = 0; c < block.cols(); ++c) {
    for (std::size_t i = 0; i < f.n; ++i) {
      auto idx = (row_offset + i) * block.cols() + c;
      values[i] = block.values[idx];
      present[i] = block.present[idx];
    }
    if (auto mags = compute_spectrum(values, present, options)) {
      f.magnitudes[c] = std::move(*mags);
      f.valid[c] = 1;
    }
  }
  locate_dominant(f);
  return f;
}

// Every window of the spec over the given PMUs. The source is read once for
// the covered span.
template <SeriesSource Source>
std::vector<SpectrumFrame> compute_frames(const Source& source, const WindowSpec& spec,
                                          std::span<const PmuId> pmu_ids) {
  if (pmu_ids.empty()) throw ArgumentError("empty PMU set");
  auto starts = spec.window_starts();
  std::vector<SpectrumFrame> frames;
  if (starts.empty()) return frames;
  const auto n = static_cast<std::int64_t>(spec.samples());
  auto block = source.read(spec.attribute, date_of(spec.t_start), pmu_ids, starts.front(),
                           starts.back() + n);
  for (auto s : starts)
    frames.push_back(frame_from_block(block, static_cast<std::size_t>(s - starts.front()),
                                      spec.window_seconds, spec.spectrum));
  return frames;
}

// Single window starting at `at`.
template <SeriesSource Source>
SpectrumFrame frame_at(const Source& source, Attribute attribute, TimePoint at, int window_seconds,
                       std::span<const PmuId> pmu_ids, const SpectrumOptions& options = {}) {
  WindowSpec spec;
  spec.window_seconds = window_seconds;
  spec.t_start = at;
  spec.t_end = at + std::chrono::seconds{window_seconds};
  spec.attribute = attribute;
  spec.spectrum = options;
  auto frames = compute_frames(source, spec, pmu_ids);
  if (frames.empty()) throw ArgumentError("window does not fit");
  return frames.front();
}

struct TimelineEntry {
  TimePoint t{};
  double f_star = 0.0;
  std::optional<PmuId> peak_pmu;  // nullopt marks a gap (no valid PMU)
  double peak_magnitude = 0.0;

  bool gap() const { return !peak_pmu.has_value(); }
};

inline std::vector<TimelineEntry> timeline_of(std::span<const SpectrumFrame> frames) {
  std::vector<TimelineEntry> out;
  out.reserve(frames.size());
  for (const auto& f : frames) out.push_back({f.window_start, f.dominant_hz, f.peak_pmu, f.peak_magnitude});
  return out;
}

// Dominant frequency per stride step.
template <SeriesSource Source>
std::vector<TimelineEntry> main_frequency_timeline(const Source& source, const WindowSpec& spec,
                                                   std::span<const PmuId> pmu_ids) {
  auto frames = compute_frames(source, spec, pmu_ids);
  return timeline_of(frames);
}

// ---------------------------------------------------------------------------
// Flagging and correlation shading

struct Flag {
  PmuId pmu;
  double magnitude = 0.0;  // at the frame's dominant frequency
  int rank = 0;            // 1 = strongest
};

// PMUs whose magnitude at f* reaches threshold_pct percent of the frame peak,
// strongest first, ties by PMU id.
inline std::vector<Flag> flag_pmus(const SpectrumFrame& frame, double threshold_pct) {
  if (!(threshold_pct > 0.0 && threshold_pct <= 100.0))
    throw ArgumentError("threshold percentage must lie in (0, 100]");
  std::vector<Flag> out;
  if (frame.gap()) return out;
  const double cut = threshold_pct / 100.0 * frame.peak_magnitude;
  for (std::size_t c = 0; c < frame.pmu_ids.size(); ++c) {
    auto m = frame.magnitude_at_dominant(c);
    if (m && *m >= cut) out.push_back({frame.pmu_ids[c], *m, 0});
  }
  std::sort(out.begin(), out.end(), [](const Flag& a, const Flag& b) {
    return a.magnitude != b.magnitude ? a.magnitude > b.magnitude : a.pmu < b.pmu;
  });
  for (std::size_t i = 0; i < out.size(); ++i) out[i].rank = static_cast<int>(i + 1);
  return out;
}

// Spectrum-domain Pearson r of each valid PMU against the reference PMU.
inline std::map<PmuId, double> correlation_to_reference(const SpectrumFrame& frame,
                                                        PmuId reference) {
  auto ref = frame.column_of(reference);
  if (!ref) throw IdentifierError("reference PMU " + to_string(reference) + " not in frame");
  if (!frame.valid[*ref])
    throw ArgumentError("reference PMU " + to_string(reference) + " has no valid spectrum");
  std::map<PmuId, double> out;
  for (std::size_t c = 0; c < frame.pmu_ids.size(); ++c)
    if (frame.valid[c]) out[frame.pmu_ids[c]] = pearson(frame.magnitudes[c], frame.magnitudes[*ref]);
  return out;
}

}  // namespace gridpulse

#endif  // GRIDPULSE_SPECTRAL_HPP

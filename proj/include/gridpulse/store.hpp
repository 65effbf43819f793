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

#ifndef GRIDPULSE_STORE_HPP
#define GRIDPULSE_STORE_HPP

#include <zlib.h>

#include <algorithm>
#include <array>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>
#include <unordered_map>
#include <vector>

#include "gridpulse/errors.hpp"
#include "gridpulse/model.hpp"
#include "gridpulse/time.hpp"

namespace gridpulse {

// Day files: one attribute, all PMUs, one day, split into 15-minute row
// groups of per-PMU column chunks. The byte layout is described in
// docs/FORMAT.md; every integer is little-endian.

inline constexpr std::array<char, 5> kDayFileMagic = {'P', 'M', 'U', 'C', '1'};
inline constexpr std::uint8_t kDayFileVersion = 1;
inline constexpr std::size_t kTrailerSize = 8 + 4 + 4 + 4 + 5;
inline constexpr std::size_t kChunkIndexEntrySize = 8 + 4 + 4 + 4 + 4;

struct ReadStats {
  std::uint64_t row_groups_touched = 0;
  std::uint64_t bytes_read = 0;
  std::uint64_t columns_decoded = 0;
};

struct WriteOptions {
  bool dense = false;  // cover only the matrix's ticks instead of a full 96-group day
  int compression_level = 6;
};

struct ChunkIndex {
  std::uint64_t offset = 0;
  std::uint32_t length = 0;
  std::uint32_t tick_start = 0;
  std::uint32_t tick_end = 0;
  std::uint32_t crc = 0;
};

struct DayFileHeader {
  Attribute attribute = Attribute::VPm;
  Date date{};
  std::uint16_t sample_rate = kSampleRate;
  std::uint16_t row_group_count = kRowGroupsPerDay;
  std::uint32_t rows_per_group = static_cast<std::uint32_t>(kTicksPerRowGroup);
  std::uint32_t n_ticks = static_cast<std::uint32_t>(kTicksPerDay);
  std::vector<PmuId> pmu_ids;
};

struct DayFileLayout {
  DayFileHeader header;
  std::vector<std::uint64_t> group_offsets;
  std::vector<ChunkIndex> chunks;  // [group * pmu_count + column]
  std::uint64_t file_size = 0;

  const ChunkIndex& chunk(std::size_t group, std::size_t column) const {
    return chunks[group * header.pmu_ids.size() + column];
  }
};

namespace detail {

class ByteWriter {
 public:
  void u8(std::uint8_t v) { buf_.push_back(static_cast<char>(v)); }
  void u16(std::uint16_t v) { le(v, 2); }
  void u32(std::uint32_t v) { le(v, 4); }
  void u64(std::uint64_t v) { le(v, 8); }
  void i64(std::int64_t v) { le(static_cast<std::uint64_t>(v), 8); }
  void bytes(const void* p, std::size_t n) {
    auto c = static_cast<const char*>(p);
    buf_.insert(buf_.end(), c, c + n);
  }
  const std::string& data() const { return buf_; }
  std::string take() { return std::move(buf_); }

 private:
  void le(std::uint64_t v, int n) {
    for (int i = 0; i < n; ++i) buf_.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
  }
  std::string buf_;
};

class ByteReader {
 public:
  explicit ByteReader(std::string_view data) : data_(data) {}
  std::uint8_t u8() { return static_cast<std::uint8_t>(le(1)); }
  std::uint16_t u16() { return static_cast<std::uint16_t>(le(2)); }
  std::uint32_t u32() { return static_cast<std::uint32_t>(le(4)); }
  std::uint64_t u64() { return le(8); }
  std::int64_t i64() { return static_cast<std::int64_t>(le(8)); }
  std::string_view bytes(std::size_t n) {
    need(n);
    auto out = data_.substr(pos_, n);
    pos_ += n;
    return out;
  }
  std::size_t remaining() const { return data_.size() - pos_; }

 private:
  void need(std::size_t n) const {
    if (pos_ + n > data_.size()) throw FormatError("day file truncated");
  }
  std::uint64_t le(int n) {
    need(static_cast<std::size_t>(n));
    std::uint64_t v = 0;
    for (int i = 0; i < n; ++i)
      v |= static_cast<std::uint64_t>(static_cast<unsigned char>(data_[pos_ + i])) << (8 * i);
    pos_ += static_cast<std::size_t>(n);
    return v;
  }
  std::string_view data_;
  std::size_t pos_ = 0;
};

inline std::uint32_t crc32_of(std::string_view s) {
  return static_cast<std::uint32_t>(
      ::crc32(0L, reinterpret_cast<const Bytef*>(s.data()), static_cast<uInt>(s.size())));
}

inline std::string deflate_bytes(std::string_view in, int level) {
  uLongf len = compressBound(static_cast<uLong>(in.size()));
  std::string out(len, '\0');
  if (compress2(reinterpret_cast<Bytef*>(out.data()), &len,
                reinterpret_cast<const Bytef*>(in.data()), static_cast<uLong>(in.size()),
                level) != Z_OK)
    throw FormatError("deflate failed");
  out.resize(len);
  return out;
}

inline std::string inflate_bytes(std::string_view in, std::size_t expected) {
  std::string out(expected, '\0');
  uLongf len = static_cast<uLongf>(expected);
  int rc = uncompress(reinterpret_cast<Bytef*>(out.data()), &len,
                      reinterpret_cast<const Bytef*>(in.data()), static_cast<uLong>(in.size()));
  if (rc != Z_OK || len != expected) throw IntegrityError("column chunk failed to inflate");
  return out;
}

// Byte planes of little-endian doubles: all byte-0s, then all byte-1s, ...
inline std::string shuffle_doubles(std::span<const double> v) {
  std::string out(v.size() * 8, '\0');
  for (std::size_t i = 0; i < v.size(); ++i) {
    std::uint64_t bits;
    std::memcpy(&bits, &v[i], 8);
    for (std::size_t b = 0; b < 8; ++b)
      out[b * v.size() + i] = static_cast<char>((bits >> (8 * b)) & 0xFF);
  }
  return out;
}

inline std::vector<double> unshuffle_doubles(std::string_view s, std::size_t count) {
  std::vector<double> out(count);
  for (std::size_t i = 0; i < count; ++i) {
    std::uint64_t bits = 0;
    for (std::size_t b = 0; b < 8; ++b)
      bits |= static_cast<std::uint64_t>(static_cast<unsigned char>(s[b * count + i])) << (8 * b);
    std::memcpy(&out[i], &bits, 8);
  }
  return out;
}

inline std::string encode_header(const DayFileHeader& h) {
  ByteWriter w;
  auto code = to_string(h.attribute);
  w.u8(static_cast<std::uint8_t>(code.size()));
  w.bytes(code.data(), code.size());
  w.u16(static_cast<std::uint16_t>(static_cast<int>(h.date.year())));
  w.u8(static_cast<std::uint8_t>(static_cast<unsigned>(h.date.month())));
  w.u8(static_cast<std::uint8_t>(static_cast<unsigned>(h.date.day())));
  w.u16(h.sample_rate);
  w.u16(h.row_group_count);
  w.u32(h.rows_per_group);
  w.u32(h.n_ticks);
  w.u32(static_cast<std::uint32_t>(h.pmu_ids.size()));
  for (auto id : h.pmu_ids) w.i64(id.value);
  return w.take();
}

inline DayFileHeader decode_header(std::string_view s) {
  ByteReader r(s);
  DayFileHeader h;
  auto len = r.u8();
  h.attribute = parse_attribute(r.bytes(len));
  int y = r.u16();
  unsigned m = r.u8(), d = r.u8();
  h.date = Date{std::chrono::year{y}, std::chrono::month{m}, std::chrono::day{d}};
  h.sample_rate = r.u16();
  h.row_group_count = r.u16();
  h.rows_per_group = r.u32();
  h.n_ticks = r.u32();
  auto n = r.u32();
  if (r.remaining() != std::size_t{n} * 8) throw FormatError("header PMU list length mismatch");
  for (std::uint32_t i = 0; i < n; ++i) h.pmu_ids.emplace_back(r.i64());
  if (h.sample_rate != kSampleRate || h.rows_per_group != kTicksPerRowGroup ||
      h.row_group_count == 0 || h.row_group_count > kRowGroupsPerDay ||
      h.n_ticks > std::uint64_t{h.row_group_count} * h.rows_per_group ||
      h.n_ticks <= std::uint64_t{h.row_group_count - 1u} * h.rows_per_group)
    throw FormatError("inconsistent day file header");
  return h;
}

inline std::string encode_chunk(const SeriesMatrix& m, std::size_t column, std::size_t row_begin,
                                std::size_t row_end, int level) {
  const auto rows = row_end - row_begin;
  std::string bitmap((rows + 7) / 8, '\0');
  std::vector<double> present;
  for (std::size_t r = row_begin; r < row_end; ++r) {
    if (r >= m.rows()) continue;  // padded tail
    auto i = r * m.cols() + column;
    if (!m.present[i]) continue;
    auto k = r - row_begin;
    bitmap[k / 8] = static_cast<char>(bitmap[k / 8] | (1 << (k % 8)));
    present.push_back(m.values[i]);
  }
  ByteWriter w;
  w.u32(static_cast<std::uint32_t>(present.size()));
  auto packed_bitmap = deflate_bytes(bitmap, level);
  w.u32(static_cast<std::uint32_t>(packed_bitmap.size()));
  w.bytes(packed_bitmap.data(), packed_bitmap.size());
  if (present.empty()) {
    w.u32(0);
  } else {
    auto payload = deflate_bytes(shuffle_doubles(present), level);
    w.u32(static_cast<std::uint32_t>(payload.size()));
    w.bytes(payload.data(), payload.size());
  }
  return w.take();
}

struct DecodedChunk {
  std::string bitmap;
  std::vector<double> values;  // present values in row order
};

inline DecodedChunk decode_chunk(std::string_view s, std::size_t rows) {
  ByteReader r(s);
  DecodedChunk out;
  auto present = r.u32();
  auto bitmap_len = r.u32();
  out.bitmap = inflate_bytes(r.bytes(bitmap_len), (rows + 7) / 8);
  auto payload_len = r.u32();
  if (present > 0) out.values = unshuffle_doubles(inflate_bytes(r.bytes(payload_len), present * 8ULL), present);
  else if (payload_len != 0) throw FormatError("payload present in an all-null chunk");
  std::size_t count = 0;
  for (std::size_t k = 0; k < rows; ++k) count += (out.bitmap[k / 8] >> (k % 8)) & 1;
  if (count != present) throw IntegrityError("presence bitmap disagrees with value count");
  return out;
}

inline std::string read_at(std::ifstream& in, std::uint64_t offset, std::size_t n,
                           ReadStats* stats) {
  std::string buf(n, '\0');
  in.seekg(static_cast<std::streamoff>(offset));
  in.read(buf.data(), static_cast<std::streamsize>(n));
  if (static_cast<std::size_t>(in.gcount()) != n) throw FormatError("day file truncated");
  if (stats) stats->bytes_read += n;
  return buf;
}

}  // namespace detail

// Writes to a temporary sibling and renames it into place when complete.
inline void write_day_file(const std::filesystem::path& path, const SeriesMatrix& matrix,
                           const WriteOptions& options = {}) {
  matrix.validate();
  if (matrix.start_tick != 0)
    throw ArgumentError("day files start at tick 0; got start_tick " +
                        std::to_string(matrix.start_tick));
  if (matrix.rows() == 0) throw ArgumentError("cannot write an empty day");
  {
    std::vector<PmuId> sorted = matrix.pmu_ids;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
      throw FormatError("duplicate PMU column in matrix");
  }

  DayFileHeader h;
  h.attribute = matrix.attribute;
  h.date = matrix.date;
  h.pmu_ids = matrix.pmu_ids;
  h.n_ticks = static_cast<std::uint32_t>(options.dense ? matrix.rows() : kTicksPerDay);
  h.row_group_count = static_cast<std::uint16_t>((h.n_ticks + kTicksPerRowGroup - 1) / kTicksPerRowGroup);

  detail::ByteWriter file;
  file.bytes(kDayFileMagic.data(), kDayFileMagic.size());
  file.u8(kDayFileVersion);
  auto header = detail::encode_header(h);
  file.u32(static_cast<std::uint32_t>(header.size()));
  file.bytes(header.data(), header.size());

  std::vector<std::uint64_t> group_offsets;
  std::vector<ChunkIndex> chunks;
  for (std::size_t g = 0; g < h.row_group_count; ++g) {
    auto begin = g * kTicksPerRowGroup;
    auto end = std::min<std::size_t>(begin + kTicksPerRowGroup, h.n_ticks);
    group_offsets.push_back(file.data().size());
    for (std::size_t c = 0; c < matrix.cols(); ++c) {
      auto chunk = detail::encode_chunk(matrix, c, begin, end, options.compression_level);
      chunks.push_back({file.data().size(), static_cast<std::uint32_t>(chunk.size()),
                        static_cast<std::uint32_t>(begin), static_cast<std::uint32_t>(end),
                        detail::crc32_of(chunk)});
      file.bytes(chunk.data(), chunk.size());
    }
  }

  detail::ByteWriter footer;
  footer.u16(h.row_group_count);
  footer.u32(static_cast<std::uint32_t>(matrix.cols()));
  for (std::size_t g = 0; g < h.row_group_count; ++g) {
    footer.u64(group_offsets[g]);
    for (std::size_t c = 0; c < matrix.cols(); ++c) {
      const auto& ci = chunks[g * matrix.cols() + c];
      footer.u64(ci.offset);
      footer.u32(ci.length);
      footer.u32(ci.tick_start);
      footer.u32(ci.tick_end);
      footer.u32(ci.crc);
    }
  }
  auto footer_offset = file.data().size();
  file.bytes(footer.data().data(), footer.data().size());
  file.u64(footer_offset);
  file.u32(static_cast<std::uint32_t>(footer.data().size()));
  file.u32(detail::crc32_of(footer.data()));
  file.u32(detail::crc32_of(header));
  file.bytes(kDayFileMagic.data(), kDayFileMagic.size());

  std::filesystem::create_directories(path.parent_path().empty() ? "." : path.parent_path());
  std::random_device rd;
  auto tmp = path;
  tmp += ".tmp-" + std::to_string(rd());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw FormatError("cannot write " + tmp.string());
    out.write(file.data().data(), static_cast<std::streamsize>(file.data().size()));
    if (!out) throw FormatError("short write to " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

// One open day file. Each instance owns its stream; share files across
// threads by opening one reader per thread.
class DayFileReader {
 public:
  explicit DayFileReader(const std::filesystem::path& path, ReadStats* stats = nullptr)
      : in_(path, std::ios::binary), path_(path) {
    if (!in_) throw FormatError("cannot open " + path.string());
    in_.seekg(0, std::ios::end);
    layout_.file_size = static_cast<std::uint64_t>(in_.tellg());
    if (layout_.file_size < 10 + kTrailerSize) throw FormatError(path.string() + ": not a day file");

    auto lead = detail::read_at(in_, 0, 10, stats);
    if (std::memcmp(lead.data(), kDayFileMagic.data(), 5) != 0 ||
        static_cast<std::uint8_t>(lead[5]) != kDayFileVersion)
      throw FormatError(path.string() + ": bad magic or version");
    detail::ByteReader lr(std::string_view(lead).substr(6));
    auto header_len = lr.u32();

    auto trailer = detail::read_at(in_, layout_.file_size - kTrailerSize, kTrailerSize, stats);
    detail::ByteReader tr(trailer);
    auto footer_offset = tr.u64();
    auto footer_len = tr.u32();
    auto footer_crc = tr.u32();
    auto header_crc = tr.u32();
    if (std::memcmp(trailer.data() + kTrailerSize - 5, kDayFileMagic.data(), 5) != 0)
      throw FormatError(path.string() + ": bad trailing magic");
    if (10 + std::uint64_t{header_len} > footer_offset ||
        footer_offset + footer_len + kTrailerSize != layout_.file_size)
      throw FormatError(path.string() + ": inconsistent section offsets");

    auto header = detail::read_at(in_, 10, header_len, stats);
    if (detail::crc32_of(header) != header_crc)
      throw IntegrityError(path.string() + ": header checksum mismatch");
    layout_.header = detail::decode_header(header);

    auto footer = detail::read_at(in_, footer_offset, footer_len, stats);
    if (detail::crc32_of(footer) != footer_crc)
      throw IntegrityError(path.string() + ": footer checksum mismatch");
    detail::ByteReader fr(footer);
    auto groups = fr.u16();
    auto cols = fr.u32();
    if (groups != layout_.header.row_group_count || cols != layout_.header.pmu_ids.size() ||
        fr.remaining() != std::size_t{groups} * (8 + std::size_t{cols} * kChunkIndexEntrySize))
      throw FormatError(path.string() + ": footer disagrees with header");
    std::uint64_t last = 0;
    for (std::uint16_t g = 0; g < groups; ++g) {
      auto off = fr.u64();
      if (g > 0 && off <= last) throw FormatError(path.string() + ": row group offsets not increasing");
      last = off;
      layout_.group_offsets.push_back(off);
      for (std::uint32_t c = 0; c < cols; ++c) {
        ChunkIndex ci;
        ci.offset = fr.u64();
        ci.length = fr.u32();
        ci.tick_start = fr.u32();
        ci.tick_end = fr.u32();
        ci.crc = fr.u32();
        if (ci.offset + ci.length > footer_offset || ci.tick_start != g * kTicksPerRowGroup)
          throw FormatError(path.string() + ": chunk index out of bounds");
        layout_.chunks.push_back(ci);
      }
    }
    for (std::size_t c = 0; c < layout_.header.pmu_ids.size(); ++c)
      column_.emplace(layout_.header.pmu_ids[c], c);
  }

  const DayFileLayout& layout() const { return layout_; }
  const DayFileHeader& header() const { return layout_.header; }

  // Decompresses only the row groups overlapping [t0, t1) and the requested columns.
  SeriesMatrix read(std::span<const PmuId> pmu_ids, std::int64_t t0, std::int64_t t1,
                    ReadStats* stats = nullptr) {
    const auto& h = layout_.header;
    if (!(t0 >= 0 && t0 < t1 && t1 <= static_cast<std::int64_t>(h.n_ticks)))
      throw RangeError("tick range [" + std::to_string(t0) + ", " + std::to_string(t1) +
                       ") outside stored data [0, " + std::to_string(h.n_ticks) + ")");
    std::vector<std::size_t> cols;
    for (auto id : pmu_ids) {
      auto it = column_.find(id);
      if (it == column_.end())
        throw IdentifierError("PMU " + to_string(id) + " not in " + path_.filename().string());
      cols.push_back(it->second);
    }
    auto out = SeriesMatrix::nulls(h.attribute, h.date, t0, t1, {pmu_ids.begin(), pmu_ids.end()});
    auto g0 = static_cast<std::size_t>(t0 / kTicksPerRowGroup);
    auto g1 = static_cast<std::size_t>((t1 - 1) / kTicksPerRowGroup);
    if (stats) stats->row_groups_touched += g1 - g0 + 1;
    for (auto g = g0; g <= g1; ++g) {
      for (std::size_t j = 0; j < cols.size(); ++j) {
        const auto& ci = layout_.chunk(g, cols[j]);
        auto raw = detail::read_at(in_, ci.offset, ci.length, stats);
        if (detail::crc32_of(raw) != ci.crc)
          throw IntegrityError(path_.string() + ": checksum mismatch in row group " +
                               std::to_string(g) + ", PMU " + to_string(pmu_ids[j]));
        auto rows = std::size_t{ci.tick_end} - ci.tick_start;
        auto chunk = detail::decode_chunk(raw, rows);
        if (stats) ++stats->columns_decoded;
        std::size_t v = 0;
        for (std::size_t k = 0; k < rows; ++k) {
          bool present = (chunk.bitmap[k / 8] >> (k % 8)) & 1;
          auto tick = static_cast<std::int64_t>(ci.tick_start + k);
          if (tick >= t0 && tick < t1 && present)
            out.set(static_cast<std::size_t>(tick - t0), j, chunk.values[v]);
          v += present;
        }
      }
    }
    return out;
  }

  // Verifies every chunk checksum and decodes every chunk.
  void verify() {
    for (std::size_t g = 0; g < layout_.header.row_group_count; ++g)
      for (std::size_t c = 0; c < layout_.header.pmu_ids.size(); ++c) {
        const auto& ci = layout_.chunk(g, c);
        auto raw = detail::read_at(in_, ci.offset, ci.length, nullptr);
        if (detail::crc32_of(raw) != ci.crc)
          throw IntegrityError(path_.string() + ": checksum mismatch in row group " +
                               std::to_string(g));
        detail::decode_chunk(raw, std::size_t{ci.tick_end} - ci.tick_start);
      }
  }

 private:
  std::ifstream in_;
  std::filesystem::path path_;
  DayFileLayout layout_;
  std::unordered_map<PmuId, std::size_t> column_;
};

// Directory of day files laid out as <root>/<YYYY-MM-DD>/<attribute>.pmuc.
class Store {
 public:
  explicit Store(std::filesystem::path root) : root_(std::move(root)) {}

  const std::filesystem::path& root() const { return root_; }

  std::filesystem::path path_for(Attribute attribute, Date date) const {
    return root_ / format_date(date) / (std::string(to_string(attribute)) + ".pmuc");
  }

  bool has(Attribute attribute, Date date) const {
    return std::filesystem::exists(path_for(attribute, date));
  }

  void write_day(const SeriesMatrix& matrix, const WriteOptions& options = {}) const {
    write_day_file(path_for(matrix.attribute, matrix.date), matrix, options);
  }

  SeriesMatrix read_range(Attribute attribute, Date date, std::span<const PmuId> pmu_ids,
                          std::int64_t t0, std::int64_t t1, ReadStats* stats = nullptr) const {
    auto path = path_for(attribute, date);
    if (!std::filesystem::exists(path))
      throw RangeError("no " + std::string(to_string(attribute)) + " data for " + format_date(date));
    DayFileReader reader(path, stats);
    return reader.read(pmu_ids, t0, t1, stats);
  }

  // SeriesSource interface used by the analysis layer.
  SeriesMatrix read(Attribute attribute, Date date, std::span<const PmuId> pmu_ids,
                    std::int64_t t0, std::int64_t t1) const {
    return read_range(attribute, date, pmu_ids, t0, t1);
  }

  DayFileHeader header(Attribute attribute, Date date) const {
    auto path = path_for(attribute, date);
    if (!std::filesystem::exists(path))
      throw RangeError("no " + std::string(to_string(attribute)) + " data for " + format_date(date));
    return DayFileReader(path).header();
  }

  std::vector<Date> days() const {
    std::vector<Date> out;
    if (!std::filesystem::exists(root_)) return out;
    for (const auto& entry : std::filesystem::directory_iterator(root_)) {
      if (!entry.is_directory()) continue;
      try {
        out.push_back(parse_date(entry.path().filename().string()));
      } catch (const ArgumentError&) {
      }
    }
    std::sort(out.begin(), out.end());
    return out;
  }

 private:
  std::filesystem::path root_;
};

}  // namespace gridpulse

#endif  // GRIDPULSE_STORE_HPP

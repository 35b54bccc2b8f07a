// Copyright 2026 The datacast Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <istream>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "datacast/codec.hpp"

namespace dcast {

/// Bitrate split of a digital radio multiplex. Only the data share carries
/// bytes; audio is capacity bookkeeping.
struct MultiplexConfig {
  double data_bitrate = 5000.0;   // bits/s
  double audio_bitrate = 16000.0; // bits/s
  double frame_duration = 0.4;    // s
  std::string preset_name;

  /// floor(data_bitrate * frame_duration / 8). The epsilon absorbs binary
  /// rounding in products such as 5000 * 0.4.
  std::size_t frame_capacity() const {
    return static_cast<std::size_t>(std::floor(data_bitrate * frame_duration / 8.0 + 1e-9));
  }

  double total_bitrate() const { return data_bitrate + audio_bitrate; }

  void validate() const {
    if (!(data_bitrate > 0)) throw Error(Errc::InvalidConfig, "data bitrate must be positive");
    if (!(audio_bitrate >= 0)) throw Error(Errc::InvalidConfig, "audio bitrate must be non-negative");
    if (!(frame_duration > 0)) throw Error(Errc::InvalidConfig, "frame duration must be positive");
    if (frame_capacity() < 12)
      throw Error(Errc::InvalidConfig, "data frame capacity " + std::to_string(frame_capacity()) +
                                           " bytes is below the 12-byte minimum group");
  }
};

struct MultiplexPreset {
  std::string_view name;
  std::string_view description;
  MultiplexConfig config;
};

// Only drm30-paper reflects a measured setup (shortwave, 5 kbps app + 16
// kbps audio). The other two are illustrative allocations for a 10 kHz
// channel under 30 MHz and a 100 kHz VHF channel.
inline const std::array<MultiplexPreset, 3>& multiplex_presets() {
  static const std::array<MultiplexPreset, 3> presets{{
      {"drm30-paper", "DRM30 shortwave, 5 kbps data / 16 kbps audio", {5000.0, 16000.0, 0.4, "drm30-paper"}},
      {"drm30-narrow", "DRM30 narrow allocation, 2.5 kbps data / 12 kbps audio",
       {2500.0, 12000.0, 0.4, "drm30-narrow"}},
      {"drm-vhf", "DRM VHF 100 kHz, 32 kbps data / 96 kbps audio", {32000.0, 96000.0, 0.1, "drm-vhf"}},
  }};
  return presets;
}

inline MultiplexConfig preset(std::string_view name) {
  for (const auto& p : multiplex_presets())
    if (p.name == name) return p.config;
  throw Error(Errc::InvalidConfig, "unknown preset '" + std::string(name) + "'");
}

/// One carousel cycle: header groups first, then body groups.
struct CarouselSchedule {
  std::vector<Bytes> groups;
  std::size_t header_groups = 0;
  std::size_t cycle_bytes = 0;

  std::size_t max_group_bytes() const {
    std::size_t m = 0;
    for (const auto& g : groups) m = std::max(m, g.size());
    return m;
  }

  Bytes flatten() const {
    Bytes out;
    out.reserve(cycle_bytes);
    for (const auto& g : groups) out.insert(out.end(), g.begin(), g.end());
    return out;
  }
};

inline CarouselSchedule build_schedule(const SignalingHeader& header, const CompressedPayload& body,
                                       std::size_t segment_size = kDefaultSegmentSize) {
  const auto tid = transport_id_for(header.app_id);
  const auto head = segment_payload(ObjectKind::Header, tid, encode_signaling(header), segment_size);
  const auto tail = segment_payload(ObjectKind::Body, tid, body.data, segment_size);

  CarouselSchedule s;
  s.header_groups = head.size();
  for (const auto* part : {&head, &tail})
    for (const auto& seg : *part) {
      s.groups.push_back(encode_group(seg));
      s.cycle_bytes += s.groups.back().size();
    }
  return s;
}

inline double cycle_duration(const CarouselSchedule& schedule, const MultiplexConfig& config) {
  return static_cast<double>(schedule.cycle_bytes) * 8.0 / config.data_bitrate;
}

struct Frame {
  std::uint64_t index = 0;
  double timestamp = 0.0;
  Bytes data;

  friend bool operator==(const Frame&, const Frame&) = default;
};

/// Random access into the infinite stream cycle | cycle | ... cut into
/// fixed-capacity frames. Groups straddle frame boundaries freely.
class FrameSource {
 public:
  FrameSource(const CarouselSchedule& schedule, const MultiplexConfig& config)
      : cycle_(schedule.flatten()), capacity_(config.frame_capacity()), frame_duration_(config.frame_duration) {
    config.validate();
    if (cycle_.empty()) throw Error(Errc::InvalidConfig, "empty carousel schedule");
  }

  std::size_t capacity() const noexcept { return capacity_; }
  double frame_duration() const noexcept { return frame_duration_; }
  std::size_t cycle_bytes() const noexcept { return cycle_.size(); }

  Frame frame_at(std::uint64_t index) const {
    Frame f;
    f.index = index;
    f.timestamp = static_cast<double>(index) * frame_duration_;
    f.data.resize(capacity_);
    std::size_t pos = static_cast<std::size_t>((static_cast<unsigned __int128>(index) * capacity_) % cycle_.size());
    std::size_t filled = 0;
    while (filled < capacity_) {
      const std::size_t take = std::min(capacity_ - filled, cycle_.size() - pos);
      std::copy_n(cycle_.begin() + static_cast<std::ptrdiff_t>(pos), take, f.data.begin() + static_cast<std::ptrdiff_t>(filled));
      filled += take;
      pos = (pos + take) % cycle_.size();
    }
    return f;
  }

 private:
  Bytes cycle_;
  std::size_t capacity_;
  double frame_duration_;
};

inline std::vector<Frame> frame_stream(const CarouselSchedule& schedule, const MultiplexConfig& config,
                                       std::uint64_t frame_count, std::uint64_t first_index = 0) {
  FrameSource src(schedule, config);
  std::vector<Frame> frames;
  frames.reserve(static_cast<std::size_t>(frame_count));
  for (std::uint64_t i = 0; i < frame_count; ++i) frames.push_back(src.frame_at(first_index + i));
  return frames;
}

// ---------------------------------------------------------------------------
// GFRM offline frame file: "GFRM" | u32 capacity | u64 frame_count | frames
// ---------------------------------------------------------------------------

inline constexpr std::string_view kFrameFileMagic = "GFRM";
inline constexpr std::size_t kFrameFileHeaderBytes = 16;

inline void write_gfrm_header(std::ostream& os, std::uint32_t capacity, std::uint64_t frame_count) {
  Bytes head;
  BeWriter w(head);
  w.raw(kFrameFileMagic);
  w.u32(capacity);
  w.u64(frame_count);
  os.write(reinterpret_cast<const char*>(head.data()), static_cast<std::streamsize>(head.size()));
}

inline void write_gfrm_frame(std::ostream& os, const Frame& f) {
  os.write(reinterpret_cast<const char*>(f.data.data()), static_cast<std::streamsize>(f.data.size()));
}

/// Streams frames back out of a GFRM file; memory use is one frame.
class GfrmReader {
 public:
  GfrmReader(std::istream& is, double frame_duration) : is_(is), frame_duration_(frame_duration) {
    std::array<char, kFrameFileHeaderBytes> raw{};
    if (!is_.read(raw.data(), raw.size())) throw Error(Errc::Truncated, "GFRM header");
    Bytes head(raw.begin(), raw.end());
    BeReader r(head);
    if (to_string(r.raw(4)) != kFrameFileMagic) throw Error(Errc::BadMagic, "not a GFRM file");
    capacity_ = r.u32();
    frame_count_ = r.u64();
    if (capacity_ == 0) throw Error(Errc::BadField, "GFRM capacity 0");
  }

  std::uint32_t capacity() const noexcept { return capacity_; }
  std::uint64_t frame_count() const noexcept { return frame_count_; }

  std::optional<Frame> next() {
    if (next_index_ >= frame_count_) return std::nullopt;
    Frame f;
    f.index = next_index_;
    f.timestamp = static_cast<double>(next_index_) * frame_duration_;
    f.data.resize(capacity_);
    if (!is_.read(reinterpret_cast<char*>(f.data.data()), capacity_))
      throw Error(Errc::Truncated, "GFRM frame " + std::to_string(next_index_));
    ++next_index_;
    return f;
  }

 private:
  std::istream& is_;
  double frame_duration_;
  std::uint32_t capacity_ = 0;
  std::uint64_t frame_count_ = 0;
  std::uint64_t next_index_ = 0;
};

}  // namespace dcast

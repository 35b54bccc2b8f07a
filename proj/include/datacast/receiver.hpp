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

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "datacast/bundle.hpp"
#include "datacast/carousel.hpp"
#include "datacast/codec.hpp"
#include "datacast/compress.hpp"

namespace dcast {

/// Collects the segments of one object as they arrive. A segment number
/// seen with two different contents means one copy was bad; the collection
/// restarts from the newer segment and the carousel fills it in again.
class ObjectAssembler {
 public:
  enum class AddResult { Added, Duplicate, Restarted };

  AddResult add(const Segment& seg) {
    auto it = segments_.find(seg.number);
    if (it != segments_.end()) {
      if (it->second == seg) return AddResult::Duplicate;
      reset();
      segments_.emplace(seg.number, seg);
      note_last(seg);
      return AddResult::Restarted;
    }
    if (seg.is_last && last_ && *last_ != seg.number) {
      reset();
      segments_.emplace(seg.number, seg);
      note_last(seg);
      return AddResult::Restarted;
    }
    segments_.emplace(seg.number, seg);
    note_last(seg);
    return AddResult::Added;
  }

  bool has_all_numbers() const { return last_ && segments_.size() == static_cast<std::size_t>(*last_) + 1; }

  /// Reassembled bytes once every segment is in; irregular sets are dropped.
  std::optional<Bytes> try_complete() {
    if (!has_all_numbers()) return std::nullopt;
    std::vector<Segment> all;
    all.reserve(segments_.size());
    for (const auto& [n, s] : segments_) all.push_back(s);
    try {
      return reassemble(all);
    } catch (const Error&) {
      reset();
      return std::nullopt;
    }
  }

  /// Wire bytes one copy of this object occupies in a cycle.
  std::size_t encoded_bytes() const {
    std::size_t total = 0;
    for (const auto& [n, s] : segments_) total += encoded_group_size(s.payload.size());
    return total;
  }

  std::size_t size() const { return segments_.size(); }

  void reset() {
    segments_.clear();
    last_.reset();
  }

 private:
  void note_last(const Segment& seg) {
    if (seg.is_last) last_ = seg.number;
  }

  std::map<std::uint16_t, Segment> segments_;
  std::optional<std::uint16_t> last_;
};

enum class ReceiverStatus { Listening, Complete };
enum class Outcome { Complete, TimedOut };

struct ReceiverOptions {
  double frame_duration = 0.4;
  double join_time = 0.0;
  /// Used for cycles_spanned; when unset it is taken from the frame size.
  std::optional<double> data_bitrate;
};

struct ReceiverCounters {
  std::uint64_t frames_seen = 0;
  std::uint64_t groups_scanned = 0;
  std::uint64_t groups_ok = 0;
  std::uint64_t groups_corrupt = 0;
  std::uint64_t groups_duplicate = 0;
  std::uint64_t object_restarts = 0;
  std::uint64_t header_decode_failures = 0;
  std::uint64_t body_crc_failures = 0;
  std::uint64_t stream_gaps = 0;

  friend bool operator==(const ReceiverCounters&, const ReceiverCounters&) = default;
};

struct AcquisitionReport {
  double join_time = 0.0;
  std::optional<double> header_complete_time;
  std::optional<double> completion_time;
  std::optional<double> elapsed;
  std::optional<double> cycles_spanned;
  std::uint64_t frames_seen = 0;
  std::uint64_t groups_ok = 0;
  std::uint64_t groups_corrupt = 0;
  Outcome outcome = Outcome::TimedOut;

  friend bool operator==(const AcquisitionReport&, const AcquisitionReport&) = default;
};

class ReceiverState {
 public:
  explicit ReceiverState(ReceiverOptions options = {}) : options_(options) {}

  ReceiverStatus status() const noexcept { return status_; }
  const ReceiverCounters& counters() const noexcept { return counters_; }
  const ReceiverOptions& options() const noexcept { return options_; }
  const std::optional<SignalingHeader>& decoded_header() const noexcept { return header_; }
  std::optional<double> header_complete_time() const noexcept { return header_time_; }
  std::optional<double> completion_time() const noexcept { return completion_time_; }
  /// Reassembled compressed body; set once status is Complete.
  const std::optional<Bytes>& body() const noexcept { return body_; }

  void ingest_frame(const Frame& frame) {
    if (last_index_ && frame.index <= *last_index_)
      throw Error(Errc::OutOfOrderFrame, "frame " + std::to_string(frame.index) + " after " +
                                             std::to_string(*last_index_));
    // Bytes on either side of a lost frame are not contiguous.
    if (last_index_ && frame.index != *last_index_ + 1) {
      buffer_.clear();
      ++counters_.stream_gaps;
    }
    last_index_ = frame.index;
    last_frame_bytes_ = frame.data.size();
    ++counters_.frames_seen;

    buffer_.insert(buffer_.end(), frame.data.begin(), frame.data.end());
    std::size_t cursor = 0;
    for (;;) {
      auto step = decode_next(buffer_, cursor);
      cursor = step.cursor;
      if (std::holds_alternative<NeedMoreData>(step.outcome)) break;
      ++counters_.groups_scanned;
      if (std::holds_alternative<CorruptSkipped>(step.outcome)) {
        ++counters_.groups_corrupt;
        continue;
      }
      ++counters_.groups_ok;
      file_segment(std::get<Segment>(std::move(step.outcome)), frame);
    }
    buffer_.erase(buffer_.begin(), buffer_.begin() + static_cast<std::ptrdiff_t>(cursor));
  }

  /// Drops the assembled objects after a failed integrity check so the next
  /// carousel pass can refill them.
  void discard_objects() {
    header_.reset();
    header_time_.reset();
    body_.reset();
    completion_time_.reset();
    status_ = ReceiverStatus::Listening;
    objects_.clear();
  }

  void note_body_crc_failure() { ++counters_.body_crc_failures; }

  /// Bytes per cycle reconstructed from the segments held for the locked
  /// application. Exact once both objects are complete.
  std::size_t observed_cycle_bytes() const {
    if (!header_) return 0;
    const auto tid = transport_id_for(header_->app_id);
    std::size_t total = 0;
    for (auto kind : {ObjectKind::Header, ObjectKind::Body}) {
      auto it = objects_.find({kind, tid});
      if (it != objects_.end()) total += it->second.encoded_bytes();
    }
    return total;
  }

  double effective_bitrate() const {
    if (options_.data_bitrate) return *options_.data_bitrate;
    return static_cast<double>(last_frame_bytes_) * 8.0 / options_.frame_duration;
  }

 private:
  using ObjectKey = std::pair<ObjectKind, std::uint16_t>;

  void file_segment(Segment seg, const Frame& frame) {
    const ObjectKey key{seg.kind, seg.transport_id};
    auto& assembler = objects_[key];
    switch (assembler.add(seg)) {
      case ObjectAssembler::AddResult::Duplicate:
        ++counters_.groups_duplicate;
        return;
      case ObjectAssembler::AddResult::Restarted:
        ++counters_.object_restarts;
        break;
      case ObjectAssembler::AddResult::Added:
        break;
    }
    const double frame_end = frame.timestamp + options_.frame_duration;

    if (seg.kind == ObjectKind::Header && !header_) {
      if (auto bytes = assembler.try_complete()) {
        try {
          auto h = decode_signaling(*bytes);
          if (transport_id_for(h.app_id) != seg.transport_id)
            throw Error(Errc::BadField, "app id does not match transport id");
          header_ = std::move(h);
          header_time_ = frame_end;
        } catch (const Error&) {
          ++counters_.header_decode_failures;
          assembler.reset();
        }
      }
    }
    if (header_ && status_ == ReceiverStatus::Listening) {
      auto it = objects_.find({ObjectKind::Body, transport_id_for(header_->app_id)});
      if (it != objects_.end()) {
        if (auto bytes = it->second.try_complete()) {
          body_ = std::move(*bytes);
          completion_time_ = frame_end;
          status_ = ReceiverStatus::Complete;
        }
      }
    }
  }

  ReceiverOptions options_;
  ReceiverStatus status_ = ReceiverStatus::Listening;
  ReceiverCounters counters_;
  Bytes buffer_;
  std::optional<std::uint64_t> last_index_;
  std::size_t last_frame_bytes_ = 0;
  std::map<ObjectKey, ObjectAssembler> objects_;
  std::optional<SignalingHeader> header_;
  std::optional<double> header_time_;
  std::optional<Bytes> body_;
  std::optional<double> completion_time_;
};

inline AcquisitionReport report(const ReceiverState& state) {
  AcquisitionReport r;
  r.join_time = state.options().join_time;
  r.header_complete_time = state.header_complete_time();
  r.completion_time = state.completion_time();
  r.frames_seen = state.counters().frames_seen;
  r.groups_ok = state.counters().groups_ok;
  r.groups_corrupt = state.counters().groups_corrupt;
  if (state.status() == ReceiverStatus::Complete && r.completion_time) {
    r.outcome = Outcome::Complete;
    r.elapsed = *r.completion_time - r.join_time;
    const double cycle = static_cast<double>(state.observed_cycle_bytes()) * 8.0 / state.effective_bitrate();
    if (cycle > 0) r.cycles_spanned = *r.elapsed / cycle;
  }
  return r;
}

// ---------------------------------------------------------------------------
// Delivery
// ---------------------------------------------------------------------------

class OutputSink {
 public:
  virtual ~OutputSink() = default;
  virtual void write(const FileEntry& file) = 0;
};

class MemorySink : public OutputSink {
 public:
  void write(const FileEntry& file) override { files[file.name] = file.data; }
  std::map<std::string, Bytes> files;
};

/// Writes under a root directory. Names were checked by parse_container, so
/// joining them cannot escape the root.
class DirectorySink : public OutputSink {
 public:
  explicit DirectorySink(std::filesystem::path root) : root_(std::move(root)) {}

  void write(const FileEntry& file) override {
    const auto path = root_ / std::filesystem::path(file.name);
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
    if (ec) throw Error(Errc::Io, "cannot create " + path.parent_path().string() + ": " + ec.message());
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    os.write(reinterpret_cast<const char*>(file.data.data()), static_cast<std::streamsize>(file.data.size()));
    if (!os) throw Error(Errc::Io, "cannot write " + path.string());
  }

 private:
  std::filesystem::path root_;
};

struct LaunchEvent {
  std::string entry_point;
  bool autostart = false;
  std::uint64_t app_id = 0;

  friend bool operator==(const LaunchEvent&, const LaunchEvent&) = default;
};

/// `launch app_id=<16 hex digits> entry=<name> autostart=<0|1>`
inline std::string launch_line(const LaunchEvent& ev) {
  char hex[17];
  std::snprintf(hex, sizeof hex, "%016llx", static_cast<unsigned long long>(ev.app_id));
  return std::string("launch app_id=") + hex + " entry=" + ev.entry_point + " autostart=" + (ev.autostart ? "1" : "0");
}

struct DeliveredApplication {
  std::vector<FileEntry> files;
  ApplicationMetadata metadata;
  LaunchEvent launch;
};

/// Verifies, unpacks and writes a completed application.
///
/// A body CRC mismatch discards the assembled objects and throws; the state
/// returns to Listening so later carousel passes can still deliver. The
/// remaining failures leave the state untouched.
inline DeliveredApplication deliver(ReceiverState& state, OutputSink& sink) {
  if (state.status() != ReceiverStatus::Complete || !state.body() || !state.decoded_header())
    throw Error(Errc::NotComplete, "application not fully received");
  const SignalingHeader header = *state.decoded_header();
  const Bytes& body = *state.body();

  if (body.size() != header.compressed_size || crc::crc32(body) != header.body_crc32) {
    state.note_body_crc_failure();
    state.discard_objects();
    throw Error(Errc::BodyCrcMismatch, "body does not match announced size/CRC-32");
  }

  Bytes container;
  try {
    container = decompress_payload(CompressedPayload{header.codec, header.uncompressed_size, body});
  } catch (const Error& e) {
    throw Error(Errc::DecompressFailure, e.what());
  }

  std::vector<FileEntry> files;
  try {
    files = parse_container(container);
  } catch (const Error& e) {
    throw Error(Errc::ContainerParseFailure, e.what());
  }

  ApplicationMetadata meta{header.app_id, header.entry_point, header.autostart, header.content_type};
  if (header.content_type == ContentType::InteractiveApplication) {
    bool found = false;
    for (const auto& f : files) found = found || f.name == header.entry_point;
    if (!found) throw Error(Errc::EntryPointMissing, "'" + header.entry_point + "' not in delivered files");
  }

  for (const auto& f : files) sink.write(f);
  return DeliveredApplication{std::move(files), meta, LaunchEvent{header.entry_point, header.autostart, header.app_id}};
}

}  // namespace dcast

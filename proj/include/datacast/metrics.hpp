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

#include <cmath>
#include <cstdint>
#include <optional>
#include <sstream>
#include <string>

#include <json.hpp>

#include "datacast/carousel.hpp"
#include "datacast/channel.hpp"
#include "datacast/package.hpp"
#include "datacast/receiver.hpp"

namespace dcast {

struct AcquisitionEstimate {
  std::uint64_t payload_bytes = 0;
  std::uint64_t payload_bits = 0;
  double data_bitrate = 0.0;
  double seconds = 0.0;
};

/// Time to push `payload_bytes` through the data channel once, with no
/// framing: bytes * 8 / bitrate.
inline AcquisitionEstimate estimate_acquisition_seconds(std::uint64_t payload_bytes, double data_bitrate) {
  if (!(data_bitrate > 0)) throw Error(Errc::ZeroBitrate, "data bitrate must be positive");
  AcquisitionEstimate e;
  e.payload_bytes = payload_bytes;
  e.payload_bits = payload_bytes * 8;
  e.data_bitrate = data_bitrate;
  e.seconds = static_cast<double>(e.payload_bits) / data_bitrate;
  return e;
}

struct ExperimentOptions {
  Codec codec = Codec::Deflate;
  std::size_t segment_size = kDefaultSegmentSize;
  std::optional<std::uint32_t> force_body_size;
  std::uint64_t join_frame = 0;
  double launch_latency_s = 0.0;
  double timeout_cycles = 100.0;
};

struct DeliveryResult {
  bool delivered = false;
  std::optional<std::string> error;
  std::vector<FileEntry> files;
  std::optional<LaunchEvent> launch;
};

struct ExperimentResult {
  AcquisitionReport report;
  AcquisitionEstimate estimate;
  ReceiverCounters counters;
  DeliveryResult delivery;
  std::size_t cycle_bytes = 0;
  std::size_t group_count = 0;
  std::size_t frame_capacity = 0;
  double cycle_duration = 0.0;
};

// Frames that end no later than `timeout_cycles` cycles after joining.
inline std::uint64_t timeout_frames(double cycle_seconds, double timeout_cycles, double frame_duration) {
  const auto n = static_cast<std::uint64_t>(std::floor(cycle_seconds * timeout_cycles / frame_duration + 1e-9));
  return std::max<std::uint64_t>(n, 1);
}

/// Broadcasts `packed` on a carousel and runs one receiver from
/// `join_frame` until it delivers or the timeout passes. A body that fails
/// its CRC-32 is discarded and reception continues.
inline ExperimentResult run_experiment(const PackedApplication& packed, const MultiplexConfig& mux,
                                       const ChannelModel& channel, const ExperimentOptions& opts) {
  mux.validate();
  channel.validate();
  if (!(opts.launch_latency_s >= 0)) throw Error(Errc::InvalidConfig, "launch latency must be non-negative");
  if (!(opts.timeout_cycles > 0)) throw Error(Errc::InvalidConfig, "timeout must be positive");

  const auto schedule = build_schedule(packed.header, packed.body, opts.segment_size);
  const FrameSource source(schedule, mux);

  ExperimentResult res;
  res.cycle_bytes = schedule.cycle_bytes;
  res.group_count = schedule.groups.size();
  res.frame_capacity = source.capacity();
  res.cycle_duration = cycle_duration(schedule, mux);
  res.estimate = estimate_acquisition_seconds(packed.body.data.size(), mux.data_bitrate);

  ReceiverState rx(ReceiverOptions{mux.frame_duration, static_cast<double>(opts.join_frame) * mux.frame_duration,
                                   mux.data_bitrate});
  const auto limit = timeout_frames(res.cycle_duration, opts.timeout_cycles, mux.frame_duration);
  MemorySink sink;
  for (std::uint64_t k = opts.join_frame; k < opts.join_frame + limit; ++k) {
    auto frame = perturb_frame(source.frame_at(k), channel);
    if (!frame) continue;
    rx.ingest_frame(*frame);
    if (rx.status() != ReceiverStatus::Complete) continue;
    try {
      auto app = deliver(rx, sink);
      res.delivery.delivered = true;
      res.delivery.files = std::move(app.files);
      res.delivery.launch = app.launch;
      break;
    } catch (const Error& e) {
      if (e.code() == Errc::BodyCrcMismatch) continue;
      res.delivery.error = e.what();
      break;
    }
  }

  res.report = report(rx);
  res.counters = rx.counters();
  if (res.report.elapsed) {
    *res.report.elapsed += opts.launch_latency_s;
    res.report.cycles_spanned = *res.report.elapsed / res.cycle_duration;
  }
  return res;
}

inline ExperimentResult run_experiment(const ApplicationBundle& bundle, const MultiplexConfig& mux,
                                       const ChannelModel& channel, const ExperimentOptions& opts) {
  return run_experiment(pack_application(bundle, opts.codec, opts.force_body_size), mux, channel, opts);
}

// ---------------------------------------------------------------------------
// Report rendering
// ---------------------------------------------------------------------------

inline std::string format_seconds(double s) {
  std::ostringstream os;
  os.precision(10);
  os << s;
  return os.str();
}

constexpr std::string_view outcome_name(Outcome o) { return o == Outcome::Complete ? "complete" : "timed_out"; }

/// Machine-readable report. Schema "datacast.report/1":
///   estimate    payload_bytes, payload_bits, data_bitrate, seconds
///   schedule    cycle_bytes, groups, frame_capacity, cycle_duration
///   acquisition outcome, join_time, header_complete_time, completion_time,
///               elapsed, cycles_spanned (null until known), frames_seen,
///               groups_ok, groups_corrupt
///   delivery    delivered, error (null on success), files
inline nlohmann::json report_json(const ExperimentResult& r) {
  using nlohmann::json;
  auto opt = [](const std::optional<double>& v) { return v ? json(*v) : json(nullptr); };
  json j;
  j["schema"] = "datacast.report/1";
  j["estimate"] = {{"payload_bytes", r.estimate.payload_bytes},
                   {"payload_bits", r.estimate.payload_bits},
                   {"data_bitrate", r.estimate.data_bitrate},
                   {"seconds", r.estimate.seconds}};
  j["schedule"] = {{"cycle_bytes", r.cycle_bytes},
                   {"groups", r.group_count},
                   {"frame_capacity", r.frame_capacity},
                   {"cycle_duration", r.cycle_duration}};
  j["acquisition"] = {{"outcome", outcome_name(r.report.outcome)},
                      {"join_time", r.report.join_time},
                      {"header_complete_time", opt(r.report.header_complete_time)},
                      {"completion_time", opt(r.report.completion_time)},
                      {"elapsed", opt(r.report.elapsed)},
                      {"cycles_spanned", opt(r.report.cycles_spanned)},
                      {"frames_seen", r.report.frames_seen},
                      {"groups_ok", r.report.groups_ok},
                      {"groups_corrupt", r.report.groups_corrupt}};
  j["delivery"] = {{"delivered", r.delivery.delivered},
                   {"error", r.delivery.error ? json(*r.delivery.error) : json(nullptr)},
                   {"files", r.delivery.files.size()}};
  return j;
}

/// One `key=value` per line, for humans and grep.
inline std::string report_text(const AcquisitionReport& r) {
  auto opt = [](const std::optional<double>& v) { return v ? format_seconds(*v) : std::string("-"); };
  std::ostringstream os;
  os << "outcome=" << outcome_name(r.outcome) << '\n'
     << "join_time=" << format_seconds(r.join_time) << '\n'
     << "header_complete_time=" << opt(r.header_complete_time) << '\n'
     << "completion_time=" << opt(r.completion_time) << '\n'
     << "elapsed=" << opt(r.elapsed) << '\n'
     << "cycles_spanned=" << opt(r.cycles_spanned) << '\n'
     << "frames_seen=" << r.frames_seen << '\n'
     << "groups_ok=" << r.groups_ok << '\n'
     << "groups_corrupt=" << r.groups_corrupt << '\n';
  return os.str();
}

inline std::string estimate_text(const AcquisitionEstimate& e) {
  std::ostringstream os;
  os << "estimate " << e.payload_bytes << " bytes * 8 = " << e.payload_bits << " bits / "
     << format_seconds(e.data_bitrate) << " bit/s = " << format_seconds(e.seconds) << " s\n";
  return os.str();
}

}  // namespace dcast

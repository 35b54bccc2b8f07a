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
#include <optional>
#include <string>
#include <vector>

#include "datacast/carousel.hpp"

namespace dcast {

struct ChannelModel {
  double frame_loss_prob = 0.0;
  double bit_error_rate = 0.0;
  std::uint32_t burst_len = 1;
  std::uint64_t seed = 0;

  void validate() const {
    if (!(frame_loss_prob >= 0.0 && frame_loss_prob <= 1.0))
      throw Error(Errc::InvalidConfig, "frame loss probability outside [0,1]");
    if (!(bit_error_rate >= 0.0 && bit_error_rate <= 1.0))
      throw Error(Errc::InvalidConfig, "bit error rate outside [0,1]");
    if (burst_len == 0) throw Error(Errc::InvalidConfig, "burst length must be positive");
  }

  bool is_clean() const { return frame_loss_prob == 0.0 && bit_error_rate == 0.0; }
};

namespace detail {

constexpr std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

enum class Stream : std::uint64_t { FrameLoss = 1, BitError = 2 };

/// Uniform [0,1) draw that depends only on its key, never on call order.
constexpr double keyed_uniform(std::uint64_t seed, Stream stream, std::uint64_t frame, std::uint64_t bit) {
  std::uint64_t h = mix64(seed + 0x9E3779B97F4A7C15ull * static_cast<std::uint64_t>(stream));
  h = mix64(h ^ frame);
  h = mix64(h + 0x9E3779B97F4A7C15ull + bit);
  return static_cast<double>(h >> 11) * 0x1.0p-53;
}

}  // namespace detail

/// Applies loss and bit-error bursts to one frame; nullopt if it is lost.
inline std::optional<Frame> perturb_frame(Frame frame, const ChannelModel& model) {
  if (model.frame_loss_prob > 0.0 &&
      detail::keyed_uniform(model.seed, detail::Stream::FrameLoss, frame.index, 0) < model.frame_loss_prob)
    return std::nullopt;
  if (model.bit_error_rate > 0.0) {
    const std::uint64_t bits = static_cast<std::uint64_t>(frame.data.size()) * 8;
    std::uint64_t burst_left = 0;
    for (std::uint64_t b = 0; b < bits; ++b) {
      if (detail::keyed_uniform(model.seed, detail::Stream::BitError, frame.index, b) < model.bit_error_rate)
        burst_left = model.burst_len;
      if (burst_left > 0) {
        frame.data[b / 8] ^= static_cast<std::uint8_t>(0x80u >> (b % 8));
        --burst_left;
      }
    }
  }
  return frame;
}

inline std::vector<Frame> perturb(const std::vector<Frame>& frames, const ChannelModel& model) {
  model.validate();
  std::vector<Frame> out;
  out.reserve(frames.size());
  for (const auto& f : frames)
    if (auto g = perturb_frame(f, model)) out.push_back(std::move(*g));
  return out;
}

}  // namespace dcast

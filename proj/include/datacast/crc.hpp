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
#include <cstdint>

#include "datacast/bytes.hpp"

namespace dcast::crc {

namespace detail {

constexpr std::array<std::uint16_t, 256> make_ccitt_table() {
  std::array<std::uint16_t, 256> t{};
  for (unsigned i = 0; i < 256; ++i) {
    std::uint16_t c = static_cast<std::uint16_t>(i << 8);
    for (int k = 0; k < 8; ++k)
      c = static_cast<std::uint16_t>((c & 0x8000) ? (c << 1) ^ 0x1021 : (c << 1));
    t[i] = c;
  }
  return t;
}

// Reflected form of 0x04C11DB7.
constexpr std::array<std::uint32_t, 256> make_crc32_table() {
  std::array<std::uint32_t, 256> t{};
  for (std::uint32_t i = 0; i < 256; ++i) {
    std::uint32_t c = i;
    for (int k = 0; k < 8; ++k) c = (c & 1u) ? (c >> 1) ^ 0xEDB88320u : (c >> 1);
    t[i] = c;
  }
  return t;
}

inline constexpr auto kCcittTable = make_ccitt_table();
inline constexpr auto kCrc32Table = make_crc32_table();

}  // namespace detail

/// CRC-16/CCITT-FALSE: poly 0x1021, init 0xFFFF, no reflection, no xorout.
constexpr std::uint16_t crc16_ccitt_false(ByteView data, std::uint16_t crc = 0xFFFF) {
  for (std::uint8_t b : data)
    crc = static_cast<std::uint16_t>((crc << 8) ^ detail::kCcittTable[((crc >> 8) ^ b) & 0xFF]);
  return crc;
}

/// CRC-32/ISO-HDLC (the zlib / Ethernet CRC).
constexpr std::uint32_t crc32(ByteView data) {
  std::uint32_t crc = 0xFFFFFFFFu;
  for (std::uint8_t b : data) crc = (crc >> 8) ^ detail::kCrc32Table[(crc ^ b) & 0xFF];
  return crc ^ 0xFFFFFFFFu;
}

}  // namespace dcast::crc

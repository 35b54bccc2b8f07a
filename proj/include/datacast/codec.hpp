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

#include <algorithm>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "datacast/bundle.hpp"
#include "datacast/bytes.hpp"
#include "datacast/compress.hpp"
#include "datacast/crc.hpp"

namespace dcast {

// ---------------------------------------------------------------------------
// Signaling header object
// ---------------------------------------------------------------------------

inline constexpr std::string_view kSignalingMagic = "GAPH";
inline constexpr std::uint8_t kSignalingVersion = 1;
/// Fixed part of an encoded header; the entry point name follows it.
inline constexpr std::size_t kSignalingFixedBytes = 32;

struct SignalingHeader {
  std::uint64_t app_id = 0;
  ContentType content_type = ContentType::RawFileSet;
  bool autostart = false;
  Codec codec = Codec::None;
  std::uint32_t uncompressed_size = 0;
  std::uint32_t compressed_size = 0;
  std::uint32_t body_crc32 = 0;
  std::string entry_point;
  std::uint16_t file_count = 0;

  friend bool operator==(const SignalingHeader&, const SignalingHeader&) = default;
};

/// Header announcing `body`, with sizes and CRC taken from the body itself.
inline SignalingHeader make_signaling(const ApplicationMetadata& meta, std::size_t file_count,
                                      const CompressedPayload& body) {
  SignalingHeader h;
  h.app_id = meta.app_id;
  h.content_type = meta.content_type;
  h.autostart = meta.autostart;
  h.codec = body.codec;
  h.uncompressed_size = body.uncompressed_size;
  h.compressed_size = static_cast<std::uint32_t>(body.data.size());
  h.body_crc32 = crc::crc32(body.data);
  h.entry_point = meta.entry_point;
  h.file_count = static_cast<std::uint16_t>(file_count);
  return h;
}

inline Bytes encode_signaling(const SignalingHeader& h) {
  if (h.entry_point.size() > std::numeric_limits<std::uint16_t>::max())
    throw Error(Errc::EntryPointTooLong, std::to_string(h.entry_point.size()) + " bytes");
  Bytes out;
  out.reserve(kSignalingFixedBytes + h.entry_point.size());
  BeWriter w(out);
  w.raw(kSignalingMagic);
  w.u8(kSignalingVersion);
  w.u64(h.app_id);
  w.u8(static_cast<std::uint8_t>(h.content_type));
  w.u8(h.autostart ? 1 : 0);
  w.u8(static_cast<std::uint8_t>(h.codec));
  w.u32(h.uncompressed_size);
  w.u32(h.compressed_size);
  w.u32(h.body_crc32);
  w.u16(static_cast<std::uint16_t>(h.entry_point.size()));
  w.raw(h.entry_point);
  w.u16(h.file_count);
  return out;
}

/// Decodes a header from the front of `bytes`. With `consumed` null the
/// header must span the whole input; otherwise the encoded length is stored
/// there and trailing bytes are left to the caller.
inline SignalingHeader decode_signaling(ByteView bytes, std::size_t* consumed = nullptr) {
  BeReader r(bytes);
  if (bytes.size() < kSignalingMagic.size()) throw Error(Errc::Truncated, "short signaling header");
  if (to_string(r.raw(kSignalingMagic.size())) != kSignalingMagic)
    throw Error(Errc::BadMagic, "signaling header does not start with GAPH");
  const auto version = r.u8();
  if (version != kSignalingVersion)
    throw Error(Errc::UnsupportedVersion, "signaling version " + std::to_string(version));

  SignalingHeader h;
  h.app_id = r.u64();
  const auto content = r.u8();
  if (content > 1) throw Error(Errc::BadField, "content_type " + std::to_string(content));
  h.content_type = static_cast<ContentType>(content);
  const auto autostart = r.u8();
  if (autostart > 1) throw Error(Errc::BadField, "autostart " + std::to_string(autostart));
  h.autostart = autostart == 1;
  h.codec = codec_from_u8(r.u8());
  h.uncompressed_size = r.u32();
  h.compressed_size = r.u32();
  h.body_crc32 = r.u32();
  const auto ep_len = r.u16();
  h.entry_point = to_string(r.raw(ep_len));
  h.file_count = r.u16();

  if (consumed) {
    *consumed = r.position();
  } else if (r.remaining() != 0) {
    throw Error(Errc::TrailingGarbage, std::to_string(r.remaining()) + " bytes after signaling header");
  }
  return h;
}

// ---------------------------------------------------------------------------
// Segmentation and data groups
// ---------------------------------------------------------------------------

enum class ObjectKind : std::uint8_t {
  Header = 0x00,
  Body = 0x01,
};

inline constexpr std::size_t kMaxSegmentSize = 4096;
inline constexpr std::size_t kMaxSegments = 32767;
inline constexpr std::size_t kDefaultSegmentSize = 1024;
inline constexpr std::uint16_t kMaxSegmentNumber = 0x7FFF;

struct Segment {
  ObjectKind kind = ObjectKind::Body;
  std::uint16_t transport_id = 0;
  std::uint16_t number = 0;  // 15 bits
  bool is_last = false;
  Bytes payload;

  friend bool operator==(const Segment&, const Segment&) = default;
};

/// Header and body of one application share this id.
constexpr std::uint16_t transport_id_for(std::uint64_t app_id) {
  return static_cast<std::uint16_t>(app_id ^ (app_id >> 16) ^ (app_id >> 32) ^ (app_id >> 48));
}

inline std::vector<Segment> segment_payload(ObjectKind kind, std::uint16_t transport_id, ByteView bytes,
                                            std::size_t segment_size = kDefaultSegmentSize) {
  if (segment_size == 0 || segment_size > kMaxSegmentSize)
    throw Error(Errc::InvalidConfig, "segment size " + std::to_string(segment_size) + " outside 1..4096");
  if (bytes.empty()) throw Error(Errc::PayloadEmpty, "cannot segment an empty object");
  const std::size_t count = (bytes.size() + segment_size - 1) / segment_size;
  if (count > kMaxSegments)
    throw Error(Errc::TooManySegments, std::to_string(count) + " segments of " + std::to_string(segment_size));

  std::vector<Segment> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    const std::size_t off = i * segment_size;
    const std::size_t len = std::min(segment_size, bytes.size() - off);
    auto chunk = bytes.subspan(off, len);
    out.push_back(Segment{kind, transport_id, static_cast<std::uint16_t>(i), i + 1 == count,
                          Bytes(chunk.begin(), chunk.end())});
  }
  return out;
}

inline constexpr std::uint8_t kSync0 = 0x4D;
inline constexpr std::uint8_t kSync1 = 0x47;
/// sync(2) kind(1) transport_id(2) seg_word(2) payload_len(2), then crc(2).
inline constexpr std::size_t kGroupPrefixBytes = 9;
inline constexpr std::size_t kGroupOverhead = 11;

constexpr std::size_t encoded_group_size(std::size_t payload_len) { return kGroupOverhead + payload_len; }

inline Bytes encode_group(const Segment& seg) {
  if (seg.payload.empty() || seg.payload.size() > kMaxSegmentSize || seg.number > kMaxSegmentNumber)
    throw Error(Errc::InvalidSegment, "segment " + std::to_string(seg.number) + " with " +
                                          std::to_string(seg.payload.size()) + "-byte payload");
  Bytes out;
  out.reserve(encoded_group_size(seg.payload.size()));
  BeWriter w(out);
  w.u8(kSync0);
  w.u8(kSync1);
  w.u8(static_cast<std::uint8_t>(seg.kind));
  w.u16(seg.transport_id);
  w.u16(static_cast<std::uint16_t>((seg.is_last ? 0x8000 : 0) | seg.number));
  w.u16(static_cast<std::uint16_t>(seg.payload.size()));
  w.raw(seg.payload);
  w.u16(crc::crc16_ccitt_false(ByteView(out).subspan(2)));
  return out;
}

struct CorruptSkipped {
  friend bool operator==(CorruptSkipped, CorruptSkipped) = default;
};
struct NeedMoreData {
  friend bool operator==(NeedMoreData, NeedMoreData) = default;
};
using DecodeOutcome = std::variant<Segment, CorruptSkipped, NeedMoreData>;

struct DecodeStep {
  DecodeOutcome outcome;
  std::size_t cursor;
};

/// Scans `stream` from `cursor` for the next data group.
///
/// A group whose CRC matches is returned with the cursor past it. On a bad
/// CRC or an impossible header field the cursor moves one byte past the
/// start of the sync word, so a corrupted length field can never swallow a
/// real group that follows. NeedMoreData leaves the cursor on the earliest
/// byte that may still begin a group; bytes before it are dead.
inline DecodeStep decode_next(ByteView stream, std::size_t cursor) {
  const std::size_t n = stream.size();
  if (cursor > n) cursor = n;

  std::size_t p = cursor;
  for (; p + 1 < n; ++p)
    if (stream[p] == kSync0 && stream[p + 1] == kSync1) break;
  if (p + 1 >= n) {
    // Keep a trailing first sync byte; its partner may arrive next frame.
    const std::size_t keep = (p < n && stream[p] == kSync0) ? p : n;
    return {NeedMoreData{}, keep};
  }

  if (n - p < kGroupPrefixBytes) return {NeedMoreData{}, p};
  const std::uint8_t kind = stream[p + 2];
  const std::size_t payload_len = (static_cast<std::size_t>(stream[p + 7]) << 8) | stream[p + 8];
  if (kind > 1 || payload_len == 0 || payload_len > kMaxSegmentSize) return {CorruptSkipped{}, p + 1};
  if (n - p < encoded_group_size(payload_len)) return {NeedMoreData{}, p};

  const auto body = stream.subspan(p + 2, kGroupPrefixBytes - 2 + payload_len);
  const std::size_t crc_at = p + kGroupPrefixBytes + payload_len;
  const auto wire_crc = static_cast<std::uint16_t>((stream[crc_at] << 8) | stream[crc_at + 1]);
  if (crc::crc16_ccitt_false(body) != wire_crc) return {CorruptSkipped{}, p + 1};

  const auto seg_word = static_cast<std::uint16_t>((stream[p + 5] << 8) | stream[p + 6]);
  Segment seg;
  seg.kind = static_cast<ObjectKind>(kind);
  seg.transport_id = static_cast<std::uint16_t>((stream[p + 3] << 8) | stream[p + 4]);
  seg.number = seg_word & kMaxSegmentNumber;
  seg.is_last = (seg_word & 0x8000) != 0;
  auto payload = stream.subspan(p + kGroupPrefixBytes, payload_len);
  seg.payload.assign(payload.begin(), payload.end());
  return {std::move(seg), crc_at + 2};
}

// ---------------------------------------------------------------------------
// Reassembly
// ---------------------------------------------------------------------------

/// Concatenates the segments of one object. Arrival order is irrelevant and
/// byte-identical duplicates are ignored.
inline Bytes reassemble(const std::vector<Segment>& segments) {
  if (segments.empty()) throw Error(Errc::Incomplete, "no segments");
  const auto kind = segments.front().kind;
  const auto tid = segments.front().transport_id;

  std::map<std::uint16_t, const Segment*> by_number;
  std::optional<std::uint16_t> last;
  for (const auto& s : segments) {
    if (s.kind != kind || s.transport_id != tid)
      throw Error(Errc::Inconsistent, "segments from more than one object");
    auto [it, inserted] = by_number.emplace(s.number, &s);
    if (!inserted && (it->second->payload != s.payload || it->second->is_last != s.is_last))
      throw Error(Errc::Inconsistent, "segment " + std::to_string(s.number) + " seen with two contents");
    if (s.is_last) {
      if (last && *last != s.number)
        throw Error(Errc::Inconsistent, "last segment claimed at " + std::to_string(*last) + " and " +
                                            std::to_string(s.number));
      last = s.number;
    }
  }
  if (last && by_number.rbegin()->first > *last)
    throw Error(Errc::Inconsistent, "segment " + std::to_string(by_number.rbegin()->first) +
                                        " beyond last segment " + std::to_string(*last));

  const std::size_t seg_size = by_number.begin()->second->payload.size();
  for (const auto& [num, s] : by_number) {
    const bool is_final = last && num == *last;
    if ((!is_final && s->payload.size() != seg_size) || (is_final && s->payload.size() > seg_size && num != 0))
      throw Error(Errc::Inconsistent, "segment " + std::to_string(num) + " has an irregular size");
  }

  if (!last) throw Error(Errc::Incomplete, "last segment not seen");
  if (by_number.size() != static_cast<std::size_t>(*last) + 1)
    throw Error(Errc::Incomplete, std::to_string(by_number.size()) + " of " + std::to_string(*last + 1) +
                                      " segments present");

  Bytes out;
  for (const auto& [num, s] : by_number) out.insert(out.end(), s->payload.begin(), s->payload.end());
  return out;
}

}  // namespace dcast

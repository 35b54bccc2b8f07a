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

#include <zlib.h>

#include <cstdint>
#include <string>

#include "datacast/bytes.hpp"

#if defined(DCAST_HAVE_LZMA)
#include <lzma.h>
#endif

namespace dcast {

enum class Codec : std::uint8_t {
  None = 0,
  Deflate = 1,
  Lzma = 2,
};

struct CompressedPayload {
  Codec codec = Codec::None;
  std::uint32_t uncompressed_size = 0;
  Bytes data;

  friend bool operator==(const CompressedPayload&, const CompressedPayload&) = default;
};

constexpr bool codec_supported(Codec c) {
  switch (c) {
    case Codec::None:
    case Codec::Deflate:
      return true;
    case Codec::Lzma:
#if defined(DCAST_HAVE_LZMA)
      return true;
#else
      return false;
#endif
  }
  return false;
}

inline Codec codec_from_u8(std::uint8_t v) {
  if (v > 2) throw Error(Errc::UnsupportedCodec, "codec id " + std::to_string(v));
  return static_cast<Codec>(v);
}

constexpr std::string_view codec_name(Codec c) {
  switch (c) {
    case Codec::None: return "none";
    case Codec::Deflate: return "deflate";
    case Codec::Lzma: return "lzma";
  }
  return "?";
}

inline Codec codec_from_name(std::string_view name) {
  if (name == "none") return Codec::None;
  if (name == "deflate") return Codec::Deflate;
  if (name == "lzma" || name == "xz") return Codec::Lzma;
  throw Error(Errc::UnsupportedCodec, "unknown codec '" + std::string(name) + "'");
}

namespace detail {

inline Bytes deflate_bytes(ByteView in) {
  uLongf bound = compressBound(static_cast<uLong>(in.size()));
  Bytes out(bound);
  int rc = compress2(out.data(), &bound, in.data(), static_cast<uLong>(in.size()), Z_BEST_COMPRESSION);
  if (rc != Z_OK) throw Error(Errc::CorruptStream, "deflate failed, zlib rc " + std::to_string(rc));
  out.resize(bound);
  return out;
}

// Output is capped at expected + 1 so a lying size field cannot balloon memory.
inline Bytes inflate_bytes(ByteView in, std::uint32_t expected) {
  z_stream zs{};
  if (inflateInit(&zs) != Z_OK) throw Error(Errc::CorruptStream, "inflateInit failed");
  const std::size_t cap = static_cast<std::size_t>(expected) + 1;
  Bytes out(cap);
  zs.next_in = const_cast<Bytef*>(in.data());
  zs.avail_in = static_cast<uInt>(in.size());
  zs.next_out = out.data();
  zs.avail_out = static_cast<uInt>(cap);
  int rc = inflate(&zs, Z_FINISH);
  const std::size_t produced = cap - zs.avail_out;
  inflateEnd(&zs);
  if (rc == Z_STREAM_END) {
    out.resize(produced);
    if (produced != expected)
      throw Error(Errc::SizeMismatch, "decoded " + std::to_string(produced) + " bytes, expected " +
                                          std::to_string(expected));
    return out;
  }
  if (produced == cap && rc == Z_BUF_ERROR)
    throw Error(Errc::SizeMismatch, "stream decodes to more than " + std::to_string(expected) + " bytes");
  throw Error(Errc::CorruptStream, "inflate rc " + std::to_string(rc) + (zs.msg ? std::string(" ") + zs.msg : ""));
}

#if defined(DCAST_HAVE_LZMA)
inline Bytes xz_bytes(ByteView in) {
  Bytes out(lzma_stream_buffer_bound(in.size()));
  std::size_t out_pos = 0;
  lzma_ret rc = lzma_easy_buffer_encode(9 | LZMA_PRESET_EXTREME, LZMA_CHECK_CRC32, nullptr, in.data(),
                                        in.size(), out.data(), &out_pos, out.size());
  if (rc != LZMA_OK) throw Error(Errc::CorruptStream, "xz encode rc " + std::to_string(rc));
  out.resize(out_pos);
  return out;
}

inline Bytes unxz_bytes(ByteView in, std::uint32_t expected) {
  lzma_stream strm = LZMA_STREAM_INIT;
  if (lzma_stream_decoder(&strm, UINT64_MAX, 0) != LZMA_OK)
    throw Error(Errc::CorruptStream, "lzma decoder init failed");
  const std::size_t cap = static_cast<std::size_t>(expected) + 1;
  Bytes out(cap);
  strm.next_in = in.data();
  strm.avail_in = in.size();
  strm.next_out = out.data();
  strm.avail_out = cap;
  lzma_ret rc = lzma_code(&strm, LZMA_FINISH);
  const std::size_t produced = cap - strm.avail_out;
  lzma_end(&strm);
  if (rc == LZMA_STREAM_END) {
    out.resize(produced);
    if (produced != expected)
      throw Error(Errc::SizeMismatch, "decoded " + std::to_string(produced) + " bytes, expected " +
                                          std::to_string(expected));
    return out;
  }
  if (produced == cap && (rc == LZMA_OK || rc == LZMA_BUF_ERROR))
    throw Error(Errc::SizeMismatch, "stream decodes to more than " + std::to_string(expected) + " bytes");
  throw Error(Errc::CorruptStream, "xz decode rc " + std::to_string(rc));
}
#endif

}  // namespace detail

inline CompressedPayload compress_payload(ByteView bytes, Codec codec) {
  if (!codec_supported(codec)) throw Error(Errc::UnsupportedCodec, std::string(codec_name(codec)));
  if (bytes.size() > UINT32_MAX) throw Error(Errc::SizeMismatch, "input exceeds 4 GiB - 1");
  CompressedPayload p;
  p.codec = codec;
  p.uncompressed_size = static_cast<std::uint32_t>(bytes.size());
  switch (codec) {
    case Codec::None:
      p.data.assign(bytes.begin(), bytes.end());
      break;
    case Codec::Deflate:
      p.data = detail::deflate_bytes(bytes);
      break;
    case Codec::Lzma:
#if defined(DCAST_HAVE_LZMA)
      p.data = detail::xz_bytes(bytes);
#endif
      break;
  }
  return p;
}

inline Bytes decompress_payload(const CompressedPayload& payload) {
  if (!codec_supported(payload.codec))
    throw Error(Errc::UnsupportedCodec, std::string(codec_name(payload.codec)));
  switch (payload.codec) {
    case Codec::None:
      if (payload.data.size() != payload.uncompressed_size)
        throw Error(Errc::SizeMismatch, "identity payload holds " + std::to_string(payload.data.size()) +
                                            " bytes, header says " + std::to_string(payload.uncompressed_size));
      return payload.data;
    case Codec::Deflate:
      return detail::inflate_bytes(payload.data, payload.uncompressed_size);
    case Codec::Lzma:
#if defined(DCAST_HAVE_LZMA)
      return detail::unxz_bytes(payload.data, payload.uncompressed_size);
#else
      break;
#endif
  }
  throw Error(Errc::UnsupportedCodec, "unreachable");
}

}  // namespace dcast

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
#include <filesystem>
#include <fstream>
#include <iterator>
#include <optional>
#include <string>
#include <vector>

#include "datacast/bundle.hpp"
#include "datacast/codec.hpp"
#include "datacast/compress.hpp"

namespace dcast {

/// What the broadcaster puts on air: the signaling header and the body it
/// announces.
struct PackedApplication {
  SignalingHeader header;
  CompressedPayload body;

  friend bool operator==(const PackedApplication&, const PackedApplication&) = default;
};

/// Serializes and compresses `bundle`. When `force_body_size` is set the body
/// is cut or zero-padded to that many bytes and the header re-announced to
/// match; the result keeps the on-air size but will not unpack.
inline PackedApplication pack_application(const ApplicationBundle& bundle, Codec codec,
                                          std::optional<std::uint32_t> force_body_size = std::nullopt) {
  PackedApplication p;
  p.body = compress_payload(serialize_container(bundle), codec);
  if (force_body_size) {
    p.body.data.resize(*force_body_size, 0x00);
    if (codec == Codec::None) p.body.uncompressed_size = *force_body_size;
  }
  p.header = make_signaling(bundle.metadata, bundle.files.size(), p.body);
  return p;
}

// GPKG file: "GPKG" | signaling header | body (header.compressed_size bytes)
inline constexpr std::string_view kPackageMagic = "GPKG";

inline Bytes encode_package(const PackedApplication& p) {
  Bytes out;
  BeWriter w(out);
  w.raw(kPackageMagic);
  w.raw(encode_signaling(p.header));
  w.raw(p.body.data);
  return out;
}

inline PackedApplication decode_package(ByteView bytes) {
  if (bytes.size() < kPackageMagic.size() || to_string(bytes.first(kPackageMagic.size())) != kPackageMagic)
    throw Error(Errc::BadMagic, "not a GPKG file");
  auto rest = bytes.subspan(kPackageMagic.size());
  std::size_t used = 0;
  PackedApplication p;
  p.header = decode_signaling(rest, &used);
  rest = rest.subspan(used);
  if (rest.size() < p.header.compressed_size) throw Error(Errc::Truncated, "GPKG body shorter than announced");
  if (rest.size() > p.header.compressed_size) throw Error(Errc::TrailingGarbage, "GPKG body longer than announced");
  if (crc::crc32(rest) != p.header.body_crc32) throw Error(Errc::BodyCrcMismatch, "GPKG body CRC-32");
  p.body.codec = p.header.codec;
  p.body.uncompressed_size = p.header.uncompressed_size;
  p.body.data.assign(rest.begin(), rest.end());
  return p;
}

inline Bytes read_file(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw Error(Errc::Io, "cannot open " + path.string());
  return Bytes(std::istreambuf_iterator<char>(is), std::istreambuf_iterator<char>());
}

inline void write_file(const std::filesystem::path& path, ByteView data) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  os.write(reinterpret_cast<const char*>(data.data()), static_cast<std::streamsize>(data.size()));
  if (!os) throw Error(Errc::Io, "cannot write " + path.string());
}

/// Regular files under `dir`, named by their '/'-separated relative path and
/// sorted bytewise so the container is reproducible.
inline std::vector<FileEntry> read_directory_files(const std::filesystem::path& dir) {
  namespace fs = std::filesystem;
  if (!fs::is_directory(dir)) throw Error(Errc::Io, dir.string() + " is not a directory");
  std::vector<FileEntry> files;
  for (const auto& e : fs::recursive_directory_iterator(dir)) {
    if (!e.is_regular_file()) continue;
    files.push_back(FileEntry{fs::relative(e.path(), dir).generic_string(), read_file(e.path())});
  }
  std::sort(files.begin(), files.end(), [](const auto& a, const auto& b) { return a.name < b.name; });
  return files;
}

}  // namespace dcast

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
#include <limits>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "datacast/bytes.hpp"

namespace dcast {

enum class ContentType : std::uint8_t {
  RawFileSet = 0x00,
  InteractiveApplication = 0x01,
};

struct FileEntry {
  std::string name;
  Bytes data;

  friend bool operator==(const FileEntry&, const FileEntry&) = default;
};

struct ApplicationMetadata {
  std::uint64_t app_id = 0;
  std::string entry_point;
  bool autostart = false;
  ContentType content_type = ContentType::InteractiveApplication;

  friend bool operator==(const ApplicationMetadata&, const ApplicationMetadata&) = default;
};

struct ApplicationBundle {
  std::vector<FileEntry> files;
  ApplicationMetadata metadata;

  std::uint64_t total_size() const {
    std::uint64_t total = 0;
    for (const auto& f : files) total += f.data.size();
    return total;
  }

  friend bool operator==(const ApplicationBundle&, const ApplicationBundle&) = default;
};

inline constexpr std::size_t kMaxNameBytes = 255;
inline constexpr std::string_view kContainerMagic = "GBDL";

/// Names must be safe to join onto a receiver output directory: relative,
/// no NUL, no empty or ".." path components.
inline bool is_legal_name(std::string_view name) {
  if (name.empty() || name.size() > kMaxNameBytes) return false;
  if (name.front() == '/') return false;
  if (name.find('\0') != std::string_view::npos) return false;
  std::size_t start = 0;
  while (start <= name.size()) {
    auto end = name.find('/', start);
    if (end == std::string_view::npos) end = name.size();
    auto part = name.substr(start, end - start);
    if (part.empty() || part == "..") return false;
    start = end + 1;
  }
  return true;
}

namespace detail {

inline void check_files(const std::vector<FileEntry>& files) {
  if (files.size() > std::numeric_limits<std::uint16_t>::max())
    throw Error(Errc::TooManyFiles, std::to_string(files.size()) + " files");
  std::set<std::string_view> seen;
  for (const auto& f : files) {
    if (!is_legal_name(f.name)) throw Error(Errc::IllegalName, "'" + f.name + "'");
    if (f.data.size() > std::numeric_limits<std::uint32_t>::max())
      throw Error(Errc::SizeMismatch, "file '" + f.name + "' exceeds 4 GiB - 1");
    if (!seen.insert(f.name).second) throw Error(Errc::DuplicateName, "'" + f.name + "'");
  }
}

}  // namespace detail

inline ApplicationBundle pack_bundle(std::vector<FileEntry> files, ApplicationMetadata metadata) {
  detail::check_files(files);
  if (metadata.content_type == ContentType::InteractiveApplication) {
    bool found = false;
    for (const auto& f : files) found = found || f.name == metadata.entry_point;
    if (!found) throw Error(Errc::EntryPointMissing, "'" + metadata.entry_point + "' names no file");
  }
  return ApplicationBundle{std::move(files), std::move(metadata)};
}

/// GBDL container: "GBDL" | u16 count | { u16 name_len | name | u32 data_len | data }*
inline Bytes serialize_container(const ApplicationBundle& bundle) {
  Bytes out;
  std::size_t size = 6;
  for (const auto& f : bundle.files) size += 6 + f.name.size() + f.data.size();
  out.reserve(size);

  BeWriter w(out);
  w.raw(kContainerMagic);
  w.u16(static_cast<std::uint16_t>(bundle.files.size()));
  for (const auto& f : bundle.files) {
    w.u16(static_cast<std::uint16_t>(f.name.size()));
    w.raw(f.name);
    w.u32(static_cast<std::uint32_t>(f.data.size()));
    w.raw(f.data);
  }
  return out;
}

inline std::vector<FileEntry> parse_container(ByteView bytes) {
  BeReader r(bytes);
  if (bytes.size() < kContainerMagic.size() ||
      to_string(bytes.first(kContainerMagic.size())) != kContainerMagic)
    throw Error(Errc::BadMagic, "container does not start with GBDL");
  r.raw(kContainerMagic.size());

  const auto count = r.u16();
  std::vector<FileEntry> files;
  files.reserve(count);
  std::set<std::string> seen;
  for (std::uint16_t i = 0; i < count; ++i) {
    FileEntry f;
    const auto name_len = r.u16();
    f.name = to_string(r.raw(name_len));
    const auto data_len = r.u32();
    auto data = r.raw(data_len);
    f.data.assign(data.begin(), data.end());
    if (!is_legal_name(f.name)) throw Error(Errc::IllegalName, "'" + f.name + "'");
    if (!seen.insert(f.name).second) throw Error(Errc::DuplicateName, "'" + f.name + "'");
    files.push_back(std::move(f));
  }
  if (r.remaining() != 0)
    throw Error(Errc::TrailingGarbage, std::to_string(r.remaining()) + " bytes after last file");
  return files;
}

}  // namespace dcast

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
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "datacast/bundle.hpp"

namespace dcast::fixture {

struct FixtureFile {
  std::string_view name;
  std::size_t size;
};

/// File names and sizes of the reference interactive radio application
/// (an NCL document, a PNG logo and seven short text files).
inline constexpr std::array<FixtureFile, 9> kReferenceFiles{{
    {"demo1.ncl", 5734},
    {"equipe.txt", 7},
    {"logo.png", 6922},
    {"prog.txt", 14},
    {"sair.txt", 5},
    {"sobre.txt", 6},
    {"text1.txt", 537},
    {"text2.txt", 794},
    {"text3.txt", 122},
}};

inline constexpr std::uint64_t kReferenceUncompressedBytes = 14141;
inline constexpr std::uint64_t kReferenceCompressedBytes = 8724;
inline constexpr std::uint64_t kReferenceAppId = 0x00000000000EBC01ull;

namespace detail {

inline std::string prose(std::mt19937_64& rng, std::size_t size) {
  static constexpr std::array<std::string_view, 24> words{
      "radio",    "nacional", "amazonia", "programa", "noticias", "musica",   "cultura",  "horario",
      "emissora", "ouvinte",  "digital",  "sinal",    "onda",     "curta",    "brasil",   "empresa",
      "servico",  "publico",  "manha",    "tarde",    "noite",    "semana",   "contato",  "equipe"};
  std::string s;
  while (s.size() < size) {
    s += words[rng() % words.size()];
    s += (rng() % 9 == 0) ? ".\n" : " ";
  }
  s.resize(size);
  return s;
}

inline std::string ncl_document(std::size_t size) {
  std::string s =
      "<?xml version=\"1.0\" encoding=\"ISO-8859-1\"?>\n"
      "<ncl id=\"demo1\" xmlns=\"http://www.ncl.org.br/NCL3.0/EDTVProfile\">\n<head>\n<regionBase>\n"
      "  <region id=\"rgLogo\" left=\"5%\" top=\"5%\" width=\"30%\" height=\"20%\"/>\n"
      "  <region id=\"rgText\" left=\"5%\" top=\"30%\" width=\"90%\" height=\"65%\"/>\n"
      "</regionBase>\n<descriptorBase>\n";
  for (int i = 0; s.size() < size; ++i) {
    const auto n = std::to_string(i);
    s += "  <descriptor id=\"dMenu" + n + "\" region=\"rgText\" focusIndex=\"" + n + "\"/>\n";
    s += "  <media id=\"menu" + n + "\" src=\"text" + std::to_string(i % 3 + 1) +
         ".txt\" descriptor=\"dMenu" + n + "\"/>\n";
    s += "  <link xconnector=\"onSelectionStartStop\"><bind role=\"onSelection\" component=\"menu" + n +
         "\"/></link>\n";
  }
  s.resize(size);
  return s;
}

}  // namespace detail

/// Deterministic synthetic contents with the reference sizes. Text files
/// compress well; the logo is pseudo-random and does not.
inline std::vector<FileEntry> reference_files() {
  std::mt19937_64 rng(0x5EED2013);
  std::vector<FileEntry> files;
  for (const auto& f : kReferenceFiles) {
    std::string name(f.name);
    Bytes data;
    if (name == "demo1.ncl") {
      data = to_bytes(detail::ncl_document(f.size));
    } else if (name == "logo.png") {
      data = {0x89, 'P', 'N', 'G', 0x0D, 0x0A, 0x1A, 0x0A};
      while (data.size() < f.size) data.push_back(static_cast<std::uint8_t>(rng() >> 56));
    } else {
      data = to_bytes(detail::prose(rng, f.size));
    }
    files.push_back(FileEntry{std::move(name), std::move(data)});
  }
  return files;
}

inline ApplicationBundle reference_bundle() {
  return pack_bundle(reference_files(),
                     ApplicationMetadata{kReferenceAppId, "demo1.ncl", true, ContentType::InteractiveApplication});
}

}  // namespace dcast::fixture

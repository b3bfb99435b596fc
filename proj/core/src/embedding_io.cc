// Copyright 2026 The Hypernym Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "hypernym/embedding_io.h"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>

#include <nlohmann/json.hpp>

#include "hypernym/error.h"

namespace hypernym {
namespace {

static_assert(std::endian::native == std::endian::little,
              "embedding files are read with native little-endian layout");

constexpr std::uint64_t kMaxElements = std::uint64_t{1} << 32;

void ReadBlock(std::istream& in, Matrix& m, std::uint64_t rows, std::uint64_t cols,
               const std::filesystem::path& path) {
  m.resize(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  std::vector<double> buf(rows * cols);
  in.read(reinterpret_cast<char*>(buf.data()),
          static_cast<std::streamsize>(buf.size() * sizeof(double)));
  if (!in) throw DataError(path.string() + ": truncated embedding payload");
  for (std::uint64_t r = 0; r < rows; ++r) {
    for (std::uint64_t c = 0; c < cols; ++c) {
      m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = buf[r * cols + c];
    }
  }
}

void WriteBlock(std::ostream& out, const Matrix& m) {
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      const double v = m(r, c);
      out.write(reinterpret_cast<const char*>(&v), sizeof(v));
    }
  }
}

}  // namespace

EmbeddingBatch ReadEmbeddingFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open embedding file " + path.string());
  std::uint64_t header[3];
  in.read(reinterpret_cast<char*>(header), sizeof(header));
  if (!in) throw DataError(path.string() + ": truncated embedding header");
  const auto [n_i, n_c, d] = header;
  if (d == 0 || d > kMaxElements || n_i > kMaxElements / d || n_c > kMaxElements / d) {
    throw DataError(path.string() + ": implausible embedding header (" +
                    std::to_string(n_i) + ", " + std::to_string(n_c) + ", " +
                    std::to_string(d) + ")");
  }
  EmbeddingBatch out;
  ReadBlock(in, out.regions, n_i, d, path);
  ReadBlock(in, out.tokens, n_c, d, path);
  if (in.peek() != std::char_traits<char>::eof()) {
    throw DataError(path.string() + ": trailing bytes after embedding payload");
  }
  return out;
}

void WriteEmbeddingFile(const std::filesystem::path& path, const Matrix& regions,
                        const Matrix& tokens) {
  if (regions.size() > 0 && tokens.size() > 0 && regions.cols() != tokens.cols()) {
    throw UsageError("embedding dimension mismatch between regions and tokens");
  }
  const std::uint64_t d = regions.size() > 0 ? regions.cols() : tokens.cols();
  const std::uint64_t header[3] = {static_cast<std::uint64_t>(regions.rows()),
                                   static_cast<std::uint64_t>(tokens.rows()), d};
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write embedding file " + path.string());
  out.write(reinterpret_cast<const char*>(header), sizeof(header));
  WriteBlock(out, regions);
  WriteBlock(out, tokens);
  if (!out) throw IoError("write failed for " + path.string());
}

ManifestEntry ParseManifestLine(std::string_view line, std::size_t line_no,
                                const std::filesystem::path& base_dir) {
  const std::string where = "line " + std::to_string(line_no);
  const auto j = nlohmann::json::parse(line, nullptr, false);
  if (j.is_discarded() || !j.is_object()) {
    throw ParseError(where + ": invalid manifest record", std::string(line.substr(0, 120)));
  }
  auto path_field = [&](const char* key) -> std::optional<std::filesystem::path> {
    if (!j.contains(key) || j[key].is_null()) return std::nullopt;
    if (!j[key].is_string()) {
      throw ParseError(where + ": field \"" + key + "\" must be a string",
                       std::string(line.substr(0, 120)));
    }
    std::filesystem::path p = j[key].get<std::string>();
    return p.is_absolute() ? p : base_dir / p;
  };
  ManifestEntry e;
  e.id = j.contains("id") && j["id"].is_string() ? j["id"].get<std::string>()
                                                  : std::to_string(line_no);
  auto image = path_field("image");
  if (!image) {
    throw ParseError(where + ": missing field \"image\"", std::string(line.substr(0, 120)));
  }
  e.image = *image;
  e.caption = path_field("caption");
  return e;
}

EmbeddingBatch LoadPair(const ManifestEntry& entry) {
  EmbeddingBatch out = ReadEmbeddingFile(entry.image);
  if (entry.caption) out.tokens = ReadEmbeddingFile(*entry.caption).tokens;
  try {
    out.Validate();
  } catch (const DataError& e) {
    throw DataError("pair \"" + entry.id + "\": " + e.what());
  }
  return out;
}

}  // namespace hypernym

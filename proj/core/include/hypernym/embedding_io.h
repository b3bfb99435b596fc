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

// Binary embedding files and the JSON Lines manifest that pairs them.
//
// File layout (little-endian): three uint64 values n_I, n_C, d, then n_I*d
// float64 region values and n_C*d float64 token values, both row-major. An
// image file has n_C = 0 and a caption file has n_I = 0.
//
// Manifest line: {"id", "image", "caption"}, paths relative to the manifest.
// "caption" may be omitted when the image file already holds both blocks.

#ifndef HYPERNYM_EMBEDDING_IO_H_
#define HYPERNYM_EMBEDDING_IO_H_

#include <filesystem>
#include <istream>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "hypernym/grounding.h"

namespace hypernym {

// Throws IoError when the file cannot be opened, DataError on a truncated or
// oversized payload.
EmbeddingBatch ReadEmbeddingFile(const std::filesystem::path& path);
void WriteEmbeddingFile(const std::filesystem::path& path, const Matrix& regions,
                        const Matrix& tokens);

struct ManifestEntry {
  std::string id;
  std::filesystem::path image;
  std::optional<std::filesystem::path> caption;
};

// Relative paths are resolved against `base_dir`.
ManifestEntry ParseManifestLine(std::string_view line, std::size_t line_no,
                                const std::filesystem::path& base_dir);

// Region block from `image`, token block from `caption` (or from `image`
// when no caption file is given). Validates the result.
EmbeddingBatch LoadPair(const ManifestEntry& entry);

}  // namespace hypernym

#endif  // HYPERNYM_EMBEDDING_IO_H_

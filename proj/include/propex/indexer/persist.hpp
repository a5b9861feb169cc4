/*
 * Copyright 2026 The Propex Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */


#pragma once

#include <filesystem>

#include "propex/indexer/graph_index.hpp"

namespace propex {

inline constexpr int kIndexFormatVersion = 1;

/// Writes the index directory: meta.json (version, fingerprint, build
/// parameters, per-file SHA-256), JSON-lines tables for entities, passages,
/// triples and edges, and binary files for the CSC adjacency, the incidence
/// matrix and the embeddings.
void persist_index(const GraphIndex& index, const std::filesystem::path& dir);

/// Loads an index written by persist_index. The format version is checked
/// before any other file is read; every file is checksum-verified.
GraphIndex load_index(const std::filesystem::path& dir);

/// Digest over all index file checksums; equal digests mean identical files.
std::string index_digest(const std::filesystem::path& dir);

}  // namespace propex

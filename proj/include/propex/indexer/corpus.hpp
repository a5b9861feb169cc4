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
#include <vector>

#include "propex/indexer/types.hpp"

namespace propex {

/// Reads a JSON-lines corpus: one {"id", "title", "text"} object per line, blank
/// lines ignored. Errors name the offending line number or duplicate id.
std::vector<Passage> ingest_corpus(const std::filesystem::path& path);

void write_corpus(const std::filesystem::path& path, const std::vector<Passage>& passages);

}  // namespace propex

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
#include <string>
#include <string_view>
#include <vector>

#include "propex/indexer/types.hpp"

namespace propex {

enum class DatasetFormat { HotpotQA, TwoWiki };

DatasetFormat dataset_format_from_string(std::string_view s);

struct QAExample {
    std::string question_id;
    std::string question;
    std::string gold_answer;
    std::vector<std::string> gold_passage_ids;  // sorted, unique
    bool recall_scorable = true;
};

struct Dataset {
    std::vector<Passage> passages;
    std::vector<QAExample> examples;
    std::vector<std::string> warnings;
};

/// Reads a HotpotQA / 2WikiMultihopQA style file (a JSON array, or one JSON
/// object per line). Context paragraphs are flattened into unique passages
/// with id "<title>#<n>", where n counts distinct paragraph texts seen for the
/// same title; supporting-fact titles become gold passage ids. A supporting
/// title missing from the example's context makes that example unscorable
/// for recall.
Dataset load_dataset(const std::filesystem::path& path, DatasetFormat format);

}  // namespace propex

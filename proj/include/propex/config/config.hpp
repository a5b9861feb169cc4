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

#include "propex/indexer/graph_index.hpp"
#include "propex/providers/provider.hpp"
#include "propex/retrieval/params.hpp"

namespace propex {

struct AppConfig {
    ProviderConfig provider;
    RetrievalParams retrieval;
    double synonymy_threshold = 0.9;
    NodeScoreMode node_score_mode = NodeScoreMode::Inverse;
    std::filesystem::path index_dir;
    std::filesystem::path cache_dir;
    std::filesystem::path template_dir;
    std::string log_level = "warn";
    int mock_embed_dim = 256;
    unsigned long long mock_seed = 0;
};

/// Overlays the values present in a YAML config file onto `config`. Unknown
/// keys are rejected, as is any attempt to store an API key in the file.
void apply_config_file(AppConfig& config, const std::filesystem::path& file);

/// Same, from YAML text (`origin` names the source in error messages).
void apply_config_text(AppConfig& config, const std::string& yaml, const std::string& origin);

}  // namespace propex

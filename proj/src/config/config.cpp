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


#include "propex/config/config.hpp"

#include <yaml-cpp/yaml.h>

#include <fstream>
#include <set>
#include <sstream>

#include "propex/common/error.hpp"

namespace propex {

namespace {

void check_keys(const YAML::Node& node, const std::string& section, const std::set<std::string>& allowed,
                const std::string& origin) {
    if (!node.IsMap()) throw DataError(origin + ": section '" + section + "' must be a mapping");
    for (const auto& kv : node) {
        auto key = kv.first.as<std::string>();
        if (key == "api_key" || key == "openai_api_key") {
            throw DataError(origin + ": API keys must come from the environment, not the config file");
        }
        if (!allowed.contains(key)) throw DataError(origin + ": unknown key '" + section + "." + key + "'");
    }
}

template <typename T>
void read(const YAML::Node& node, const char* key, T& slot, const std::string& origin) {
    if (!node[key]) return;
    try {
        slot = node[key].as<T>();
    } catch (const YAML::Exception& e) {
        throw DataError(origin + ": bad value for '" + key + "': " + e.what());
    }
}

}  // namespace

void apply_config_text(AppConfig& c, const std::string& yaml, const std::string& origin) {
    YAML::Node root;
    try {
        root = YAML::Load(yaml);
    } catch (const YAML::Exception& e) {
        throw DataError(origin + ": " + e.what());
    }
    if (root.IsNull()) return;
    check_keys(root, "<root>", {"provider", "retrieval", "index", "paths", "log_level", "mock"}, origin);

    if (auto p = root["provider"]) {
        check_keys(p, "provider",
                   {"endpoint_url", "api_key_env_var", "chat_model_id", "embed_model_id", "timeout_ms", "max_retries",
                    "max_concurrency", "backoff_ms"},
                   origin);
        read(p, "endpoint_url", c.provider.endpoint_url, origin);
        read(p, "api_key_env_var", c.provider.api_key_env_var, origin);
        read(p, "chat_model_id", c.provider.chat_model_id, origin);
        read(p, "embed_model_id", c.provider.embed_model_id, origin);
        long long ms = c.provider.timeout.count();
        read(p, "timeout_ms", ms, origin);
        c.provider.timeout = std::chrono::milliseconds(ms);
        long long backoff = c.provider.backoff_base.count();
        read(p, "backoff_ms", backoff, origin);
        c.provider.backoff_base = std::chrono::milliseconds(backoff);
        read(p, "max_retries", c.provider.max_retries, origin);
        read(p, "max_concurrency", c.provider.max_concurrency, origin);
    }
    if (auto r = root["retrieval"]) {
        check_keys(r, "retrieval",
                   {"alpha", "lambda_rerank", "k_triples", "k_passages", "tol", "max_iter", "use_node_score_restart"},
                   origin);
        read(r, "alpha", c.retrieval.alpha, origin);
        read(r, "lambda_rerank", c.retrieval.lambda_rerank, origin);
        read(r, "k_triples", c.retrieval.k_triples, origin);
        read(r, "k_passages", c.retrieval.k_passages, origin);
        read(r, "tol", c.retrieval.tol, origin);
        read(r, "max_iter", c.retrieval.max_iter, origin);
        read(r, "use_node_score_restart", c.retrieval.use_node_score_restart, origin);
    }
    if (auto i = root["index"]) {
        check_keys(i, "index", {"synonymy_threshold", "node_score_mode"}, origin);
        read(i, "synonymy_threshold", c.synonymy_threshold, origin);
        if (i["node_score_mode"]) c.node_score_mode = node_score_mode_from_string(i["node_score_mode"].as<std::string>());
    }
    if (auto p = root["paths"]) {
        check_keys(p, "paths", {"index_dir", "cache_dir", "template_dir"}, origin);
        if (p["index_dir"]) c.index_dir = p["index_dir"].as<std::string>();
        if (p["cache_dir"]) c.cache_dir = p["cache_dir"].as<std::string>();
        if (p["template_dir"]) c.template_dir = p["template_dir"].as<std::string>();
    }
    read(root, "log_level", c.log_level, origin);
    if (auto m = root["mock"]) {
        check_keys(m, "mock", {"embed_dim", "seed"}, origin);
        read(m, "embed_dim", c.mock_embed_dim, origin);
        read(m, "seed", c.mock_seed, origin);
    }
}

void apply_config_file(AppConfig& c, const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in) throw DataError("cannot read config file '" + file.string() + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    apply_config_text(c, ss.str(), file.string());
}

}  // namespace propex

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


#include "propex/eval/cache.hpp"

#include <fstream>

#include "propex/common/digest.hpp"
#include "propex/common/error.hpp"
#include "propex/common/text.hpp"

namespace propex {

ResponseCache::ResponseCache(std::filesystem::path dir) : file_(dir / "responses.jsonl") {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw DataError("cannot create cache directory '" + dir.string() + "': " + ec.message());
    std::ifstream in(file_);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (text::trim(line).empty()) continue;
        try {
            auto j = nlohmann::json::parse(line);
            auto key = j.at("key").get<std::string>();
            j.at("response");
            entries_.emplace(std::move(key), std::move(j));
        } catch (const nlohmann::json::exception& e) {
            throw DataError(file_.string() + ":" + std::to_string(line_no) + ": bad cache record: " + e.what());
        }
    }
}

std::optional<nlohmann::json> ResponseCache::get(const std::string& key) const {
    std::shared_lock lock(mu_);
    auto it = entries_.find(key);
    if (it == entries_.end()) return std::nullopt;
    return std::optional<nlohmann::json>(std::in_place, it->second);
}

void ResponseCache::put(const std::string& key, const nlohmann::ordered_json& record) {
    std::unique_lock lock(mu_);
    if (entries_.contains(key)) return;
    std::ofstream out(file_, std::ios::app | std::ios::binary);
    if (!out) throw DataError("cannot append to cache file '" + file_.string() + "'");
    out << record.dump() << '\n';
    out.flush();
    if (!out) throw DataError("failed writing cache file '" + file_.string() + "'");
    entries_.emplace(key, nlohmann::json::parse(record.dump()));
}

std::size_t ResponseCache::size() const {
    std::shared_lock lock(mu_);
    return entries_.size();
}

nlohmann::ordered_json chat_cache_request(const std::string& model_id, const ChatRequest& request) {
    return {{"kind", "chat"},
            {"model", model_id},
            {"template_version", request.template_version},
            {"system", request.system_text},
            {"user", request.user_text},
            {"temperature", request.temperature},
            {"max_tokens", request.max_tokens}};
}

std::string chat_cache_key(const std::string& model_id, const ChatRequest& request) {
    return sha256_hex(chat_cache_request(model_id, request).dump());
}

std::string embed_cache_key(const std::string& model_id, const std::string& text) {
    nlohmann::ordered_json req = {{"kind", "embed"}, {"model", model_id}, {"input", text}};
    return sha256_hex(req.dump());
}

std::string CachingChatProvider::complete(const ChatRequest& request) {
    const auto model = inner_.model_id();
    const auto key = chat_cache_key(model, request);
    if (auto hit = cache_.get(key)) return hit->at("response").get<std::string>();
    ++misses_;
    std::string response = inner_.complete(request);
    nlohmann::ordered_json record = {{"key", key},
                                     {"model", model},
                                     {"kind", "chat"},
                                     {"request", chat_cache_request(model, request)},
                                     {"response", response}};
    cache_.put(key, record);
    return response;
}

std::vector<EmbeddingVector> CachingEmbeddingProvider::embed(std::span<const std::string> texts) {
    const auto model = inner_.model_id();
    std::vector<EmbeddingVector> out(texts.size());
    std::vector<std::size_t> missing;
    std::vector<std::string> keys(texts.size());
    for (std::size_t i = 0; i < texts.size(); ++i) {
        keys[i] = embed_cache_key(model, texts[i]);
        if (auto hit = cache_.get(keys[i])) {
            out[i] = EmbeddingVector(hit->at("response").get<std::vector<double>>());
        } else {
            missing.push_back(i);
        }
    }
    if (missing.empty()) return out;
    misses_ += missing.size();
    std::vector<std::string> batch;
    batch.reserve(missing.size());
    for (auto i : missing) batch.push_back(texts[i]);
    auto fresh = inner_.embed(batch);
    if (fresh.size() != batch.size()) {
        throw IndexCorruptionError("embedding provider returned the wrong number of vectors");
    }
    for (std::size_t m = 0; m < missing.size(); ++m) {
        auto i = missing[m];
        std::vector<double> values(fresh[m].values().begin(), fresh[m].values().end());
        nlohmann::ordered_json record = {{"key", keys[i]},
                                         {"model", model},
                                         {"kind", "embed"},
                                         {"request", {{"kind", "embed"}, {"model", model}, {"input", texts[i]}}},
                                         {"response", values}};
        cache_.put(keys[i], record);
        out[i] = std::move(fresh[m]);
    }
    return out;
}

}  // namespace propex

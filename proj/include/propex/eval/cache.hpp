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

#include <nlohmann/json.hpp>

#include <atomic>
#include <filesystem>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>
#include <unordered_map>

#include "propex/providers/provider.hpp"

namespace propex {

/// Append-only response store in `<dir>/responses.jsonl`. Each record holds the
/// key, model id, request kind, the request itself and the response, so the
/// file can be inspected and edited by hand. Reads are concurrent; appends are
/// serialised. The first record for a key wins.
class ResponseCache {
public:
    explicit ResponseCache(std::filesystem::path dir);

    std::optional<nlohmann::json> get(const std::string& key) const;
    void put(const std::string& key, const nlohmann::ordered_json& record);

    std::size_t size() const;
    const std::filesystem::path& file() const { return file_; }

private:
    std::filesystem::path file_;
    mutable std::shared_mutex mu_;
    std::unordered_map<std::string, nlohmann::json> entries_;
};

/// Canonical serialisation of a chat request (model id and template version included).
nlohmann::ordered_json chat_cache_request(const std::string& model_id, const ChatRequest& request);
std::string chat_cache_key(const std::string& model_id, const ChatRequest& request);
std::string embed_cache_key(const std::string& model_id, const std::string& text);

/// Read-through cache in front of a chat provider.
class CachingChatProvider : public ChatProvider {
public:
    CachingChatProvider(ChatProvider& inner, ResponseCache& cache) : inner_(inner), cache_(cache) {}

    std::string complete(const ChatRequest& request) override;
    std::string model_id() const override { return inner_.model_id(); }

    std::size_t misses() const { return misses_; }

private:
    ChatProvider& inner_;
    ResponseCache& cache_;
    std::atomic<std::size_t> misses_{0};
};

/// Read-through cache in front of an embedding provider; one entry per text.
class CachingEmbeddingProvider : public EmbeddingProvider {
public:
    CachingEmbeddingProvider(EmbeddingProvider& inner, ResponseCache& cache) : inner_(inner), cache_(cache) {}

    std::vector<EmbeddingVector> embed(std::span<const std::string> texts) override;
    std::string model_id() const override { return inner_.model_id(); }

    std::size_t misses() const { return misses_; }

private:
    EmbeddingProvider& inner_;
    ResponseCache& cache_;
    std::atomic<std::size_t> misses_{0};
};

}  // namespace propex

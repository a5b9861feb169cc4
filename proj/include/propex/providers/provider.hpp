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

#include <chrono>
#include <span>
#include <string>
#include <vector>

#include "propex/providers/embedding.hpp"

namespace propex {

struct ChatRequest {
    std::string system_text;
    std::string user_text;
    double temperature = 0.0;
    int max_tokens = 512;
    std::string template_version;  // part of the cache key, not sent on the wire
};

/// Connection settings for an OpenAI-compatible endpoint. The API key itself
/// is never stored here, only the name of the environment variable holding it.
struct ProviderConfig {
    std::string endpoint_url = "https://api.openai.com/v1";
    std::string api_key_env_var = "OPENAI_API_KEY";
    std::string chat_model_id = "gpt-4.1-mini";
    std::string embed_model_id = "text-embedding-3-large";
    std::chrono::milliseconds timeout{30000};
    int max_retries = 3;
    int max_concurrency = 4;
    std::chrono::milliseconds backoff_base{500};
};

class ChatProvider {
public:
    virtual ~ChatProvider() = default;
    virtual std::string complete(const ChatRequest& request) = 0;
    virtual std::string model_id() const = 0;
};

class EmbeddingProvider {
public:
    virtual ~EmbeddingProvider() = default;
    virtual std::vector<EmbeddingVector> embed(std::span<const std::string> texts) = 0;
    virtual std::string model_id() const = 0;
};

/// Validated embedding call: one vector per input in input order, all the same dimension.
std::vector<EmbeddingVector> embed_texts(std::span<const std::string> texts, EmbeddingProvider& provider);
EmbeddingVector embed_text(const std::string& text, EmbeddingProvider& provider);

/// Validated chat call. Throws EmptyOutputError when the completion is blank.
std::string chat_complete(const ChatRequest& request, ChatProvider& provider);

}  // namespace propex

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
#include <functional>
#include <memory>
#include <semaphore>
#include <string>
#include <utility>
#include <vector>

#include "propex/providers/provider.hpp"

namespace propex {

struct HttpResponse {
    int status = 0;
    std::string body;
};

using HttpHeaders = std::vector<std::pair<std::string, std::string>>;

/// One HTTP POST. Throws TransportFailure when no response was received.
class Transport {
public:
    virtual ~Transport() = default;
    virtual HttpResponse post(const std::string& url, const std::string& body, const HttpHeaders& headers,
                              std::chrono::milliseconds timeout) = 0;
};

class TransportFailure : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class HttplibTransport : public Transport {
public:
    HttpResponse post(const std::string& url, const std::string& body, const HttpHeaders& headers,
                      std::chrono::milliseconds timeout) override;
};

/// Chat and embedding client for OpenAI-compatible `/chat/completions` and
/// `/embeddings` endpoints. Each call makes at most `max_retries + 1` transport
/// attempts with exponential backoff; HTTP 429 and 5xx are retried, other 4xx
/// fail immediately. In-flight calls are capped at `max_concurrency`.
class OpenAiProvider : public ChatProvider, public EmbeddingProvider {
public:
    using Sleeper = std::function<void(std::chrono::milliseconds)>;

    /// Reads the API key from the environment variable named in `config`.
    explicit OpenAiProvider(ProviderConfig config, std::shared_ptr<Transport> transport = nullptr,
                            Sleeper sleeper = nullptr);

    std::string complete(const ChatRequest& request) override;
    std::vector<EmbeddingVector> embed(std::span<const std::string> texts) override;

    std::string model_id() const override { return config_.chat_model_id; }
    std::string embed_model_id() const { return config_.embed_model_id; }

    static std::string chat_request_body(const ProviderConfig& config, const ChatRequest& request);
    static std::string embed_request_body(const ProviderConfig& config, std::span<const std::string> texts);
    static std::string parse_chat_response(const std::string& body);
    static std::vector<EmbeddingVector> parse_embed_response(const std::string& body, std::size_t expected);

private:
    std::string post_with_retry(const std::string& path, const std::string& body);

    ProviderConfig config_;
    std::string api_key_;
    std::shared_ptr<Transport> transport_;
    Sleeper sleeper_;
    std::unique_ptr<std::counting_semaphore<1024>> slots_;
};

/// Embedding view of an OpenAiProvider that reports the embedding model id.
class OpenAiEmbeddings : public EmbeddingProvider {
public:
    explicit OpenAiEmbeddings(std::shared_ptr<OpenAiProvider> client) : client_(std::move(client)) {}
    std::vector<EmbeddingVector> embed(std::span<const std::string> texts) override { return client_->embed(texts); }
    std::string model_id() const override { return client_->embed_model_id(); }

private:
    std::shared_ptr<OpenAiProvider> client_;
};

}  // namespace propex

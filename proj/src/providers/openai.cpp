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


#include "propex/providers/openai.hpp"

#include <httplib.h>
#include <nlohmann/json.hpp>

#include <algorithm>
#include <cstdlib>
#include <thread>

#include "propex/common/error.hpp"
#include "propex/common/log.hpp"

namespace propex {

namespace {

using json = nlohmann::json;

// Splits "https://host:port/prefix" into ("https://host:port", "/prefix").
std::pair<std::string, std::string> split_url(const std::string& url) {
    auto scheme_end = url.find("://");
    if (scheme_end == std::string::npos) throw UsageError("endpoint url '" + url + "' has no scheme");
    auto path_start = url.find('/', scheme_end + 3);
    if (path_start == std::string::npos) return {url, ""};
    return {url.substr(0, path_start), url.substr(path_start)};
}

std::string trim_trailing_slash(std::string s) {
    while (!s.empty() && s.back() == '/') s.pop_back();
    return s;
}

}  // namespace

HttpResponse HttplibTransport::post(const std::string& url, const std::string& body, const HttpHeaders& headers,
                                    std::chrono::milliseconds timeout) {
    auto [origin, path] = split_url(url);
    httplib::Client client(origin);
    auto secs = std::chrono::duration_cast<std::chrono::seconds>(timeout);
    auto usecs = std::chrono::duration_cast<std::chrono::microseconds>(timeout - secs);
    client.set_connection_timeout(secs.count(), usecs.count());
    client.set_read_timeout(secs.count(), usecs.count());
    client.set_write_timeout(secs.count(), usecs.count());
    httplib::Headers h;
    for (const auto& [k, v] : headers) h.emplace(k, v);
    auto res = client.Post(path, h, body, "application/json");
    if (!res) throw TransportFailure("POST " + url + " failed: " + httplib::to_string(res.error()));
    return {res->status, res->body};
}

OpenAiProvider::OpenAiProvider(ProviderConfig config, std::shared_ptr<Transport> transport, Sleeper sleeper)
    : config_(std::move(config)),
      transport_(transport ? std::move(transport) : std::make_shared<HttplibTransport>()),
      sleeper_(sleeper ? std::move(sleeper) : Sleeper([](std::chrono::milliseconds d) { std::this_thread::sleep_for(d); })),
      slots_(std::make_unique<std::counting_semaphore<1024>>(std::clamp(config_.max_concurrency, 1, 1024))) {
    if (config_.max_retries < 0) throw UsageError("max_retries must be non-negative");
    const char* key = std::getenv(config_.api_key_env_var.c_str());
    if (key == nullptr || *key == '\0') {
        throw ProviderError("environment variable " + config_.api_key_env_var + " holding the API key is not set",
                            false);
    }
    api_key_ = key;
    logger()->debug("live chat provider {}: temperature 0 completions are possibly nondeterministic",
                    config_.chat_model_id);
}

std::string OpenAiProvider::chat_request_body(const ProviderConfig& config, const ChatRequest& request) {
    json messages = json::array();
    if (!request.system_text.empty()) messages.push_back({{"role", "system"}, {"content", request.system_text}});
    messages.push_back({{"role", "user"}, {"content", request.user_text}});
    json body = {
        {"model", config.chat_model_id},
        {"messages", messages},
        {"temperature", request.temperature},
        {"max_tokens", request.max_tokens},
    };
    return body.dump();
}

std::string OpenAiProvider::embed_request_body(const ProviderConfig& config, std::span<const std::string> texts) {
    json body = {{"model", config.embed_model_id}, {"input", json(std::vector<std::string>(texts.begin(), texts.end()))}};
    return body.dump();
}

std::string OpenAiProvider::parse_chat_response(const std::string& body) {
    try {
        auto j = json::parse(body);
        const auto& content = j.at("choices").at(0).at("message").at("content");
        return content.is_null() ? std::string() : content.get<std::string>();
    } catch (const json::exception& e) {
        throw ProviderError(std::string("malformed chat completion response: ") + e.what(), false);
    }
}

std::vector<EmbeddingVector> OpenAiProvider::parse_embed_response(const std::string& body, std::size_t expected) {
    std::vector<EmbeddingVector> out(expected);
    std::vector<bool> filled(expected, false);
    try {
        auto j = json::parse(body);
        for (const auto& item : j.at("data")) {
            auto index = item.at("index").get<std::size_t>();
            if (index >= expected || filled[index]) {
                throw ProviderError("embedding response has unexpected index " + std::to_string(index), false);
            }
            out[index] = EmbeddingVector(item.at("embedding").get<std::vector<double>>());
            filled[index] = true;
        }
    } catch (const json::exception& e) {
        throw ProviderError(std::string("malformed embedding response: ") + e.what(), false);
    }
    if (std::find(filled.begin(), filled.end(), false) != filled.end()) {
        throw ProviderError("embedding response is missing vectors", false);
    }
    return out;
}

std::string OpenAiProvider::post_with_retry(const std::string& path, const std::string& body) {
    const std::string url = trim_trailing_slash(config_.endpoint_url) + path;
    const HttpHeaders headers = {{"Authorization", "Bearer " + api_key_}};
    const int max_attempts = config_.max_retries + 1;
    std::string last_error;
    for (int attempt = 1; attempt <= max_attempts; ++attempt) {
        if (attempt > 1) sleeper_(config_.backoff_base * (1 << std::min(attempt - 2, 16)));
        HttpResponse res;
        try {
            slots_->acquire();
            struct Release {
                std::counting_semaphore<1024>* s;
                ~Release() { s->release(); }
            } release{slots_.get()};
            res = transport_->post(url, body, headers, config_.timeout);
        } catch (const TransportFailure& e) {
            last_error = e.what();
            logger()->warn("attempt {}/{} to {}: {}", attempt, max_attempts, url, last_error);
            continue;
        }
        if (res.status >= 200 && res.status < 300) return res.body;
        last_error = "HTTP " + std::to_string(res.status) + ": " + res.body.substr(0, 200);
        if (res.status != 429 && res.status < 500) {
            throw ProviderError("POST " + url + " rejected: " + last_error, false, attempt);
        }
        logger()->warn("attempt {}/{} to {}: {}", attempt, max_attempts, url, last_error);
    }
    throw ProviderError("POST " + url + " failed after " + std::to_string(max_attempts) + " attempts: " + last_error,
                        true, max_attempts);
}

std::string OpenAiProvider::complete(const ChatRequest& request) {
    return parse_chat_response(post_with_retry("/chat/completions", chat_request_body(config_, request)));
}

std::vector<EmbeddingVector> OpenAiProvider::embed(std::span<const std::string> texts) {
    return parse_embed_response(post_with_retry("/embeddings", embed_request_body(config_, texts)), texts.size());
}

}  // namespace propex

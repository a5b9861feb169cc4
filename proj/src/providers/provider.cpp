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


#include "propex/providers/provider.hpp"

#include "propex/common/error.hpp"
#include "propex/common/text.hpp"

namespace propex {

std::vector<EmbeddingVector> embed_texts(std::span<const std::string> texts, EmbeddingProvider& provider) {
    if (texts.empty()) throw DataError("embed_texts: no input texts");
    for (std::size_t i = 0; i < texts.size(); ++i) {
        if (text::trim(texts[i]).empty()) {
            throw DataError("embed_texts: input " + std::to_string(i) + " is blank");
        }
    }
    auto out = provider.embed(texts);
    if (out.size() != texts.size()) {
        throw IndexCorruptionError("embedding provider " + provider.model_id() + " returned " +
                                   std::to_string(out.size()) + " vectors for " + std::to_string(texts.size()) +
                                   " inputs");
    }
    for (const auto& v : out) {
        if (v.dim() != out.front().dim()) {
            throw IndexCorruptionError("embedding provider " + provider.model_id() +
                                       " returned mixed dimensions in one batch");
        }
    }
    return out;
}

EmbeddingVector embed_text(const std::string& text, EmbeddingProvider& provider) {
    return embed_texts(std::span<const std::string>(&text, 1), provider).front();
}

std::string chat_complete(const ChatRequest& request, ChatProvider& provider) {
    if (text::trim(request.user_text).empty()) throw DataError("chat_complete: empty user text");
    std::string out = provider.complete(request);
    if (text::trim(out).empty()) {
        throw EmptyOutputError("chat model " + provider.model_id() + " returned an empty completion");
    }
    return out;
}

}  // namespace propex

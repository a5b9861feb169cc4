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


#include "propex/providers/mock.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <set>

#include "propex/common/digest.hpp"
#include "propex/common/error.hpp"
#include "propex/common/text.hpp"

namespace propex {

namespace {

std::uint64_t fnv1a(std::string_view s) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

void add_feature(std::vector<double>& acc, std::string_view feature, std::uint64_t seed) {
    std::uint64_t h = splitmix64(fnv1a(feature) ^ splitmix64(seed));
    auto bucket = static_cast<std::size_t>(h % acc.size());
    acc[bucket] += (h >> 63) ? -1.0 : 1.0;
}

const std::set<std::string, std::less<>>& function_words() {
    static const std::set<std::string, std::less<>> words = {
        "a",     "an",    "the",   "of",    "in",    "on",   "at",   "to",    "for",  "by",    "with",
        "from",  "and",   "or",    "is",    "was",   "are",  "were", "be",    "been", "which", "who",
        "whom",  "whose", "what",  "when",  "where", "why",  "how",  "that",  "this", "it",    "its",
        "he",    "she",   "his",   "her",   "they",  "their", "did", "does",  "do",   "as",    "after",
        "before", "during", "there", "these", "those", "has", "have", "had",  "also", "not",   "but",
    };
    return words;
}

bool is_sentence_stopword(std::string_view w) {
    return function_words().contains(text::to_lower_ascii(w));
}

std::string strip_punct(std::string_view w, bool& trailing_break) {
    size_t b = 0, e = w.size();
    while (b < e && std::string_view("\"'([").find(w[b]) != std::string_view::npos) ++b;
    trailing_break = false;
    while (e > b && std::string_view(".,;:!?\"')]").find(w[e - 1]) != std::string_view::npos) {
        trailing_break = true;
        --e;
    }
    return std::string(w.substr(b, e - b));
}

bool capitalised(std::string_view w) {
    return !w.empty() && std::isupper(static_cast<unsigned char>(w.front())) != 0;
}

// Text between the first line equal to `start` and the next line equal to `end`.
std::string block_after(const std::string& src, std::string_view start, std::string_view end) {
    auto lines = text::split_lines(src);
    std::vector<std::string> out;
    bool inside = false;
    for (const auto& line : lines) {
        if (!inside) {
            if (line == start) inside = true;
            continue;
        }
        if (line == end) break;
        out.push_back(line);
    }
    return text::join(out, "\n");
}

std::string line_value(const std::string& src, std::string_view prefix) {
    for (const auto& line : text::split_lines(src)) {
        if (line.rfind(prefix, 0) == 0) return text::trim(line.substr(prefix.size()));
    }
    return {};
}

std::set<std::string> content_tokens(std::string_view s) {
    std::set<std::string> out;
    for (auto& t : text::word_tokens(s)) {
        if (!function_words().contains(t)) out.insert(std::move(t));
    }
    return out;
}

std::string respond_entities(const std::string& user) {
    auto names = mock_rules::spot_entities(line_value(user, "Title:"), block_after(user, "Text:", "<end of passage>"));
    if (names.empty()) return "NONE";
    return text::join(names, "; ");
}

std::string respond_triples(const std::string& user) {
    std::vector<std::string> entities;
    for (auto& e : text::split(line_value(user, "Entities:"), ';')) {
        auto t = text::trim(e);
        if (!t.empty() && t != "NONE") entities.push_back(t);
    }
    auto lines = mock_rules::spot_triples(block_after(user, "Text:", "<end of passage>"), entities);
    if (lines.empty()) return "NONE";
    return text::join(lines, "\n");
}

std::string respond_gate(const std::string& user) {
    auto question = content_tokens(line_value(user, "Question:"));
    std::vector<std::string> keep;
    for (const auto& line : text::split_lines(block_after(user, "Candidate facts:", ""))) {
        auto dot = line.find(". ");
        if (dot == std::string::npos) continue;
        auto parts = text::split(line.substr(dot + 2), '|');
        if (parts.size() != 3) continue;
        auto ends = content_tokens(parts[0] + " " + parts[2]);
        bool hit = std::any_of(ends.begin(), ends.end(), [&](const std::string& t) { return question.contains(t); });
        if (hit) keep.push_back(line.substr(0, dot));
    }
    if (keep.empty()) return "keep: none";
    return "keep: " + text::join(keep, ", ");
}

std::string respond_answer(const std::string& user) {
    for (const auto& line : text::split_lines(block_after(user, "Passages:", ""))) {
        if (line.size() > 2 && line.front() == '[') {
            auto close = line.find(']');
            if (close == std::string::npos) continue;
            std::string id = line.substr(1, close - 1);
            std::string title = text::trim(line.substr(close + 1));
            return "The strongest evidence is [" + id + "].\nAnswer: " + title;
        }
    }
    return "Answer: unknown";
}

}  // namespace

EmbeddingVector mock_embed(std::string_view text_in, int dim, std::uint64_t seed) {
    if (dim < 8) throw UsageError("mock embedding dimension must be at least 8");
    std::vector<double> acc(static_cast<std::size_t>(dim), 0.0);
    auto tokens = text::word_tokens(text_in);
    for (std::size_t i = 0; i < tokens.size(); ++i) {
        add_feature(acc, tokens[i], seed);
        if (i + 1 < tokens.size()) add_feature(acc, tokens[i] + " " + tokens[i + 1], seed);
    }
    double norm = 0.0;
    for (double v : acc) norm += v * v;
    if (norm == 0.0) {
        // No tokens, or every feature cancelled out: fall back to a single
        // bucket chosen from the raw text.
        acc[static_cast<std::size_t>(splitmix64(fnv1a(text_in) ^ seed) % acc.size())] = 1.0;
        norm = 1.0;
    }
    norm = std::sqrt(norm);
    for (double& v : acc) v /= norm;
    return EmbeddingVector(std::move(acc));
}

MockEmbeddingProvider::MockEmbeddingProvider(int dim, std::uint64_t seed) : dim_(dim), seed_(seed) {
    if (dim < 8) throw UsageError("mock embedding dimension must be at least 8");
}

std::vector<EmbeddingVector> MockEmbeddingProvider::embed(std::span<const std::string> texts) {
    std::vector<EmbeddingVector> out;
    out.reserve(texts.size());
    for (const auto& t : texts) out.push_back(mock_embed(t, dim_, seed_));
    return out;
}

std::string MockEmbeddingProvider::model_id() const {
    return "mock-embed-" + std::to_string(dim_) + "-s" + std::to_string(seed_);
}

MockChatProvider MockChatProvider::from_fixture_file(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in) throw DataError("cannot open mock fixture file '" + file.string() + "'");
    std::vector<Fixture> fixtures;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (text::trim(line).empty()) continue;
        try {
            auto j = nlohmann::json::parse(line);
            fixtures.push_back({j.at("contains").get<std::string>(), j.at("response").get<std::string>()});
        } catch (const nlohmann::json::exception& e) {
            throw DataError(file.string() + ":" + std::to_string(line_no) + ": bad fixture record: " + e.what());
        }
    }
    return MockChatProvider(std::move(fixtures));
}

void MockChatProvider::add_fixture(std::string contains, std::string response) {
    fixtures_.push_back({std::move(contains), std::move(response)});
}

std::string MockChatProvider::complete(const ChatRequest& request) {
    const std::string whole = request.system_text + "\n" + request.user_text;
    for (const auto& f : fixtures_) {
        if (whole.find(f.contains) != std::string::npos) return f.response;
    }
    const std::string& user = request.user_text;
    const bool has_passage = user.find("\n<end of passage>") != std::string::npos;
    if (has_passage && user.find("\nEntities:") != std::string::npos) return respond_triples(user);
    if (has_passage) return respond_entities(user);
    if (user.find("Candidate facts:") != std::string::npos) return respond_gate(user);
    if (user.rfind("Passages:", 0) == 0) return respond_answer(user);
    return "ack " + sha256_hex(whole).substr(0, 12);
}

namespace mock_rules {

std::vector<std::string> spot_entities(std::string_view title, std::string_view body) {
    std::vector<std::string> out;
    std::set<std::string> seen;
    auto emit = [&](const std::string& name) {
        auto t = text::trim(name);
        if (t.empty()) return;
        if (seen.insert(text::canonicalize(t)).second) out.push_back(t);
    };
    emit(std::string(title));

    std::vector<std::string> words;
    std::vector<bool> breaks;
    for (const auto& raw : text::split(text::collapse_whitespace(body), ' ')) {
        bool brk = false;
        words.push_back(strip_punct(raw, brk));
        breaks.push_back(brk);
    }
    std::vector<std::string> run;
    auto flush = [&] {
        while (!run.empty() && (is_sentence_stopword(run.front()) || run.front() == "of")) run.erase(run.begin());
        while (!run.empty() && run.back() == "of") run.pop_back();
        if (!run.empty()) emit(text::join(run, " "));
        run.clear();
    };
    for (std::size_t i = 0; i < words.size(); ++i) {
        const auto& w = words[i];
        bool joins = capitalised(w) ||
                     (w == "of" && !run.empty() && i + 1 < words.size() && capitalised(words[i + 1]));
        if (joins) {
            run.push_back(w);
            if (breaks[i]) flush();
        } else {
            flush();
        }
    }
    flush();
    return out;
}

std::vector<std::string> spot_triples(std::string_view body, const std::vector<std::string>& entities) {
    std::vector<std::string> out;
    std::set<std::string> seen;
    std::string sentence;
    std::vector<std::string> sentences;
    for (std::size_t i = 0; i < body.size(); ++i) {
        sentence.push_back(body[i]);
        bool end = (body[i] == '.' || body[i] == '!' || body[i] == '?') &&
                   (i + 1 == body.size() || std::isspace(static_cast<unsigned char>(body[i + 1])));
        if (end) {
            sentences.push_back(sentence);
            sentence.clear();
        }
    }
    if (!text::trim(sentence).empty()) sentences.push_back(sentence);

    for (const auto& s : sentences) {
        auto tokens = text::word_tokens(s);
        struct Hit {
            std::size_t start, end;
            const std::string* name;
        };
        std::vector<Hit> hits;
        for (const auto& e : entities) {
            auto etoks = text::word_tokens(e);
            if (etoks.empty() || etoks.size() > tokens.size()) continue;
            for (std::size_t i = 0; i + etoks.size() <= tokens.size(); ++i) {
                if (std::equal(etoks.begin(), etoks.end(), tokens.begin() + static_cast<std::ptrdiff_t>(i))) {
                    hits.push_back({i, i + etoks.size(), &e});
                    break;
                }
            }
        }
        std::sort(hits.begin(), hits.end(), [](const Hit& a, const Hit& b) {
            return a.start != b.start ? a.start < b.start : a.end > b.end;
        });
        // Drop hits nested inside an earlier, longer hit.
        std::vector<Hit> kept;
        for (const auto& h : hits) {
            if (!kept.empty() && h.start < kept.back().end) continue;
            kept.push_back(h);
        }
        for (std::size_t i = 0; i + 1 < kept.size(); ++i) {
            std::vector<std::string> between(tokens.begin() + static_cast<std::ptrdiff_t>(kept[i].end),
                                             tokens.begin() + static_cast<std::ptrdiff_t>(kept[i + 1].start));
            if (between.size() > 4) between.erase(between.begin(), between.end() - 4);
            std::string pred = between.empty() ? "related to" : text::join(between, " ");
            std::string line = "(" + *kept[i].name + " | " + pred + " | " + *kept[i + 1].name + ")";
            if (seen.insert(line).second) out.push_back(line);
        }
    }
    return out;
}

}  // namespace mock_rules

}  // namespace propex

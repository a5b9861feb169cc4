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


#include "propex/indexer/extract.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cctype>
#include <functional>
#include <set>

#include "propex/common/error.hpp"
#include "propex/common/log.hpp"
#include "propex/common/text.hpp"

namespace propex {

namespace {

constexpr std::size_t kMaxEntityChars = 120;

bool has_alnum(std::string_view s) {
    return std::any_of(s.begin(), s.end(), [](char c) {
        return std::isalnum(static_cast<unsigned char>(c)) != 0 || static_cast<unsigned char>(c) >= 0x80;
    });
}

bool is_none(std::string_view s) {
    auto t = text::to_lower_ascii(text::trim(s));
    while (!t.empty() && (t.back() == '.' || t.back() == '!')) t.pop_back();
    return t == "none" || t == "[]" || t.empty();
}

// Removes list decorations: "- x", "* x", "1. x", "1) x", surrounding quotes.
std::string strip_item(std::string_view raw) {
    std::string s = text::trim(raw);
    if (!s.empty() && (s[0] == '-' || s[0] == '*')) s = text::trim(s.substr(1));
    size_t digits = 0;
    while (digits < s.size() && std::isdigit(static_cast<unsigned char>(s[digits]))) ++digits;
    if (digits > 0 && digits + 1 < s.size() && (s[digits] == '.' || s[digits] == ')') && s[digits + 1] == ' ') {
        s = text::trim(s.substr(digits + 1));
    }
    if (s.size() >= 2 && ((s.front() == '"' && s.back() == '"') || (s.front() == '\'' && s.back() == '\''))) {
        s = s.substr(1, s.size() - 2);
    }
    return text::trim(s);
}

std::string with_retry(const PromptTemplate& prompt, const std::string& user) {
    if (!prompt.has_section("retry")) return user;
    return user + "\n\n" + prompt.section("retry");
}

// Calls the model up to twice; `parse` returning nullopt triggers the reprompt.
template <typename T>
std::optional<T> ask_twice(ChatProvider& chat, const PromptTemplate& prompt, const std::string& user,
                           const std::function<std::optional<T>(const std::string&)>& parse,
                           std::vector<std::string>& warnings, const std::string& what) {
    ChatRequest req{prompt.has_section("system") ? prompt.section("system") : "", user, 0.0, 1024,
                    prompt.version()};
    for (int attempt = 0; attempt < 2; ++attempt) {
        if (attempt == 1) req.user_text = with_retry(prompt, user);
        try {
            if (auto parsed = parse(chat_complete(req, chat))) return parsed;
        } catch (const EmptyOutputError&) {
        }
    }
    warnings.push_back(what + ": unparseable model output after reprompt");
    logger()->warn("{}: unparseable model output after reprompt", what);
    return std::nullopt;
}

}  // namespace

std::optional<std::vector<std::string>> parse_entity_list(std::string_view reply) {
    std::string s = text::trim(reply);
    if (text::starts_with_icase(s, "entities:")) s = text::trim(s.substr(9));
    if (is_none(s)) return std::vector<std::string>{};
    std::vector<std::string> items;
    if (s.front() == '[') {
        try {
            auto j = nlohmann::json::parse(s);
            if (!j.is_array()) return std::nullopt;
            for (const auto& v : j) {
                if (!v.is_string()) return std::nullopt;
                items.push_back(v.get<std::string>());
            }
        } catch (const nlohmann::json::exception&) {
            return std::nullopt;
        }
    } else {
        const bool semicolons = s.find(';') != std::string::npos;
        for (const auto& line : text::split_lines(s)) {
            for (auto& part : text::split(line, semicolons ? ';' : ',')) items.push_back(std::move(part));
        }
    }
    std::vector<std::string> out;
    for (const auto& raw : items) {
        auto item = strip_item(raw);
        if (item.empty()) continue;
        if (item.size() > kMaxEntityChars || !has_alnum(item)) return std::nullopt;
        out.push_back(item);
    }
    return out;
}

std::optional<std::vector<RawTriple>> parse_triple_lines(std::string_view reply) {
    if (is_none(reply)) return std::vector<RawTriple>{};
    std::vector<RawTriple> out;
    for (const auto& line : text::split_lines(reply)) {
        auto s = strip_item(line);
        if (s.size() >= 2 && s.front() == '(' && s.back() == ')') s = s.substr(1, s.size() - 2);
        auto parts = text::split(s, '|');
        if (parts.size() != 3) continue;
        RawTriple t{text::collapse_whitespace(parts[0]), text::collapse_whitespace(parts[1]),
                    text::collapse_whitespace(parts[2])};
        if (t.subject.empty() || t.predicate.empty() || t.object.empty()) continue;
        out.push_back(std::move(t));
    }
    if (out.empty()) return std::nullopt;
    return out;
}

EntityExtraction extract_entities(const Passage& passage, ChatProvider& chat, const PromptTemplate& prompt) {
    EntityExtraction result;
    const std::string user = prompt.render("user", {{"title", passage.title}, {"text", passage.text}});
    auto names = ask_twice<std::vector<std::string>>(chat, prompt, user, parse_entity_list, result.warnings,
                                                     "entity extraction for passage '" + passage.id + "'");
    if (!names) return result;
    std::set<std::string> seen;
    for (const auto& name : *names) {
        auto canonical = text::canonicalize(name);
        if (canonical.empty()) continue;
        if (seen.insert(canonical).second) result.entities.push_back({name, canonical});
    }
    return result;
}

TripleExtraction extract_triples(const Passage& passage, const std::vector<ExtractedEntity>& entities,
                                 ChatProvider& chat, const PromptTemplate& prompt) {
    TripleExtraction result;
    if (entities.empty()) return result;
    std::vector<std::string> names;
    std::set<std::string> known;
    for (const auto& e : entities) {
        names.push_back(e.surface_form);
        known.insert(e.canonical_name);
    }
    const std::string user = prompt.render(
        "user", {{"title", passage.title}, {"text", passage.text}, {"entities", text::join(names, "; ")}});
    const std::string what = "triple extraction for passage '" + passage.id + "'";
    auto raw = ask_twice<std::vector<RawTriple>>(chat, prompt, user, parse_triple_lines, result.warnings, what);
    if (!raw) return result;
    std::set<std::tuple<std::string, std::string, std::string>> seen;
    for (const auto& t : *raw) {
        auto s = text::canonicalize(t.subject);
        auto o = text::canonicalize(t.object);
        if (!known.contains(s) || !known.contains(o)) {
            const auto& missing = known.contains(s) ? t.object : t.subject;
            result.warnings.push_back(what + ": dropped triple with unknown entity '" + missing + "'");
            logger()->warn("{}", result.warnings.back());
            continue;
        }
        if (!seen.emplace(s, t.predicate, o).second) continue;
        FactTriple ft;
        ft.id = passage.id + "#t" + std::to_string(result.triples.size());
        ft.subject = s;
        ft.predicate = t.predicate;
        ft.object = o;
        ft.source_passage = passage.id;
        result.triples.push_back(std::move(ft));
    }
    return result;
}

}  // namespace propex

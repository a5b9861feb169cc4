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


#include "propex/common/prompts.hpp"

#include <fstream>
#include <sstream>
#include <vector>

#include "propex/common/error.hpp"
#include "propex/common/text.hpp"

namespace propex {

namespace {

constexpr std::string_view kEntities = R"(version: extract_entities/1
[system]
You extract named entities from a passage for building a knowledge graph.
[user]
Identify the salient entities (persons, organizations, locations, works and other named things) in the passage below.
Reply with a single line of entity names separated by semicolons, or NONE if there are none.

Title: {{title}}
Text:
{{text}}
<end of passage>
[retry]
Your previous reply could not be parsed. Reply with only entity names separated by semicolons, or NONE.
)";

constexpr std::string_view kTriples = R"(version: extract_triples/1
[system]
You extract factual (subject, predicate, object) triples from a passage for building a knowledge graph.
[user]
Extract factual triples from the passage below. Subjects and objects must be names from the entity list.
Reply with one triple per line in the form (subject | predicate | object), or NONE.

Entities: {{entities}}
Title: {{title}}
Text:
{{text}}
<end of passage>
[retry]
Your previous reply could not be parsed. Reply with only lines of the form (subject | predicate | object), or NONE.
)";

constexpr std::string_view kFilter = R"(version: filter_facts/1
[system]
You select the facts that help answer a question.
[user]
Question: {{question}}

Candidate facts:
{{facts}}

Which facts are useful for answering the question? Reply with a single line "keep: <comma-separated fact numbers>" or "keep: none".
[retry]
Your previous reply could not be parsed. Reply with exactly one line: "keep: <numbers>" or "keep: none".
)";

constexpr std::string_view kAnswer = R"(version: answer/1
[system]
You answer multi-hop questions using only the supplied evidence.
[user]
Passages:
{{passages}}

Seed entities: {{seeds}}

Facts:
{{triples}}

{{directive}}

Question: {{question}}
[directive]
Answer using only the evidence above. Cite supporting passages by id in square brackets, for example [id]. Finish with a final line of the form "Answer: <short answer>".
)";

std::string read_file(const std::filesystem::path& file) {
    std::ifstream in(file, std::ios::binary);
    if (!in) throw DataError("cannot read prompt template '" + file.string() + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

std::string_view default_template_source(std::string_view name) {
    if (name == "extract_entities") return kEntities;
    if (name == "extract_triples") return kTriples;
    if (name == "filter_facts") return kFilter;
    if (name == "answer") return kAnswer;
    throw UsageError("unknown prompt template '" + std::string(name) + "'");
}

PromptTemplate PromptTemplate::parse(std::string_view source, const std::string& origin) {
    PromptTemplate t;
    std::string current;
    std::vector<std::string> body;
    auto flush = [&] {
        if (current.empty()) return;
        // Trailing blank lines belong to the file layout, not the section.
        while (!body.empty() && text::trim(body.back()).empty()) body.pop_back();
        t.sections_[current] = text::join(body, "\n");
        body.clear();
    };
    for (const auto& line : text::split_lines(source)) {
        if (current.empty() && line.rfind("version:", 0) == 0) {
            t.version_ = text::trim(line.substr(8));
            continue;
        }
        if (line.size() > 2 && line.front() == '[' && line.back() == ']' &&
            line.find(' ') == std::string::npos) {
            flush();
            current = line.substr(1, line.size() - 2);
            if (t.sections_.contains(current)) {
                throw DataError("prompt template " + origin + " repeats section [" + current + "]");
            }
            continue;
        }
        if (current.empty()) {
            if (!text::trim(line).empty()) {
                throw DataError("prompt template " + origin + " has text before the first section");
            }
            continue;
        }
        body.push_back(line);
    }
    flush();
    if (t.version_.empty()) throw DataError("prompt template " + origin + " has no version line");
    if (!t.has_section("user")) throw DataError("prompt template " + origin + " has no [user] section");
    auto slash = t.version_.find('/');
    t.name_ = t.version_.substr(0, slash);
    return t;
}

PromptTemplate PromptTemplate::load(const std::filesystem::path& file) {
    return parse(read_file(file), file.string());
}

const std::string& PromptTemplate::section(const std::string& section) const {
    auto it = sections_.find(section);
    if (it == sections_.end()) {
        throw DataError("prompt template " + version_ + " has no [" + section + "] section");
    }
    return it->second;
}

std::string PromptTemplate::render(const std::string& section_name,
                                   const std::map<std::string, std::string>& values) const {
    const std::string& src = section(section_name);
    std::string out;
    out.reserve(src.size());
    size_t pos = 0;
    while (pos < src.size()) {
        size_t open = src.find("{{", pos);
        if (open == std::string::npos) {
            out.append(src, pos, std::string::npos);
            break;
        }
        size_t close = src.find("}}", open + 2);
        if (close == std::string::npos) throw DataError("unterminated placeholder in template " + version_);
        out.append(src, pos, open - pos);
        std::string key = src.substr(open + 2, close - open - 2);
        auto it = values.find(key);
        if (it == values.end()) {
            throw DataError("template " + version_ + " uses unknown placeholder {{" + key + "}}");
        }
        out += it->second;
        pos = close + 2;
    }
    return out;
}

PromptSet PromptSet::defaults() {
    return PromptSet{
        PromptTemplate::parse(kEntities, "<builtin extract_entities>"),
        PromptTemplate::parse(kTriples, "<builtin extract_triples>"),
        PromptTemplate::parse(kFilter, "<builtin filter_facts>"),
        PromptTemplate::parse(kAnswer, "<builtin answer>"),
    };
}

PromptSet PromptSet::load(const std::filesystem::path& dir) {
    PromptSet set = defaults();
    auto maybe = [&](const char* name, PromptTemplate& slot) {
        auto file = dir / (std::string(name) + ".txt");
        if (std::filesystem::exists(file)) slot = PromptTemplate::load(file);
    };
    maybe("extract_entities", set.extract_entities);
    maybe("extract_triples", set.extract_triples);
    maybe("filter_facts", set.filter_facts);
    maybe("answer", set.answer);
    return set;
}

}  // namespace propex

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


#include "propex/answer/answer.hpp"

#include <algorithm>
#include <regex>
#include <set>

#include "propex/common/log.hpp"
#include "propex/common/text.hpp"

namespace propex {

void validate_answer_template(const PromptTemplate& tmpl) {
    const auto& user = tmpl.section("user");
    std::size_t last = 0;
    for (const char* key : {"{{passages}}", "{{seeds}}", "{{triples}}", "{{directive}}", "{{question}}"}) {
        auto pos = user.find(key);
        if (pos == std::string::npos) {
            throw DataError("answer template " + tmpl.version() + " lacks placeholder " + key);
        }
        if (pos < last) throw DataError("answer template " + tmpl.version() + " has placeholder " + key + " out of order");
        last = pos;
    }
    if (!tmpl.has_section("directive")) throw DataError("answer template " + tmpl.version() + " lacks [directive]");
}

std::string render_prompt_passage(const PromptPassage& p) { return "[" + p.id + "] " + p.title + "\n" + p.text; }

std::string AnswerPrompt::render_user(const PromptTemplate& tmpl) const {
    validate_answer_template(tmpl);
    std::vector<std::string> blocks;
    for (const auto& p : passages) blocks.push_back(render_prompt_passage(p));
    std::vector<std::string> facts;
    for (const auto& t : kept_triples) facts.push_back("- " + t);
    return tmpl.render("user", {{"passages", text::join(blocks, "\n\n")},
                                {"seeds", seeds.empty() ? "(none)" : text::join(seeds, "; ")},
                                {"triples", facts.empty() ? "(none)" : text::join(facts, "\n")},
                                {"directive", directive},
                                {"question", question}});
}

ChatRequest AnswerPrompt::to_request(const PromptTemplate& tmpl) const {
    return ChatRequest{tmpl.has_section("system") ? tmpl.section("system") : "", render_user(tmpl), 0.0, 512,
                       tmpl.version()};
}

AnswerPrompt assemble_answer_prompt(const QueryTrace& trace, const GraphIndex& index, const std::string& question,
                                    const PromptTemplate& tmpl, std::size_t char_budget, std::size_t max_passages) {
    validate_answer_template(tmpl);
    AnswerPrompt prompt;
    prompt.question = question;
    prompt.directive = tmpl.section("directive");
    std::size_t used = 0;
    for (const auto& r : trace.ranked_passages) {
        if (prompt.passages.size() >= max_passages) break;
        auto idx = index.passage_index(r.passage_id);
        if (!idx) throw IndexCorruptionError("trace ranks unknown passage '" + r.passage_id + "'");
        const auto& p = index.passages()[*idx];
        PromptPassage pp{p.id, p.title, p.text};
        auto cost = render_prompt_passage(pp).size() + (prompt.passages.empty() ? 0 : 2);
        if (used + cost > char_budget) break;
        used += cost;
        prompt.passages.push_back(std::move(pp));
    }
    if (prompt.passages.empty()) {
        throw NoEvidenceError("no evidence: no retrieved passage fits the prompt budget for question '" + question + "'");
    }
    for (const auto& s : trace.seeds) {
        auto e = index.entity_index(s);
        prompt.seeds.push_back(e ? index.entities()[*e].canonical_name : s);
    }
    for (const auto& id : trace.kept_triples) {
        auto t = index.triple_index(id);
        if (!t) throw IndexCorruptionError("trace keeps unknown triple '" + id + "'");
        prompt.kept_triples.push_back(index.triples()[*t].rendered());
    }
    return prompt;
}

ParsedAnswer parse_answer(std::string_view completion) {
    ParsedAnswer out;
    std::string answer_line;
    bool found = false;
    for (const auto& raw : text::split_lines(completion)) {
        auto line = text::trim(raw);
        if (text::starts_with_icase(line, "answer:")) {
            answer_line = text::trim(line.substr(7));
            found = true;
        }
    }
    out.answer = found ? answer_line : text::trim(completion);

    // Dataset passage ids may contain spaces ("Some Title#0"), so only brackets
    // and line breaks end an id.
    static const std::regex cite(R"(\[([^\[\]\r\n]+)\])");
    std::set<std::string> seen;
    std::string s(completion);
    for (auto it = std::sregex_iterator(s.begin(), s.end(), cite); it != std::sregex_iterator(); ++it) {
        auto id = text::trim((*it)[1].str());
        if (id.empty()) continue;
        if (seen.insert(id).second) out.citations.push_back(id);
    }
    return out;
}

AnswerRecord generate_answer(const AnswerPrompt& prompt, const PromptTemplate& tmpl, ChatProvider& chat,
                             const std::string& trace_ref) {
    AnswerRecord rec;
    rec.question = prompt.question;
    rec.trace_ref = trace_ref;
    std::string completion;
    try {
        completion = chat_complete(prompt.to_request(tmpl), chat);
    } catch (const EmptyOutputError& e) {
        rec.warnings.push_back(e.what());
        logger()->warn("{}", e.what());
        return rec;
    }
    auto parsed = parse_answer(completion);
    rec.answer_text = parsed.answer;
    std::set<std::string> allowed;
    for (const auto& p : prompt.passages) allowed.insert(p.id);
    for (auto& id : parsed.citations) {
        if (allowed.contains(id)) rec.cited_passage_ids.push_back(std::move(id));
    }
    return rec;
}

}  // namespace propex

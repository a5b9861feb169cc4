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

#include <limits>
#include <string>
#include <string_view>
#include <vector>

#include "propex/common/error.hpp"
#include "propex/common/prompts.hpp"
#include "propex/indexer/graph_index.hpp"
#include "propex/providers/provider.hpp"
#include "propex/retrieval/trace.hpp"

namespace propex {

inline constexpr std::size_t kDefaultCharBudget = 12000;

class NoEvidenceError : public DataError {
public:
    using DataError::DataError;
};

struct PromptPassage {
    std::string id;
    std::string title;
    std::string text;
};

/// Evidence-first answer prompt: passages (rank order), seed entities, kept
/// facts, directive, then the question.
struct AnswerPrompt {
    std::vector<PromptPassage> passages;
    std::vector<std::string> seeds;
    std::vector<std::string> kept_triples;  // rendered "s | p | o"
    std::string directive;
    std::string question;

    std::string render_user(const PromptTemplate& tmpl) const;
    ChatRequest to_request(const PromptTemplate& tmpl) const;
};

/// The answer template must contain {{passages}}, {{seeds}}, {{triples}},
/// {{directive}} and {{question}} in that order and a [directive] section.
void validate_answer_template(const PromptTemplate& tmpl);

/// "[id] title\ntext" for one passage, as it appears in the prompt.
std::string render_prompt_passage(const PromptPassage& p);

/// Builds the prompt from a retrieval trace. Passages are taken in rank order
/// while their rendered size fits `char_budget`; the first that does not fit and
/// everything after it are dropped. Throws NoEvidenceError if none fit.
AnswerPrompt assemble_answer_prompt(const QueryTrace& trace, const GraphIndex& index, const std::string& question,
                                    const PromptTemplate& tmpl, std::size_t char_budget = kDefaultCharBudget,
                                    std::size_t max_passages = std::numeric_limits<std::size_t>::max());

struct AnswerRecord {
    std::string question;
    std::string answer_text;
    std::vector<std::string> cited_passage_ids;
    std::string trace_ref;
    std::vector<std::string> warnings;
};

struct ParsedAnswer {
    std::string answer;
    std::vector<std::string> citations;  // every [id] in the completion, first-seen order
};

/// The last line starting with "Answer:" wins; otherwise the whole trimmed text.
ParsedAnswer parse_answer(std::string_view completion);

/// Temperature-0 generation. Citations are restricted to the prompt's passage
/// ids. An empty completion yields an empty answer with a warning.
AnswerRecord generate_answer(const AnswerPrompt& prompt, const PromptTemplate& tmpl, ChatProvider& chat,
                             const std::string& trace_ref = "");

}  // namespace propex

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


#include <gtest/gtest.h>

#include "propex/answer/answer.hpp"
#include "test_support.hpp"

namespace propex {
namespace {

using testing::mention;

GraphIndex five_passages() {
    return testing::small_graph({"p1", "p2", "p3", "p4", "p5"}, {"a", "b"},
                                {mention("a", "p1"), mention("b", "p2")},
                                {testing::triple("t0", "a", "knows", "b", "p1")});
}

QueryTrace trace_of(std::vector<std::string> ranked) {
    QueryTrace t;
    for (auto& id : ranked) t.ranked_passages.push_back({id, 0.0, 0.0, 0.0});
    t.seeds = {"a", "b"};
    t.kept_triples = {"t0"};
    return t;
}

TEST(AnswerPrompt, BudgetCutsAtFirstPassageThatDoesNotFit) {
    auto g = five_passages();
    auto tmpl = PromptSet::defaults().answer;
    auto trace = trace_of({"p1", "p2", "p3", "p4", "p5"});
    // Each rendered passage is 24 characters; blocks are joined by a blank line.
    EXPECT_EQ(render_prompt_passage({"p1", "Title p1", "text of p1"}).size(), 24u);
    EXPECT_EQ(assemble_answer_prompt(trace, g, "q", tmpl, 128).passages.size(), 5u);
    EXPECT_EQ(assemble_answer_prompt(trace, g, "q", tmpl, 127).passages.size(), 4u);
    auto three = assemble_answer_prompt(trace, g, "q", tmpl, 101);
    ASSERT_EQ(three.passages.size(), 3u);
    EXPECT_EQ(three.passages[2].id, "p3");
    EXPECT_EQ(assemble_answer_prompt(trace, g, "q", tmpl, 1000, 2).passages.size(), 2u);
    EXPECT_THROW(assemble_answer_prompt(trace, g, "q", tmpl, 23), NoEvidenceError);
}

TEST(AnswerPrompt, RenderedPromptMatchesGolden) {
    auto g = five_passages();
    auto tmpl = PromptSet::defaults().answer;
    auto prompt = assemble_answer_prompt(trace_of({"p2", "p1"}), g, "Who does a know?", tmpl);
    auto req = prompt.to_request(tmpl);
    EXPECT_EQ(req.user_text, testing::slurp(testing::kFixtures / "answer" / "prompt_golden.txt"));
    EXPECT_EQ(req.temperature, 0.0);
    EXPECT_EQ(req.template_version, "answer/1");
}

TEST(AnswerPrompt, TemplateMustKeepEvidenceBeforeQuestion) {
    auto bad = PromptTemplate::parse("version: answer/x\n[user]\n{{question}}\n{{passages}}\n{{seeds}}\n{{triples}}\n"
                                     "{{directive}}\n[directive]\nd\n",
                                     "inline");
    EXPECT_THROW(validate_answer_template(bad), DataError);
    auto missing = PromptTemplate::parse("version: answer/y\n[user]\n{{passages}} {{question}}\n", "inline");
    EXPECT_THROW(validate_answer_template(missing), DataError);
}

TEST(ParseAnswer, AnswerLineAndCitations) {
    auto p = parse_answer("Paris is in France [p2].\nAnswer: Paris");
    EXPECT_EQ(p.answer, "Paris");
    EXPECT_EQ(p.citations, (std::vector<std::string>{"p2"}));
}

TEST(ParseAnswer, LastAnswerLineWins) {
    EXPECT_EQ(parse_answer("Answer: Lyon\nanswer: Paris").answer, "Paris");
}

TEST(ParseAnswer, FreeTextFallback) {
    auto p = parse_answer("  It was Paris.  \n");
    EXPECT_EQ(p.answer, "It was Paris.");
    EXPECT_TRUE(p.citations.empty());
}

TEST(ParseAnswer, IdsWithSpacesAndDuplicates) {
    auto p = parse_answer("See [Radio City#0] and [India#0], again [Radio City#0]. [ ]\nAnswer: India");
    EXPECT_EQ(p.citations, (std::vector<std::string>{"Radio City#0", "India#0"}));
}

TEST(GenerateAnswer, CitationsRestrictedToPromptPassages) {
    auto g = five_passages();
    auto tmpl = PromptSet::defaults().answer;
    auto prompt = assemble_answer_prompt(trace_of({"p2", "p1"}), g, "Who does a know?", tmpl);
    testing::ScriptedChat chat;
    chat.replies = {"b is known by a [p1] [p9].\nAnswer: b"};
    auto rec = generate_answer(prompt, tmpl, chat, "trace.json");
    EXPECT_EQ(rec.answer_text, "b");
    EXPECT_EQ(rec.cited_passage_ids, (std::vector<std::string>{"p1"}));
    EXPECT_EQ(rec.trace_ref, "trace.json");
    EXPECT_TRUE(rec.warnings.empty());
}

TEST(GenerateAnswer, EmptyCompletionGivesEmptyAnswerWithWarning) {
    auto g = five_passages();
    auto tmpl = PromptSet::defaults().answer;
    auto prompt = assemble_answer_prompt(trace_of({"p1"}), g, "q", tmpl);
    testing::ScriptedChat chat;
    chat.replies = {"   "};
    auto rec = generate_answer(prompt, tmpl, chat);
    EXPECT_TRUE(rec.answer_text.empty());
    EXPECT_EQ(rec.warnings.size(), 1u);
}

}  // namespace
}  // namespace propex

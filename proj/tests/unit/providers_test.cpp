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

#include <cmath>
#include <cstdlib>
#include <deque>
#include <mutex>

#include <nlohmann/json.hpp>

#include "propex/common/error.hpp"
#include "propex/providers/mock.hpp"
#include "propex/providers/openai.hpp"
#include "test_support.hpp"

namespace propex {
namespace {

TEST(MockEmbedding, DeterministicAndUnitNorm) {
    auto a = mock_embed("Paris is the capital of France", 256, 0);
    auto b = mock_embed("Paris is the capital of France", 256, 0);
    EXPECT_EQ(a, b);
    EXPECT_NEAR(a.norm(), 1.0, 1e-12);
    EXPECT_EQ(a.dim(), 256u);
}

TEST(MockEmbedding, SeedChangesVector) {
    EXPECT_NE(mock_embed("paris france", 64, 0), mock_embed("paris france", 64, 1));
}

TEST(MockEmbedding, IdentityAndOverlapOrdering) {
    auto pf = mock_embed("paris france", 256, 0);
    EXPECT_NEAR(cosine(pf, mock_embed("paris france", 256, 0)), 1.0, 1e-12);
    auto query = mock_embed("paris france capital", 256, 0);
    EXPECT_GT(cosine(query, pf), cosine(query, mock_embed("banana smoothie", 256, 0)));
    EXPECT_LT(cosine(mock_embed("alpha", 256, 0), mock_embed("beta", 256, 0)), 1.0);
}

TEST(MockEmbedding, TextWithoutTokensStillNormalised) {
    auto v = mock_embed("?!", 32, 0);
    EXPECT_NEAR(v.norm(), 1.0, 1e-12);
    EXPECT_THROW(mock_embed("x", 4, 0), UsageError);
}

TEST(EmbedTexts, ArityAndValidation) {
    MockEmbeddingProvider mock(32);
    std::vector<std::string> one = {"a"};
    auto out = embed_texts(one, mock);
    ASSERT_EQ(out.size(), 1u);
    EXPECT_EQ(out[0].dim(), 32u);
    std::vector<std::string> none;
    EXPECT_THROW(embed_texts(none, mock), Error);
    std::vector<std::string> blank = {"ok", "   "};
    EXPECT_THROW(embed_texts(blank, mock), Error);
}

TEST(EmbedTexts, DimensionMismatchIsCorruption) {
    testing::StubEmbedder stub;
    stub.table["x"] = {1.0, 0.0};
    stub.table["y"] = {1.0, 0.0, 0.0};
    std::vector<std::string> texts = {"x", "y"};
    EXPECT_THROW(embed_texts(texts, stub), IndexCorruptionError);
}

TEST(EmbeddingVector, RejectsNonFiniteAndMismatchedCosine) {
    EXPECT_THROW(EmbeddingVector({1.0, std::nan("")}), Error);
    EXPECT_THROW(cosine(EmbeddingVector({1.0, 0.0}), EmbeddingVector({1.0})), IndexCorruptionError);
    EXPECT_EQ(cosine(EmbeddingVector({0.0, 0.0}), EmbeddingVector({1.0, 0.0})), 0.0);
}

TEST(MockChat, DeterministicAndFixtureFirst) {
    MockChatProvider chat;
    ChatRequest req{"sys", "hello there", 0.0, 64, "t/1"};
    EXPECT_EQ(chat.complete(req), chat.complete(req));
    chat.add_fixture("about Radio City", "Radio City; India");
    ChatRequest extraction{"", "Entities in this passage about Radio City", 0.0, 64, "t/1"};
    EXPECT_EQ(chat.complete(extraction), "Radio City; India");
}

TEST(MockChat, FixtureFileParsing) {
    testing::TempDir dir;
    testing::write_file(dir / "f.jsonl", "{\"contains\": \"abc\", \"response\": \"xyz\"}\n\n");
    auto chat = MockChatProvider::from_fixture_file(dir / "f.jsonl");
    EXPECT_EQ(chat.complete({"", "...abc...", 0.0, 8, ""}), "xyz");
    testing::write_file(dir / "bad.jsonl", "{\"contains\": 1}\n");
    EXPECT_THROW(MockChatProvider::from_fixture_file(dir / "bad.jsonl"), DataError);
}

TEST(MockRules, EntitySpotterUsesTitleAndCapitalisedRuns) {
    auto names = mock_rules::spot_entities("Halden Bridge", "The Halden Bridge crosses the Ossa River near Tamsgate.");
    EXPECT_EQ(names, (std::vector<std::string>{"Halden Bridge", "Ossa River", "Tamsgate"}));
}

TEST(MockRules, TriplesLinkAdjacentMentions) {
    auto lines = mock_rules::spot_triples("Ilse Brandt designed the Halden Bridge. Nothing here.",
                                          {"Ilse Brandt", "Halden Bridge"});
    EXPECT_EQ(lines, (std::vector<std::string>{"(Ilse Brandt | designed the | Halden Bridge)"}));
}

TEST(ChatComplete, BlankOutputIsEmptyOutputError) {
    testing::ScriptedChat chat;
    chat.replies = {"  \n"};
    EXPECT_THROW(chat_complete({"", "q", 0.0, 8, ""}, chat), EmptyOutputError);
}

// Fake transport: pops scripted responses, counts attempts.
class FakeTransport : public Transport {
public:
    std::deque<HttpResponse> script;
    bool fail_transport = false;
    int attempts = 0;
    std::vector<std::string> bodies;
    std::vector<HttpHeaders> headers;
    std::mutex mu;

    HttpResponse post(const std::string&, const std::string& body, const HttpHeaders& h,
                      std::chrono::milliseconds) override {
        std::lock_guard lock(mu);
        ++attempts;
        bodies.push_back(body);
        headers.push_back(h);
        if (fail_transport) throw TransportFailure("connection refused");
        if (script.empty()) return {500, "exhausted"};
        auto r = script.front();
        script.pop_front();
        return r;
    }
};

class OpenAiTest : public ::testing::Test {
protected:
    void SetUp() override { ::setenv("PROPEX_TEST_API_KEY", "sk-test", 1); }
    void TearDown() override { ::unsetenv("PROPEX_TEST_API_KEY"); }

    ProviderConfig config(int retries) {
        ProviderConfig c;
        c.api_key_env_var = "PROPEX_TEST_API_KEY";
        c.max_retries = retries;
        c.endpoint_url = "http://localhost:1/v1/";
        return c;
    }
    std::vector<std::chrono::milliseconds> sleeps;
    OpenAiProvider::Sleeper sleeper() {
        return [this](std::chrono::milliseconds d) { sleeps.push_back(d); };
    }
};

std::string chat_body(const std::string& content) {
    return nlohmann::json{{"choices", {{{"message", {{"role", "assistant"}, {"content", content}}}}}}}.dump();
}

TEST_F(OpenAiTest, RetriesServerErrorsThenSucceeds) {
    auto t = std::make_shared<FakeTransport>();
    t->script = {{503, "busy"}, {429, "slow down"}, {200, chat_body("Answer: Paris")}};
    OpenAiProvider p(config(3), t, sleeper());
    EXPECT_EQ(p.complete({"s", "u", 0.0, 16, "x/1"}), "Answer: Paris");
    EXPECT_EQ(t->attempts, 3);
    EXPECT_EQ(sleeps, (std::vector<std::chrono::milliseconds>{std::chrono::milliseconds(500),
                                                               std::chrono::milliseconds(1000)}));
    EXPECT_EQ(t->headers[0][0].second, "Bearer sk-test");
}

TEST_F(OpenAiTest, AttemptsNeverExceedMaxRetriesPlusOne) {
    for (int retries : {0, 1, 3}) {
        auto t = std::make_shared<FakeTransport>();
        t->fail_transport = true;
        OpenAiProvider p(config(retries), t, sleeper());
        try {
            p.complete({"", "u", 0.0, 16, ""});
            FAIL() << "expected a provider error";
        } catch (const ProviderError& e) {
            EXPECT_TRUE(e.retriable());
            EXPECT_EQ(e.attempts(), retries + 1);
        }
        EXPECT_EQ(t->attempts, retries + 1);
    }
}

TEST_F(OpenAiTest, ClientErrorsAreNotRetried) {
    auto t = std::make_shared<FakeTransport>();
    t->script = {{401, "bad key"}};
    OpenAiProvider p(config(3), t, sleeper());
    try {
        p.complete({"", "u", 0.0, 16, ""});
        FAIL();
    } catch (const ProviderError& e) {
        EXPECT_FALSE(e.retriable());
    }
    EXPECT_EQ(t->attempts, 1);
}

TEST_F(OpenAiTest, EmbeddingsReorderedByIndex) {
    auto t = std::make_shared<FakeTransport>();
    nlohmann::json body = {{"data",
                            {{{"index", 1}, {"embedding", {0.0, 1.0}}}, {{"index", 0}, {"embedding", {1.0, 0.0}}}}}};
    t->script = {{200, body.dump()}};
    OpenAiProvider p(config(0), t, sleeper());
    std::vector<std::string> texts = {"first", "second"};
    auto out = p.embed(texts);
    ASSERT_EQ(out.size(), 2u);
    EXPECT_EQ(out[0][0], 1.0);
    EXPECT_EQ(out[1][1], 1.0);
    auto sent = nlohmann::json::parse(t->bodies[0]);
    EXPECT_EQ(sent.at("model"), "text-embedding-3-large");
    EXPECT_EQ(sent.at("input"), nlohmann::json(texts));
}

TEST_F(OpenAiTest, ChatBodyCarriesTemperatureAndModel) {
    auto body = nlohmann::json::parse(OpenAiProvider::chat_request_body(config(0), {"sys", "usr", 0.0, 77, "x/1"}));
    EXPECT_EQ(body.at("model"), "gpt-4.1-mini");
    EXPECT_EQ(body.at("temperature"), 0.0);
    EXPECT_EQ(body.at("max_tokens"), 77);
    EXPECT_EQ(body.at("messages").size(), 2u);
    EXPECT_FALSE(body.dump().find("x/1") != std::string::npos);
}

TEST_F(OpenAiTest, MissingKeyIsProviderError) {
    auto c = config(0);
    c.api_key_env_var = "PROPEX_TEST_UNSET_KEY";
    EXPECT_THROW(OpenAiProvider(c, std::make_shared<FakeTransport>()), ProviderError);
}

TEST_F(OpenAiTest, MalformedResponsesAreProviderErrors) {
    EXPECT_THROW(OpenAiProvider::parse_chat_response("{}"), ProviderError);
    EXPECT_THROW(OpenAiProvider::parse_embed_response(R"({"data": [{"index": 0, "embedding": [1]}]})", 2),
                 ProviderError);
}

}  // namespace
}  // namespace propex

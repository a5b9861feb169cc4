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

#include <sstream>

#include <nlohmann/json.hpp>

#include "cli.hpp"
#include "propex/common/error.hpp"
#include "propex/config/config.hpp"
#include "test_support.hpp"

namespace propex {
namespace {

TEST(Config, FileValuesOverlayDefaults) {
    AppConfig c;
    apply_config_text(c,
                      "provider:\n  chat_model_id: local-chat\n  max_retries: 5\n  timeout_ms: 1500\n"
                      "retrieval:\n  alpha: 0.3\n  k_passages: 7\n"
                      "index:\n  node_score_mode: log\n"
                      "log_level: debug\n",
                      "inline");
    EXPECT_EQ(c.provider.chat_model_id, "local-chat");
    EXPECT_EQ(c.provider.max_retries, 5);
    EXPECT_EQ(c.provider.timeout.count(), 1500);
    EXPECT_EQ(c.retrieval.alpha, 0.3);
    EXPECT_EQ(c.retrieval.k_passages, 7);
    EXPECT_EQ(c.retrieval.k_triples, 5);
    EXPECT_EQ(c.node_score_mode, NodeScoreMode::Log);
    EXPECT_EQ(c.synonymy_threshold, 0.9);
    EXPECT_EQ(c.log_level, "debug");
}

TEST(Config, UnknownKeysAndApiKeysAreRejected) {
    AppConfig c;
    EXPECT_THROW(apply_config_text(c, "retrieval:\n  alhpa: 0.3\n", "inline"), DataError);
    EXPECT_THROW(apply_config_text(c, "colour: blue\n", "inline"), DataError);
    try {
        apply_config_text(c, "provider:\n  api_key: sk-123\n", "inline");
        FAIL();
    } catch (const DataError& e) {
        EXPECT_NE(std::string(e.what()).find("environment"), std::string::npos);
    }
    EXPECT_THROW(apply_config_text(c, "retrieval:\n  k_passages: many\n", "inline"), DataError);
}

struct CliRun {
    int code;
    std::string out;
    std::string err;
};

CliRun cli(std::vector<std::string> args) {
    args.insert(args.begin(), "propex");
    std::ostringstream out, err;
    int code = run_cli(args, out, err);
    return {code, out.str(), err.str()};
}

const std::string kMini = (testing::kFixtures / "mini.jsonl").string();

TEST(Cli, IndexThenRetrieveWithConfigPrecedence) {
    testing::TempDir dir;
    const auto index = (dir / "idx").string();
    auto r = cli({"--mock-providers", "index", "--corpus", kMini, "--out", index});
    ASSERT_EQ(r.code, 0) << r.err;
    auto summary = nlohmann::json::parse(r.out);
    EXPECT_EQ(summary["passages"], 3);

    testing::write_file(dir / "c.yaml", "retrieval:\n  k_passages: 2\n");
    const auto cfg = (dir / "c.yaml").string();
    r = cli({"--mock-providers", "--config", cfg, "retrieve", "--index", index, "--query", "Where is Radio City?"});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(nlohmann::json::parse(r.out)["ranked_passages"].size(), 2u);

    r = cli({"--mock-providers", "--config", cfg, "retrieve", "--index", index, "--query", "Where is Radio City?",
             "--k", "3"});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(nlohmann::json::parse(r.out)["ranked_passages"].size(), 3u);
}

TEST(Cli, MissingRequiredFlagIsUsageError) {
    auto r = cli({"--mock-providers", "index", "--out", "/tmp/never"});
    EXPECT_EQ(r.code, 1);
    EXPECT_FALSE(r.err.empty());
    EXPECT_EQ(cli({"--mock-providers", "retrieve", "--index", "/tmp", "--query", "q", "--alpha", "1.5"}).code, 1);
}

TEST(Cli, CorruptIndexIsDataErrorNamingTheFile) {
    testing::TempDir dir;
    const auto index = (dir / "idx").string();
    ASSERT_EQ(cli({"--mock-providers", "index", "--corpus", kMini, "--out", index}).code, 0);
    auto triples = testing::slurp(dir / "idx" / "triples.jsonl");
    testing::write_file(dir / "idx" / "triples.jsonl", triples + "{}\n");
    auto r = cli({"--mock-providers", "retrieve", "--index", index, "--query", "q"});
    EXPECT_EQ(r.code, 2);
    EXPECT_NE(r.err.find("triples.jsonl"), std::string::npos) << r.err;
}

TEST(Cli, HelpExitsZero) { EXPECT_EQ(cli({"--help"}).code, 0); }

}  // namespace
}  // namespace propex

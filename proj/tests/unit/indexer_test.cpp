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
#include <random>
#include <set>

#include <nlohmann/json.hpp>

#include "propex/common/error.hpp"
#include "propex/eval/dataset.hpp"
#include "propex/indexer/builder.hpp"
#include "propex/indexer/corpus.hpp"
#include "propex/indexer/edges.hpp"
#include "propex/indexer/extract.hpp"
#include "propex/indexer/persist.hpp"
#include "propex/retrieval/retrieve.hpp"
#include "test_support.hpp"

namespace propex {
namespace {

using testing::mention;
using testing::small_graph;

TEST(Corpus, ReadsRecordsInOrder) {
    testing::TempDir dir;
    testing::write_file(dir / "c.jsonl",
                        "{\"id\": \"b\", \"title\": \"B\", \"text\": \"second\"}\n\n"
                        "{\"id\": \"a\", \"title\": \"A\", \"text\": \"first\"}\n");
    auto passages = ingest_corpus(dir / "c.jsonl");
    ASSERT_EQ(passages.size(), 2u);
    EXPECT_EQ(passages[0].id, "b");
    EXPECT_EQ(passages[1].text, "first");
}

TEST(Corpus, ErrorsNameTheLine) {
    testing::TempDir dir;
    testing::write_file(dir / "c.jsonl",
                        "{\"id\": \"a\", \"title\": \"A\", \"text\": \"x\"}\n{\"id\": \"b\", \"title\": \"B\"}\n");
    try {
        ingest_corpus(dir / "c.jsonl");
        FAIL();
    } catch (const DataError& e) {
        EXPECT_NE(std::string(e.what()).find("c.jsonl:2"), std::string::npos) << e.what();
    }
    testing::write_file(dir / "d.jsonl",
                        "{\"id\": \"a\", \"title\": \"A\", \"text\": \"x\"}\n{\"id\": \"a\", \"title\": \"B\", "
                        "\"text\": \"y\"}\n");
    EXPECT_THROW(ingest_corpus(dir / "d.jsonl"), DataError);
    testing::write_file(dir / "e.jsonl", "{not json\n");
    EXPECT_THROW(ingest_corpus(dir / "e.jsonl"), DataError);
}

TEST(Corpus, WriteThenReadRoundTrips) {
    testing::TempDir dir;
    std::vector<Passage> in = {{"p1", "T", "text \"quoted\""}, {"p2", "U", "caf\xC3\xA9"}};
    write_corpus(dir / "c.jsonl", in);
    EXPECT_EQ(ingest_corpus(dir / "c.jsonl"), in);
}

TEST(Dataset, HotpotFixturePassageCountMatchesUniqueTitles) {
    // Hand count over hotpot5.json: Radio City, India, Bangalore, Eiffel Tower,
    // Paris, France, Seine, Nile, Egypt, Cairo -> 10 unique titles, each with a
    // single paragraph text.
    auto ds = load_dataset(testing::kFixtures / "hotpot5.json", DatasetFormat::HotpotQA);
    EXPECT_EQ(ds.passages.size(), 10u);
    EXPECT_EQ(ds.examples.size(), 5u);
    EXPECT_EQ(ds.examples[0].gold_passage_ids, (std::vector<std::string>{"India#0", "Radio City#0"}));
    for (const auto& p : ds.passages) EXPECT_EQ(p.id, p.title + "#0");
}

TEST(Dataset, SameTitleWithDifferentTextGetsNextCounter) {
    testing::TempDir dir;
    testing::write_file(dir / "d.json", R"([
        {"_id": "1", "question": "q", "answer": "a", "supporting_facts": [["Alpha", 0]],
         "context": [["Alpha", ["First text."]]]},
        {"_id": "2", "question": "q2", "answer": "b", "supporting_facts": [["Alpha", 0], ["Ghost", 0]],
         "context": [["Alpha", ["Other text."]], ["Alpha", ["First text."]]]}
    ])");
    auto ds = load_dataset(dir / "d.json", DatasetFormat::HotpotQA);
    ASSERT_EQ(ds.passages.size(), 2u);
    EXPECT_EQ(ds.passages[1].id, "Alpha#1");
    EXPECT_EQ(ds.examples[0].gold_passage_ids, (std::vector<std::string>{"Alpha#0"}));
    EXPECT_FALSE(ds.examples[1].recall_scorable);
    EXPECT_FALSE(ds.warnings.empty());
}

TEST(Dataset, TwoWikiObjectsAndJsonLines) {
    testing::TempDir dir;
    testing::write_file(dir / "w.jsonl",
                        R"({"_id": "w1", "question": "Who?", "answer": "X", "supporting_facts": [["T", 0]], )"
                        R"("context": [["T", ["Sent one.", " Sent two. "]]]})"
                        "\n");
    auto ds = load_dataset(dir / "w.jsonl", DatasetFormat::TwoWiki);
    ASSERT_EQ(ds.passages.size(), 1u);
    EXPECT_EQ(ds.passages[0].text, "Sent one. Sent two.");
    EXPECT_EQ(dataset_format_from_string("2wiki"), DatasetFormat::TwoWiki);
    EXPECT_THROW(dataset_format_from_string("squad"), UsageError);
}

TEST(Dataset, FullBenchmarkFiles) {
    const char* hotpot = std::getenv("PROPEX_HOTPOTQA_FILE");
    const char* wiki = std::getenv("PROPEX_2WIKI_FILE");
    if (!hotpot || !wiki) GTEST_SKIP() << "set PROPEX_HOTPOTQA_FILE and PROPEX_2WIKI_FILE to run";
    auto h = load_dataset(hotpot, DatasetFormat::HotpotQA);
    auto w = load_dataset(wiki, DatasetFormat::TwoWiki);
    EXPECT_EQ(h.examples.size(), 1000u);
    EXPECT_EQ(h.passages.size(), 9811u);
    EXPECT_EQ(w.examples.size(), 1000u);
    EXPECT_EQ(w.passages.size(), 6119u);
}

TEST(ParseEntityList, AcceptedShapes) {
    EXPECT_EQ(*parse_entity_list("Radio City; India"), (std::vector<std::string>{"Radio City", "India"}));
    EXPECT_EQ(*parse_entity_list("Entities: a, b"), (std::vector<std::string>{"a", "b"}));
    EXPECT_EQ(*parse_entity_list("[\"x\", \"y\"]"), (std::vector<std::string>{"x", "y"}));
    EXPECT_EQ(*parse_entity_list("- one\n- two"), (std::vector<std::string>{"one", "two"}));
    EXPECT_TRUE(parse_entity_list("NONE")->empty());
    EXPECT_FALSE(parse_entity_list(std::string(130, 'x')).has_value());
    EXPECT_FALSE(parse_entity_list("a; ???").has_value());
}

TEST(ExtractEntities, FixtureReplyGivesTwoEntities) {
    testing::ScriptedChat chat;
    chat.replies = {"Radio City; India"};
    auto r = extract_entities({"p1", "Radio City", "Radio City is India's first private FM station."}, chat,
                              PromptSet::defaults().extract_entities);
    ASSERT_EQ(r.entities.size(), 2u);
    EXPECT_EQ(r.entities[0], (ExtractedEntity{"Radio City", "radio city"}));
    EXPECT_EQ(r.entities[1].canonical_name, "india");
    EXPECT_NE(chat.requests[0].user_text.find("Radio City is India's"), std::string::npos);
}

TEST(ExtractEntities, DuplicatesCollapseAfterCanonicalisation) {
    testing::ScriptedChat chat;
    chat.replies = {"India, india"};
    auto r = extract_entities({"p1", "t", "x"}, chat, PromptSet::defaults().extract_entities);
    ASSERT_EQ(r.entities.size(), 1u);
    EXPECT_EQ(r.entities[0].surface_form, "India");
}

TEST(ExtractEntities, EmptyListAndUnparseableReply) {
    testing::ScriptedChat chat;
    chat.replies = {"NONE"};
    auto r = extract_entities({"p1", "t", "x"}, chat, PromptSet::defaults().extract_entities);
    EXPECT_TRUE(r.entities.empty());
    EXPECT_TRUE(r.warnings.empty());

    testing::ScriptedChat bad;
    bad.replies = {"???", "", "never used"};
    auto r2 = extract_entities({"p1", "t", "x"}, bad, PromptSet::defaults().extract_entities);
    EXPECT_TRUE(r2.entities.empty());
    EXPECT_EQ(bad.requests.size(), 2u);
    EXPECT_EQ(r2.warnings.size(), 1u);
}

TEST(ExtractTriples, FixtureRoundTripAndUnknownObject) {
    std::vector<ExtractedEntity> ents = {{"Radio City", "radio city"}, {"India", "india"}};
    testing::ScriptedChat chat;
    chat.replies = {"(Radio City | located  in | India)\n(Radio City | orbits | Mars)"};
    auto r = extract_triples({"p1", "t", "x"}, ents, chat, PromptSet::defaults().extract_triples);
    ASSERT_EQ(r.triples.size(), 1u);
    EXPECT_EQ(r.triples[0].id, "p1#t0");
    EXPECT_EQ(r.triples[0].subject, "radio city");
    EXPECT_EQ(r.triples[0].predicate, "located in");
    EXPECT_EQ(r.triples[0].object, "india");
    EXPECT_EQ(r.triples[0].source_passage, "p1");
    EXPECT_EQ(r.warnings.size(), 1u);
}

TEST(ExtractTriples, EmptyEntityListMakesNoCall) {
    testing::ScriptedChat chat;
    auto r = extract_triples({"p1", "t", "x"}, {}, chat, PromptSet::defaults().extract_triples);
    EXPECT_TRUE(r.triples.empty());
    EXPECT_TRUE(chat.requests.empty());
}

TEST(SynonymyEdges, UsaAndUnitedStates) {
    testing::StubEmbedder stub;
    stub.table["usa"] = {1.0, 0.0, 0.0};
    stub.table["united states"] = {0.96, 0.28, 0.0};
    stub.table["banana"] = {0.0, 0.0, 1.0};
    std::vector<EntityNode> ents = {testing::entity("usa"), testing::entity("united states"),
                                    testing::entity("banana")};
    auto edges = build_synonymy_edges(ents, stub, 0.9);
    ASSERT_EQ(edges.size(), 2u);
    EXPECT_EQ(edges[0].kind, EdgeKind::Synonymy);
    EXPECT_EQ(edges[0].weight, edges[1].weight);
    EXPECT_NEAR(edges[0].weight, 0.96, 1e-12);
    EXPECT_EQ(edges[0].src, edges[1].dst);
    EXPECT_EQ(edges[0].dst, edges[1].src);
}

TEST(SynonymyEdges, DegenerateInputs) {
    testing::StubEmbedder stub;
    std::vector<EntityNode> one = {testing::entity("solo")};
    EXPECT_TRUE(build_synonymy_edges(one, stub, 0.9).empty());
    std::vector<EntityNode> twins = {testing::entity("same"), testing::entity("same")};
    EXPECT_TRUE(build_synonymy_edges(twins, stub, 0.5).empty());
    EXPECT_THROW(build_synonymy_edges(one, stub, 1.0), UsageError);
}

TEST(RelatednessEdges, CountsDistinctTriples) {
    using testing::triple;
    auto one = build_relatedness_edges(std::vector<FactTriple>{triple("t0", "a", "r", "b", "p")});
    ASSERT_EQ(one.size(), 2u);
    EXPECT_EQ(one[0].weight, 1.0);
    std::vector<FactTriple> three = {triple("t0", "a", "r1", "b", "p"), triple("t1", "b", "r2", "a", "p"),
                                     triple("t2", "a", "r3", "b", "q"), triple("t3", "a", "self", "a", "q")};
    auto edges = build_relatedness_edges(three);
    ASSERT_EQ(edges.size(), 2u);
    for (const auto& e : edges) {
        EXPECT_EQ(e.kind, EdgeKind::Relatedness);
        EXPECT_EQ(e.weight, 3.0);
    }
}

TEST(NodeScores, InverseAndLogModes) {
    auto g = small_graph({"p1", "p2", "p3", "p4"}, {"a", "b"},
                         {mention("a", "p1"), mention("b", "p1"), mention("b", "p2"), mention("b", "p3"),
                          mention("b", "p4")});
    EXPECT_EQ(g.entities()[0].node_score, 1.0);
    EXPECT_EQ(g.entities()[1].node_score, 0.25);
    std::vector<std::string> ids = {"a", "b"};
    auto log_scores = compute_node_scores(g.incidence(), ids, NodeScoreMode::Log);
    EXPECT_NEAR(log_scores.at("a"), std::log(1.0 + 4.0), 1e-15);
    EXPECT_NEAR(log_scores.at("b"), std::log(2.0), 1e-15);
}

TEST(NodeScores, MatchBruteForceRecount) {
    std::mt19937 rng(7);
    std::vector<std::string> passages = {"p1", "p2", "p3", "p4", "p5", "p6"};
    std::vector<std::string> entities = {"e1", "e2", "e3", "e4", "e5"};
    std::vector<TypedEdge> edges;
    for (const auto& e : entities) {
        edges.push_back(mention(e, passages[rng() % 6]));
        for (const auto& p : passages) {
            if (rng() % 3 == 0) edges.push_back(mention(e, p));
        }
    }
    auto g = small_graph(passages, entities, edges);
    for (const auto& node : g.entities()) {
        std::set<std::string> seen;
        for (const auto& e : edges) {
            if (e.src == node.id) seen.insert(e.dst);
        }
        EXPECT_EQ(node.passage_frequency, static_cast<int>(seen.size()));
        EXPECT_EQ(node.node_score, 1.0 / static_cast<double>(seen.size()));
    }
}

TEST(Assemble, AdjacencyEqualsHandNormalisedMatrix) {
    auto g = small_graph({"p1", "p2"}, {"a", "b"},
                         {{"a", "b", EdgeKind::Synonymy, 0.95}, mention("a", "p1"), mention("a", "p2"),
                          {"b", "a", EdgeKind::Relatedness, 2.0}, mention("b", "p2")});
    // Node order a, b, p1, p2. Column a: 0.95 + 1 + 1 = 2.95; column b: 2 + 1 = 3.
    const double expected[4][4] = {
        {0.0, 2.0 / 3.0, 0.0, 0.0},
        {0.95 / 2.95, 0.0, 0.0, 0.0},
        {1.0 / 2.95, 0.0, 0.0, 0.0},
        {1.0 / 2.95, 1.0 / 3.0, 0.0, 0.0},
    };
    const auto& m = g.adjacency();
    ASSERT_EQ(m.n, 4u);
    for (std::size_t r = 0; r < 4; ++r) {
        for (std::size_t c = 0; c < 4; ++c) EXPECT_NEAR(m.at(r, c), expected[r][c], 1e-12) << r << "," << c;
    }
    EXPECT_TRUE(m.is_dangling(2));
    EXPECT_TRUE(m.is_dangling(3));
    EXPECT_EQ(g.dangling_nodes(), (std::vector<std::size_t>{2, 3}));
}

TEST(Assemble, NonDanglingColumnsSumToOne) {
    auto g = small_graph({"p"}, {"x", "y"},
                         {mention("x", "p"), mention("y", "p"), {"x", "y", EdgeKind::Relatedness, 3.0},
                          {"y", "x", EdgeKind::Synonymy, 0.91}});
    const auto& m = g.adjacency();
    for (std::size_t c = 0; c < m.n; ++c) {
        if (m.is_dangling(c)) continue;
        double s = 0.0;
        for (std::size_t r = 0; r < m.n; ++r) s += m.at(r, c);
        EXPECT_NEAR(s, 1.0, 1e-12);
    }
}

TEST(Assemble, RejectsBrokenReferences) {
    EXPECT_THROW(small_graph({"p"}, {"a"}, {mention("a", "nope")}), IndexCorruptionError);
    EXPECT_THROW(small_graph({"p"}, {"a"}, {mention("a", "p"), {"a", "a", EdgeKind::Synonymy, 0.95}}),
                 IndexCorruptionError);
    EXPECT_THROW(small_graph({"p"}, {"a", "b"}, {mention("a", "p")}), IndexCorruptionError);
}

GraphIndex two_hop_index() {
    auto ds = load_dataset(testing::kFixtures / "two_hop" / "two_hop.json", DatasetFormat::HotpotQA);
    MockChatProvider chat;
    MockEmbeddingProvider embedder;
    return build_index(ds.passages, chat, embedder, PromptSet::defaults(), BuildOptions{});
}

TEST(Builder, BuildsTwoHopCorpus) {
    auto g = two_hop_index();
    EXPECT_EQ(g.passages().size(), 12u);
    EXPECT_GT(g.triples().size(), 10u);
    EXPECT_EQ(g.meta().embed_model_id, "mock-embed-256-s0");
    EXPECT_EQ(g.meta().chat_model_id, "mock-chat");
    EXPECT_EQ(g.meta().fingerprint.size(), 64u);
    // Every triple endpoint is an entity mentioned in its source passage.
    for (const auto& t : g.triples()) {
        auto p = *g.passage_index(t.source_passage);
        EXPECT_TRUE(g.incidence().contains(*g.entity_index(t.subject), p)) << t.id;
        EXPECT_TRUE(g.incidence().contains(*g.entity_index(t.object), p)) << t.id;
    }
}

TEST(Builder, ParallelBuildMatchesSerialBuild) {
    auto ds = load_dataset(testing::kFixtures / "two_hop" / "two_hop.json", DatasetFormat::HotpotQA);
    MockChatProvider chat;
    MockEmbeddingProvider embedder;
    BuildOptions serial, parallel;
    parallel.jobs = 4;
    auto a = build_index(ds.passages, chat, embedder, PromptSet::defaults(), serial);
    auto b = build_index(ds.passages, chat, embedder, PromptSet::defaults(), parallel);
    EXPECT_EQ(a.entities(), b.entities());
    EXPECT_EQ(a.edges(), b.edges());
    EXPECT_EQ(a.triples(), b.triples());
    EXPECT_EQ(a.meta(), b.meta());
}

TEST(Builder, FingerprintTracksInputs) {
    std::vector<Passage> ps = {{"p1", "T", "Alpha met Beta."}};
    BuildOptions o;
    auto prompts = PromptSet::defaults();
    auto base = corpus_fingerprint(ps, o, "m", "e", prompts);
    EXPECT_EQ(base, corpus_fingerprint(ps, o, "m", "e", prompts));
    auto changed = ps;
    changed[0].text += " ";
    EXPECT_NE(base, corpus_fingerprint(changed, o, "m", "e", prompts));
    o.synonymy_threshold = 0.8;
    EXPECT_NE(base, corpus_fingerprint(ps, o, "m", "e", prompts));
}

TEST(Persist, RoundTripKeepsRankings) {
    auto g = two_hop_index();
    testing::TempDir dir;
    persist_index(g, dir.path());
    auto loaded = load_index(dir.path());
    EXPECT_EQ(loaded.entities(), g.entities());
    EXPECT_EQ(loaded.passages(), g.passages());
    EXPECT_EQ(loaded.triples(), g.triples());
    EXPECT_EQ(loaded.edges(), g.edges());
    EXPECT_EQ(loaded.adjacency(), g.adjacency());
    EXPECT_EQ(loaded.incidence(), g.incidence());
    EXPECT_EQ(loaded.passage_embeddings(), g.passage_embeddings());
    EXPECT_EQ(loaded.meta(), g.meta());

    MockChatProvider chat;
    MockEmbeddingProvider embedder;
    auto a = retrieve("Who restored the docks in the town where Marten Solberg spent his last years?", g,
                      {chat, embedder}, PromptSet::defaults(), RetrievalParams{});
    auto b = retrieve("Who restored the docks in the town where Marten Solberg spent his last years?", loaded,
                      {chat, embedder}, PromptSet::defaults(), RetrievalParams{});
    EXPECT_EQ(a.ranked_passages, b.ranked_passages);
}

TEST(Persist, TruncatedEdgeFileIsChecksumError) {
    auto g = two_hop_index();
    testing::TempDir dir;
    persist_index(g, dir.path());
    auto edges = testing::slurp(dir / "edges.jsonl");
    testing::write_file(dir / "edges.jsonl", edges.substr(0, edges.size() / 2));
    try {
        load_index(dir.path());
        FAIL();
    } catch (const ChecksumError& e) {
        EXPECT_NE(e.file().find("edges.jsonl"), std::string::npos);
    }
}

TEST(Persist, NewerFormatVersionIsRejected) {
    auto g = two_hop_index();
    testing::TempDir dir;
    persist_index(g, dir.path());
    auto meta = nlohmann::json::parse(testing::slurp(dir / "meta.json"));
    meta["format_version"] = kIndexFormatVersion + 1;
    testing::write_file(dir / "meta.json", meta.dump());
    try {
        load_index(dir.path());
        FAIL();
    } catch (const VersionError& e) {
        EXPECT_EQ(e.found(), kIndexFormatVersion + 1);
        EXPECT_EQ(e.supported(), kIndexFormatVersion);
    }
}

TEST(Persist, MissingDirectoryAndDigestStability) {
    EXPECT_THROW(load_index("/nonexistent/propex/index"), DataError);
    auto g = two_hop_index();
    testing::TempDir a, b;
    persist_index(g, a.path());
    persist_index(two_hop_index(), b.path());
    EXPECT_EQ(index_digest(a.path()), index_digest(b.path()));
}

}  // namespace
}  // namespace propex

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


#include "cli.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <memory>
#include <optional>
#include <ostream>
#include <thread>

#include "propex/answer/answer.hpp"
#include "propex/common/error.hpp"
#include "propex/common/log.hpp"
#include "propex/common/prompts.hpp"
#include "propex/config/config.hpp"
#include "propex/eval/dataset.hpp"
#include "propex/eval/runner.hpp"
#include "propex/indexer/builder.hpp"
#include "propex/indexer/corpus.hpp"
#include "propex/indexer/persist.hpp"
#include "propex/providers/mock.hpp"
#include "propex/providers/openai.hpp"
#include "propex/retrieval/retrieve.hpp"

namespace propex {

namespace {

struct CommonFlags {
    std::string config_file;
    bool mock = false;
    std::string mock_fixtures;
    std::string templates;
    int jobs = 0;
    std::string log_level;
};

struct RetrievalFlags {
    int k = 0;
    int k_triples = 0;
    double alpha = 0.0;
    double lambda = 0.0;
    CLI::Option* k_opt = nullptr;
    CLI::Option* k_triples_opt = nullptr;
    CLI::Option* alpha_opt = nullptr;
    CLI::Option* lambda_opt = nullptr;

    void add_to(CLI::App* app) {
        k_opt = app->add_option("--k", k, "Number of passages to return")->check(CLI::PositiveNumber);
        k_triples_opt = app->add_option("--k-triples", k_triples, "Candidate triples per query")->check(CLI::PositiveNumber);
        alpha_opt = app->add_option("--alpha", alpha, "PPR restart probability in (0, 1]");
        lambda_opt = app->add_option("--lambda", lambda, "Weight of the overlap bonus");
    }

    void apply(RetrievalParams& p) const {
        if (k_opt->count()) p.k_passages = k;
        if (k_triples_opt->count()) p.k_triples = k_triples;
        if (alpha_opt->count()) p.alpha = alpha;
        if (lambda_opt->count()) p.lambda_rerank = lambda;
    }
};

// Chat/embedding providers selected by --mock-providers or the config.
struct ProviderSet {
    std::unique_ptr<ChatProvider> chat_owner;
    std::unique_ptr<EmbeddingProvider> embed_owner;
    std::shared_ptr<OpenAiProvider> live;
    ChatProvider* chat = nullptr;
    EmbeddingProvider* embed = nullptr;
    bool networked = false;

    Providers view() { return Providers{*chat, *embed}; }
};

ProviderSet make_providers(const CommonFlags& flags, const AppConfig& cfg) {
    ProviderSet set;
    if (flags.mock) {
        if (flags.mock_fixtures.empty()) {
            set.chat_owner = std::make_unique<MockChatProvider>();
        } else {
            set.chat_owner = std::make_unique<MockChatProvider>(MockChatProvider::from_fixture_file(flags.mock_fixtures));
        }
        set.embed_owner = std::make_unique<MockEmbeddingProvider>(cfg.mock_embed_dim, cfg.mock_seed);
        set.chat = set.chat_owner.get();
        set.embed = set.embed_owner.get();
        return set;
    }
    set.live = std::make_shared<OpenAiProvider>(cfg.provider);
    set.embed_owner = std::make_unique<OpenAiEmbeddings>(set.live);
    set.chat = set.live.get();
    set.embed = set.embed_owner.get();
    set.networked = true;
    return set;
}

int worker_count(const CommonFlags& flags, const AppConfig& cfg, bool networked) {
    int jobs = flags.jobs > 0 ? flags.jobs : static_cast<int>(std::max(1U, std::thread::hardware_concurrency()));
    if (networked) jobs = std::min(jobs, std::max(1, cfg.provider.max_concurrency));
    return jobs;
}

std::filesystem::path require_path(const std::string& flag_value, const std::filesystem::path& from_config,
                                   const char* flag) {
    if (!flag_value.empty()) return flag_value;
    if (!from_config.empty()) return from_config;
    throw UsageError(std::string(flag) + " is required (on the command line or in the config file)");
}

void write_trace(const std::filesystem::path& file, const QueryTrace& trace, bool timing) {
    std::ofstream out(file, std::ios::binary | std::ios::trunc);
    if (!out) throw DataError("cannot write trace file '" + file.string() + "'");
    out << to_json(trace, timing).dump() << '\n';
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"propex: graph-guided multi-hop retrieval and QA"};
    app.require_subcommand(1);

    CommonFlags common;
    app.add_option("--config", common.config_file, "YAML config file")->check(CLI::ExistingFile);
    app.add_flag("--mock-providers", common.mock, "Use deterministic offline providers");
    app.add_option("--mock-fixtures", common.mock_fixtures, "JSON-lines canned responses for the mock chat provider")
        ->check(CLI::ExistingFile);
    app.add_option("--templates", common.templates, "Directory of prompt template overrides");
    app.add_option("--jobs", common.jobs, "Worker threads")->check(CLI::NonNegativeNumber);
    app.add_option("--log-level", common.log_level, "trace|debug|info|warn|error|off");
    // Global flags may appear after the subcommand too.
    app.fallthrough();

    auto* index_cmd = app.add_subcommand("index", "Build a graph index from a corpus");
    std::string corpus, out_dir, corpus_format = "jsonl", node_score_mode;
    double syn_threshold = 0.0;
    index_cmd->add_option("--corpus", corpus, "Corpus file")->required()->check(CLI::ExistingFile);
    index_cmd->add_option("--out", out_dir, "Output index directory")->required();
    index_cmd->add_option("--format", corpus_format, "jsonl|hotpotqa|2wiki")
        ->check(CLI::IsMember({"jsonl", "hotpotqa", "2wiki"}));
    auto* syn_opt = index_cmd->add_option("--synonymy-threshold", syn_threshold, "Cosine threshold for synonymy edges");
    auto* score_opt = index_cmd->add_option("--node-score-mode", node_score_mode, "inverse|log")
                          ->check(CLI::IsMember({"inverse", "log"}));

    auto* retrieve_cmd = app.add_subcommand("retrieve", "Rank passages for one query");
    std::string index_dir, query, trace_file;
    bool timing = false;
    RetrievalFlags retrieve_flags;
    retrieve_cmd->add_option("--index", index_dir, "Index directory");
    retrieve_cmd->add_option("--query", query, "Query text")->required();
    retrieve_cmd->add_option("--trace", trace_file, "Write the query trace to this file");
    retrieve_cmd->add_flag("--timing", timing, "Include stage timings in the trace");
    retrieve_flags.add_to(retrieve_cmd);

    auto* answer_cmd = app.add_subcommand("answer", "Retrieve evidence and answer a question");
    std::string question, answer_trace = "propex_answer_trace.json";
    RetrievalFlags answer_flags;
    answer_cmd->add_option("--index", index_dir, "Index directory");
    answer_cmd->add_option("--question", question, "Question text")->required();
    answer_cmd->add_option("--trace", answer_trace, "Where to write the query trace");
    answer_flags.add_to(answer_cmd);

    auto* eval_cmd = app.add_subcommand("eval", "Evaluate on a HotpotQA / 2Wiki file");
    std::string dataset, dataset_format = "hotpotqa", cache_dir, report_file;
    RetrievalFlags eval_flags;
    eval_cmd->add_option("--index", index_dir, "Index directory");
    eval_cmd->add_option("--dataset", dataset, "Dataset file")->required()->check(CLI::ExistingFile);
    eval_cmd->add_option("--format", dataset_format, "hotpotqa|2wiki")->check(CLI::IsMember({"hotpotqa", "2wiki"}));
    eval_cmd->add_option("--cache", cache_dir, "Response cache directory");
    eval_cmd->add_option("--report", report_file, "Report output file")->required();
    eval_flags.add_to(eval_cmd);

    std::vector<std::string> argv_tail(args.begin() + (args.empty() ? 0 : 1), args.end());
    std::reverse(argv_tail.begin(), argv_tail.end());
    try {
        app.parse(argv_tail);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "propex: " << e.what() << "\n\n" << app.help();
        return 1;
    }

    std::string command = app.get_subcommands().front()->get_name();
    std::string stage = "configuration";
    try {
        AppConfig cfg;
        if (!common.config_file.empty()) apply_config_file(cfg, common.config_file);
        if (!common.log_level.empty()) cfg.log_level = common.log_level;
        set_log_level(cfg.log_level);
        if (!common.templates.empty()) cfg.template_dir = common.templates;
        PromptSet prompts = cfg.template_dir.empty() ? PromptSet::defaults() : PromptSet::load(cfg.template_dir);
        validate_answer_template(prompts.answer);

        stage = "provider setup";
        ProviderSet providers = make_providers(common, cfg);
        const int jobs = worker_count(common, cfg, providers.networked);

        if (command == "index") {
            if (syn_opt->count()) cfg.synonymy_threshold = syn_threshold;
            if (score_opt->count()) cfg.node_score_mode = node_score_mode_from_string(node_score_mode);
            stage = "reading corpus " + corpus;
            std::vector<Passage> passages = corpus_format == "jsonl"
                                                ? ingest_corpus(corpus)
                                                : load_dataset(corpus, dataset_format_from_string(corpus_format)).passages;
            BuildOptions options;
            options.synonymy_threshold = cfg.synonymy_threshold;
            options.node_score_mode = cfg.node_score_mode;
            options.jobs = jobs;
            stage = "building index";
            auto index = build_index(std::move(passages), *providers.chat, *providers.embed, prompts, options);
            stage = "writing index " + out_dir;
            persist_index(index, out_dir);
            nlohmann::ordered_json summary = {{"index_dir", out_dir},
                                              {"fingerprint", index.meta().fingerprint},
                                              {"passages", index.passages().size()},
                                              {"entities", index.entities().size()},
                                              {"triples", index.triples().size()},
                                              {"edges", index.edges().size()},
                                              {"extraction_warnings", index.meta().extraction_warnings}};
            out << summary.dump() << '\n';
            return 0;
        }

        // Parameter checks come before the (possibly slow) index load.
        if (command == "retrieve") retrieve_flags.apply(cfg.retrieval);
        if (command == "answer") answer_flags.apply(cfg.retrieval);
        if (command == "eval") eval_flags.apply(cfg.retrieval);
        cfg.retrieval.validate();

        const auto dir = require_path(index_dir, cfg.index_dir, "--index");
        stage = "loading index " + dir.string();
        const GraphIndex index = load_index(dir);

        if (command == "retrieve") {
            stage = "retrieval";
            auto trace = retrieve(query, index, providers.view(), prompts, cfg.retrieval);
            if (!trace_file.empty()) {
                stage = "writing trace " + trace_file;
                write_trace(trace_file, trace, timing);
            }
            nlohmann::ordered_json ranked = nlohmann::ordered_json::array();
            for (const auto& r : trace.ranked_passages) {
                ranked.push_back({{"passage_id", r.passage_id},
                                  {"ppr_score", r.ppr_score},
                                  {"overlap", r.overlap},
                                  {"final_score", r.final_score}});
            }
            out << nlohmann::ordered_json{{"query", query}, {"fallback", trace.fallback}, {"ranked_passages", ranked}}.dump()
                << '\n';
            return 0;
        }

        if (command == "answer") {
            stage = "retrieval";
            auto trace = retrieve(question, index, providers.view(), prompts, cfg.retrieval);
            stage = "writing trace " + answer_trace;
            write_trace(answer_trace, trace, false);
            stage = "answer generation";
            auto prompt = assemble_answer_prompt(trace, index, question, prompts.answer);
            auto record = generate_answer(prompt, prompts.answer, *providers.chat, answer_trace);
            out << "answer: " << record.answer_text << '\n';
            out << "cited:";
            for (const auto& id : record.cited_passage_ids) out << ' ' << id;
            out << '\n' << "trace: " << answer_trace << '\n';
            return 0;
        }

        // eval
        stage = "reading dataset " + dataset;
        auto ds = load_dataset(dataset, dataset_format_from_string(dataset_format));
        EvalOptions options;
        options.jobs = jobs;
        if (!cache_dir.empty()) {
            options.cache_dir = cache_dir;
        } else if (!cfg.cache_dir.empty()) {
            options.cache_dir = cfg.cache_dir;
        }
        stage = "evaluation";
        auto report = run_eval(index, ds.examples, providers.view(), prompts, cfg.retrieval, options);
        stage = "writing report " + report_file;
        write_report(report, report_file);
        nlohmann::ordered_json recall = nlohmann::ordered_json::object();
        for (const auto& [k, v] : report.recall_at) recall[std::to_string(k)] = v;
        out << nlohmann::ordered_json{{"n_queries", report.n_queries},
                                      {"em", report.em},
                                      {"f1", report.f1},
                                      {"recall_at", recall}}
                   .dump()
            << '\n';
        return 0;
    } catch (const Error& e) {
        err << "propex " << command << ": " << stage << ": " << e.what() << '\n';
        if (e.kind() == ErrorKind::Usage) err << '\n' << app.help();
        return exit_code(e);
    } catch (const std::exception& e) {
        err << "propex " << command << ": " << stage << ": internal error: " << e.what() << '\n';
        return static_cast<int>(ErrorKind::Internal);
    }
}

}  // namespace propex

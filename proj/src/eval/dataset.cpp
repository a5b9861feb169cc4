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


#include "propex/eval/dataset.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "propex/common/error.hpp"
#include "propex/common/log.hpp"
#include "propex/common/text.hpp"

namespace propex {

namespace {

using json = nlohmann::json;

std::vector<json> read_records(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open dataset file '" + path.string() + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    const std::string body = ss.str();
    auto first = body.find_first_not_of(" \t\r\n");
    if (first == std::string::npos) throw DataError("dataset file '" + path.string() + "' is empty");
    std::vector<json> out;
    if (body[first] == '[') {
        try {
            for (auto& r : json::parse(body)) out.push_back(std::move(r));
        } catch (const json::exception& e) {
            throw DataError(path.string() + ": malformed dataset: " + e.what());
        }
        return out;
    }
    int line_no = 0;
    for (const auto& line : text::split_lines(body)) {
        ++line_no;
        if (text::trim(line).empty()) continue;
        try {
            out.push_back(json::parse(line));
        } catch (const json::exception& e) {
            throw DataError(path.string() + ":" + std::to_string(line_no) + ": malformed record: " + e.what());
        }
    }
    return out;
}

std::string paragraph_text(const json& sentences) {
    if (sentences.is_string()) return text::collapse_whitespace(sentences.get<std::string>());
    std::vector<std::string> parts;
    for (const auto& s : sentences) {
        auto t = text::trim(s.get<std::string>());
        if (!t.empty()) parts.push_back(t);
    }
    return text::join(parts, " ");
}

}  // namespace

DatasetFormat dataset_format_from_string(std::string_view s) {
    if (s == "hotpotqa") return DatasetFormat::HotpotQA;
    if (s == "2wiki") return DatasetFormat::TwoWiki;
    throw UsageError("unknown dataset format '" + std::string(s) + "' (expected hotpotqa or 2wiki)");
}

Dataset load_dataset(const std::filesystem::path& path, DatasetFormat format) {
    Dataset ds;
    // title -> list of distinct paragraph texts; index in list gives the #n suffix.
    std::map<std::string, std::vector<std::string>> seen_texts;
    std::set<std::string> question_ids;
    const char* label = format == DatasetFormat::HotpotQA ? "HotpotQA" : "2WikiMultihopQA";
    auto records = read_records(path);
    for (std::size_t r = 0; r < records.size(); ++r) {
        const auto& rec = records[r];
        const std::string where = path.string() + " (" + label + ") record " + std::to_string(r);
        try {
            QAExample ex;
            if (rec.contains("_id")) {
                ex.question_id = rec.at("_id").get<std::string>();
            } else {
                ex.question_id = rec.at("id").get<std::string>();
            }
            ex.question = rec.at("question").get<std::string>();
            ex.gold_answer = rec.at("answer").get<std::string>();
            if (!question_ids.insert(ex.question_id).second) {
                throw DataError(where + ": duplicate question id '" + ex.question_id + "'");
            }

            std::map<std::string, std::string> title_to_id;
            for (const auto& para : rec.at("context")) {
                std::string title;
                json sentences;
                if (para.is_array()) {
                    title = para.at(0).get<std::string>();
                    sentences = para.at(1);
                } else {
                    title = para.at("title").get<std::string>();
                    sentences = para.contains("sentences") ? para.at("sentences") : para.at("text");
                }
                std::string body = paragraph_text(sentences);
                if (body.empty()) continue;
                auto& texts = seen_texts[title];
                auto it = std::find(texts.begin(), texts.end(), body);
                std::size_t n = static_cast<std::size_t>(it - texts.begin());
                std::string id = title + "#" + std::to_string(n);
                if (it == texts.end()) {
                    texts.push_back(body);
                    ds.passages.push_back({id, title, body});
                }
                title_to_id.emplace(title, id);
            }

            std::set<std::string> gold;
            for (const auto& sf : rec.at("supporting_facts")) {
                std::string title = sf.is_array() ? sf.at(0).get<std::string>() : sf.at("title").get<std::string>();
                auto it = title_to_id.find(title);
                if (it == title_to_id.end()) {
                    ex.recall_scorable = false;
                    ds.warnings.push_back("question '" + ex.question_id + "': supporting title '" + title +
                                          "' is not in its context");
                    logger()->warn("{}", ds.warnings.back());
                    continue;
                }
                gold.insert(it->second);
            }
            ex.gold_passage_ids.assign(gold.begin(), gold.end());
            if (ex.gold_passage_ids.empty()) ex.recall_scorable = false;
            ds.examples.push_back(std::move(ex));
        } catch (const json::exception& e) {
            throw DataError(where + ": " + e.what());
        }
    }
    return ds;
}

}  // namespace propex

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


#include "propex/indexer/corpus.hpp"

#include <nlohmann/json.hpp>

#include <fstream>
#include <set>

#include "propex/common/error.hpp"
#include "propex/common/text.hpp"

namespace propex {

std::vector<Passage> ingest_corpus(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open corpus file '" + path.string() + "'");
    std::vector<Passage> out;
    std::set<std::string> ids;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (text::trim(line).empty()) continue;
        const std::string where = path.string() + ":" + std::to_string(line_no);
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(line);
        } catch (const nlohmann::json::exception& e) {
            throw DataError(where + ": malformed record: " + e.what());
        }
        Passage p;
        for (auto [field, slot] : {std::pair{"id", &p.id}, std::pair{"title", &p.title}, std::pair{"text", &p.text}}) {
            if (!j.is_object() || !j.contains(field) || !j[field].is_string()) {
                throw DataError(where + ": record is missing string field '" + field + "'");
            }
            *slot = j[field].get<std::string>();
        }
        if (p.id.empty()) throw DataError(where + ": empty passage id");
        if (text::trim(p.text).empty()) throw DataError(where + ": passage '" + p.id + "' has empty text");
        if (!ids.insert(p.id).second) throw DataError(where + ": duplicate passage id '" + p.id + "'");
        out.push_back(std::move(p));
    }
    return out;
}

void write_corpus(const std::filesystem::path& path, const std::vector<Passage>& passages) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write corpus file '" + path.string() + "'");
    for (const auto& p : passages) {
        nlohmann::ordered_json j = {{"id", p.id}, {"title", p.title}, {"text", p.text}};
        out << j.dump() << '\n';
    }
}

}  // namespace propex

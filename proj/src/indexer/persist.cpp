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


#include "propex/indexer/persist.hpp"

#include <nlohmann/json.hpp>

#include <bit>
#include <cstring>
#include <fstream>
#include <sstream>

#include "propex/common/digest.hpp"
#include "propex/common/error.hpp"
#include "propex/common/text.hpp"

namespace propex {

static_assert(std::endian::native == std::endian::little, "index binaries are little-endian");

namespace {

namespace fs = std::filesystem;
using ojson = nlohmann::ordered_json;

constexpr const char* kMeta = "meta.json";
constexpr const char* kEntities = "entities.jsonl";
constexpr const char* kPassages = "passages.jsonl";
constexpr const char* kTriples = "triples.jsonl";
constexpr const char* kEdges = "edges.jsonl";
constexpr const char* kAdjacency = "adjacency.bin";
constexpr const char* kIncidence = "incidence.bin";
constexpr const char* kTripleEmb = "triple_embeddings.bin";
constexpr const char* kPassageEmb = "passage_embeddings.bin";

constexpr std::array kDataFiles = {kEntities, kPassages, kTriples, kEdges, kAdjacency, kIncidence, kTripleEmb, kPassageEmb};

class ByteWriter {
public:
    void raw(const void* p, std::size_t n) { buf_.append(static_cast<const char*>(p), n); }
    void magic(std::string_view m) { raw(m.data(), m.size()); }
    void u64(std::uint64_t v) { raw(&v, sizeof v); }
    template <typename T>
    void array(const std::vector<T>& v) {
        if (!v.empty()) raw(v.data(), v.size() * sizeof(T));
    }
    const std::string& bytes() const { return buf_; }

private:
    std::string buf_;
};

class ByteReader {
public:
    ByteReader(std::string bytes, std::string file) : buf_(std::move(bytes)), file_(std::move(file)) {}

    void expect_magic(std::string_view m) {
        need(m.size());
        if (buf_.compare(pos_, m.size(), m) != 0) throw IndexCorruptionError(file_ + ": bad magic");
        pos_ += m.size();
    }
    std::uint64_t u64() {
        std::uint64_t v;
        need(sizeof v);
        std::memcpy(&v, buf_.data() + pos_, sizeof v);
        pos_ += sizeof v;
        return v;
    }
    template <typename T>
    std::vector<T> array(std::uint64_t count) {
        if (count > (buf_.size() - pos_) / sizeof(T)) throw IndexCorruptionError(file_ + ": truncated array");
        std::vector<T> v(count);
        if (count) std::memcpy(v.data(), buf_.data() + pos_, count * sizeof(T));
        pos_ += count * sizeof(T);
        return v;
    }
    void expect_end() const {
        if (pos_ != buf_.size()) throw IndexCorruptionError(file_ + ": trailing bytes");
    }

private:
    void need(std::size_t n) const {
        if (buf_.size() - pos_ < n) throw IndexCorruptionError(file_ + ": truncated");
    }
    std::string buf_;
    std::string file_;
    std::size_t pos_ = 0;
};

std::string read_bytes(const fs::path& file) {
    std::ifstream in(file, std::ios::binary);
    if (!in) throw IndexCorruptionError("index file '" + file.string() + "' is missing or unreadable");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_bytes(const fs::path& file, const std::string& bytes) {
    std::ofstream out(file, std::ios::binary | std::ios::trunc);
    if (!out) throw DataError("cannot write index file '" + file.string() + "'");
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw DataError("failed writing index file '" + file.string() + "'");
}

std::string jsonl(const std::vector<ojson>& rows) {
    std::string out;
    for (const auto& r : rows) {
        out += r.dump();
        out += '\n';
    }
    return out;
}

std::string embeddings_bin(const std::vector<const EmbeddingVector*>& vecs, std::size_t dim) {
    ByteWriter w;
    w.magic("PXEMB001");
    w.u64(vecs.size());
    w.u64(dim);
    for (const auto* v : vecs) {
        if (v->dim() != dim) throw IndexCorruptionError("embedding dimension mismatch while persisting");
        w.raw(v->values().data(), dim * sizeof(double));
    }
    return w.bytes();
}

std::vector<EmbeddingVector> parse_embeddings(std::string bytes, const std::string& file) {
    ByteReader r(std::move(bytes), file);
    r.expect_magic("PXEMB001");
    auto count = r.u64();
    auto dim = r.u64();
    if (dim == 0 && count > 0) throw IndexCorruptionError(file + ": zero embedding dimension");
    std::vector<EmbeddingVector> out;
    out.reserve(count);
    for (std::uint64_t i = 0; i < count; ++i) out.emplace_back(r.array<double>(dim));
    r.expect_end();
    return out;
}

std::vector<nlohmann::json> parse_jsonl(const std::string& bytes, const std::string& file) {
    std::vector<nlohmann::json> rows;
    int line_no = 0;
    for (const auto& line : text::split_lines(bytes)) {
        ++line_no;
        if (line.empty()) continue;
        try {
            rows.push_back(nlohmann::json::parse(line));
        } catch (const nlohmann::json::exception& e) {
            throw IndexCorruptionError(file + ":" + std::to_string(line_no) + ": " + e.what());
        }
    }
    return rows;
}

ojson meta_json(const IndexMeta& m) {
    return ojson{
        {"fingerprint", m.fingerprint},
        {"embed_model_id", m.embed_model_id},
        {"embed_dim", m.embed_dim},
        {"chat_model_id", m.chat_model_id},
        {"synonymy_threshold", m.synonymy_threshold},
        {"node_score_mode", to_string(m.node_score_mode)},
        {"template_versions", m.template_versions},
        {"extraction_warnings", m.extraction_warnings},
    };
}

}  // namespace

void persist_index(const GraphIndex& index, const fs::path& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw DataError("cannot create index directory '" + dir.string() + "': " + ec.message());

    std::map<std::string, std::string> files;

    std::vector<ojson> rows;
    for (const auto& e : index.entities()) {
        rows.push_back({{"id", e.id},
                        {"canonical_name", e.canonical_name},
                        {"surface_forms", e.surface_forms},
                        {"passage_frequency", e.passage_frequency},
                        {"node_score", e.node_score}});
    }
    files[kEntities] = jsonl(rows);
    rows.clear();
    for (const auto& p : index.passages()) rows.push_back({{"id", p.id}, {"title", p.title}, {"text", p.text}});
    files[kPassages] = jsonl(rows);
    rows.clear();
    for (const auto& t : index.triples()) {
        rows.push_back({{"id", t.id},
                        {"subject", t.subject},
                        {"predicate", t.predicate},
                        {"object", t.object},
                        {"source_passage", t.source_passage}});
    }
    files[kTriples] = jsonl(rows);
    rows.clear();
    for (const auto& e : index.edges()) {
        rows.push_back({{"src", e.src}, {"dst", e.dst}, {"kind", to_string(e.kind)}, {"weight", e.weight}});
    }
    files[kEdges] = jsonl(rows);

    const auto& a = index.adjacency();
    ByteWriter adj;
    adj.magic("PXCSC001");
    adj.u64(a.n);
    adj.u64(a.nnz());
    adj.array(a.col_ptr);
    adj.array(a.row_idx);
    adj.array(a.values);
    files[kAdjacency] = adj.bytes();

    const auto& inc = index.incidence();
    ByteWriter iw;
    iw.magic("PXINC001");
    iw.u64(inc.rows);
    iw.u64(inc.cols);
    iw.u64(inc.col_idx.size());
    iw.array(inc.row_ptr);
    iw.array(inc.col_idx);
    files[kIncidence] = iw.bytes();

    const std::size_t dim = index.meta().embed_dim;
    std::vector<const EmbeddingVector*> tv;
    for (const auto& t : index.triples()) tv.push_back(&t.embedding);
    files[kTripleEmb] = embeddings_bin(tv, dim);
    std::vector<const EmbeddingVector*> pv;
    for (const auto& v : index.passage_embeddings()) pv.push_back(&v);
    files[kPassageEmb] = embeddings_bin(pv, dim);

    ojson meta = {{"format_version", kIndexFormatVersion}};
    meta.update(meta_json(index.meta()));
    meta["counts"] = {{"entities", index.entities().size()},
                      {"passages", index.passages().size()},
                      {"triples", index.triples().size()},
                      {"edges", index.edges().size()}};
    ojson checksums = ojson::object();
    for (const auto* name : kDataFiles) {
        write_bytes(dir / name, files.at(name));
        checksums[name] = sha256_hex(files.at(name));
    }
    meta["files"] = checksums;
    write_bytes(dir / kMeta, meta.dump(2) + "\n");
}

GraphIndex load_index(const fs::path& dir) {
    if (!fs::is_directory(dir)) throw DataError("index directory '" + dir.string() + "' does not exist");
    nlohmann::json meta;
    try {
        meta = nlohmann::json::parse(read_bytes(dir / kMeta));
    } catch (const nlohmann::json::exception& e) {
        throw IndexCorruptionError((dir / kMeta).string() + ": " + e.what());
    }
    try {
        int version = meta.at("format_version").get<int>();
        if (version != kIndexFormatVersion) throw VersionError(version, kIndexFormatVersion);

        std::map<std::string, std::string> bytes;
        for (const auto* name : kDataFiles) {
            auto data = read_bytes(dir / name);
            if (sha256_hex(data) != meta.at("files").at(name).get<std::string>()) {
                throw ChecksumError((dir / name).string());
            }
            bytes[name] = std::move(data);
        }

        GraphIndex::Parts parts;
        auto& m = parts.meta;
        m.format_version = version;
        m.fingerprint = meta.at("fingerprint").get<std::string>();
        m.embed_model_id = meta.at("embed_model_id").get<std::string>();
        m.embed_dim = meta.at("embed_dim").get<std::size_t>();
        m.chat_model_id = meta.at("chat_model_id").get<std::string>();
        m.synonymy_threshold = meta.at("synonymy_threshold").get<double>();
        m.node_score_mode = node_score_mode_from_string(meta.at("node_score_mode").get<std::string>());
        m.template_versions = meta.at("template_versions").get<std::map<std::string, std::string>>();
        m.extraction_warnings = meta.at("extraction_warnings").get<std::size_t>();

        for (const auto& j : parse_jsonl(bytes[kEntities], kEntities)) {
            parts.entities.push_back({j.at("id").get<std::string>(), j.at("canonical_name").get<std::string>(),
                                      j.at("surface_forms").get<std::vector<std::string>>(),
                                      j.at("passage_frequency").get<int>(), j.at("node_score").get<double>()});
        }
        for (const auto& j : parse_jsonl(bytes[kPassages], kPassages)) {
            parts.passages.push_back(
                {j.at("id").get<std::string>(), j.at("title").get<std::string>(), j.at("text").get<std::string>()});
        }
        auto triple_embs = parse_embeddings(std::move(bytes[kTripleEmb]), kTripleEmb);
        auto triple_rows = parse_jsonl(bytes[kTriples], kTriples);
        if (triple_rows.size() != triple_embs.size()) {
            throw IndexCorruptionError(std::string(kTripleEmb) + ": embedding count does not match triples");
        }
        for (std::size_t i = 0; i < triple_rows.size(); ++i) {
            const auto& j = triple_rows[i];
            parts.triples.push_back({j.at("id").get<std::string>(), j.at("subject").get<std::string>(),
                                     j.at("predicate").get<std::string>(), j.at("object").get<std::string>(),
                                     j.at("source_passage").get<std::string>(), std::move(triple_embs[i])});
        }
        for (const auto& j : parse_jsonl(bytes[kEdges], kEdges)) {
            parts.edges.push_back({j.at("src").get<std::string>(), j.at("dst").get<std::string>(),
                                   edge_kind_from_string(j.at("kind").get<std::string>()),
                                   j.at("weight").get<double>()});
        }

        ByteReader ar(std::move(bytes[kAdjacency]), kAdjacency);
        ar.expect_magic("PXCSC001");
        parts.adjacency.n = ar.u64();
        auto nnz = ar.u64();
        parts.adjacency.col_ptr = ar.array<std::uint64_t>(parts.adjacency.n + 1);
        parts.adjacency.row_idx = ar.array<std::uint32_t>(nnz);
        parts.adjacency.values = ar.array<double>(nnz);
        ar.expect_end();

        ByteReader ir(std::move(bytes[kIncidence]), kIncidence);
        ir.expect_magic("PXINC001");
        parts.incidence.rows = ir.u64();
        parts.incidence.cols = ir.u64();
        auto inz = ir.u64();
        parts.incidence.row_ptr = ir.array<std::uint64_t>(parts.incidence.rows + 1);
        parts.incidence.col_idx = ir.array<std::uint32_t>(inz);
        ir.expect_end();

        parts.passage_embeddings = parse_embeddings(std::move(bytes[kPassageEmb]), kPassageEmb);
        return GraphIndex(std::move(parts));
    } catch (const nlohmann::json::exception& e) {
        throw IndexCorruptionError(dir.string() + ": malformed index record: " + e.what());
    }
}

std::string index_digest(const fs::path& dir) {
    Sha256 h;
    for (const auto* name : kDataFiles) {
        h.update_field(name);
        h.update_field(sha256_hex(read_bytes(dir / name)));
    }
    return h.hex_digest();
}

}  // namespace propex

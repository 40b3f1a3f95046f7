#include "skillgraph/vector_index.hpp"

#include <algorithm>
#include <fstream>
#include <stdexcept>

#include "skillgraph/binio.hpp"

namespace skillgraph::dense {

namespace {

constexpr std::uint32_t kVecMagic = 0x43564753;  // "SGVC"
constexpr std::uint32_t kVecVersion = 1;

std::string primary_tag(std::string_view language) {
    std::string out;
    for (char c : language) {
        if (c == '-' || c == '_') break;
        out.push_back(c >= 'A' && c <= 'Z' ? static_cast<char>(c + 0x20) : c);
    }
    return out;
}

}  // namespace

ComposedText compose_text(const kg::SkillNode& node, std::string_view language) {
    ComposedText out;
    std::string lang = primary_tag(language);
    if (!node.has_text_in(lang)) {
        out.language_fallback = true;
        if (node.has_text_in("en")) {
            lang = "en";
        } else {
            lang.clear();
            for (const auto& [tag, label] : node.labels) {
                if (!label.empty()) {
                    lang = tag;
                    break;
                }
            }
            if (lang.empty()) {
                for (const auto& [tag, desc] : node.descriptions) {
                    if (!desc.empty()) {
                        lang = tag;
                        break;
                    }
                }
            }
            if (lang.empty()) {
                throw std::invalid_argument("node has no text in any language: " + node.id);
            }
        }
    }
    out.language_used = lang;

    std::string label;
    if (auto it = node.labels.find(lang); it != node.labels.end()) label = it->second;
    std::string alts;
    if (auto it = node.alt_labels.find(lang); it != node.alt_labels.end()) {
        for (const auto& alt : it->second) {
            if (!alts.empty()) alts += "; ";
            alts += alt;
        }
    }
    std::string desc;
    if (auto it = node.descriptions.find(lang); it != node.descriptions.end()) desc = it->second;

    out.text = label + "\n" + alts + "\n" + desc;
    return out;
}

void VectorIndex::build(const kg::SkillGraph& graph, Embedder& embedder,
                        const std::vector<std::string>& languages) {
    by_language_.clear();
    for (const auto& language : languages) {
        const std::string lang = primary_tag(language);
        LangIndex li;
        std::vector<std::string> texts;
        for (const auto& [id, node] : graph.nodes()) {
            if (!node.has_text_in(lang)) continue;
            li.node_ids.push_back(id);
            texts.push_back(compose_text(node, lang).text);
        }
        li.hnsw = std::make_unique<HnswIndex>(kEmbeddingDim, params);
        if (!texts.empty()) {
            // Batch in chunks to keep external embedders within request limits.
            constexpr std::size_t kBatch = 256;
            for (std::size_t start = 0; start < texts.size(); start += kBatch) {
                const std::size_t end = std::min(start + kBatch, texts.size());
                std::vector<std::string> chunk(texts.begin() + start, texts.begin() + end);
                auto vectors = embedder.embed(chunk, lang);
                if (vectors.size() != chunk.size()) {
                    throw RemoteServiceError("embedder returned wrong batch size");
                }
                for (std::size_t i = 0; i < vectors.size(); ++i) {
                    if (vectors[i].size() != kEmbeddingDim) {
                        throw RemoteServiceError("embedder returned wrong dimension");
                    }
                    li.hnsw->add(vectors[i]);
                    li.text_hashes.push_back(fnv1a64(chunk[i]));
                }
            }
        }
        by_language_.emplace(lang, std::move(li));
    }
}

SemanticSearchResult VectorIndex::search(const std::vector<float>& query_vector,
                                         std::string_view language, std::size_t k,
                                         std::size_t ef_search) const {
    if (query_vector.size() != kEmbeddingDim) {
        throw std::invalid_argument("query vector dimension mismatch");
    }
    if (k < 1) {
        throw std::invalid_argument("semantic search k must be >= 1");
    }
    SemanticSearchResult result;
    auto it = by_language_.find(primary_tag(language));
    if (it == by_language_.end() || it->second.node_ids.empty()) {
        result.language_missing = true;
        return result;
    }
    const auto& li = it->second;
    auto hits = li.hnsw->search(query_vector.data(), k, ef_search);
    result.scores.reserve(hits.size());
    for (const auto& h : hits) {
        result.scores.push_back({li.node_ids[h.item], h.similarity});
    }
    std::sort(result.scores.begin(), result.scores.end(),
              [](const SemanticScore& a, const SemanticScore& b) {
                  if (a.s_sem != b.s_sem) return a.s_sem > b.s_sem;
                  return a.node_id < b.node_id;
              });
    return result;
}

const float* VectorIndex::embedding_for(std::string_view node_id,
                                        std::string_view language) const {
    auto lookup = [&](const LangIndex& li) -> const float* {
        auto it = std::lower_bound(li.node_ids.begin(), li.node_ids.end(), node_id);
        if (it == li.node_ids.end() || *it != node_id) return nullptr;
        const auto item = static_cast<std::uint32_t>(it - li.node_ids.begin());
        return li.hnsw->vector_of(item);
    };
    if (auto it = by_language_.find(primary_tag(language)); it != by_language_.end()) {
        if (const float* v = lookup(it->second)) return v;
    }
    for (const auto& [lang, li] : by_language_) {
        if (const float* v = lookup(li)) return v;
    }
    return nullptr;
}

std::size_t VectorIndex::size(std::string_view language) const {
    auto it = by_language_.find(primary_tag(language));
    return it == by_language_.end() ? 0 : it->second.node_ids.size();
}

std::vector<std::string> VectorIndex::languages() const {
    std::vector<std::string> out;
    for (const auto& [lang, li] : by_language_) {
        out.push_back(lang);
    }
    return out;
}

const HnswIndex* VectorIndex::hnsw(std::string_view language) const {
    auto it = by_language_.find(primary_tag(language));
    return it == by_language_.end() ? nullptr : it->second.hnsw.get();
}

const std::vector<std::string>* VectorIndex::ids(std::string_view language) const {
    auto it = by_language_.find(primary_tag(language));
    return it == by_language_.end() ? nullptr : &it->second.node_ids;
}

std::uint64_t VectorIndex::text_hash_of(std::string_view language, std::size_t item) const {
    return by_language_.at(primary_tag(language)).text_hashes.at(item);
}

void VectorIndex::save(std::ostream& out) const {
    util::write_u32(out, kVecMagic);
    util::write_u32(out, kVecVersion);
    util::write_u32(out, static_cast<std::uint32_t>(by_language_.size()));
    for (const auto& [lang, li] : by_language_) {
        util::write_string(out, lang);
        util::write_u32(out, static_cast<std::uint32_t>(li.node_ids.size()));
        for (const auto& id : li.node_ids) {
            util::write_string(out, id);
        }
        for (std::uint64_t h : li.text_hashes) {
            util::write_u64(out, h);
        }
        li.hnsw->save(out);
    }
}

VectorIndex VectorIndex::load(std::istream& in) {
    if (util::read_u32(in) != kVecMagic || util::read_u32(in) != kVecVersion) {
        throw IoError("not a vector index file");
    }
    VectorIndex index;
    const auto n_langs = util::read_u32(in);
    for (std::uint32_t l = 0; l < n_langs; ++l) {
        std::string lang = util::read_string(in);
        LangIndex li;
        const auto n = util::read_u32(in);
        li.node_ids.reserve(n);
        for (std::uint32_t i = 0; i < n; ++i) {
            li.node_ids.push_back(util::read_string(in));
        }
        li.text_hashes.reserve(n);
        for (std::uint32_t i = 0; i < n; ++i) {
            li.text_hashes.push_back(util::read_u64(in));
        }
        li.hnsw = std::make_unique<HnswIndex>(HnswIndex::load(in));
        index.params = li.hnsw->params();
        index.by_language_.emplace(std::move(lang), std::move(li));
    }
    return index;
}

void VectorIndex::save_file(const std::string& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write vector index: " + path);
    save(out);
    if (!out) throw IoError("failed writing vector index: " + path);
}

VectorIndex VectorIndex::load_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot read vector index: " + path);
    return load(in);
}

}  // namespace skillgraph::dense

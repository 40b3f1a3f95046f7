#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "skillgraph/embedder.hpp"
#include "skillgraph/hnsw.hpp"
#include "skillgraph/skill_graph.hpp"

namespace skillgraph::dense {

struct SemanticScore {
    std::string node_id;
    double s_sem = 0.0;  // cosine similarity in [-1, 1]
};

struct ComposedText {
    std::string text;
    std::string language_used;
    bool language_fallback = false;
};

// Label, newline, alt-labels joined by "; ", newline, description. Falls back
// to en, then the first language with any text, when the requested language
// has none. Throws std::invalid_argument for a node with no text at all.
ComposedText compose_text(const kg::SkillNode& node, std::string_view language);

struct SemanticSearchResult {
    std::vector<SemanticScore> scores;  // descending s_sem, ties by node_id
    bool language_missing = false;      // no sub-index for the requested language
};

// One HNSW per language over composed node texts. Node ids are kept in
// ascending order so builds are reproducible for a given seed.
class VectorIndex {
public:
    HnswParams params;

    void build(const kg::SkillGraph& graph, Embedder& embedder,
               const std::vector<std::string>& languages);

    SemanticSearchResult search(const std::vector<float>& query_vector,
                                std::string_view language, std::size_t k,
                                std::size_t ef_search) const;

    // Stored embedding for a node, preferring the requested language and
    // falling back to any language that has one. Null if the node was never
    // embedded.
    const float* embedding_for(std::string_view node_id, std::string_view language) const;

    std::size_t size(std::string_view language) const;
    std::vector<std::string> languages() const;
    const HnswIndex* hnsw(std::string_view language) const;
    const std::vector<std::string>* ids(std::string_view language) const;
    std::uint64_t text_hash_of(std::string_view language, std::size_t item) const;

    void save(std::ostream& out) const;
    static VectorIndex load(std::istream& in);
    void save_file(const std::string& path) const;
    static VectorIndex load_file(const std::string& path);

private:
    struct LangIndex {
        std::vector<std::string> node_ids;        // ascending; position == hnsw item
        std::vector<std::uint64_t> text_hashes;   // fnv1a64 of the composed text
        std::unique_ptr<HnswIndex> hnsw;
    };
    std::map<std::string, LangIndex> by_language_;
};

}  // namespace skillgraph::dense

#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "skillgraph/skill_graph.hpp"

namespace skillgraph::lexical {

struct Bm25Params {
    double k1 = 1.2;
    double b = 0.75;
};

// W_label > W_alt > W_desc; terminological precision first.
struct FieldWeights {
    double label = 3.0;
    double alt = 2.0;
    double desc = 1.0;
};

enum class Field : std::uint8_t { Label = 0, Alt = 1, Desc = 2 };
inline constexpr std::size_t kFieldCount = 3;

struct LexicalScore {
    std::string node_id;
    double s_lex = 0.0;
};

enum class QueryStage { Phrase, Prefix, TokenOr };

std::string_view to_string(QueryStage stage);

struct LexicalSearchResult {
    std::vector<LexicalScore> scores;  // descending s_lex, ties by node_id
    QueryStage stage = QueryStage::TokenOr;
    bool analyzer_fallback = false;  // query language had no dedicated analyzer
};

struct SubIndexStats {
    std::size_t docs = 0;
    std::size_t distinct_terms = 0;  // across all fields
    std::array<double, kFieldCount> avgdl{};
};

// Per-language inverted index over label / alt_labels / description with
// positional postings. Scoring is weighted per-field BM25: each field scored
// independently with its own df and avgdl, then combined as
// s_lex = sum_f W_f * BM25_f. Immutable after build; rebuild-and-swap.
class LexicalIndex {
public:
    Bm25Params bm25;
    FieldWeights weights;

    void build(const kg::SkillGraph& graph, const std::vector<std::string>& languages);

    // Stage 1 runs the phrase-then-prefix interpretation; token-OR fires when
    // stage 1 is empty or the raw query contains one of "'()*:^ .
    LexicalSearchResult search(std::string_view query, std::string_view language,
                               std::size_t limit) const;

    std::vector<std::string> languages() const;
    std::optional<SubIndexStats> stats(std::string_view language) const;

    void save(std::ostream& out) const;
    static LexicalIndex load(std::istream& in);
    void save_file(const std::string& path) const;
    static LexicalIndex load_file(const std::string& path);

private:
    struct Posting {
        std::uint32_t doc = 0;
        std::vector<std::uint32_t> positions;  // tf == positions.size()
    };
    struct FieldIndex {
        std::map<std::string, std::vector<Posting>> postings;
        std::vector<std::uint32_t> doc_len;
        double avgdl = 0.0;
    };
    struct SubIndex {
        std::vector<std::string> doc_ids;  // ascending node id; index == doc number
        std::array<FieldIndex, kFieldCount> fields;
    };

    std::vector<std::uint32_t> phrase_candidates(const SubIndex& sub,
                                                 const std::vector<std::string>& tokens) const;
    std::vector<std::uint32_t> prefix_candidates(const SubIndex& sub,
                                                 const std::vector<std::string>& tokens) const;
    std::vector<LexicalScore> score_docs(const SubIndex& sub,
                                         const std::vector<std::string>& tokens,
                                         const std::string* prefix_token,
                                         const std::vector<std::uint32_t>& docs,
                                         std::size_t limit) const;

    std::map<std::string, SubIndex> by_language_;
};

}  // namespace skillgraph::lexical

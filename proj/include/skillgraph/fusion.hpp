#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "skillgraph/lexical_index.hpp"
#include "skillgraph/vector_index.hpp"

namespace skillgraph::retrieval {

enum class Variant { Bm25Only, DenseOnly, Hybrid, Rerank };

std::string_view to_string(Variant v);
std::optional<Variant> parse_variant(std::string_view s);

struct FusionConfig {
    Variant variant = Variant::Hybrid;
    double alpha = 0.5;
    std::size_t k = 5;
    std::size_t pool_lex = 50;
    std::size_t pool_sem = 50;
    std::size_t rerank_n = 20;

    void validate() const;  // throws std::invalid_argument
};

enum class SourceTag { Explicit, InferredGraph, LlmCandidate };

std::string_view to_string(SourceTag tag);

struct ScoredCandidate {
    std::string node_id;
    std::optional<double> s_lex_raw;
    std::optional<double> s_sem_raw;
    double s_lex_norm = 0.0;
    double s_sem_norm = 0.0;
    double s_final = 0.0;
    SourceTag source_tag = SourceTag::Explicit;
};

// Min-max over the given set. All-equal inputs map to 1.0 (an all-equal pool
// is uniformly relevant; 0.0 would erase the modality from the fused score).
std::vector<std::pair<std::string, double>> minmax_normalize(
    const std::vector<std::pair<std::string, double>>& scores);

// Convex combination over the union of both pools:
// s_final = alpha * norm(s_lex) + (1 - alpha) * norm(s_sem), normalization
// computed per modality over that modality's retrieved set only; a candidate
// missing from one modality scores 0 there. Descending s_final, ties by id.
std::vector<ScoredCandidate> fuse(const std::vector<lexical::LexicalScore>& lex,
                                  const std::vector<dense::SemanticScore>& sem, double alpha);

}  // namespace skillgraph::retrieval

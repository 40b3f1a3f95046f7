#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "skillgraph/fusion.hpp"

namespace skillgraph::retrieval {

struct RerankCandidate {
    std::string id;
    std::string label;
    std::string snippet;
};

// External re-ranker behind the wire contract
//   POST {query, candidates:[{id,label,snippet}]} -> {order:[id]}.
// Returns nullopt on timeout or transport failure.
class RerankerClient {
public:
    virtual ~RerankerClient() = default;
    virtual std::optional<std::vector<std::string>> order(
        const std::string& query, const std::vector<RerankCandidate>& candidates) = 0;
    virtual std::string name() const = 0;
};

class IdentityReranker final : public RerankerClient {
public:
    std::optional<std::vector<std::string>> order(
        const std::string&, const std::vector<RerankCandidate>& candidates) override {
        std::vector<std::string> ids;
        ids.reserve(candidates.size());
        for (const auto& c : candidates) ids.push_back(c.id);
        return ids;
    }
    std::string name() const override { return "identity"; }
};

// Deterministic score-perturbing stub: orders candidates by a hash of
// (seed, query, id). Used to exercise the Rerank variant offline.
class PerturbingReranker final : public RerankerClient {
public:
    explicit PerturbingReranker(std::uint64_t seed = 1) : seed_(seed) {}
    std::optional<std::vector<std::string>> order(
        const std::string& query, const std::vector<RerankCandidate>& candidates) override;
    std::string name() const override { return "perturbing-stub"; }

private:
    std::uint64_t seed_;
};

struct SearchResponse {
    std::vector<ScoredCandidate> results;
    Variant variant = Variant::Hybrid;
    std::optional<lexical::QueryStage> lexical_stage;
    bool analyzer_fallback = false;
    bool semantic_language_missing = false;
    bool rerank_skipped = false;    // ranker unreachable; input order kept
    bool rerank_violation = false;  // ranker added or dropped ids
};

// Orchestrates the four retrieval variants over immutable indices. Ranker is
// optional; the Rerank variant without one behaves like Hybrid with
// rerank_skipped set.
class Searcher {
public:
    Searcher(const kg::SkillGraph& graph, const lexical::LexicalIndex& lexical,
             const dense::VectorIndex& vectors, dense::Embedder& embedder,
             RerankerClient* ranker = nullptr)
        : graph_(graph), lexical_(lexical), vectors_(vectors), embedder_(embedder),
          ranker_(ranker) {}

    SearchResponse search(const std::string& query, const std::string& language,
                          const FusionConfig& config) const;

    // Permutation-only reordering: ids the ranker invents are dropped, ids it
    // omits are restored in their original relative order.
    static std::vector<ScoredCandidate> apply_ranker_order(
        std::vector<ScoredCandidate> candidates, const std::vector<std::string>& ranker_ids,
        bool* violation);

    std::vector<RerankCandidate> wire_candidates(const std::vector<ScoredCandidate>& candidates,
                                                 const std::string& language) const;

private:
    const kg::SkillGraph& graph_;
    const lexical::LexicalIndex& lexical_;
    const dense::VectorIndex& vectors_;
    dense::Embedder& embedder_;
    RerankerClient* ranker_;
};

}  // namespace skillgraph::retrieval

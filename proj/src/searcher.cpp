#include "skillgraph/searcher.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

#include "skillgraph/embedder.hpp"

namespace skillgraph::retrieval {

std::optional<std::vector<std::string>> PerturbingReranker::order(
    const std::string& query, const std::vector<RerankCandidate>& candidates) {
    std::vector<std::pair<std::uint64_t, std::string>> keyed;
    keyed.reserve(candidates.size());
    for (const auto& c : candidates) {
        keyed.emplace_back(
            dense::fnv1a64(std::to_string(seed_) + "|" + query + "|" + c.id), c.id);
    }
    std::sort(keyed.begin(), keyed.end());
    std::vector<std::string> ids;
    ids.reserve(keyed.size());
    for (auto& [h, id] : keyed) {
        ids.push_back(std::move(id));
    }
    return ids;
}

std::vector<ScoredCandidate> Searcher::apply_ranker_order(
    std::vector<ScoredCandidate> candidates, const std::vector<std::string>& ranker_ids,
    bool* violation) {
    std::set<std::string> input_ids;
    for (const auto& c : candidates) {
        input_ids.insert(c.node_id);
    }
    bool violated = false;

    std::vector<std::string> kept;
    std::set<std::string> kept_set;
    for (const auto& id : ranker_ids) {
        if (!input_ids.count(id)) {
            violated = true;  // ranker invented an id
            continue;
        }
        if (!kept_set.insert(id).second) {
            violated = true;  // duplicate
            continue;
        }
        kept.push_back(id);
    }
    if (kept.size() != candidates.size()) {
        violated = true;  // ranker dropped ids; restore them in input order
        for (const auto& c : candidates) {
            if (!kept_set.count(c.node_id)) {
                kept.push_back(c.node_id);
            }
        }
    }

    std::vector<ScoredCandidate> out;
    out.reserve(candidates.size());
    for (const auto& id : kept) {
        auto it = std::find_if(candidates.begin(), candidates.end(),
                               [&](const ScoredCandidate& c) { return c.node_id == id; });
        out.push_back(std::move(*it));
    }
    if (violation) {
        *violation = violated;
    }
    return out;
}

std::vector<RerankCandidate> Searcher::wire_candidates(
    const std::vector<ScoredCandidate>& candidates, const std::string& language) const {
    std::vector<RerankCandidate> out;
    out.reserve(candidates.size());
    for (const auto& c : candidates) {
        RerankCandidate rc;
        rc.id = c.node_id;
        if (const auto* node = graph_.node(c.node_id)) {
            rc.label = node->label_in(language).second;
            auto it = node->descriptions.find(language);
            if (it == node->descriptions.end() && !node->descriptions.empty()) {
                it = node->descriptions.begin();
            }
            if (it != node->descriptions.end()) {
                rc.snippet = it->second.substr(0, 200);
            }
        }
        out.push_back(std::move(rc));
    }
    return out;
}

SearchResponse Searcher::search(const std::string& query, const std::string& language,
                                const FusionConfig& config) const {
    if (query.empty() || query.find_first_not_of(" \t\r\n") == std::string::npos) {
        throw std::invalid_argument("query must be non-empty");
    }
    config.validate();

    SearchResponse response;
    response.variant = config.variant;

    const bool needs_lexical =
        config.variant != Variant::DenseOnly;
    const bool needs_semantic =
        config.variant != Variant::Bm25Only;

    std::vector<lexical::LexicalScore> lex_pool;
    if (needs_lexical) {
        const std::size_t pool =
            config.variant == Variant::Bm25Only ? config.k : config.pool_lex;
        auto lex = lexical_.search(query, language, pool);
        response.lexical_stage = lex.stage;
        response.analyzer_fallback = lex.analyzer_fallback;
        lex_pool = std::move(lex.scores);
    }

    std::vector<dense::SemanticScore> sem_pool;
    if (needs_semantic) {
        const std::size_t pool =
            config.variant == Variant::DenseOnly ? config.k : config.pool_sem;
        auto query_vec = embedder_.embed({query}, language).at(0);
        auto sem = vectors_.search(query_vec, language, pool,
                                   std::max(vectors_.params.ef_search, pool));
        response.semantic_language_missing = sem.language_missing;
        sem_pool = std::move(sem.scores);
    }

    // Unimodal variants pin alpha to the boundary so s_final reduces to the
    // single modality's normalized score.
    double alpha = config.alpha;
    if (config.variant == Variant::Bm25Only) alpha = 1.0;
    if (config.variant == Variant::DenseOnly) alpha = 0.0;

    auto fused = fuse(lex_pool, sem_pool, alpha);

    if (config.variant == Variant::Rerank) {
        if (fused.size() > config.rerank_n) {
            fused.resize(config.rerank_n);
        }
        if (ranker_ && !fused.empty()) {
            auto order = ranker_->order(query, wire_candidates(fused, language));
            if (order) {
                bool violation = false;
                fused = apply_ranker_order(std::move(fused), *order, &violation);
                response.rerank_violation = violation;
            } else {
                response.rerank_skipped = true;
            }
        } else {
            response.rerank_skipped = true;
        }
    }

    if (fused.size() > config.k) {
        fused.resize(config.k);
    }
    response.results = std::move(fused);
    return response;
}

}  // namespace skillgraph::retrieval

#include "skillgraph/fusion.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

namespace skillgraph::retrieval {

std::string_view to_string(Variant v) {
    switch (v) {
        case Variant::Bm25Only: return "bm25";
        case Variant::DenseOnly: return "dense";
        case Variant::Hybrid: return "hybrid";
        case Variant::Rerank: return "rerank";
    }
    return "hybrid";
}

std::optional<Variant> parse_variant(std::string_view s) {
    std::string q;
    for (char c : s) {
        if (c == '_' || c == '-') continue;
        q.push_back(c >= 'A' && c <= 'Z' ? static_cast<char>(c + 0x20) : c);
    }
    if (q == "bm25" || q == "bm25only" || q == "lexical") return Variant::Bm25Only;
    if (q == "dense" || q == "denseonly" || q == "semantic") return Variant::DenseOnly;
    if (q == "hybrid") return Variant::Hybrid;
    if (q == "rerank") return Variant::Rerank;
    return std::nullopt;
}

std::string_view to_string(SourceTag tag) {
    switch (tag) {
        case SourceTag::Explicit: return "explicit";
        case SourceTag::InferredGraph: return "inferred-graph";
        case SourceTag::LlmCandidate: return "llm-candidate";
    }
    return "explicit";
}

void FusionConfig::validate() const {
    if (alpha < 0.0 || alpha > 1.0) {
        throw std::invalid_argument("alpha must be in [0, 1]");
    }
    if (k < 1) {
        throw std::invalid_argument("k must be >= 1");
    }
    if (k > pool_lex || k > pool_sem) {
        throw std::invalid_argument("k must not exceed the candidate pool sizes");
    }
    if (rerank_n < k) {
        throw std::invalid_argument("rerank_n must be >= k");
    }
}

std::vector<std::pair<std::string, double>> minmax_normalize(
    const std::vector<std::pair<std::string, double>>& scores) {
    std::vector<std::pair<std::string, double>> out;
    if (scores.empty()) {
        return out;
    }
    double lo = scores.front().second;
    double hi = scores.front().second;
    for (const auto& [id, raw] : scores) {
        lo = std::min(lo, raw);
        hi = std::max(hi, raw);
    }
    out.reserve(scores.size());
    for (const auto& [id, raw] : scores) {
        out.emplace_back(id, hi == lo ? 1.0 : (raw - lo) / (hi - lo));
    }
    return out;
}

std::vector<ScoredCandidate> fuse(const std::vector<lexical::LexicalScore>& lex,
                                  const std::vector<dense::SemanticScore>& sem, double alpha) {
    std::vector<std::pair<std::string, double>> lex_raw;
    lex_raw.reserve(lex.size());
    for (const auto& s : lex) {
        lex_raw.emplace_back(s.node_id, s.s_lex);
    }
    std::vector<std::pair<std::string, double>> sem_raw;
    sem_raw.reserve(sem.size());
    for (const auto& s : sem) {
        sem_raw.emplace_back(s.node_id, s.s_sem);
    }
    const auto lex_norm = minmax_normalize(lex_raw);
    const auto sem_norm = minmax_normalize(sem_raw);

    std::map<std::string, ScoredCandidate> by_id;
    for (std::size_t i = 0; i < lex_raw.size(); ++i) {
        auto& c = by_id[lex_raw[i].first];
        c.node_id = lex_raw[i].first;
        c.s_lex_raw = lex_raw[i].second;
        c.s_lex_norm = lex_norm[i].second;
    }
    for (std::size_t i = 0; i < sem_raw.size(); ++i) {
        auto& c = by_id[sem_raw[i].first];
        c.node_id = sem_raw[i].first;
        c.s_sem_raw = sem_raw[i].second;
        c.s_sem_norm = sem_norm[i].second;
    }

    std::vector<ScoredCandidate> out;
    out.reserve(by_id.size());
    for (auto& [id, c] : by_id) {
        c.s_final = alpha * c.s_lex_norm + (1.0 - alpha) * c.s_sem_norm;
        out.push_back(std::move(c));
    }
    std::sort(out.begin(), out.end(), [](const ScoredCandidate& a, const ScoredCandidate& b) {
        if (a.s_final != b.s_final) return a.s_final > b.s_final;
        return a.node_id < b.node_id;
    });
    return out;
}

}  // namespace skillgraph::retrieval

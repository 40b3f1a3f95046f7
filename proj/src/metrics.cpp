#include "skillgraph/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace skillgraph::eval {

double precision_at_k(const std::vector<std::string>& ranked,
                      const std::set<std::string>& relevant, std::size_t k) {
    if (k < 1) {
        throw std::invalid_argument("k must be >= 1");
    }
    std::size_t hits = 0;
    for (std::size_t i = 0; i < ranked.size() && i < k; ++i) {
        if (relevant.count(ranked[i])) ++hits;
    }
    return static_cast<double>(hits) / static_cast<double>(k);
}

double ndcg_at_k(const std::vector<std::string>& ranked,
                 const std::set<std::string>& relevant, std::size_t k) {
    if (relevant.empty()) {
        return 0.0;
    }
    double dcg = 0.0;
    for (std::size_t i = 0; i < ranked.size() && i < k; ++i) {
        if (relevant.count(ranked[i])) {
            dcg += 1.0 / std::log2(static_cast<double>(i) + 2.0);
        }
    }
    double idcg = 0.0;
    const std::size_t ideal = std::min(k, relevant.size());
    for (std::size_t i = 0; i < ideal; ++i) {
        idcg += 1.0 / std::log2(static_cast<double>(i) + 2.0);
    }
    return dcg / idcg;
}

LatencyProfile latency_profile(std::vector<double> samples_ms) {
    if (samples_ms.empty()) {
        throw std::invalid_argument("latency_profile requires at least one sample");
    }
    std::sort(samples_ms.begin(), samples_ms.end());
    auto nearest_rank = [&](double p) {
        const auto n = static_cast<double>(samples_ms.size());
        auto rank = static_cast<std::size_t>(std::ceil(p / 100.0 * n));
        rank = std::max<std::size_t>(rank, 1);
        return samples_ms[rank - 1];
    };
    return {nearest_rank(50.0), nearest_rank(95.0)};
}

namespace {

std::size_t count_words(const std::string& text) {
    std::size_t words = 0;
    bool in_word = false;
    for (char c : text) {
        const bool ws = c == ' ' || c == '\t' || c == '\n' || c == '\r';
        if (!ws && !in_word) {
            ++words;
            in_word = true;
        } else if (ws) {
            in_word = false;
        }
    }
    return words;
}

}  // namespace

ExplanationModeMetrics explanation_metrics(
    const std::vector<explain::Explanation>& explanations,
    const std::vector<explain::EvidenceContext>& contexts) {
    if (explanations.size() != contexts.size()) {
        throw std::invalid_argument("explanations and contexts must pair up");
    }
    ExplanationModeMetrics m;
    m.explanations = explanations.size();
    if (explanations.empty()) {
        return m;
    }

    double coverage_sum = 0.0;
    double precision_sum = 0.0;
    double recall_sum = 0.0;
    std::size_t total_words = 0;
    std::vector<double> latencies;
    latencies.reserve(explanations.size());

    for (std::size_t i = 0; i < explanations.size(); ++i) {
        const auto& e = explanations[i];
        const auto& ctx = contexts[i];
        std::size_t covered = 0;
        std::size_t cited = 0;
        std::size_t valid_cited = 0;
        std::set<std::string> distinct_valid;
        for (const auto& s : e.sentences) {
            bool sentence_valid = false;
            for (const auto& id : s.evidence) {
                ++cited;
                if (ctx.has_fact(id)) {
                    ++valid_cited;
                    sentence_valid = true;
                    distinct_valid.insert(id);
                }
            }
            if (sentence_valid) ++covered;
            total_words += count_words(s.text);
        }
        m.sentences += e.sentences.size();
        coverage_sum += e.sentences.empty()
                            ? 0.0
                            : static_cast<double>(covered) / e.sentences.size();
        precision_sum += cited == 0 ? 0.0 : static_cast<double>(valid_cited) / cited;
        recall_sum += ctx.facts.empty()
                          ? 0.0
                          : static_cast<double>(distinct_valid.size()) / ctx.facts.size();
        latencies.push_back(static_cast<double>(e.latency_ms));
    }

    const auto n = static_cast<double>(explanations.size());
    m.coverage = coverage_sum / n;
    m.unsupported_rate = 1.0 - m.coverage;
    m.citation_precision = precision_sum / n;
    m.citation_recall = recall_sum / n;
    m.words_per_sentence =
        m.sentences == 0 ? 0.0 : static_cast<double>(total_words) / m.sentences;
    m.latency_median_ms = latency_profile(std::move(latencies)).median_ms;
    return m;
}

}  // namespace skillgraph::eval

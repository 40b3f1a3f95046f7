#pragma once

#include <set>
#include <string>
#include <vector>

#include "skillgraph/explanation.hpp"

namespace skillgraph::eval {

// |top-k intersect relevant| / k. Short result lists still divide by k;
// missing slots count as misses.
double precision_at_k(const std::vector<std::string>& ranked,
                      const std::set<std::string>& relevant, std::size_t k);

// Binary-gain nDCG: DCG_k = sum rel_i / log2(i + 1), normalized by the ideal
// DCG over the relevant set. No relevant documents yields 0.0.
double ndcg_at_k(const std::vector<std::string>& ranked,
                 const std::set<std::string>& relevant, std::size_t k = 5);

struct LatencyProfile {
    double median_ms = 0.0;
    double p95_ms = 0.0;
};

// Nearest-rank percentiles; deterministic on small samples. Throws
// std::invalid_argument on empty input.
LatencyProfile latency_profile(std::vector<double> samples_ms);

struct ExplanationModeMetrics {
    double coverage = 0.0;           // mean per-explanation fraction of sentences citing
                                     // at least one valid context id
    double unsupported_rate = 0.0;   // 1 - coverage
    double citation_precision = 0.0; // mean per-explanation valid/total cited (0 when none)
    double citation_recall = 0.0;    // mean per-explanation distinct-valid / context facts
    double words_per_sentence = 0.0; // total whitespace tokens / total sentences
    double latency_median_ms = 0.0;
    std::size_t explanations = 0;
    std::size_t sentences = 0;
};

// Explanations paired index-wise with the contexts they were generated from.
ExplanationModeMetrics explanation_metrics(
    const std::vector<explain::Explanation>& explanations,
    const std::vector<explain::EvidenceContext>& contexts);

}  // namespace skillgraph::eval

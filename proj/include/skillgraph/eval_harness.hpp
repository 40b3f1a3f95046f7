#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "skillgraph/metrics.hpp"
#include "skillgraph/searcher.hpp"

namespace skillgraph::eval {

struct QueryRecord {
    std::string query_id;
    std::string text;
    std::string language;  // en or fr
};

using QrelSet = std::map<std::string, std::set<std::string>>;  // query_id -> relevant ids

// JSONL: {"query_id": str, "text": str, "lang": str}, one per line.
std::vector<QueryRecord> load_queries_jsonl(const std::string& path);
std::vector<QueryRecord> parse_queries_jsonl(const std::string& content);

// TSV: query_id <TAB> node_id.
QrelSet load_qrels_tsv(const std::string& path);
QrelSet parse_qrels_tsv(const std::string& content);

struct PerQueryRow {
    std::string query_id;
    std::string language;
    retrieval::Variant variant = retrieval::Variant::Hybrid;
    double p_at_3 = 0.0;
    double p_at_5 = 0.0;
    double ndcg_at_5 = 0.0;
    double latency_ms = 0.0;
};

struct RetrievalRow {
    retrieval::Variant variant = retrieval::Variant::Hybrid;
    std::string language;  // "en", "fr" or "avg"
    std::size_t n_queries = 0;
    double p_at_3 = 0.0;
    double p_at_5 = 0.0;
    double ndcg_at_5 = 0.0;
    double latency_median_ms = 0.0;
    double latency_p95_ms = 0.0;
};

struct ExplanationRow {
    explain::Mode mode = explain::Mode::C1;
    ExplanationModeMetrics metrics;
};

struct EvalOptions {
    std::vector<retrieval::Variant> variants{retrieval::Variant::Bm25Only,
                                             retrieval::Variant::DenseOnly,
                                             retrieval::Variant::Hybrid};
    std::vector<explain::Mode> modes;
    retrieval::FusionConfig fusion;  // variant field overridden per run
    explain::Audience audience = explain::Audience::Teacher;
    // Wall-clock numbers are environmental; suppressing them makes reports
    // byte-identical across reruns.
    bool deterministic_timing = false;
    std::string out_dir;  // empty: no files written
};

struct EvalReport {
    std::vector<PerQueryRow> per_query;
    std::vector<RetrievalRow> retrieval;
    std::vector<ExplanationRow> explanation;
    bool timing_suppressed = false;

    std::string per_query_csv() const;
    std::string to_json() const;
    std::string to_text_table() const;
};

// Runs every (variant x query), then every explanation mode over contexts
// built from the qrel-relevant nodes. Throws NotFoundError when a qrel id
// does not resolve in the graph. Deterministic given stub services.
EvalReport run_eval(const retrieval::Searcher& searcher, const kg::SkillGraph& graph,
                    const dense::VectorIndex& vectors,
                    const std::vector<QueryRecord>& queries, const QrelSet& qrels,
                    const EvalOptions& options, llm::GeneratorClient* generator = nullptr);

}  // namespace skillgraph::eval

#include "skillgraph/eval_harness.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "skillgraph/errors.hpp"

namespace skillgraph::eval {

using nlohmann::json;

std::vector<QueryRecord> parse_queries_jsonl(const std::string& content) {
    std::vector<QueryRecord> out;
    std::istringstream in(content);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        json j = json::parse(line, nullptr, false);
        if (j.is_discarded() || !j.is_object()) {
            throw IoError("bad query record at line " + std::to_string(line_no));
        }
        QueryRecord q;
        q.query_id = j.value("query_id", "");
        q.text = j.value("text", "");
        q.language = j.value("lang", j.value("language", "en"));
        if (q.query_id.empty() || q.text.empty()) {
            throw IoError("query record missing query_id or text at line " +
                          std::to_string(line_no));
        }
        out.push_back(std::move(q));
    }
    return out;
}

std::vector<QueryRecord> load_queries_jsonl(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot read queries: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_queries_jsonl(buf.str());
}

QrelSet parse_qrels_tsv(const std::string& content) {
    QrelSet out;
    std::istringstream in(content);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        const auto tab = line.find('\t');
        if (tab == std::string::npos) {
            throw IoError("bad qrel line " + std::to_string(line_no) + ": expected TSV");
        }
        out[line.substr(0, tab)].insert(line.substr(tab + 1));
    }
    return out;
}

QrelSet load_qrels_tsv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot read qrels: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_qrels_tsv(buf.str());
}

namespace {

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.4f", v);
    return buf;
}

std::string fmt_ms(double v, bool suppressed) {
    if (suppressed) return "-";
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.1f", v);
    return buf;
}

}  // namespace

std::string EvalReport::per_query_csv() const {
    std::string out = "query_id,language,variant,p_at_3,p_at_5,ndcg_at_5,latency_ms\n";
    for (const auto& r : per_query) {
        out += r.query_id + "," + r.language + "," + std::string(to_string(r.variant)) + "," +
               fmt(r.p_at_3) + "," + fmt(r.p_at_5) + "," + fmt(r.ndcg_at_5) + "," +
               fmt_ms(r.latency_ms, timing_suppressed) + "\n";
    }
    return out;
}

std::string EvalReport::to_json() const {
    json j;
    j["retrieval"] = json::array();
    for (const auto& r : retrieval) {
        json row;
        row["variant"] = std::string(to_string(r.variant));
        row["language"] = r.language;
        row["n_queries"] = r.n_queries;
        row["p_at_3"] = r.p_at_3;
        row["p_at_5"] = r.p_at_5;
        row["ndcg_at_5"] = r.ndcg_at_5;
        if (!timing_suppressed) {
            row["latency_median_ms"] = r.latency_median_ms;
            row["latency_p95_ms"] = r.latency_p95_ms;
        }
        j["retrieval"].push_back(std::move(row));
    }
    j["explanation"] = json::array();
    for (const auto& r : explanation) {
        json row;
        row["mode"] = std::string(explain::to_string(r.mode));
        row["coverage"] = r.metrics.coverage;
        row["unsupported_rate"] = r.metrics.unsupported_rate;
        row["citation_precision"] = r.metrics.citation_precision;
        row["citation_recall"] = r.metrics.citation_recall;
        row["words_per_sentence"] = r.metrics.words_per_sentence;
        if (!timing_suppressed) {
            row["latency_median_ms"] = r.metrics.latency_median_ms;
        }
        row["explanations"] = r.metrics.explanations;
        j["explanation"].push_back(std::move(row));
    }
    return j.dump(2);
}

std::string EvalReport::to_text_table() const {
    std::string out;
    char buf[256];
    if (!retrieval.empty()) {
        out += "Variant   Lang  N     P@3     P@5     nDCG@5  Lat.med(ms)  Lat.p95(ms)\n";
        for (const auto& r : retrieval) {
            std::snprintf(buf, sizeof(buf), "%-9s %-5s %-5zu %-7s %-7s %-7s %-12s %-12s\n",
                          std::string(to_string(r.variant)).c_str(), r.language.c_str(),
                          r.n_queries, fmt(r.p_at_3).c_str(), fmt(r.p_at_5).c_str(),
                          fmt(r.ndcg_at_5).c_str(),
                          fmt_ms(r.latency_median_ms, timing_suppressed).c_str(),
                          fmt_ms(r.latency_p95_ms, timing_suppressed).c_str());
            out += buf;
        }
    }
    if (!explanation.empty()) {
        if (!out.empty()) out += "\n";
        out += "Mode  N     Cover.  Unsup.  Cit.P   Cit.R   W/Sent  Lat.med(ms)\n";
        for (const auto& r : explanation) {
            std::snprintf(buf, sizeof(buf), "%-5s %-5zu %-7s %-7s %-7s %-7s %-7.1f %-12s\n",
                          std::string(explain::to_string(r.mode)).c_str(),
                          r.metrics.explanations, fmt(r.metrics.coverage).c_str(),
                          fmt(r.metrics.unsupported_rate).c_str(),
                          fmt(r.metrics.citation_precision).c_str(),
                          fmt(r.metrics.citation_recall).c_str(), r.metrics.words_per_sentence,
                          fmt_ms(r.metrics.latency_median_ms, timing_suppressed).c_str());
            out += buf;
        }
    }
    return out;
}

EvalReport run_eval(const retrieval::Searcher& searcher, const kg::SkillGraph& graph,
                    const dense::VectorIndex& vectors,
                    const std::vector<QueryRecord>& queries, const QrelSet& qrels,
                    const EvalOptions& options, llm::GeneratorClient* generator) {
    // Every judged id must resolve before any measurement starts.
    for (const auto& [qid, ids] : qrels) {
        for (const auto& id : ids) {
            if (!graph.node(id)) {
                throw NotFoundError("qrel id does not resolve in the snapshot: " + id +
                                    " (query " + qid + ")");
            }
        }
    }

    EvalReport report;
    report.timing_suppressed = options.deterministic_timing;

    for (const auto variant : options.variants) {
        retrieval::FusionConfig config = options.fusion;
        config.variant = variant;
        std::map<std::string, std::vector<const PerQueryRow*>> rows_by_lang;
        std::vector<PerQueryRow> rows;
        rows.reserve(queries.size());

        for (const auto& q : queries) {
            const auto t0 = std::chrono::steady_clock::now();
            auto response = searcher.search(q.text, q.language, config);
            const auto elapsed = std::chrono::duration<double, std::milli>(
                                     std::chrono::steady_clock::now() - t0)
                                     .count();
            std::vector<std::string> ranked;
            ranked.reserve(response.results.size());
            for (const auto& c : response.results) ranked.push_back(c.node_id);

            static const std::set<std::string> kNone;
            auto rel_it = qrels.find(q.query_id);
            const auto& relevant = rel_it == qrels.end() ? kNone : rel_it->second;

            PerQueryRow row;
            row.query_id = q.query_id;
            row.language = q.language;
            row.variant = variant;
            row.p_at_3 = precision_at_k(ranked, relevant, 3);
            row.p_at_5 = precision_at_k(ranked, relevant, 5);
            row.ndcg_at_5 = ndcg_at_k(ranked, relevant, 5);
            row.latency_ms = options.deterministic_timing ? 0.0 : elapsed;
            rows.push_back(std::move(row));
        }

        for (const auto& row : rows) {
            report.per_query.push_back(row);
        }

        auto aggregate = [&](const std::string& language) {
            std::vector<const PerQueryRow*> group;
            for (const auto& row : rows) {
                if (language == "avg" || row.language == language) {
                    group.push_back(&row);
                }
            }
            if (group.empty()) return;
            RetrievalRow agg;
            agg.variant = variant;
            agg.language = language;
            agg.n_queries = group.size();
            std::vector<double> latencies;
            for (const auto* row : group) {
                agg.p_at_3 += row->p_at_3;
                agg.p_at_5 += row->p_at_5;
                agg.ndcg_at_5 += row->ndcg_at_5;
                latencies.push_back(row->latency_ms);
            }
            const auto n = static_cast<double>(group.size());
            agg.p_at_3 /= n;
            agg.p_at_5 /= n;
            agg.ndcg_at_5 /= n;
            if (!options.deterministic_timing) {
                const auto profile = latency_profile(std::move(latencies));
                agg.latency_median_ms = profile.median_ms;
                agg.latency_p95_ms = profile.p95_ms;
            }
            report.retrieval.push_back(std::move(agg));
        };
        std::set<std::string> langs;
        for (const auto& q : queries) langs.insert(q.language);
        for (const auto& lang : langs) aggregate(lang);
        aggregate("avg");
    }

    if (!options.modes.empty()) {
        // Contexts come from the judged-relevant nodes, in the language of the
        // query that judged them.
        std::set<std::pair<std::string, std::string>> wanted;  // (language, node_id)
        for (const auto& q : queries) {
            auto it = qrels.find(q.query_id);
            if (it == qrels.end()) continue;
            for (const auto& id : it->second) {
                wanted.emplace(q.language, id);
            }
        }
        std::vector<explain::EvidenceContext> contexts;
        contexts.reserve(wanted.size());
        for (const auto& [lang, id] : wanted) {
            contexts.push_back(
                explain::build_context(graph, vectors, id, lang, options.audience));
        }

        for (const auto mode : options.modes) {
            std::vector<explain::Explanation> explanations;
            explanations.reserve(contexts.size());
            for (const auto& ctx : contexts) {
                switch (mode) {
                    case explain::Mode::C1:
                        explanations.push_back(explain::explain_template(ctx));
                        break;
                    case explain::Mode::C2: {
                        if (!generator) {
                            throw ConfigError("C2 evaluation requires a generator");
                        }
                        explanations.push_back(explain::explain_constrained(ctx, *generator));
                        break;
                    }
                    case explain::Mode::C3: {
                        if (!generator) {
                            throw ConfigError("C3 evaluation requires a generator");
                        }
                        explanations.push_back(
                            explain::explain_freeform(ctx, *generator, true));
                        break;
                    }
                }
            }
            ExplanationRow row;
            row.mode = mode;
            row.metrics = explanation_metrics(explanations, contexts);
            if (options.deterministic_timing) {
                row.metrics.latency_median_ms = 0.0;
            }
            report.explanation.push_back(std::move(row));
        }
    }

    if (!options.out_dir.empty()) {
        std::filesystem::create_directories(options.out_dir);
        const auto dir = std::filesystem::path(options.out_dir);
        std::ofstream(dir / "per_query.csv") << report.per_query_csv();
        std::ofstream(dir / "report.json") << report.to_json();
        std::ofstream(dir / "report.txt") << report.to_text_table();
    }
    return report;
}

}  // namespace skillgraph::eval

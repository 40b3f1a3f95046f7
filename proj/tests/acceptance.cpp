#include <doctest.h>

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <thread>

#include <httplib.h>
#include <json.hpp>

#include "skillgraph/eval_harness.hpp"
#include "skillgraph/server.hpp"
#include "skillgraph/synth.hpp"
#include "skillgraph/text.hpp"
#include "support/fixtures.hpp"
#include "support/oracles.hpp"

using namespace skillgraph;
using nlohmann::json;

namespace {

void report(const char* name, bool pass) {
    std::printf("[acceptance] %s: %s\n", name, pass ? "PASS" : "FAIL");
    std::fflush(stdout);
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fixture_path(const std::string& name) {
    return std::string(SKILLGRAPH_TEST_DATA_DIR) + "/" + name;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    REQUIRE(in);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

std::vector<std::vector<float>> random_unit_vectors(std::size_t n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<float> gauss(0.0f, 1.0f);
    std::vector<std::vector<float>> out(n);
    for (auto& v : out) {
        v.resize(dense::kEmbeddingDim);
        for (auto& x : v) x = gauss(rng);
        dense::l2_normalize(v);
    }
    return out;
}

}  // namespace

TEST_CASE("criterion 1: hybrid ranking equals brute-force fusion on random corpora") {
    const auto t0 = std::chrono::steady_clock::now();
    std::mt19937_64 rng(4242);
    const char* vocab[] = {"data",    "analysis", "teaching", "welding",  "routing",
                           "budget",  "design",   "quality",  "report",   "survey",
                           "network", "pastry",   "safety",   "contract", "models"};
    bool pass = true;

    for (int corpus_round = 0; corpus_round < 50 && pass; ++corpus_round) {
        const std::size_t n_docs = 5 + rng() % 16;  // 5..20
        std::string jsonl;
        for (std::size_t d = 0; d < n_docs; ++d) {
            std::string label, desc;
            const int label_words = 2 + static_cast<int>(rng() % 3);
            for (int w = 0; w < label_words; ++w) {
                if (w) label += " ";
                label += vocab[rng() % std::size(vocab)];
            }
            const int desc_words = 4 + static_cast<int>(rng() % 5);
            for (int w = 0; w < desc_words; ++w) {
                if (w) desc += " ";
                desc += vocab[rng() % std::size(vocab)];
            }
            char id[16];
            std::snprintf(id, sizeof(id), "rx:S%02zu", d);
            jsonl += std::string("{\"id\":\"") + id +
                     "\",\"kind\":\"skill\",\"labels\":{\"en\":\"" + label +
                     "\"},\"descriptions\":{\"en\":\"" + desc +
                     "\"},\"provenance\":{\"framework\":\"RX\",\"version\":\"1\",\"uri\":\"u\"}}\n";
        }
        auto b = fixtures::build_indices(jsonl, {"en"});
        retrieval::Searcher searcher(b.graph, b.lexical, b.vectors, b.embedder);

        std::string query = vocab[rng() % std::size(vocab)];
        if (rng() % 2) query += std::string(" ") + vocab[rng() % std::size(vocab)];
        if (rng() % 3 == 0) query += "^";  // force the token-OR stage sometimes

        for (double alpha : {0.0, 0.25, 0.5, 1.0}) {
            retrieval::FusionConfig config;
            config.variant = retrieval::Variant::Hybrid;
            config.alpha = alpha;
            config.k = 50;
            config.rerank_n = config.k;
            auto got = searcher.search(query, "en", config);

            // Independent pools -> reference fusion.
            auto lex = b.lexical.search(query, "en", config.pool_lex);
            auto qv = b.embedder.embed({query}, "en").at(0);
            auto sem = b.vectors.search(qv, "en", config.pool_sem,
                                        std::max<std::size_t>(100, config.pool_sem));
            std::vector<std::pair<std::string, double>> lex_raw, sem_raw;
            for (const auto& s : lex.scores) lex_raw.emplace_back(s.node_id, s.s_lex);
            for (const auto& s : sem.scores) sem_raw.emplace_back(s.node_id, s.s_sem);
            auto expected = oracle::fuse_reference(lex_raw, sem_raw, alpha);

            if (got.results.size() != expected.size()) {
                pass = false;
                break;
            }
            for (std::size_t i = 0; i < expected.size(); ++i) {
                if (got.results[i].node_id != expected[i].id ||
                    got.results[i].s_final != expected[i].score) {
                    pass = false;
                    break;
                }
            }
            if (!pass) break;
        }
    }
    const bool in_time = seconds_since(t0) < 10.0;
    report("C1 fusion-oracle-equivalence (50 corpora, alpha grid, <10s)", pass && in_time);
    CHECK(pass);
    CHECK(in_time);
}

TEST_CASE("criterion 2: token-OR BM25 matches the textbook reference within 1e-6") {
    const char* labels[] = {"data analysis methods", "data management",   "statistical analysis",
                            "visualization of data", "machine learning",  "survey design",
                            "report writing",        "data quality",      "spreadsheet analysis",
                            "database tooling"};
    const char* descs[] = {"inspecting data for analysis", "storing data safely",
                           "analysis of numeric data",     "charts and dashboards",
                           "training models on data",      "asking good questions",
                           "writing clear analysis notes", "profiling data defects",
                           "formulas over data tables",    "indexes and analysis plans"};
    std::string jsonl;
    for (int i = 0; i < 10; ++i) {
        jsonl += std::string("{\"id\":\"bx:S") + std::to_string(i) +
                 "\",\"kind\":\"skill\",\"labels\":{\"en\":\"" + labels[i] +
                 "\"},\"descriptions\":{\"en\":\"" + descs[i] +
                 "\"},\"provenance\":{\"framework\":\"BX\",\"version\":\"1\",\"uri\":\"u\"}}\n";
    }
    auto graph = fixtures::graph_from_jsonl(jsonl);
    lexical::LexicalIndex index;
    index.build(graph, {"en"});

    bool pass = true;
    const char* queries[] = {"data analysis^", "writing data reports^", "survey quality^"};
    for (const auto* q : queries) {
        auto got = index.search(q, "en", 10);
        if (got.stage != lexical::QueryStage::TokenOr) pass = false;

        std::vector<oracle::Bm25Doc> docs;
        for (int i = 0; i < 10; ++i) {
            oracle::Bm25Doc d;
            d.id = "bx:S" + std::to_string(i);
            d.label = text::analyze(labels[i], "en");
            d.desc = text::analyze(descs[i], "en");
            docs.push_back(std::move(d));
        }
        std::string clean(q);
        clean.pop_back();
        auto expected = oracle::bm25_scores(docs, text::analyze(clean, "en"));
        for (const auto& s : got.scores) {
            if (!expected.count(s.node_id) ||
                std::abs(s.s_lex - expected.at(s.node_id)) > 1e-6) {
                pass = false;
            }
        }
        std::size_t expected_hits = 0;
        for (const auto& [id, score] : expected) {
            if (score > 0) ++expected_hits;
        }
        if (got.scores.size() != expected_hits) pass = false;
    }
    report("C2 bm25-oracle-equivalence (10-doc fixture, 1e-6)", pass);
    CHECK(pass);
}

TEST_CASE("criterion 3: hnsw recall and small-scale exactness") {
    const auto t0 = std::chrono::steady_clock::now();
    auto vectors = random_unit_vectors(1000, 20240101);
    dense::HnswParams params;  // m=16, ef_construction=200
    dense::HnswIndex index(dense::kEmbeddingDim, params);
    for (const auto& v : vectors) index.add(v);

    auto queries = random_unit_vectors(50, 555);
    double recall_sum = 0;
    for (const auto& q : queries) {
        auto got = index.search(q.data(), 10, 100);
        auto expected = oracle::exact_knn(vectors, q, 10);
        std::set<std::uint32_t> got_set;
        for (const auto& h : got) got_set.insert(h.item);
        std::size_t overlap = 0;
        for (const auto& e : expected) {
            if (got_set.count(static_cast<std::uint32_t>(e.index))) ++overlap;
        }
        recall_sum += static_cast<double>(overlap) / 10.0;
    }
    const double recall = recall_sum / queries.size();

    bool exact_ok = true;
    for (std::size_t qi = 0; qi < 10; ++qi) {
        auto got = index.search(queries[qi].data(), 10, index.size());
        auto expected = oracle::exact_knn(vectors, queries[qi], 10);
        for (std::size_t i = 0; i < expected.size(); ++i) {
            if (got[i].item != expected[i].index) exact_ok = false;
        }
    }
    const double elapsed = seconds_since(t0);
    const bool pass = recall >= 0.95 && exact_ok && elapsed < 30.0;
    std::printf("[acceptance]   recall@10=%.4f elapsed=%.1fs\n", recall, elapsed);
    report("C3 ann-recall (>=0.95 @ ef=100, exact @ ef>=n, <30s)", pass);
    CHECK(recall >= 0.95);
    CHECK(exact_ok);
    CHECK(elapsed < 30.0);
}

TEST_CASE("criterion 4: hybrid dominates unimodal retrieval on the mismatch corpus") {
    auto b = fixtures::build_indices(read_file(fixture_path("mismatch_corpus.jsonl")));
    retrieval::Searcher searcher(b.graph, b.lexical, b.vectors, b.embedder);

    auto queries = eval::parse_queries_jsonl(read_file(fixture_path("mismatch_queries.jsonl")));
    auto qrels = eval::parse_qrels_tsv(read_file(fixture_path("mismatch_qrels.tsv")));
    eval::EvalOptions options;
    options.deterministic_timing = true;
    auto rep = eval::run_eval(searcher, b.graph, b.vectors, queries, qrels, options);

    auto ndcg = [&](retrieval::Variant v, const std::string& lang) {
        for (const auto& row : rep.retrieval) {
            if (row.variant == v && row.language == lang) return row.ndcg_at_5;
        }
        FAIL("missing eval row");
        return 0.0;
    };
    bool pass = true;
    for (const auto* lang : {"en", "fr"}) {
        const double hybrid = ndcg(retrieval::Variant::Hybrid, lang);
        const double best_unimodal = std::max(ndcg(retrieval::Variant::Bm25Only, lang),
                                              ndcg(retrieval::Variant::DenseOnly, lang));
        std::printf("[acceptance]   %s hybrid=%.4f bm25=%.4f dense=%.4f\n", lang, hybrid,
                    ndcg(retrieval::Variant::Bm25Only, lang),
                    ndcg(retrieval::Variant::DenseOnly, lang));
        if (hybrid < best_unimodal) pass = false;
    }
    const double hybrid_avg = ndcg(retrieval::Variant::Hybrid, "avg");
    const double best_avg = std::max(ndcg(retrieval::Variant::Bm25Only, "avg"),
                                     ndcg(retrieval::Variant::DenseOnly, "avg"));
    if (!(hybrid_avg > best_avg)) pass = false;
    report("C4 hybrid-dominance (per language >=, pooled strict)", pass);
    CHECK(pass);
}

TEST_CASE("criterion 5: interactive latency on the 10k-document corpus") {
    namespace fs = std::filesystem;
    const auto dir = fs::temp_directory_path() / "skillgraph_latency_acceptance";
    fs::remove_all(dir);
    fs::create_directories(dir);

    auto corpus = synth::generate(10000, 100, 987);
    kg::SkillGraph graph;
    {
        std::istringstream in(corpus.jsonl);
        kg::IngestOptions options;
        options.ingested_at = fixtures::kFixedIngestTime;
        auto summary = graph.ingest(in, options);
        REQUIRE(summary.nodes == 10000);
        REQUIRE(summary.aborted == false);
    }
    graph.save((dir / "snap.json").string());
    {
        lexical::LexicalIndex lex;
        lex.build(graph, {"en", "fr"});
        lex.save_file((dir / "snap.json.lex").string());
        dense::TrigramHashEmbedder embedder;
        dense::VectorIndex vectors;
        vectors.build(graph, embedder, {"en", "fr"});
        vectors.save_file((dir / "snap.json.vec").string());
    }

    service::ServiceConfig config;
    config.snapshot_path = (dir / "snap.json").string();
    auto state = service::ServiceState::load(config);
    service::Server server(state);
    const int port = server.bind_any_port("127.0.0.1");
    std::thread server_thread([&] { server.listen_after_bind(); });
    server.wait_until_ready();

    auto measure = [&](const std::string& variant) {
        httplib::Client client("127.0.0.1", port);
        std::vector<double> samples;
        for (const auto& q : corpus.queries) {
            httplib::Params params{{"q", q.text}, {"lang", q.language}, {"variant", variant}};
            const auto t0 = std::chrono::steady_clock::now();
            auto res = client.Get("/search", params, httplib::Headers{});
            const double ms = std::chrono::duration<double, std::milli>(
                                  std::chrono::steady_clock::now() - t0)
                                  .count();
            REQUIRE(res);
            REQUIRE(res->status == 200);
            samples.push_back(ms);
        }
        return eval::latency_profile(samples);
    };

    auto hybrid = measure("hybrid");
    auto bm25 = measure("bm25");
    server.stop();
    server_thread.join();
    fs::remove_all(dir);

    std::printf("[acceptance]   hybrid median=%.1fms p95=%.1fms ; bm25 median=%.1fms\n",
                hybrid.median_ms, hybrid.p95_ms, bm25.median_ms);
    const bool pass =
        hybrid.median_ms < 200.0 && hybrid.p95_ms < 400.0 && bm25.median_ms < 50.0;
    report("C5 latency-smoke (hybrid <200/<400ms, bm25 <50ms over 100 queries)", pass);
    CHECK(hybrid.median_ms < 200.0);
    CHECK(hybrid.p95_ms < 400.0);
    CHECK(bm25.median_ms < 50.0);
}

TEST_CASE("criterion 6: template explanations are perfectly faithful and fast") {
    auto corpus = synth::generate(200, 0, 31337);
    kg::SkillGraph graph;
    {
        std::istringstream in(corpus.jsonl);
        kg::IngestOptions options;
        options.ingested_at = fixtures::kFixedIngestTime;
        graph.ingest(in, options);
    }
    dense::TrigramHashEmbedder embedder;
    dense::VectorIndex vectors;
    vectors.build(graph, embedder, {"en", "fr"});

    std::vector<explain::EvidenceContext> contexts;
    std::vector<explain::Explanation> explanations;
    for (const auto& [id, node] : graph.nodes()) {
        const std::string lang = node.labels.count("fr") ? "fr" : "en";
        contexts.push_back(
            explain::build_context(graph, vectors, id, lang, explain::Audience::Teacher));
        explanations.push_back(explain::explain_template(contexts.back()));
    }
    REQUIRE(contexts.size() == 200);

    auto metrics = eval::explanation_metrics(explanations, contexts);
    std::printf("[acceptance]   coverage=%.2f citP=%.2f latMedian=%.2fms over %zu contexts\n",
                metrics.coverage, metrics.citation_precision, metrics.latency_median_ms,
                metrics.explanations);
    const bool pass = metrics.coverage == 1.0 && metrics.citation_precision == 1.0 &&
                      metrics.latency_median_ms <= 5.0;
    report("C6 c1-faithfulness (coverage=1.00, citP=1.00, median<=5ms, 200 contexts)", pass);
    CHECK(metrics.coverage == 1.0);
    CHECK(metrics.citation_precision == 1.0);
    CHECK(metrics.latency_median_ms <= 5.0);
}

TEST_CASE("criterion 7: constrained explanation survives 1000 adversarial generations") {
    auto b = fixtures::build_indices(fixtures::kToyGraphJsonl);
    auto ctx = explain::build_context(b.graph, b.vectors, "esco:S1", "en",
                                      explain::Audience::Teacher);
    std::mt19937_64 rng(77);

    auto make_valid = [&]() {
        json sentences = json::array();
        for (int i = 0; i < 3; ++i) {
            json evidence = json::array();
            evidence.push_back(ctx.facts[rng() % ctx.facts.size()].id);
            if (rng() % 2) evidence.push_back(ctx.facts[rng() % ctx.facts.size()].id);
            sentences.push_back({{"text", "Claim " + std::to_string(rng() % 100) + "."},
                                 {"evidence", evidence}});
        }
        return json{{"sentences", sentences}}.dump();
    };
    auto make_invalid = [&]() -> std::string {
        switch (rng() % 6) {
            case 0: return "total junk " + std::to_string(rng());
            case 1: {  // wrong sentence count
                json sentences = json::array();
                const int n = rng() % 2 == 0 ? 2 : 4 + static_cast<int>(rng() % 3);
                for (int i = 0; i < n; ++i) {
                    sentences.push_back(
                        {{"text", "x."}, {"evidence", {ctx.facts[0].id}}});
                }
                return json{{"sentences", sentences}}.dump();
            }
            case 2: {  // foreign id
                json sentences = json::array();
                for (int i = 0; i < 3; ++i) {
                    sentences.push_back(
                        {{"text", "x."},
                         {"evidence", {"ghost:" + std::to_string(rng() % 50)}}});
                }
                return json{{"sentences", sentences}}.dump();
            }
            case 3: {  // zero or three citations
                json sentences = json::array();
                sentences.push_back({{"text", "x."}, {"evidence", json::array()}});
                sentences.push_back({{"text", "y."}, {"evidence", {ctx.facts[0].id}}});
                sentences.push_back(
                    {{"text", "z."},
                     {"evidence", {ctx.facts[0].id, ctx.facts[0].id, ctx.facts[0].id}}});
                return json{{"sentences", sentences}}.dump();
            }
            case 4: {  // empty text
                json sentences = json::array();
                sentences.push_back({{"text", ""}, {"evidence", {ctx.facts[0].id}}});
                sentences.push_back({{"text", "y."}, {"evidence", {ctx.facts[0].id}}});
                sentences.push_back({{"text", "z."}, {"evidence", {ctx.facts[0].id}}});
                return json{{"sentences", sentences}}.dump();
            }
            default: return "{\"sentences\": 7}";
        }
    };

    bool pass = true;
    std::vector<explain::Explanation> accepted;
    std::vector<explain::EvidenceContext> accepted_ctx;
    int fallbacks = 0;
    for (int round = 0; round < 1000; ++round) {
        const bool valid = rng() % 3 == 0;
        const std::string payload = valid ? make_valid() : make_invalid();
        llm::ScriptedGenerator generator(
            [&payload](const std::string&, const std::string&) {
                return std::optional<std::string>(payload);
            });
        auto e = explain::explain_constrained(ctx, generator);

        // Always schema-valid output.
        if (e.sentences.size() != 3) pass = false;
        for (const auto& s : e.sentences) {
            if (s.text.empty() || s.evidence.empty() || s.evidence.size() > 2) pass = false;
            for (const auto& id : s.evidence) {
                if (!ctx.has_fact(id)) pass = false;
            }
        }
        // Fallback exactly when the stub response was invalid.
        if (e.fallback_used != !valid) pass = false;
        if (e.fallback_used) ++fallbacks;
        if (!e.fallback_used) {
            accepted.push_back(e);
            accepted_ctx.push_back(ctx);
        }
    }
    double citp = 1.0;
    if (!accepted.empty()) {
        citp = eval::explanation_metrics(accepted, accepted_ctx).citation_precision;
        if (citp != 1.0) pass = false;
    }
    std::printf("[acceptance]   fallbacks=%d accepted=%zu citP=%.2f\n", fallbacks,
                accepted.size(), citp);
    report("C7 c2-validation-totality (1000 fuzzed responses)", pass);
    CHECK(pass);
}

TEST_CASE("criterion 8: rerank never adds or drops a candidate across 1000 calls") {
    auto b = fixtures::build_indices(fixtures::kToyGraphJsonl);
    std::mt19937_64 rng(31415);

    class Adversary final : public retrieval::RerankerClient {
    public:
        explicit Adversary(std::mt19937_64& rng) : rng_(rng) {}
        std::optional<std::vector<std::string>> order(
            const std::string&,
            const std::vector<retrieval::RerankCandidate>& candidates) override {
            if (rng_() % 10 == 0) return std::nullopt;  // outage
            std::vector<std::string> ids;
            for (const auto& c : candidates) {
                if (rng_() % 4 != 0) ids.push_back(c.id);
            }
            const int injected = static_cast<int>(rng_() % 3);
            for (int i = 0; i < injected; ++i) {
                ids.push_back("alien:" + std::to_string(rng_() % 20));
            }
            if (!ids.empty() && rng_() % 2 == 0) ids.push_back(ids[rng_() % ids.size()]);
            std::shuffle(ids.begin(), ids.end(), rng_);
            return ids;
        }
        std::string name() const override { return "adversary"; }

    private:
        std::mt19937_64& rng_;
    } adversary(rng);

    retrieval::Searcher plain(b.graph, b.lexical, b.vectors, b.embedder);
    retrieval::Searcher reranked(b.graph, b.lexical, b.vectors, b.embedder, &adversary);
    reasoning::GraphReasoner reasoner(b.graph, b.vectors, "en", &adversary);
    reasoning::GraphReasoner plain_reasoner(b.graph, b.vectors);

    const char* queries[] = {"data", "statistics", "programming", "visualization"};
    const char* targets[] = {"esco:S4", "esco:S6", "esco:S2", "esco:A1"};

    bool pass = true;
    for (int round = 0; round < 500 && pass; ++round) {
        // Pool-level comparison: k == rerank_n so truncation hides nothing.
        retrieval::FusionConfig config;
        config.variant = retrieval::Variant::Rerank;
        config.k = config.rerank_n;
        const auto* q = queries[round % 4];
        auto expected = plain.search(q, "en", [&] {
            retrieval::FusionConfig h = config;
            h.variant = retrieval::Variant::Hybrid;
            return h;
        }());
        auto got = reranked.search(q, "en", config);
        std::multiset<std::string> a, e;
        for (const auto& c : got.results) a.insert(c.node_id);
        for (const auto& c : expected.results) e.insert(c.node_id);
        if (a != e) pass = false;
    }
    for (int round = 0; round < 500 && pass; ++round) {
        const auto* target = targets[round % 4];
        auto inferred = plain_reasoner.prerequisites(target, 5);
        if (!inferred.inferred || inferred.items.empty()) continue;
        auto ordered = reasoner.order_candidates_llm(target, inferred);
        std::multiset<std::string> a, e;
        for (const auto& item : ordered.items) a.insert(item.node_id);
        for (const auto& item : inferred.items) e.insert(item.node_id);
        if (a != e) pass = false;
    }
    report("C8 permutation-guarantees (1000 adversarial rerank calls)", pass);
    CHECK(pass);
}

TEST_CASE("criterion 9: metric implementations match references on 1000 cases") {
    std::mt19937_64 rng(271828);
    bool pass = true;
    for (int round = 0; round < 1000 && pass; ++round) {
        std::vector<std::string> ranked;
        std::set<std::string> relevant;
        const int n = 1 + static_cast<int>(rng() % 15);
        for (int i = 0; i < n; ++i) ranked.push_back("d" + std::to_string(rng() % 20));
        std::sort(ranked.begin(), ranked.end());
        ranked.erase(std::unique(ranked.begin(), ranked.end()), ranked.end());
        std::shuffle(ranked.begin(), ranked.end(), rng);
        for (int i = 0; i < static_cast<int>(rng() % 8); ++i) {
            relevant.insert("d" + std::to_string(rng() % 20));
        }
        for (std::size_t k : {std::size_t{3}, std::size_t{5}}) {
            if (std::abs(eval::precision_at_k(ranked, relevant, k) -
                         oracle::precision_reference(ranked, relevant, k)) > 1e-9) {
                pass = false;
            }
        }
        if (std::abs(eval::ndcg_at_k(ranked, relevant, 5) -
                     oracle::ndcg_reference(ranked, relevant, 5)) > 1e-9) {
            pass = false;
        }
        std::vector<double> samples;
        for (int i = 0; i < 1 + static_cast<int>(rng() % 50); ++i) {
            samples.push_back(static_cast<double>(rng() % 10000) / 10.0);
        }
        auto profile = eval::latency_profile(samples);
        if (profile.median_ms != oracle::percentile_reference(samples, 50.0)) pass = false;
        if (profile.p95_ms != oracle::percentile_reference(samples, 95.0)) pass = false;
    }
    const double rank2 = eval::ndcg_at_k({"x", "rel", "y", "z", "w"}, {"rel"}, 5);
    if (std::abs(rank2 - 0.6309) > 1e-4) pass = false;
    std::printf("[acceptance]   single-relevant-at-rank-2 ndcg=%.6f\n", rank2);
    report("C9 metric-oracles (1000 cases @1e-9, rank-2 case @1e-4)", pass);
    CHECK(pass);
}

TEST_CASE("criterion 10: golden responses are byte-stable and the graph validates") {
    namespace fs = std::filesystem;
    const auto dir = fs::temp_directory_path() / "skillgraph_golden_acceptance";
    fs::remove_all(dir);
    fs::create_directories(dir);
    {
        auto graph = fixtures::toy_graph();
        graph.save((dir / "snap.json").string());
    }
    service::ServiceConfig config;
    config.snapshot_path = (dir / "snap.json").string();

    const char* paths[] = {
        "/search?q=data%20analysis&lang=en&k=5",
        "/skill/esco:S1",
        "/prerequisites?id=esco:S1&k=5",
        "/subskills?id=esco:S3&k=5",
        "/explain?id=esco:S1&lang=en&audience=teacher&format=json",
    };

    bool pass = true;
    std::vector<std::string> first_bodies;
    for (int instance = 0; instance < 2; ++instance) {
        auto state = service::ServiceState::load(config);
        service::Server server(state);
        const int port = server.bind_any_port("127.0.0.1");
        std::thread t([&] { server.listen_after_bind(); });
        server.wait_until_ready();
        httplib::Client client("127.0.0.1", port);

        for (std::size_t i = 0; i < std::size(paths); ++i) {
            auto r1 = client.Get(paths[i]);
            auto r2 = client.Get(paths[i]);
            REQUIRE(r1);
            REQUIRE(r2);
            if (r1->status != 200 || r1->body != r2->body) pass = false;
            if (instance == 0) {
                first_bodies.push_back(r1->body);
            } else if (first_bodies[i] != r1->body) {
                pass = false;
            }
            // Ground every id mentioned in the response.
            auto body = json::parse(r1->body, nullptr, false);
            if (!body.is_discarded() && body.contains("results")) {
                for (const auto& item : body["results"]) {
                    auto check = client.Get(("/skill/" + item["id"].get<std::string>()).c_str());
                    if (!check || check->status != 200) pass = false;
                }
            }
            if (!body.is_discarded() && body.contains("items")) {
                for (const auto& item : body["items"]) {
                    auto check = client.Get(("/skill/" + item["id"].get<std::string>()).c_str());
                    if (!check || check->status != 200) pass = false;
                }
            }
        }
        server.stop();
        t.join();
    }
    fs::remove_all(dir);

    // validate_graph flags exactly the planted violations in a corrupted fixture.
    const std::string corrupted =
        "{\"format\":\"skillgraph-snapshot\",\"version\":1,\"nodes\":["
        "{\"id\":\"bad:NOLABEL\",\"kind\":\"skill\",\"labels\":{},\"provenance\":{\"framework\":\"X\",\"version\":\"1\",\"uri\":\"u\",\"ingested_at\":\"2025-01-01T00:00:00Z\"}},"
        "{\"id\":\"bad:UNLINKED\",\"kind\":\"skill\",\"labels\":{\"en\":\"stray\"},\"provenance\":{\"framework\":\"\",\"version\":\"\",\"uri\":\"\",\"ingested_at\":\"2025-01-01T00:00:00Z\"}}],"
        "\"relations\":["
        "{\"from\":\"bad:UNLINKED\",\"to\":\"bad:UNLINKED\",\"relation\":\"related\",\"provenance\":{}},"
        "{\"from\":\"bad:UNLINKED\",\"to\":\"bad:GONE\",\"relation\":\"related\",\"provenance\":{}}],"
        "\"mappings\":[],\"quarantined\":[]}";
    auto bad = kg::SkillGraph::from_snapshot_json(corrupted);
    auto violations = bad.validate();
    auto count = [&](const std::string& code) {
        return std::count_if(violations.begin(), violations.end(),
                             [&](const kg::ConstraintViolation& v) { return v.code == code; });
    };
    if (count("missing-label") != 1 || count("self-loop") != 1 || count("dangling-edge") != 1 ||
        count("constraint:framework-or-occupation") != 1 || violations.size() != 4) {
        pass = false;
    }
    // The clean fixture graph reports nothing.
    if (!fixtures::toy_graph().validate().empty()) pass = false;

    report("C10 graph-api-integrity (byte-stable goldens, grounded ids, planted violations)",
           pass);
    CHECK(pass);
}

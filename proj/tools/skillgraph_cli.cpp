#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "skillgraph/config.hpp"
#include "skillgraph/errors.hpp"
#include "skillgraph/eval_harness.hpp"
#include "skillgraph/http_clients.hpp"
#include "skillgraph/server.hpp"

namespace {

using nlohmann::json;
namespace sg = skillgraph;

void print_error(const std::string& stage, const std::string& message) {
    json j;
    j["error"] = message;
    j["stage"] = stage;
    std::cerr << j.dump() << "\n";
}

int cmd_ingest(const std::string& input, const std::string& snapshot, bool strict,
               long ingested_at) {
    sg::kg::SkillGraph graph;
    if (std::filesystem::exists(snapshot)) {
        graph = sg::kg::SkillGraph::load(snapshot);
    }
    std::ifstream in(input);
    if (!in) {
        print_error("ingest", "cannot read input file: " + input);
        return 1;
    }
    sg::kg::IngestOptions options;
    options.policy =
        strict ? sg::kg::ValidationPolicy::Strict : sg::kg::ValidationPolicy::Lenient;
    options.ingested_at = ingested_at;
    auto summary = graph.ingest(in, options);
    if (summary.aborted) {
        print_error("ingest", "batch aborted: " + summary.abort_reason);
        std::cerr << summary.to_json() << "\n";
        return 2;
    }
    graph.save(snapshot);
    std::cout << summary.to_json() << "\n";
    return 0;
}

int cmd_index(const std::string& snapshot, const std::vector<std::string>& langs,
              const std::string& embedder_endpoint, const sg::dense::HnswParams& hnsw) {
    auto graph = sg::kg::SkillGraph::load(snapshot);

    sg::lexical::LexicalIndex lex;
    lex.build(graph, langs);
    lex.save_file(snapshot + ".lex");

    std::unique_ptr<sg::dense::Embedder> embedder;
    if (embedder_endpoint.empty()) {
        embedder = std::make_unique<sg::dense::TrigramHashEmbedder>();
    } else {
        embedder = std::make_unique<sg::llm::HttpEmbedder>(embedder_endpoint);
    }
    sg::dense::VectorIndex vectors;
    vectors.params = hnsw;
    vectors.build(graph, *embedder, langs);
    vectors.save_file(snapshot + ".vec");

    json j;
    j["snapshot"] = snapshot;
    j["lexical_index"] = snapshot + ".lex";
    j["vector_index"] = snapshot + ".vec";
    j["languages"] = langs;
    for (const auto& lang : langs) {
        if (auto stats = lex.stats(lang)) {
            j["docs"][lang] = stats->docs;
        }
        j["vectors"][lang] = vectors.size(lang);
    }
    std::cout << j.dump() << "\n";
    return 0;
}

int cmd_serve(const std::string& config_path) {
    auto config = config_path.empty() ? sg::service::ServiceConfig{}
                                      : sg::service::ServiceConfig::from_file(config_path);
    auto state = sg::service::ServiceState::load(config);
    sg::service::Server server(state);
    std::cout << "listening on http://" << config.listen_address << ":" << config.listen_port
              << " (snapshot: " << config.snapshot_path
              << ", nodes: " << state->graph.node_count() << ")" << std::endl;
    if (!server.listen(config.listen_address, config.listen_port)) {
        print_error("serve", "failed to bind " + config.listen_address + ":" +
                                 std::to_string(config.listen_port));
        return 1;
    }
    return 0;
}

int cmd_eval(const std::string& snapshot, const std::string& queries_path,
             const std::string& qrels_path, const std::vector<std::string>& variant_names,
             const std::vector<std::string>& mode_names, const std::string& out_dir,
             double alpha, std::size_t k, const std::string& generator_spec,
             bool deterministic_timing, const std::vector<std::string>& langs) {
    sg::service::ServiceConfig config;
    config.snapshot_path = snapshot;
    config.languages = langs;
    config.fusion.alpha = alpha;
    config.fusion.k = k;
    auto state = sg::service::ServiceState::load(config);

    sg::eval::EvalOptions options;
    options.fusion = config.fusion;
    options.deterministic_timing = deterministic_timing;
    options.out_dir = out_dir;
    options.variants.clear();
    for (const auto& name : variant_names) {
        auto v = sg::retrieval::parse_variant(name);
        if (!v) {
            print_error("eval", "unknown variant: " + name);
            return 1;
        }
        options.variants.push_back(*v);
    }
    for (const auto& name : mode_names) {
        if (name == "c1" || name == "C1") options.modes.push_back(sg::explain::Mode::C1);
        else if (name == "c2" || name == "C2") options.modes.push_back(sg::explain::Mode::C2);
        else if (name == "c3" || name == "C3") options.modes.push_back(sg::explain::Mode::C3);
        else {
            print_error("eval", "unknown explanation mode: " + name);
            return 1;
        }
    }

    std::unique_ptr<sg::llm::GeneratorClient> generator;
    if (generator_spec == "stub") {
        generator =
            std::make_unique<sg::llm::ScriptedGenerator>(sg::explain::faithful_stub_handler());
    } else if (!generator_spec.empty() && generator_spec != "none") {
        generator = std::make_unique<sg::llm::HttpGenerator>(generator_spec);
    }

    auto queries = sg::eval::load_queries_jsonl(queries_path);
    auto qrels = sg::eval::load_qrels_tsv(qrels_path);
    auto report = sg::eval::run_eval(*state->searcher, state->graph, state->vectors, queries,
                                     qrels, options, generator.get());
    std::cout << report.to_text_table();
    if (!out_dir.empty()) {
        std::cout << "\nreports written to " << out_dir << "\n";
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"skillgraph: provenance-preserving skill knowledge graph service"};
    app.require_subcommand(1);

    // ingest
    auto* ingest = app.add_subcommand("ingest", "ingest JSONL records into a graph snapshot");
    std::string ingest_input;
    std::string ingest_snapshot = "snapshot.json";
    bool ingest_strict = false;
    long ingested_at = -1;
    ingest->add_option("input", ingest_input, "JSONL file of skill records")->required();
    ingest->add_option("--snapshot", ingest_snapshot, "snapshot file to create or extend");
    ingest->add_flag("--strict", ingest_strict, "abort the batch on dangling edge endpoints");
    ingest->add_option("--ingested-at", ingested_at,
                       "fix the ingest timestamp (epoch seconds) for reproducible snapshots");

    // index
    auto* index = app.add_subcommand("index", "build lexical and vector indices for a snapshot");
    std::string index_snapshot = "snapshot.json";
    std::vector<std::string> index_langs{"en", "fr"};
    std::string index_embedder;
    sg::dense::HnswParams hnsw;
    index->add_option("--snapshot", index_snapshot, "snapshot file");
    index->add_option("--langs", index_langs, "languages to index")->delimiter(',');
    index->add_option("--embedder", index_embedder,
                      "embedding service endpoint (default: built-in fallback embedder)");
    index->add_option("--hnsw-m", hnsw.m, "HNSW graph degree");
    index->add_option("--hnsw-ef-construction", hnsw.ef_construction, "HNSW build beam");
    index->add_option("--hnsw-seed", hnsw.seed, "HNSW level RNG seed");

    // serve
    auto* serve = app.add_subcommand("serve", "serve the REST API over a snapshot");
    std::string serve_config;
    serve->add_option("--config", serve_config, "key=value config file");

    // eval
    auto* eval = app.add_subcommand("eval", "run the retrieval/explanation evaluation harness");
    std::string eval_snapshot = "snapshot.json";
    std::string eval_queries;
    std::string eval_qrels;
    std::vector<std::string> eval_variants{"bm25", "dense", "hybrid"};
    std::vector<std::string> eval_modes;
    std::string eval_out;
    double eval_alpha = 0.5;
    std::size_t eval_k = 5;
    std::string eval_generator = "stub";
    bool eval_det = false;
    std::vector<std::string> eval_langs{"en", "fr"};
    eval->add_option("--snapshot", eval_snapshot, "snapshot file");
    eval->add_option("--queries", eval_queries, "JSONL query file")->required();
    eval->add_option("--qrels", eval_qrels, "TSV relevance judgments")->required();
    eval->add_option("--variants", eval_variants, "retrieval variants to run")->delimiter(',');
    eval->add_option("--modes", eval_modes, "explanation modes to run (c1,c2,c3)")
        ->delimiter(',');
    eval->add_option("--out", eval_out, "directory for CSV/JSON/text reports");
    eval->add_option("--alpha", eval_alpha, "fusion weight alpha");
    eval->add_option("--k", eval_k, "result count per query");
    eval->add_option("--generator", eval_generator,
                     "generator for C2/C3: 'stub', 'none' or an endpoint URL");
    eval->add_flag("--deterministic-timing", eval_det,
                   "suppress wall-clock numbers so reports are byte-stable");
    eval->add_option("--langs", eval_langs, "languages to index")->delimiter(',');

    CLI11_PARSE(app, argc, argv);

    try {
        if (*ingest) {
            return cmd_ingest(ingest_input, ingest_snapshot, ingest_strict, ingested_at);
        }
        if (*index) {
            return cmd_index(index_snapshot, index_langs, index_embedder, hnsw);
        }
        if (*serve) {
            return cmd_serve(serve_config);
        }
        if (*eval) {
            return cmd_eval(eval_snapshot, eval_queries, eval_qrels, eval_variants, eval_modes,
                            eval_out, eval_alpha, eval_k, eval_generator, eval_det, eval_langs);
        }
    } catch (const std::exception& e) {
        print_error(app.get_subcommands().empty() ? "cli"
                                                  : app.get_subcommands().front()->get_name(),
                    e.what());
        return 1;
    }
    return 0;
}

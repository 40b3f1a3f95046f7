#pragma once

#include <string>
#include <vector>

#include "skillgraph/fusion.hpp"
#include "skillgraph/hnsw.hpp"

namespace skillgraph::service {

// Declarative key=value configuration. Every field has a default that keeps
// the service fully offline: fallback embedder, no generator (C1-only
// explanations), no ranker.
struct ServiceConfig {
    std::string snapshot_path = "snapshot.json";
    std::string lexical_index_path;  // default: <snapshot>.lex
    std::string vector_index_path;   // default: <snapshot>.vec

    std::string listen_address = "127.0.0.1";
    int listen_port = 8080;

    std::string default_language = "en";
    std::vector<std::string> languages{"en", "fr"};

    retrieval::FusionConfig fusion;
    dense::HnswParams hnsw;

    std::string embedder_mode = "fallback";  // fallback | external
    std::string embedder_endpoint;
    int embedder_timeout_ms = 2000;

    std::string generator_endpoint;  // empty: C1-only
    int generator_deadline_ms = 10000;
    int generator_max_tokens = 512;

    std::string ranker_endpoint;  // empty: no re-ranking
    int ranker_timeout_ms = 2000;

    bool enable_freeform = false;

    std::string lexical_path() const {
        return lexical_index_path.empty() ? snapshot_path + ".lex" : lexical_index_path;
    }
    std::string vector_path() const {
        return vector_index_path.empty() ? snapshot_path + ".vec" : vector_index_path;
    }

    // `key = value` lines, # comments. Unknown keys raise ConfigError.
    static ServiceConfig from_string(const std::string& content);
    static ServiceConfig from_file(const std::string& path);
    std::string to_string() const;
};

}  // namespace skillgraph::service

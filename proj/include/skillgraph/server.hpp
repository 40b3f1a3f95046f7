#pragma once

#include <memory>
#include <string>

#include "skillgraph/config.hpp"
#include "skillgraph/eval_harness.hpp"
#include "skillgraph/explanation.hpp"
#include "skillgraph/reasoning.hpp"
#include "skillgraph/searcher.hpp"

namespace skillgraph::service {

// Everything a request needs, loaded once and treated as immutable. Reload
// means building a fresh state and swapping the shared_ptr; in-flight
// requests finish on the old instance.
struct ServiceState {
    ServiceConfig config;
    kg::SkillGraph graph;
    lexical::LexicalIndex lexical;
    dense::VectorIndex vectors;
    std::unique_ptr<dense::Embedder> embedder;
    std::unique_ptr<retrieval::RerankerClient> ranker;    // null unless configured
    std::unique_ptr<llm::GeneratorClient> generator;      // null: C1-only
    std::unique_ptr<retrieval::Searcher> searcher;
    std::unique_ptr<reasoning::GraphReasoner> reasoner;

    // Loads the snapshot and sidecar indices, building any missing index
    // in-process from the graph.
    static std::shared_ptr<const ServiceState> load(const ServiceConfig& config);
};

class Server {
public:
    explicit Server(std::shared_ptr<const ServiceState> state);
    ~Server();
    Server(const Server&) = delete;
    Server& operator=(const Server&) = delete;

    // Blocking listen on a fixed address/port.
    bool listen(const std::string& address, int port);
    // Test support: bind an ephemeral port, then listen on a caller thread.
    int bind_any_port(const std::string& address);
    bool listen_after_bind();
    void wait_until_ready() const;
    void stop();

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

}  // namespace skillgraph::service

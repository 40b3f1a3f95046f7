#pragma once

#include <string>

#include "skillgraph/embedder.hpp"
#include "skillgraph/generator.hpp"
#include "skillgraph/searcher.hpp"

namespace skillgraph::llm {

struct ParsedUrl {
    std::string host;
    int port = 80;
    std::string path = "/";
};

// http://host:port/path only; the deployments this targets sit behind
// in-cluster plaintext endpoints.
ParsedUrl parse_http_url(const std::string& url);

// POST {texts:[str], lang:str} -> {vectors:[[f32;768]]}. Retries transport
// failures with exponential backoff, then throws RemoteServiceError; a wrong
// dimension in the response throws immediately.
class HttpEmbedder final : public dense::Embedder {
public:
    HttpEmbedder(std::string endpoint, int timeout_ms = 2000, int max_attempts = 3);
    std::vector<std::vector<float>> embed(const std::vector<std::string>& texts,
                                          std::string_view language) override;
    std::string name() const override { return "http:" + endpoint_; }

private:
    std::string endpoint_;
    int timeout_ms_;
    int max_attempts_;
};

// POST {query:str, candidates:[{id,label,snippet}]} -> {order:[id]}.
class HttpReranker final : public retrieval::RerankerClient {
public:
    HttpReranker(std::string endpoint, int timeout_ms = 2000);
    std::optional<std::vector<std::string>> order(
        const std::string& query,
        const std::vector<retrieval::RerankCandidate>& candidates) override;
    std::string name() const override { return "http:" + endpoint_; }

private:
    std::string endpoint_;
    int timeout_ms_;
};

// POST {system:str, user:str, max_tokens:int} -> {text:str}.
class HttpGenerator final : public GeneratorClient {
public:
    HttpGenerator(std::string endpoint, int deadline_ms = 10000);
    std::optional<std::string> generate(const std::string& system, const std::string& user,
                                        int max_tokens) override;
    std::string name() const override { return "http:" + endpoint_; }

private:
    std::string endpoint_;
    int deadline_ms_;
};

}  // namespace skillgraph::llm

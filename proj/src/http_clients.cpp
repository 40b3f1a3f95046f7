#include "skillgraph/http_clients.hpp"

#include <chrono>
#include <thread>

#include <httplib.h>
#include <json.hpp>

#include "skillgraph/errors.hpp"

namespace skillgraph::llm {

using nlohmann::json;

ParsedUrl parse_http_url(const std::string& url) {
    ParsedUrl out;
    std::string rest = url;
    const std::string scheme = "http://";
    if (rest.rfind(scheme, 0) == 0) {
        rest = rest.substr(scheme.size());
    } else if (rest.rfind("https://", 0) == 0) {
        throw ConfigError("https endpoints are not supported: " + url);
    }
    const auto slash = rest.find('/');
    std::string authority = slash == std::string::npos ? rest : rest.substr(0, slash);
    out.path = slash == std::string::npos ? "/" : rest.substr(slash);
    const auto colon = authority.find(':');
    if (colon == std::string::npos) {
        out.host = authority;
    } else {
        out.host = authority.substr(0, colon);
        try {
            out.port = std::stoi(authority.substr(colon + 1));
        } catch (const std::exception&) {
            throw ConfigError("bad port in endpoint: " + url);
        }
    }
    if (out.host.empty()) {
        throw ConfigError("bad endpoint url: " + url);
    }
    return out;
}

namespace {

httplib::Client make_client(const ParsedUrl& url, int timeout_ms) {
    httplib::Client client(url.host, url.port);
    client.set_connection_timeout(0, timeout_ms * 1000);
    client.set_read_timeout(timeout_ms / 1000, (timeout_ms % 1000) * 1000);
    client.set_write_timeout(timeout_ms / 1000, (timeout_ms % 1000) * 1000);
    return client;
}

}  // namespace

HttpEmbedder::HttpEmbedder(std::string endpoint, int timeout_ms, int max_attempts)
    : endpoint_(std::move(endpoint)), timeout_ms_(timeout_ms), max_attempts_(max_attempts) {}

std::vector<std::vector<float>> HttpEmbedder::embed(const std::vector<std::string>& texts,
                                                    std::string_view language) {
    const auto url = parse_http_url(endpoint_);
    json body;
    body["texts"] = texts;
    body["lang"] = std::string(language);
    const std::string payload = body.dump();

    int backoff_ms = 100;
    for (int attempt = 1; attempt <= max_attempts_; ++attempt) {
        auto client = make_client(url, timeout_ms_);
        auto res = client.Post(url.path, payload, "application/json");
        if (!res || res->status != 200) {
            if (attempt == max_attempts_) {
                throw RemoteServiceError("embedding service unreachable: " + endpoint_);
            }
            std::this_thread::sleep_for(std::chrono::milliseconds(backoff_ms));
            backoff_ms *= 2;
            continue;
        }
        json j = json::parse(res->body, nullptr, false);
        if (j.is_discarded() || !j.contains("vectors") || !j["vectors"].is_array() ||
            j["vectors"].size() != texts.size()) {
            throw RemoteServiceError("embedding service returned a malformed response");
        }
        std::vector<std::vector<float>> out;
        out.reserve(texts.size());
        for (const auto& v : j["vectors"]) {
            if (!v.is_array() || v.size() != dense::kEmbeddingDim) {
                throw RemoteServiceError("embedding service returned wrong dimension");
            }
            std::vector<float> vec;
            vec.reserve(dense::kEmbeddingDim);
            for (const auto& x : v) {
                vec.push_back(x.get<float>());
            }
            dense::l2_normalize(vec);
            out.push_back(std::move(vec));
        }
        return out;
    }
    throw RemoteServiceError("embedding service unreachable: " + endpoint_);
}

HttpReranker::HttpReranker(std::string endpoint, int timeout_ms)
    : endpoint_(std::move(endpoint)), timeout_ms_(timeout_ms) {}

std::optional<std::vector<std::string>> HttpReranker::order(
    const std::string& query, const std::vector<retrieval::RerankCandidate>& candidates) {
    try {
        const auto url = parse_http_url(endpoint_);
        json body;
        body["query"] = query;
        body["candidates"] = json::array();
        for (const auto& c : candidates) {
            body["candidates"].push_back(
                {{"id", c.id}, {"label", c.label}, {"snippet", c.snippet}});
        }
        auto client = make_client(url, timeout_ms_);
        auto res = client.Post(url.path, body.dump(), "application/json");
        if (!res || res->status != 200) {
            return std::nullopt;
        }
        json j = json::parse(res->body, nullptr, false);
        if (j.is_discarded() || !j.contains("order") || !j["order"].is_array()) {
            return std::nullopt;
        }
        std::vector<std::string> out;
        out.reserve(j["order"].size());
        for (const auto& id : j["order"]) {
            if (!id.is_string()) return std::nullopt;
            out.push_back(id.get<std::string>());
        }
        return out;
    } catch (const std::exception&) {
        return std::nullopt;
    }
}

HttpGenerator::HttpGenerator(std::string endpoint, int deadline_ms)
    : endpoint_(std::move(endpoint)), deadline_ms_(deadline_ms) {}

std::optional<std::string> HttpGenerator::generate(const std::string& system,
                                                   const std::string& user, int max_tokens) {
    try {
        const auto url = parse_http_url(endpoint_);
        json body;
        body["system"] = system;
        body["user"] = user;
        body["max_tokens"] = max_tokens;
        auto client = make_client(url, deadline_ms_);
        auto res = client.Post(url.path, body.dump(), "application/json");
        if (!res || res->status != 200) {
            return std::nullopt;
        }
        json j = json::parse(res->body, nullptr, false);
        if (j.is_discarded() || !j.contains("text") || !j["text"].is_string()) {
            return std::nullopt;
        }
        return j["text"].get<std::string>();
    } catch (const std::exception&) {
        return std::nullopt;
    }
}

}  // namespace skillgraph::llm

#include "skillgraph/server.hpp"

#include <chrono>
#include <filesystem>

#include <httplib.h>
#include <json.hpp>

#include "skillgraph/errors.hpp"
#include "skillgraph/http_clients.hpp"

namespace skillgraph::service {

using nlohmann::json;

std::shared_ptr<const ServiceState> ServiceState::load(const ServiceConfig& config) {
    auto state = std::make_shared<ServiceState>();
    state->config = config;
    state->graph = kg::SkillGraph::load(config.snapshot_path);

    if (config.embedder_mode == "external") {
        state->embedder = std::make_unique<llm::HttpEmbedder>(config.embedder_endpoint,
                                                              config.embedder_timeout_ms);
    } else {
        state->embedder = std::make_unique<dense::TrigramHashEmbedder>();
    }

    if (std::filesystem::exists(config.lexical_path())) {
        state->lexical = lexical::LexicalIndex::load_file(config.lexical_path());
    } else {
        state->lexical.build(state->graph, config.languages);
    }
    if (std::filesystem::exists(config.vector_path())) {
        state->vectors = dense::VectorIndex::load_file(config.vector_path());
    } else {
        state->vectors.params = config.hnsw;
        state->vectors.build(state->graph, *state->embedder, config.languages);
    }

    if (!config.ranker_endpoint.empty()) {
        state->ranker =
            std::make_unique<llm::HttpReranker>(config.ranker_endpoint, config.ranker_timeout_ms);
    }
    if (!config.generator_endpoint.empty()) {
        state->generator = std::make_unique<llm::HttpGenerator>(config.generator_endpoint,
                                                                config.generator_deadline_ms);
    }
    state->searcher = std::make_unique<retrieval::Searcher>(
        state->graph, state->lexical, state->vectors, *state->embedder, state->ranker.get());
    state->reasoner = std::make_unique<reasoning::GraphReasoner>(
        state->graph, state->vectors, config.default_language, state->ranker.get());
    return state;
}

namespace {

void reply_json(httplib::Response& res, int status, const json& body) {
    res.status = status;
    res.set_content(body.dump(), "application/json");
}

void reply_error(httplib::Response& res, int status, const std::string& message) {
    reply_json(res, status, json{{"error", message}});
}

json node_to_json(const kg::SkillNode& node) {
    json n;
    n["id"] = node.id;
    n["kind"] = std::string(kg::to_string(node.kind));
    n["labels"] = node.labels;
    n["alt_labels"] = node.alt_labels;
    n["descriptions"] = node.descriptions;
    n["provenance"] = {{"framework", node.provenance.framework},
                       {"version", node.provenance.version},
                       {"uri", node.provenance.uri},
                       {"ingested_at", kg::iso8601_utc(node.provenance.ingested_at)}};
    return n;
}

struct TimedReply {
    httplib::Response& res;
    std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
    ~TimedReply() {
        const auto ms = std::chrono::duration<double, std::milli>(
                            std::chrono::steady_clock::now() - t0)
                            .count();
        char buf[32];
        std::snprintf(buf, sizeof(buf), "%.2f", ms);
        res.set_header("X-Response-Time-Ms", buf);
    }
};

std::optional<long> parse_long(const std::string& s) {
    try {
        std::size_t used = 0;
        const long v = std::stol(s, &used);
        if (used != s.size()) return std::nullopt;
        return v;
    } catch (const std::exception&) {
        return std::nullopt;
    }
}

std::optional<double> parse_double(const std::string& s) {
    try {
        std::size_t used = 0;
        const double v = std::stod(s, &used);
        if (used != s.size()) return std::nullopt;
        return v;
    } catch (const std::exception&) {
        return std::nullopt;
    }
}

}  // namespace

struct Server::Impl {
    std::shared_ptr<const ServiceState> state;
    httplib::Server http;

    explicit Impl(std::shared_ptr<const ServiceState> s) : state(std::move(s)) {
        register_routes();
    }

    void register_routes() {
        http.Get("/search", [this](const httplib::Request& req, httplib::Response& res) {
            TimedReply timed{res};
            const auto& st = *state;
            const std::string q = req.get_param_value("q");
            if (q.empty()) {
                return reply_error(res, 400, "missing or empty query parameter 'q'");
            }
            const std::string lang =
                req.has_param("lang") ? req.get_param_value("lang") : st.config.default_language;

            retrieval::FusionConfig config = st.config.fusion;
            if (req.has_param("k")) {
                auto k = parse_long(req.get_param_value("k"));
                if (!k || *k < 1) {
                    return reply_error(res, 422, "parameter 'k' must be a positive integer");
                }
                config.k = static_cast<std::size_t>(*k);
            }
            if (req.has_param("variant")) {
                auto v = retrieval::parse_variant(req.get_param_value("variant"));
                if (!v) {
                    return reply_error(res, 422, "unknown variant '" +
                                                     req.get_param_value("variant") + "'");
                }
                config.variant = *v;
            }
            if (req.has_param("alpha")) {
                auto a = parse_double(req.get_param_value("alpha"));
                if (!a || *a < 0.0 || *a > 1.0) {
                    return reply_error(res, 422, "parameter 'alpha' must be in [0, 1]");
                }
                config.alpha = *a;
            }
            config.pool_lex = std::max(config.pool_lex, config.k);
            config.pool_sem = std::max(config.pool_sem, config.k);
            config.rerank_n = std::max(config.rerank_n, config.k);

            retrieval::SearchResponse response;
            try {
                response = st.searcher->search(q, lang, config);
            } catch (const std::invalid_argument& e) {
                return reply_error(res, 422, e.what());
            }

            json body;
            body["query"] = {{"q", q},
                             {"lang", lang},
                             {"k", config.k},
                             {"variant", std::string(to_string(config.variant))},
                             {"alpha", config.alpha}};
            json flags;
            flags["analyzer_fallback"] = response.analyzer_fallback;
            flags["semantic_language_missing"] = response.semantic_language_missing;
            if (response.lexical_stage) {
                flags["lexical_stage"] = std::string(lexical::to_string(*response.lexical_stage));
            }
            if (config.variant == retrieval::Variant::Rerank) {
                flags["rerank_skipped"] = response.rerank_skipped;
                flags["rerank_violation"] = response.rerank_violation;
            }
            body["flags"] = std::move(flags);
            body["results"] = json::array();
            for (const auto& c : response.results) {
                json item;
                item["id"] = c.node_id;
                const auto* node = st.graph.node(c.node_id);
                auto [label_lang, label] =
                    node ? node->label_in(lang) : std::pair<std::string, std::string>{"", ""};
                item["label"] = label;
                item["label_lang"] = label_lang;
                item["s_final"] = c.s_final;
                item["s_lex_raw"] = c.s_lex_raw ? json(*c.s_lex_raw) : json(nullptr);
                item["s_lex_norm"] = c.s_lex_norm;
                item["s_sem_raw"] = c.s_sem_raw ? json(*c.s_sem_raw) : json(nullptr);
                item["s_sem_norm"] = c.s_sem_norm;
                item["source_tag"] = std::string(to_string(c.source_tag));
                body["results"].push_back(std::move(item));
            }
            reply_json(res, 200, body);
        });

        http.Get(R"(/skill/(.+))", [this](const httplib::Request& req, httplib::Response& res) {
            TimedReply timed{res};
            const std::string id = req.matches[1];
            const auto* node = state->graph.node(id);
            if (!node) {
                return reply_error(res, 404, "unknown skill id: " + id);
            }
            reply_json(res, 200, node_to_json(*node));
        });

        auto structural = [this](const httplib::Request& req, httplib::Response& res,
                                 bool subskills) {
            TimedReply timed{res};
            if (!req.has_param("id")) {
                return reply_error(res, 400, "missing parameter 'id'");
            }
            const std::string id = req.get_param_value("id");
            std::size_t k = 5;
            if (req.has_param("k")) {
                auto kv = parse_long(req.get_param_value("k"));
                if (!kv || *kv < 1) {
                    return reply_error(res, 422, "parameter 'k' must be a positive integer");
                }
                k = static_cast<std::size_t>(*kv);
            }
            reasoning::StructuralAnswer answer;
            try {
                answer = subskills ? state->reasoner->subskills(id, k)
                                   : state->reasoner->prerequisites(id, k);
            } catch (const NotFoundError& e) {
                return reply_error(res, 404, e.what());
            }
            json body;
            body["target"] = answer.target_id;
            json flags;
            flags["inferred"] = answer.inferred;
            flags["ranker_applied"] = answer.ranker_applied;
            flags["ranker_skipped"] = answer.ranker_skipped;
            flags["ranker_violation"] = answer.ranker_violation;
            if (subskills) {
                flags["narrower_as_subskill"] = answer.narrower_as_subskill;
            }
            body["flags"] = std::move(flags);
            body["items"] = json::array();
            for (const auto& item : answer.items) {
                const auto* node = state->graph.node(item.node_id);
                body["items"].push_back(
                    {{"id", item.node_id},
                     {"label",
                      node ? node->label_in(state->config.default_language).second : ""},
                     {"score", item.score},
                     {"source_tag", std::string(to_string(item.tag))}});
            }
            reply_json(res, 200, body);
        };
        http.Get("/prerequisites", [structural](const httplib::Request& req,
                                                httplib::Response& res) {
            structural(req, res, false);
        });
        http.Get("/subskills",
                 [structural](const httplib::Request& req, httplib::Response& res) {
                     structural(req, res, true);
                 });

        http.Get("/explain", [this](const httplib::Request& req, httplib::Response& res) {
            TimedReply timed{res};
            const auto& st = *state;
            if (!req.has_param("id")) {
                return reply_error(res, 400, "missing parameter 'id'");
            }
            const std::string id = req.get_param_value("id");
            const std::string lang =
                req.has_param("lang") ? req.get_param_value("lang") : st.config.default_language;
            auto audience = explain::Audience::Teacher;
            if (req.has_param("audience")) {
                auto a = explain::parse_audience(req.get_param_value("audience"));
                if (!a) {
                    return reply_error(res, 422, "audience must be 'teacher' or 'learner'");
                }
                audience = *a;
            }
            std::string format = req.has_param("format") ? req.get_param_value("format") : "text";
            if (format != "text" && format != "json") {
                return reply_error(res, 422, "format must be 'text' or 'json'");
            }
            // Mode is config-selected: C2 when a generator is configured,
            // otherwise C1. An explicit mode=c3 is honored only when freeform
            // is enabled.
            std::string mode = req.has_param("mode") ? req.get_param_value("mode") : "";
            for (auto& c : mode) c = static_cast<char>(std::tolower(c));
            if (!mode.empty() && mode != "c1" && mode != "c2" && mode != "c3") {
                return reply_error(res, 422, "mode must be one of c1, c2, c3");
            }
            if (mode.empty()) {
                mode = st.generator ? "c2" : "c1";
            }

            explain::EvidenceContext ctx;
            try {
                ctx = explain::build_context(st.graph, st.vectors, id, lang, audience);
            } catch (const NotFoundError& e) {
                return reply_error(res, 404, e.what());
            }

            explain::Explanation result;
            if (mode == "c3") {
                if (!st.config.enable_freeform) {
                    return reply_error(res, 403, "freeform explanations are disabled");
                }
                if (!st.generator) {
                    return reply_error(res, 502, "no generator configured");
                }
                try {
                    result = explain::explain_freeform(ctx, *st.generator, true,
                                                       st.config.generator_max_tokens);
                } catch (const RemoteServiceError& e) {
                    return reply_error(res, 502, e.what());
                }
            } else if (mode == "c2" && st.generator) {
                result = explain::explain_constrained(ctx, *st.generator,
                                                      st.config.generator_max_tokens);
            } else {
                result = explain::explain_template(ctx);
            }

            if (format == "text") {
                res.status = 200;
                res.set_content(explain::render_text(result), "text/plain; charset=utf-8");
                return;
            }
            json body;
            body["id"] = id;
            body["language"] = lang;
            body["audience"] = std::string(explain::to_string(audience));
            body["mode"] = std::string(explain::to_string(result.mode));
            if (result.fallback_used) {
                body["fallback_used"] = true;
            }
            body["sentences"] = json::array();
            for (const auto& s : result.sentences) {
                body["sentences"].push_back({{"text", s.text}, {"evidence", s.evidence}});
            }
            reply_json(res, 200, body);
        });
    }
};

Server::Server(std::shared_ptr<const ServiceState> state)
    : impl_(std::make_unique<Impl>(std::move(state))) {}

Server::~Server() {
    stop();
}

bool Server::listen(const std::string& address, int port) {
    return impl_->http.listen(address, port);
}

int Server::bind_any_port(const std::string& address) {
    return impl_->http.bind_to_any_port(address);
}

bool Server::listen_after_bind() {
    return impl_->http.listen_after_bind();
}

void Server::wait_until_ready() const {
    impl_->http.wait_until_ready();
}

void Server::stop() {
    if (impl_ && impl_->http.is_running()) {
        impl_->http.stop();
    }
}

}  // namespace skillgraph::service

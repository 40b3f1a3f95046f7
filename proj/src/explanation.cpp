#include "skillgraph/explanation.hpp"

#include <algorithm>
#include <chrono>
#include <set>

#include <json.hpp>

#include "skillgraph/errors.hpp"
#include "skillgraph/reasoning.hpp"

namespace skillgraph::explain {

using nlohmann::json;

namespace {

std::int64_t now_ms() {
    return std::chrono::duration_cast<std::chrono::milliseconds>(
               std::chrono::steady_clock::now().time_since_epoch())
        .count();
}

bool is_french(const std::string& language) {
    return language.size() >= 2 && (language[0] == 'f' || language[0] == 'F') &&
           (language[1] == 'r' || language[1] == 'R');
}

std::string relation_phrase(kg::RelationKind kind, bool french) {
    switch (kind) {
        case kg::RelationKind::Broader:
            return french ? "a pour concept plus large" : "has broader concept";
        case kg::RelationKind::Narrower:
            return french ? "a pour concept plus restreint" : "has narrower concept";
        case kg::RelationKind::Related:
            return french ? "est lié à" : "is related to";
        case kg::RelationKind::HasPrerequisite:
            return french ? "a pour prérequis" : "has prerequisite";
        case kg::RelationKind::HasSubSkill:
            return french ? "a pour sous-compétence" : "has sub-skill";
        case kg::RelationKind::IsRelevantForOccupation:
            return french ? "est pertinent pour le métier" : "is relevant for occupation";
        case kg::RelationKind::IsAssessedBy:
            return french ? "est évalué par" : "is assessed by";
    }
    return french ? "est lié à" : "is related to";
}

}  // namespace

std::string_view to_string(Mode mode) {
    switch (mode) {
        case Mode::C1: return "C1";
        case Mode::C2: return "C2";
        case Mode::C3: return "C3";
    }
    return "C1";
}

std::string_view to_string(Audience audience) {
    return audience == Audience::Teacher ? "teacher" : "learner";
}

std::optional<Audience> parse_audience(std::string_view s) {
    std::string q;
    for (char c : s) q.push_back(c >= 'A' && c <= 'Z' ? static_cast<char>(c + 0x20) : c);
    if (q == "teacher") return Audience::Teacher;
    if (q == "learner") return Audience::Learner;
    return std::nullopt;
}

bool EvidenceContext::has_fact(std::string_view id) const {
    return std::any_of(facts.begin(), facts.end(),
                       [&](const EvidenceFact& f) { return f.id == id; });
}

EvidenceContext build_context(const kg::SkillGraph& graph, const dense::VectorIndex& vectors,
                              const std::string& id, const std::string& language,
                              Audience audience) {
    const auto* node = graph.node(id);
    if (!node) {
        throw NotFoundError("unknown node id: " + id);
    }
    EvidenceContext ctx;
    ctx.skill_id = id;
    ctx.language = language;
    ctx.audience = audience;
    auto [label_lang, label] = node->label_in(language);
    ctx.label = label;
    ctx.language_fallback = label_lang != language;

    // Definition fact: description in the requested language, any description
    // as fallback, label as last resort.
    std::string definition;
    if (auto it = node->descriptions.find(language); it != node->descriptions.end()) {
        definition = it->second;
    } else if (!node->descriptions.empty()) {
        definition = node->descriptions.begin()->second;
        ctx.language_fallback = true;
    }
    if (definition.empty()) {
        definition = ctx.label;
        ctx.definition_from_label = true;
    }
    ctx.facts.push_back({"def:" + id, definition});

    // Top-3 direct relations ranked by candidate signal of the neighbor.
    struct EdgeRef {
        const kg::RelationEdge* edge;
        std::string neighbor;
    };
    std::vector<EdgeRef> edges;
    std::set<std::pair<std::string, std::string>> seen;
    for (const auto* e : graph.out_edges(id)) {
        if (graph.node(e->to_id) &&
            seen.emplace(std::string(kg::to_string(e->relation)), e->to_id).second) {
            edges.push_back({e, e->to_id});
        }
    }
    for (const auto* e : graph.in_edges(id)) {
        if (graph.node(e->from_id) &&
            seen.emplace(std::string(kg::to_string(e->relation)), e->from_id).second) {
            edges.push_back({e, e->from_id});
        }
    }
    if (!edges.empty()) {
        std::vector<std::string> neighbor_ids;
        neighbor_ids.reserve(edges.size());
        for (const auto& er : edges) neighbor_ids.push_back(er.neighbor);
        std::sort(neighbor_ids.begin(), neighbor_ids.end());
        neighbor_ids.erase(std::unique(neighbor_ids.begin(), neighbor_ids.end()),
                           neighbor_ids.end());
        reasoning::GraphReasoner reasoner(graph, vectors, language);
        auto sigs = reasoner.signals(id, neighbor_ids);
        std::map<std::string, double> combined;
        for (const auto& s : sigs) combined[s.node_id] = s.combined;

        std::sort(edges.begin(), edges.end(), [&](const EdgeRef& a, const EdgeRef& b) {
            const double ca = combined[a.neighbor];
            const double cb = combined[b.neighbor];
            if (ca != cb) return ca > cb;
            if (a.edge->relation != b.edge->relation) return a.edge->relation < b.edge->relation;
            return a.neighbor < b.neighbor;
        });

        const bool french = is_french(language);
        for (std::size_t i = 0; i < edges.size() && i < 3; ++i) {
            const auto* e = edges[i].edge;
            const auto* from = graph.node(e->from_id);
            const auto* to = graph.node(e->to_id);
            const std::string snippet = from->label_in(language).second + " " +
                                        relation_phrase(e->relation, french) + " " +
                                        to->label_in(language).second;
            ctx.facts.push_back({"rel:" + e->from_id + "-" +
                                     std::string(kg::to_string(e->relation)) + "-" + e->to_id,
                                 snippet});
        }
    }

    // Provenance fact.
    const auto& p = node->provenance;
    std::string prov = p.framework.empty() ? "unspecified" : p.framework;
    if (!p.version.empty()) prov += " " + p.version;
    if (!p.uri.empty()) prov += " " + p.uri;
    ctx.facts.push_back({"prov:" + id, prov});
    return ctx;
}

Explanation explain_template(const EvidenceContext& ctx) {
    const auto t0 = now_ms();
    const bool french = is_french(ctx.language);
    const bool teacher = ctx.audience == Audience::Teacher;

    Explanation out;
    out.mode = Mode::C1;

    const EvidenceFact& def = ctx.facts.front();
    const EvidenceFact& prov = ctx.facts.back();
    std::vector<const EvidenceFact*> rels;
    for (std::size_t i = 1; i + 1 < ctx.facts.size(); ++i) {
        rels.push_back(&ctx.facts[i]);
    }

    Sentence s1;
    if (french) {
        s1.text = teacher ? "La compétence « " + ctx.label + " » se définit ainsi : " + def.snippet + "."
                          : "« " + ctx.label + " » signifie : " + def.snippet + ".";
    } else {
        s1.text = teacher ? "The skill \"" + ctx.label + "\" is defined as: " + def.snippet + "."
                          : "\"" + ctx.label + "\" means: " + def.snippet + ".";
    }
    s1.evidence.push_back(def.id);
    out.sentences.push_back(std::move(s1));

    Sentence s2;
    if (rels.empty()) {
        s2.text = french ? "Aucune relation n'est enregistrée pour « " + ctx.label + " »."
                         : "No related skills are recorded for \"" + ctx.label + "\".";
        s2.evidence.push_back(def.id);
    } else {
        std::string joined = rels[0]->snippet;
        s2.evidence.push_back(rels[0]->id);
        if (rels.size() > 1) {
            joined += french ? " ; " : "; ";
            joined += rels[1]->snippet;
            s2.evidence.push_back(rels[1]->id);
        }
        s2.text = french ? "Relations principales : " + joined + "."
                         : "Key connections: " + joined + ".";
    }
    out.sentences.push_back(std::move(s2));

    Sentence s3;
    s3.text = french ? "Cette fiche provient de la source : " + prov.snippet + "."
                     : "This record comes from the source: " + prov.snippet + ".";
    s3.evidence.push_back(prov.id);
    out.sentences.push_back(std::move(s3));

    out.latency_ms = now_ms() - t0;
    return out;
}

std::pair<std::string, std::string> build_prompt(const EvidenceContext& ctx) {
    std::string system =
        "You describe one skill for a " + std::string(to_string(ctx.audience)) +
        " in language '" + ctx.language +
        "'. Respond with JSON only, shaped as "
        "{\"sentences\":[{\"text\":\"...\",\"evidence\":[\"id\"]}]} with exactly three "
        "sentences. Each sentence must cite 1-2 evidence ids from the provided facts and "
        "must not use any other knowledge.";
    std::string user = "Facts:\n";
    for (const auto& f : ctx.facts) {
        user += "[" + f.id + "] " + f.snippet + "\n";
    }
    return {std::move(system), std::move(user)};
}

bool validate_constrained_response(const std::string& response_text,
                                   const EvidenceContext& ctx,
                                   std::vector<Sentence>* sentences_out) {
    json j = json::parse(response_text, nullptr, false);
    if (j.is_discarded() || !j.is_object() || !j.contains("sentences") ||
        !j["sentences"].is_array() || j["sentences"].size() != 3) {
        return false;
    }
    std::vector<Sentence> sentences;
    for (const auto& s : j["sentences"]) {
        if (!s.is_object() || !s.contains("text") || !s["text"].is_string() ||
            !s.contains("evidence") || !s["evidence"].is_array()) {
            return false;
        }
        Sentence sentence;
        sentence.text = s["text"].get<std::string>();
        if (sentence.text.empty()) {
            return false;
        }
        const auto& evidence = s["evidence"];
        if (evidence.empty() || evidence.size() > 2) {
            return false;
        }
        for (const auto& e : evidence) {
            if (!e.is_string()) {
                return false;
            }
            const std::string id = e.get<std::string>();
            if (!ctx.has_fact(id)) {
                return false;  // cites outside the provided context
            }
            sentence.evidence.push_back(id);
        }
        sentences.push_back(std::move(sentence));
    }
    if (sentences_out) {
        *sentences_out = std::move(sentences);
    }
    return true;
}

Explanation explain_constrained(const EvidenceContext& ctx, llm::GeneratorClient& generator,
                                int max_tokens) {
    const auto t0 = now_ms();
    auto [system, user] = build_prompt(ctx);
    auto response = generator.generate(system, user, max_tokens);

    std::vector<Sentence> sentences;
    if (response && validate_constrained_response(*response, ctx, &sentences)) {
        Explanation out;
        out.mode = Mode::C2;
        out.sentences = std::move(sentences);
        out.latency_ms = now_ms() - t0;
        return out;
    }
    Explanation out = explain_template(ctx);
    out.fallback_used = true;
    out.latency_ms = now_ms() - t0;
    return out;
}

Explanation explain_freeform(const EvidenceContext& ctx, llm::GeneratorClient& generator,
                             bool enabled, int max_tokens) {
    if (!enabled) {
        throw ConfigError("freeform explanations are disabled");
    }
    const auto t0 = now_ms();
    auto [system, user] = build_prompt(ctx);
    system = "You describe one skill for a " + std::string(to_string(ctx.audience)) +
             " in language '" + ctx.language + "'. Write a short plain-text explanation.";
    auto response = generator.generate(system, user, max_tokens);
    if (!response) {
        throw RemoteServiceError("generator unavailable for freeform explanation");
    }
    Explanation out;
    out.mode = Mode::C3;
    for (auto& text : split_sentences(*response)) {
        out.sentences.push_back({std::move(text), {}});
    }
    out.latency_ms = now_ms() - t0;
    return out;
}

std::vector<std::string> split_sentences(const std::string& prose) {
    std::vector<std::string> out;
    std::string current;
    for (std::size_t i = 0; i < prose.size(); ++i) {
        current.push_back(prose[i]);
        const char c = prose[i];
        if (c == '.' || c == '!' || c == '?') {
            const bool at_end = i + 1 == prose.size();
            const char next = at_end ? ' ' : prose[i + 1];
            if (at_end || next == ' ' || next == '\n' || next == '\t' || next == '\r') {
                while (!current.empty() && (current.front() == ' ' || current.front() == '\n' ||
                                            current.front() == '\t' || current.front() == '\r')) {
                    current.erase(current.begin());
                }
                if (!current.empty()) {
                    out.push_back(current);
                }
                current.clear();
            }
        }
    }
    while (!current.empty() && (current.front() == ' ' || current.front() == '\n' ||
                                current.front() == '\t' || current.front() == '\r')) {
        current.erase(current.begin());
    }
    if (!current.empty()) {
        out.push_back(current);
    }
    return out;
}

std::string render_text(const Explanation& explanation) {
    std::string out;
    for (const auto& s : explanation.sentences) {
        if (!out.empty()) out += " ";
        out += s.text;
        if (!s.evidence.empty()) {
            out += " [";
            for (std::size_t i = 0; i < s.evidence.size(); ++i) {
                if (i) out += ", ";
                out += s.evidence[i];
            }
            out += "]";
        }
    }
    return out;
}

llm::ScriptedGenerator::Handler faithful_stub_handler() {
    return [](const std::string&, const std::string& user) -> std::optional<std::string> {
        // Recover fact ids and snippets from the prompt lines "[id] snippet".
        std::vector<std::pair<std::string, std::string>> facts;
        std::size_t pos = 0;
        while ((pos = user.find('[', pos)) != std::string::npos) {
            const auto close = user.find(']', pos);
            if (close == std::string::npos) break;
            const auto eol = user.find('\n', close);
            const std::string id = user.substr(pos + 1, close - pos - 1);
            std::string snippet = user.substr(
                close + 2, (eol == std::string::npos ? user.size() : eol) - close - 2);
            facts.emplace_back(id, std::move(snippet));
            if (eol == std::string::npos) break;
            pos = eol;
        }
        if (facts.empty()) {
            return std::nullopt;
        }
        json sentences = json::array();
        for (int i = 0; i < 3; ++i) {
            const auto& [id, snippet] = facts[std::min<std::size_t>(i, facts.size() - 1)];
            json s;
            s["text"] = snippet.empty() ? "Fact " + id + "." : snippet + ".";
            s["evidence"] = json::array({id});
            sentences.push_back(std::move(s));
        }
        json j;
        j["sentences"] = std::move(sentences);
        return j.dump();
    };
}

}  // namespace skillgraph::explain

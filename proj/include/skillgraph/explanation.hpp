#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "skillgraph/generator.hpp"
#include "skillgraph/skill_graph.hpp"
#include "skillgraph/vector_index.hpp"

namespace skillgraph::explain {

enum class Mode { C1, C2, C3 };
enum class Audience { Teacher, Learner };

std::string_view to_string(Mode mode);
std::string_view to_string(Audience audience);
std::optional<Audience> parse_audience(std::string_view s);

struct EvidenceFact {
    std::string id;       // def:<node> | rel:<from>-<type>-<to> | prov:<node>
    std::string snippet;
};

struct EvidenceContext {
    std::string skill_id;
    std::string label;
    std::vector<EvidenceFact> facts;  // definition, top relations, provenance
    std::string language;
    Audience audience = Audience::Teacher;
    bool definition_from_label = false;  // node had no description
    bool language_fallback = false;

    bool has_fact(std::string_view id) const;
};

struct Sentence {
    std::string text;
    std::vector<std::string> evidence;  // ids into the context facts
};

struct Explanation {
    Mode mode = Mode::C1;
    std::vector<Sentence> sentences;
    bool fallback_used = false;
    std::int64_t latency_ms = 0;
};

// Definition snippet, up to three relation snippets ranked by candidate
// signal, provenance snippet. Facts carry stable evidence ids.
EvidenceContext build_context(const kg::SkillGraph& graph, const dense::VectorIndex& vectors,
                              const std::string& id, const std::string& language,
                              Audience audience);

// C1: three fixed-template sentences, each citing at least one context fact.
Explanation explain_template(const EvidenceContext& context);

// C2: schema-constrained generation. Any violation (sentence count != 3,
// evidence count not in {1,2}, unknown id, empty text, unparseable JSON) or
// a generator failure falls back to the template, fallback_used=true.
Explanation explain_constrained(const EvidenceContext& context, llm::GeneratorClient& generator,
                                int max_tokens = 512);

// C3: free-form benchmark mode, no citations, no fallback. Throws ConfigError
// when disabled and RemoteServiceError when the generator fails.
Explanation explain_freeform(const EvidenceContext& context, llm::GeneratorClient& generator,
                             bool enabled, int max_tokens = 512);

// (system, user) prompt pair; contains only context snippets, ids and fixed
// instruction boilerplate.
std::pair<std::string, std::string> build_prompt(const EvidenceContext& context);

// Strict response validation; returns sentences only for fully valid output.
bool validate_constrained_response(const std::string& response_text,
                                   const EvidenceContext& context,
                                   std::vector<Sentence>* sentences_out);

// Terminator rule: . ! ? followed by whitespace or end of text.
std::vector<std::string> split_sentences(const std::string& prose);

// Plain prose with bracketed evidence ids after each sentence.
std::string render_text(const Explanation& explanation);

// Stub generator that answers every C2 prompt with a valid three-sentence
// JSON citing fact ids parsed back out of the prompt. Offline eval of the
// constrained path uses this.
llm::ScriptedGenerator::Handler faithful_stub_handler();

}  // namespace skillgraph::explain

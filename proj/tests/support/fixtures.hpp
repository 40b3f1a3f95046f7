#pragma once

#include <sstream>
#include <string>

#include "skillgraph/lexical_index.hpp"
#include "skillgraph/skill_graph.hpp"
#include "skillgraph/vector_index.hpp"

namespace fixtures {

// Fixed ingest timestamp so fixture snapshots are byte-identical across runs.
inline constexpr std::int64_t kFixedIngestTime = 1735689600;  // 2025-01-01T00:00:00Z

// Ten-node bilingual toy graph: six esco skills, one occupation, one assessor,
// plus two rome nodes mapped across frameworks.
inline const char* kToyGraphJsonl = R"JSONL(
{"id":"esco:S1","kind":"skill","labels":{"en":"data analysis","fr":"analyse de données"},"alt_labels":{"en":["data analytics"]},"descriptions":{"en":"inspecting cleaning and modelling data","fr":"inspection nettoyage et modélisation des données"},"relations":[{"type":"hasPrerequisite","target":"esco:S2"},{"type":"hasPrerequisite","target":"esco:S3"},{"type":"related","target":"esco:S4"},{"type":"isRelevantForOccupation","target":"esco:O1"}],"mappings":[{"target":"rome:S1","kind":"exact"}],"provenance":{"framework":"ESCO","version":"1.1","uri":"urn:esco:S1"}}
{"id":"esco:S2","kind":"skill","labels":{"en":"statistics","fr":"statistiques"},"descriptions":{"en":"collecting and interpreting quantitative data"},"relations":[{"type":"isRelevantForOccupation","target":"esco:O1"}],"provenance":{"framework":"ESCO","version":"1.1","uri":"urn:esco:S2"}}
{"id":"esco:S3","kind":"skill","labels":{"en":"programming","fr":"programmation"},"descriptions":{"en":"writing computer programs"},"relations":[{"type":"hasSubSkill","target":"esco:S5"},{"type":"isRelevantForOccupation","target":"esco:O1"}],"provenance":{"framework":"ESCO","version":"1.1","uri":"urn:esco:S3"}}
{"id":"esco:S4","kind":"skill","labels":{"en":"data visualization","fr":"visualisation de données"},"descriptions":{"en":"presenting data graphically"},"relations":[{"type":"related","target":"esco:S2"}],"provenance":{"framework":"ESCO","version":"1.1","uri":"urn:esco:S4"}}
{"id":"esco:S5","kind":"skill","labels":{"en":"python programming"},"descriptions":{"en":"writing programs in python"},"relations":[{"type":"broader","target":"esco:S3"}],"provenance":{"framework":"ESCO","version":"1.1","uri":"urn:esco:S5"}}
{"id":"esco:S6","kind":"skill","labels":{"en":"machine learning"},"descriptions":{"en":"training statistical models from data"},"relations":[{"type":"hasPrerequisite","target":"esco:S2"},{"type":"related","target":"esco:S1"}],"provenance":{"framework":"ESCO","version":"1.1","uri":"urn:esco:S6"}}
{"id":"esco:O1","kind":"occupation","labels":{"en":"data analyst","fr":"analyste de données"},"descriptions":{"en":"analyses data for decision support"},"provenance":{"framework":"ESCO","version":"1.1","uri":"urn:esco:O1"}}
{"id":"esco:A1","kind":"learning_outcome","labels":{"en":"statistics exam"},"relations":[{"type":"isAssessedBy","target":"esco:S2"}],"provenance":{"framework":"ESCO","version":"1.1","uri":"urn:esco:A1"}}
{"id":"rome:S1","kind":"skill","labels":{"fr":"analyse de données"},"descriptions":{"fr":"examiner des jeux de données"},"provenance":{"framework":"ROME","version":"4.0","uri":"urn:rome:S1"}}
{"id":"rome:S2","kind":"skill","labels":{"fr":"programmation informatique"},"relations":[{"type":"related","target":"rome:S1"}],"provenance":{"framework":"ROME","version":"4.0","uri":"urn:rome:S2"}}
)JSONL";

inline skillgraph::kg::SkillGraph graph_from_jsonl(
    const std::string& jsonl,
    skillgraph::kg::ValidationPolicy policy = skillgraph::kg::ValidationPolicy::Lenient,
    skillgraph::kg::IngestSummary* summary_out = nullptr) {
    skillgraph::kg::SkillGraph graph;
    std::istringstream in(jsonl);
    skillgraph::kg::IngestOptions options;
    options.policy = policy;
    options.ingested_at = kFixedIngestTime;
    auto summary = graph.ingest(in, options);
    if (summary_out) {
        *summary_out = summary;
    }
    return graph;
}

inline skillgraph::kg::SkillGraph toy_graph() {
    return graph_from_jsonl(kToyGraphJsonl);
}

struct BuiltIndices {
    skillgraph::kg::SkillGraph graph;
    skillgraph::lexical::LexicalIndex lexical;
    skillgraph::dense::VectorIndex vectors;
    skillgraph::dense::TrigramHashEmbedder embedder;
};

inline BuiltIndices build_indices(const std::string& jsonl,
                                  std::vector<std::string> languages = {"en", "fr"}) {
    BuiltIndices b;
    b.graph = graph_from_jsonl(jsonl);
    b.lexical.build(b.graph, languages);
    b.vectors.build(b.graph, b.embedder, languages);
    return b;
}

}  // namespace fixtures

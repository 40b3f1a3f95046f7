#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace skillgraph::kg {

enum class NodeKind { Skill, Competence, LearningOutcome, Occupation };

enum class RelationKind {
    Broader,
    Narrower,
    Related,
    HasPrerequisite,
    HasSubSkill,
    IsRelevantForOccupation,
    IsAssessedBy,
};

enum class MappingKind { ExactMatch, CloseMatch, RelatedMatch };

std::string_view to_string(NodeKind kind);
std::string_view to_string(RelationKind kind);
std::string_view to_string(MappingKind kind);

std::optional<NodeKind> parse_node_kind(std::string_view s);
std::optional<RelationKind> parse_relation_kind(std::string_view s);
std::optional<MappingKind> parse_mapping_kind(std::string_view s);

struct Provenance {
    std::string framework;
    std::string version;
    std::string uri;
    std::int64_t ingested_at = 0;  // epoch seconds, UTC

    bool operator==(const Provenance&) const = default;
};

std::string iso8601_utc(std::int64_t epoch_seconds);

struct SkillNode {
    std::string id;  // namespaced: <framework>:<local-id>
    NodeKind kind = NodeKind::Skill;
    std::map<std::string, std::string> labels;                    // lang -> label
    std::map<std::string, std::vector<std::string>> alt_labels;   // lang -> alternatives
    std::map<std::string, std::string> descriptions;              // lang -> description
    Provenance provenance;

    // Namespace prefix of the id (text before the first ':').
    std::string_view framework_of_id() const;
    // Preferred label for a language, falling back to en, then the
    // lexicographically first tag. Returns the tag actually used.
    std::pair<std::string, std::string> label_in(std::string_view language) const;
    bool has_text_in(std::string_view language) const;
};

struct RelationEdge {
    std::string from_id;
    std::string to_id;
    RelationKind relation = RelationKind::Related;
    Provenance provenance;
};

struct MappingEdge {
    std::string from_id;
    std::string to_id;
    MappingKind kind = MappingKind::ExactMatch;
    Provenance provenance;
};

}  // namespace skillgraph::kg

#include "skillgraph/types.hpp"

#include <cstdio>
#include <ctime>

namespace skillgraph::kg {

namespace {

// Case- and separator-insensitive comparison so the ingest format accepts
// "has_prerequisite", "hasPrerequisite" and "HASPREREQUISITE" alike.
std::string squash(std::string_view s) {
    std::string out;
    out.reserve(s.size());
    for (char c : s) {
        if (c == '_' || c == '-' || c == ' ') continue;
        out.push_back(c >= 'A' && c <= 'Z' ? static_cast<char>(c + 0x20) : c);
    }
    return out;
}

}  // namespace

std::string_view to_string(NodeKind kind) {
    switch (kind) {
        case NodeKind::Skill: return "skill";
        case NodeKind::Competence: return "competence";
        case NodeKind::LearningOutcome: return "learning_outcome";
        case NodeKind::Occupation: return "occupation";
    }
    return "skill";
}

std::string_view to_string(RelationKind kind) {
    switch (kind) {
        case RelationKind::Broader: return "broader";
        case RelationKind::Narrower: return "narrower";
        case RelationKind::Related: return "related";
        case RelationKind::HasPrerequisite: return "hasPrerequisite";
        case RelationKind::HasSubSkill: return "hasSubSkill";
        case RelationKind::IsRelevantForOccupation: return "isRelevantForOccupation";
        case RelationKind::IsAssessedBy: return "isAssessedBy";
    }
    return "related";
}

std::string_view to_string(MappingKind kind) {
    switch (kind) {
        case MappingKind::ExactMatch: return "exact";
        case MappingKind::CloseMatch: return "close";
        case MappingKind::RelatedMatch: return "related";
    }
    return "exact";
}

std::optional<NodeKind> parse_node_kind(std::string_view s) {
    const std::string q = squash(s);
    if (q == "skill") return NodeKind::Skill;
    if (q == "competence") return NodeKind::Competence;
    if (q == "learningoutcome") return NodeKind::LearningOutcome;
    if (q == "occupation") return NodeKind::Occupation;
    return std::nullopt;
}

std::optional<RelationKind> parse_relation_kind(std::string_view s) {
    const std::string q = squash(s);
    if (q == "broader") return RelationKind::Broader;
    if (q == "narrower") return RelationKind::Narrower;
    if (q == "related") return RelationKind::Related;
    if (q == "hasprerequisite" || q == "prerequisite") return RelationKind::HasPrerequisite;
    if (q == "hassubskill" || q == "subskill") return RelationKind::HasSubSkill;
    if (q == "isrelevantforoccupation") return RelationKind::IsRelevantForOccupation;
    if (q == "isassessedby") return RelationKind::IsAssessedBy;
    return std::nullopt;
}

std::optional<MappingKind> parse_mapping_kind(std::string_view s) {
    const std::string q = squash(s);
    if (q == "exact" || q == "exactmatch") return MappingKind::ExactMatch;
    if (q == "close" || q == "closematch") return MappingKind::CloseMatch;
    if (q == "related" || q == "relatedmatch") return MappingKind::RelatedMatch;
    return std::nullopt;
}

std::string iso8601_utc(std::int64_t epoch_seconds) {
    std::time_t t = static_cast<std::time_t>(epoch_seconds);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[80];
    std::snprintf(buf, sizeof(buf), "%04d-%02d-%02dT%02d:%02d:%02dZ", tm.tm_year + 1900,
                  tm.tm_mon + 1, tm.tm_mday, tm.tm_hour, tm.tm_min, tm.tm_sec);
    return buf;
}

std::string_view SkillNode::framework_of_id() const {
    auto pos = id.find(':');
    if (pos == std::string::npos) {
        return std::string_view(id);
    }
    return std::string_view(id).substr(0, pos);
}

std::pair<std::string, std::string> SkillNode::label_in(std::string_view language) const {
    auto it = labels.find(std::string(language));
    if (it != labels.end()) {
        return {it->first, it->second};
    }
    it = labels.find("en");
    if (it != labels.end()) {
        return {it->first, it->second};
    }
    if (!labels.empty()) {
        return {labels.begin()->first, labels.begin()->second};
    }
    return {"", ""};
}

bool SkillNode::has_text_in(std::string_view language) const {
    const std::string lang(language);
    if (auto it = labels.find(lang); it != labels.end() && !it->second.empty()) return true;
    if (auto it = descriptions.find(lang); it != descriptions.end() && !it->second.empty())
        return true;
    if (auto it = alt_labels.find(lang); it != alt_labels.end() && !it->second.empty())
        return true;
    return false;
}

}  // namespace skillgraph::kg

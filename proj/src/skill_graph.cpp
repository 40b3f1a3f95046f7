#include "skillgraph/skill_graph.hpp"

#include <algorithm>
#include <ctime>
#include <fstream>
#include <istream>
#include <sstream>
#include <tuple>
#include <unordered_set>

#include <json.hpp>

#include "skillgraph/errors.hpp"
#include "skillgraph/text.hpp"

namespace skillgraph::kg {

using nlohmann::json;

namespace {

std::int64_t parse_iso8601_utc(const std::string& s) {
    std::tm tm{};
    if (std::sscanf(s.c_str(), "%4d-%2d-%2dT%2d:%2d:%2dZ", &tm.tm_year, &tm.tm_mon, &tm.tm_mday,
                    &tm.tm_hour, &tm.tm_min, &tm.tm_sec) != 6) {
        return 0;
    }
    tm.tm_year -= 1900;
    tm.tm_mon -= 1;
    return static_cast<std::int64_t>(timegm(&tm));
}

std::string lower_tag(std::string_view tag) {
    std::string out;
    out.reserve(tag.size());
    for (char c : tag) {
        out.push_back(c >= 'A' && c <= 'Z' ? static_cast<char>(c + 0x20) : c);
    }
    return out;
}

bool relation_order(const RelationEdge& a, const RelationEdge& b) {
    return std::tie(a.relation, a.from_id, a.to_id) < std::tie(b.relation, b.from_id, b.to_id);
}

bool mapping_order(const MappingEdge& a, const MappingEdge& b) {
    return std::tie(a.from_id, a.to_id, a.kind) < std::tie(b.from_id, b.to_id, b.kind);
}

std::string_view framework_prefix(std::string_view id) {
    auto pos = id.find(':');
    return pos == std::string_view::npos ? id : id.substr(0, pos);
}

// One parsed-and-validated JSONL record, staged before batch apply.
struct StagedRecord {
    std::size_t line = 0;
    SkillNode node;
    std::vector<std::pair<RelationKind, std::string>> relations;  // (kind, target)
    std::vector<std::pair<MappingKind, std::string>> mappings;
};

// Content signature covering everything except the ingest timestamp, so a
// re-ingested identical record is recognized as a no-op.
std::string content_signature(const SkillNode& node,
                              std::vector<std::pair<std::string, std::string>> rels,
                              std::vector<std::pair<std::string, std::string>> maps) {
    json j;
    j["id"] = node.id;
    j["kind"] = std::string(to_string(node.kind));
    j["labels"] = node.labels;
    j["alt_labels"] = node.alt_labels;
    j["descriptions"] = node.descriptions;
    j["provenance"] = {{"framework", node.provenance.framework},
                       {"version", node.provenance.version},
                       {"uri", node.provenance.uri}};
    std::sort(rels.begin(), rels.end());
    std::sort(maps.begin(), maps.end());
    j["relations"] = rels;
    j["mappings"] = maps;
    return j.dump();
}

std::string signature_of_staged(const StagedRecord& r) {
    std::vector<std::pair<std::string, std::string>> rels;
    rels.reserve(r.relations.size());
    for (const auto& [kind, target] : r.relations) {
        rels.emplace_back(std::string(to_string(kind)), target);
    }
    std::vector<std::pair<std::string, std::string>> maps;
    maps.reserve(r.mappings.size());
    for (const auto& [kind, target] : r.mappings) {
        maps.emplace_back(std::string(to_string(kind)), target);
    }
    return content_signature(r.node, std::move(rels), std::move(maps));
}

json provenance_to_json(const Provenance& p) {
    return {{"framework", p.framework},
            {"version", p.version},
            {"uri", p.uri},
            {"ingested_at", iso8601_utc(p.ingested_at)}};
}

Provenance provenance_from_json(const json& j) {
    Provenance p;
    p.framework = j.value("framework", "");
    p.version = j.value("version", "");
    p.uri = j.value("uri", "");
    if (j.contains("ingested_at")) {
        p.ingested_at = parse_iso8601_utc(j["ingested_at"].get<std::string>());
    }
    return p;
}

}  // namespace

std::string IngestSummary::to_json() const {
    json j;
    j["nodes"] = nodes;
    j["edges"] = edges;
    j["mappings"] = mappings;
    j["duplicates"] = duplicates;
    j["quarantined"] = quarantined;
    j["unknown_field_warnings"] = unknown_field_warnings;
    j["nodes_per_kind"] = nodes_per_kind;
    j["nodes_per_framework"] = nodes_per_framework;
    j["rejected"] = json::array();
    for (const auto& r : rejected) {
        j["rejected"].push_back({{"line", r.line}, {"id", r.id}, {"reason", r.reason}});
    }
    j["aborted"] = aborted;
    if (aborted) {
        j["abort_reason"] = abort_reason;
    }
    return j.dump();
}

IngestSummary SkillGraph::ingest(std::istream& jsonl, const IngestOptions& options) {
    IngestSummary summary;
    const std::int64_t ingested_at =
        options.ingested_at >= 0 ? options.ingested_at
                                 : static_cast<std::int64_t>(std::time(nullptr));

    static const std::unordered_set<std::string> known_keys = {
        "id",       "kind",     "labels",   "alt_labels", "descriptions",
        "relations", "mappings", "provenance"};

    std::vector<StagedRecord> staged;
    std::unordered_set<std::string> staged_ids;

    std::string line;
    std::size_t line_no = 0;
    while (std::getline(jsonl, line)) {
        ++line_no;
        // Skip blank lines silently; JSONL producers often end with one.
        if (line.find_first_not_of(" \t\r") == std::string::npos) {
            continue;
        }
        json j = json::parse(line, nullptr, false);
        if (j.is_discarded() || !j.is_object()) {
            summary.rejected.push_back({line_no, "", "malformed:json"});
            continue;
        }
        for (const auto& [key, value] : j.items()) {
            if (!known_keys.count(key)) {
                ++summary.unknown_field_warnings;
            }
        }

        StagedRecord rec;
        rec.line = line_no;

        if (!j.contains("id") || !j["id"].is_string() || j["id"].get<std::string>().empty()) {
            summary.rejected.push_back({line_no, "", "malformed:id"});
            continue;
        }
        rec.node.id = text::nfc(j["id"].get<std::string>());
        auto colon = rec.node.id.find(':');
        if (colon == std::string::npos || colon == 0 || colon + 1 == rec.node.id.size()) {
            summary.rejected.push_back({line_no, rec.node.id, "malformed:id"});
            continue;
        }

        if (!j.contains("kind") || !j["kind"].is_string()) {
            summary.rejected.push_back({line_no, rec.node.id, "malformed:kind"});
            continue;
        }
        auto kind = parse_node_kind(j["kind"].get<std::string>());
        if (!kind) {
            summary.rejected.push_back({line_no, rec.node.id, "malformed:kind"});
            continue;
        }
        rec.node.kind = *kind;

        bool bad_text = false;
        auto read_text_map = [&](const char* key, std::map<std::string, std::string>& out) {
            if (!j.contains(key)) return;
            if (!j[key].is_object()) {
                bad_text = true;
                return;
            }
            for (const auto& [lang, value] : j[key].items()) {
                if (!value.is_string()) {
                    bad_text = true;
                    return;
                }
                out[lower_tag(lang)] = text::nfc(value.get<std::string>());
            }
        };
        read_text_map("labels", rec.node.labels);
        read_text_map("descriptions", rec.node.descriptions);
        if (j.contains("alt_labels")) {
            if (!j["alt_labels"].is_object()) {
                bad_text = true;
            } else {
                for (const auto& [lang, value] : j["alt_labels"].items()) {
                    if (!value.is_array()) {
                        bad_text = true;
                        break;
                    }
                    std::vector<std::string> alts;
                    for (const auto& v : value) {
                        if (!v.is_string()) {
                            bad_text = true;
                            break;
                        }
                        alts.push_back(text::nfc(v.get<std::string>()));
                    }
                    if (!alts.empty()) {
                        rec.node.alt_labels[lower_tag(lang)] = std::move(alts);
                    }
                }
            }
        }
        if (bad_text) {
            summary.rejected.push_back({line_no, rec.node.id, "malformed:text-field"});
            continue;
        }

        bool has_label = false;
        for (const auto& [lang, label] : rec.node.labels) {
            if (!label.empty()) {
                has_label = true;
                break;
            }
        }
        if (!has_label) {
            summary.rejected.push_back({line_no, rec.node.id, "constraint:missing-label"});
            continue;
        }

        if (j.contains("provenance") && j["provenance"].is_object()) {
            const auto& p = j["provenance"];
            rec.node.provenance.framework = p.value("framework", "");
            rec.node.provenance.version = p.value("version", "");
            rec.node.provenance.uri = p.value("uri", "");
            for (const auto& [key, value] : p.items()) {
                if (key != "framework" && key != "version" && key != "uri") {
                    ++summary.unknown_field_warnings;
                }
            }
        }
        rec.node.provenance.ingested_at = ingested_at;
        if (!rec.node.provenance.framework.empty() && rec.node.provenance.version.empty()) {
            summary.rejected.push_back({line_no, rec.node.id, "malformed:provenance-version"});
            continue;
        }

        bool links_occupation = false;
        if (j.contains("relations")) {
            if (!j["relations"].is_array()) {
                summary.rejected.push_back({line_no, rec.node.id, "malformed:relations"});
                continue;
            }
            for (const auto& r : j["relations"]) {
                if (!r.is_object() || !r.contains("type") || !r.contains("target") ||
                    !r["type"].is_string() || !r["target"].is_string()) {
                    summary.rejected.push_back({line_no, rec.node.id, "malformed:relation-entry"});
                    continue;
                }
                auto rel_kind = parse_relation_kind(r["type"].get<std::string>());
                if (!rel_kind) {
                    summary.rejected.push_back({line_no, rec.node.id, "malformed:relation-type"});
                    continue;
                }
                std::string target = text::nfc(r["target"].get<std::string>());
                if (target == rec.node.id) {
                    summary.rejected.push_back({line_no, rec.node.id, "constraint:self-loop"});
                    continue;
                }
                if (*rel_kind == RelationKind::IsRelevantForOccupation) {
                    links_occupation = true;
                }
                rec.relations.emplace_back(*rel_kind, std::move(target));
            }
        }
        if (j.contains("mappings")) {
            if (!j["mappings"].is_array()) {
                summary.rejected.push_back({line_no, rec.node.id, "malformed:mappings"});
                continue;
            }
            for (const auto& m : j["mappings"]) {
                if (!m.is_object() || !m.contains("target") || !m["target"].is_string()) {
                    summary.rejected.push_back({line_no, rec.node.id, "malformed:mapping-entry"});
                    continue;
                }
                auto map_kind = parse_mapping_kind(m.value("kind", "exact"));
                if (!map_kind) {
                    summary.rejected.push_back({line_no, rec.node.id, "malformed:mapping-kind"});
                    continue;
                }
                std::string target = text::nfc(m["target"].get<std::string>());
                if (framework_prefix(target) == framework_prefix(rec.node.id)) {
                    summary.rejected.push_back(
                        {line_no, rec.node.id, "constraint:mapping-same-framework"});
                    continue;
                }
                rec.mappings.emplace_back(*map_kind, std::move(target));
            }
        }

        if (rec.node.kind == NodeKind::Skill && rec.node.provenance.framework.empty() &&
            !links_occupation) {
            summary.rejected.push_back({line_no, rec.node.id, "constraint:framework-or-occupation"});
            continue;
        }

        staged.push_back(std::move(rec));
    }

    // Duplicate resolution against both the existing graph and the batch.
    std::vector<StagedRecord> accepted;
    std::unordered_set<std::string> batch_sigs_seen;
    std::map<std::string, std::string> batch_sig_by_id;
    for (auto& rec : staged) {
        const std::string sig = signature_of_staged(rec);
        auto existing = nodes_.find(rec.node.id);
        if (existing != nodes_.end()) {
            if (signature_of_existing(rec.node.id) == sig) {
                ++summary.duplicates;
            } else {
                summary.rejected.push_back(
                    {rec.line, rec.node.id, "duplicate:conflicting-content"});
            }
            continue;
        }
        auto batch_it = batch_sig_by_id.find(rec.node.id);
        if (batch_it != batch_sig_by_id.end()) {
            if (batch_it->second == sig) {
                ++summary.duplicates;
            } else {
                summary.rejected.push_back(
                    {rec.line, rec.node.id, "duplicate:conflicting-content"});
            }
            continue;
        }
        batch_sig_by_id.emplace(rec.node.id, sig);
        accepted.push_back(std::move(rec));
    }

    // Edge endpoint resolution over existing + accepted nodes.
    auto resolves = [&](const std::string& id) {
        return nodes_.count(id) > 0 || batch_sig_by_id.count(id) > 0;
    };

    std::vector<RelationEdge> new_relations;
    std::vector<MappingEdge> new_mappings;
    std::vector<QuarantinedEdge> new_quarantined;
    for (const auto& rec : accepted) {
        for (const auto& [kind, target] : rec.relations) {
            if (!resolves(target)) {
                if (options.policy == ValidationPolicy::Strict) {
                    summary = IngestSummary{};
                    summary.aborted = true;
                    summary.abort_reason = "dangling endpoint: " + rec.node.id + " -" +
                                           std::string(to_string(kind)) + "-> " + target +
                                           " (line " + std::to_string(rec.line) + ")";
                    return summary;
                }
                new_quarantined.push_back({rec.node.id, target, std::string(to_string(kind)),
                                           false, "dangling-endpoint"});
                continue;
            }
            RelationEdge edge;
            edge.from_id = rec.node.id;
            edge.to_id = target;
            edge.relation = kind;
            edge.provenance = rec.node.provenance;
            new_relations.push_back(std::move(edge));
        }
        for (const auto& [kind, target] : rec.mappings) {
            if (!resolves(target)) {
                if (options.policy == ValidationPolicy::Strict) {
                    summary = IngestSummary{};
                    summary.aborted = true;
                    summary.abort_reason = "dangling endpoint: " + rec.node.id + " -mapping:" +
                                           std::string(to_string(kind)) + "-> " + target +
                                           " (line " + std::to_string(rec.line) + ")";
                    return summary;
                }
                new_quarantined.push_back({rec.node.id, target, std::string(to_string(kind)),
                                           true, "dangling-endpoint"});
                continue;
            }
            MappingEdge edge;
            edge.from_id = rec.node.id;
            edge.to_id = target;
            edge.kind = kind;
            edge.provenance = rec.node.provenance;
            new_mappings.push_back(std::move(edge));
        }
    }

    // Apply batch.
    for (auto& rec : accepted) {
        summary.nodes_per_kind[std::string(to_string(rec.node.kind))]++;
        summary.nodes_per_framework[std::string(framework_prefix(rec.node.id))]++;
        nodes_.emplace(rec.node.id, std::move(rec.node));
        ++summary.nodes;
    }
    auto edge_exists = [&](const RelationEdge& e) {
        return std::any_of(relations_.begin(), relations_.end(), [&](const RelationEdge& o) {
            return o.from_id == e.from_id && o.to_id == e.to_id && o.relation == e.relation;
        });
    };
    for (auto& e : new_relations) {
        if (edge_exists(e)) continue;
        relations_.push_back(std::move(e));
        ++summary.edges;
    }
    auto mapping_exists = [&](const MappingEdge& e) {
        return std::any_of(mappings_.begin(), mappings_.end(), [&](const MappingEdge& o) {
            return o.from_id == e.from_id && o.to_id == e.to_id && o.kind == e.kind;
        });
    };
    for (auto& e : new_mappings) {
        if (mapping_exists(e)) continue;
        mappings_.push_back(std::move(e));
        ++summary.mappings;
    }
    auto quarantine_exists = [&](const QuarantinedEdge& e) {
        return std::any_of(quarantined_.begin(), quarantined_.end(), [&](const QuarantinedEdge& o) {
            return o.from_id == e.from_id && o.to_id == e.to_id && o.relation == e.relation &&
                   o.is_mapping == e.is_mapping;
        });
    };
    for (auto& e : new_quarantined) {
        if (quarantine_exists(e)) continue;
        quarantined_.push_back(std::move(e));
        ++summary.quarantined;
    }

    std::sort(relations_.begin(), relations_.end(), relation_order);
    std::sort(mappings_.begin(), mappings_.end(), mapping_order);
    std::sort(quarantined_.begin(), quarantined_.end(), [](const auto& a, const auto& b) {
        return std::tie(a.from_id, a.to_id, a.relation, a.is_mapping) <
               std::tie(b.from_id, b.to_id, b.relation, b.is_mapping);
    });
    rebuild_adjacency();
    return summary;
}

std::string SkillGraph::signature_of_existing(const std::string& id) const {
    const SkillNode& node = nodes_.at(id);
    std::vector<std::pair<std::string, std::string>> rels;
    for (const auto& e : relations_) {
        if (e.from_id == id) {
            rels.emplace_back(std::string(to_string(e.relation)), e.to_id);
        }
    }
    std::vector<std::pair<std::string, std::string>> maps;
    for (const auto& e : mappings_) {
        if (e.from_id == id) {
            maps.emplace_back(std::string(to_string(e.kind)), e.to_id);
        }
    }
    for (const auto& q : quarantined_) {
        if (q.from_id == id) {
            (q.is_mapping ? maps : rels).emplace_back(q.relation, q.to_id);
        }
    }
    return content_signature(node, std::move(rels), std::move(maps));
}

const SkillNode* SkillGraph::node(const std::string& id) const {
    auto it = nodes_.find(id);
    return it == nodes_.end() ? nullptr : &it->second;
}

std::vector<NeighborHit> SkillGraph::neighbors(const std::string& id,
                                               const std::set<RelationKind>& relations,
                                               Direction direction) const {
    if (!nodes_.count(id)) {
        throw NotFoundError("unknown node id: " + id);
    }
    auto wanted = [&](RelationKind k) { return relations.empty() || relations.count(k) > 0; };

    std::vector<NeighborHit> hits;
    std::set<std::pair<RelationKind, std::string>> seen;
    auto add = [&](const RelationEdge& edge, const std::string& neighbor_id) {
        if (!wanted(edge.relation)) return;
        auto node_it = nodes_.find(neighbor_id);
        if (node_it == nodes_.end()) return;  // dangling edge from a loaded snapshot
        if (!seen.emplace(edge.relation, neighbor_id).second) return;
        hits.push_back({&edge, &node_it->second});
    };

    if (direction == Direction::Out || direction == Direction::Both) {
        if (auto it = out_by_node_.find(id); it != out_by_node_.end()) {
            for (std::size_t idx : it->second) {
                add(relations_[idx], relations_[idx].to_id);
            }
        }
    }
    if (direction == Direction::In || direction == Direction::Both) {
        if (auto it = in_by_node_.find(id); it != in_by_node_.end()) {
            for (std::size_t idx : it->second) {
                add(relations_[idx], relations_[idx].from_id);
            }
        }
    }
    std::sort(hits.begin(), hits.end(), [](const NeighborHit& a, const NeighborHit& b) {
        return std::tie(a.edge->relation, a.node->id) < std::tie(b.edge->relation, b.node->id);
    });
    return hits;
}

std::vector<ConstraintViolation> SkillGraph::validate() const {
    std::vector<ConstraintViolation> out;
    for (const auto& [id, node] : nodes_) {
        bool has_label = false;
        for (const auto& [lang, label] : node.labels) {
            if (!label.empty()) {
                has_label = true;
                break;
            }
        }
        if (!has_label) {
            out.push_back({"missing-label", id, "node has no label in any language"});
        }
        if (node.kind == NodeKind::Skill && node.provenance.framework.empty()) {
            bool linked = false;
            if (auto it = out_by_node_.find(id); it != out_by_node_.end()) {
                for (std::size_t idx : it->second) {
                    if (relations_[idx].relation == RelationKind::IsRelevantForOccupation) {
                        linked = true;
                        break;
                    }
                }
            }
            if (!linked) {
                out.push_back({"constraint:framework-or-occupation", id,
                               "skill is linked to no framework and no occupation"});
            }
        }
    }
    for (const auto& e : relations_) {
        std::string subject =
            e.from_id + " -" + std::string(to_string(e.relation)) + "-> " + e.to_id;
        if (e.from_id == e.to_id) {
            out.push_back({"self-loop", subject, "relation endpoints are identical"});
        }
        if (!nodes_.count(e.from_id) || !nodes_.count(e.to_id)) {
            out.push_back({"dangling-edge", subject, "edge endpoint is not materialized"});
        }
    }
    for (const auto& e : mappings_) {
        std::string subject =
            e.from_id + " -mapping:" + std::string(to_string(e.kind)) + "-> " + e.to_id;
        if (!nodes_.count(e.from_id) || !nodes_.count(e.to_id)) {
            out.push_back({"dangling-edge", subject, "mapping endpoint is not materialized"});
        }
    }
    for (const auto& q : quarantined_) {
        out.push_back({"dangling-edge", q.from_id + " -" + q.relation + "-> " + q.to_id,
                       "edge quarantined at ingest: " + q.reason});
    }
    return out;
}

std::vector<const RelationEdge*> SkillGraph::out_edges(const std::string& id) const {
    std::vector<const RelationEdge*> out;
    if (auto it = out_by_node_.find(id); it != out_by_node_.end()) {
        out.reserve(it->second.size());
        for (std::size_t idx : it->second) {
            out.push_back(&relations_[idx]);
        }
    }
    return out;
}

std::vector<const RelationEdge*> SkillGraph::in_edges(const std::string& id) const {
    std::vector<const RelationEdge*> out;
    if (auto it = in_by_node_.find(id); it != in_by_node_.end()) {
        out.reserve(it->second.size());
        for (std::size_t idx : it->second) {
            out.push_back(&relations_[idx]);
        }
    }
    return out;
}

std::string SkillGraph::to_snapshot_json() const {
    json j;
    j["format"] = "skillgraph-snapshot";
    j["version"] = 1;
    j["nodes"] = json::array();
    for (const auto& [id, node] : nodes_) {
        json n;
        n["id"] = node.id;
        n["kind"] = std::string(to_string(node.kind));
        n["labels"] = node.labels;
        n["alt_labels"] = node.alt_labels;
        n["descriptions"] = node.descriptions;
        n["provenance"] = provenance_to_json(node.provenance);
        j["nodes"].push_back(std::move(n));
    }
    j["relations"] = json::array();
    for (const auto& e : relations_) {
        j["relations"].push_back({{"from", e.from_id},
                                  {"to", e.to_id},
                                  {"relation", std::string(to_string(e.relation))},
                                  {"provenance", provenance_to_json(e.provenance)}});
    }
    j["mappings"] = json::array();
    for (const auto& e : mappings_) {
        j["mappings"].push_back({{"from", e.from_id},
                                 {"to", e.to_id},
                                 {"kind", std::string(to_string(e.kind))},
                                 {"provenance", provenance_to_json(e.provenance)}});
    }
    j["quarantined"] = json::array();
    for (const auto& q : quarantined_) {
        j["quarantined"].push_back({{"from", q.from_id},
                                    {"to", q.to_id},
                                    {"relation", q.relation},
                                    {"is_mapping", q.is_mapping},
                                    {"reason", q.reason}});
    }
    return j.dump();
}

SkillGraph SkillGraph::from_snapshot_json(const std::string& json_text) {
    json j = json::parse(json_text, nullptr, false);
    if (j.is_discarded() || !j.is_object() || j.value("format", "") != "skillgraph-snapshot") {
        throw IoError("not a skillgraph snapshot");
    }
    SkillGraph g;
    for (const auto& n : j.value("nodes", json::array())) {
        SkillNode node;
        node.id = n.value("id", "");
        node.kind = parse_node_kind(n.value("kind", "skill")).value_or(NodeKind::Skill);
        if (n.contains("labels")) {
            node.labels = n["labels"].get<std::map<std::string, std::string>>();
        }
        if (n.contains("alt_labels")) {
            node.alt_labels =
                n["alt_labels"].get<std::map<std::string, std::vector<std::string>>>();
        }
        if (n.contains("descriptions")) {
            node.descriptions = n["descriptions"].get<std::map<std::string, std::string>>();
        }
        if (n.contains("provenance")) {
            node.provenance = provenance_from_json(n["provenance"]);
        }
        if (!node.id.empty()) {
            g.nodes_.emplace(node.id, std::move(node));
        }
    }
    for (const auto& e : j.value("relations", json::array())) {
        RelationEdge edge;
        edge.from_id = e.value("from", "");
        edge.to_id = e.value("to", "");
        edge.relation =
            parse_relation_kind(e.value("relation", "related")).value_or(RelationKind::Related);
        if (e.contains("provenance")) {
            edge.provenance = provenance_from_json(e["provenance"]);
        }
        g.relations_.push_back(std::move(edge));
    }
    for (const auto& e : j.value("mappings", json::array())) {
        MappingEdge edge;
        edge.from_id = e.value("from", "");
        edge.to_id = e.value("to", "");
        edge.kind = parse_mapping_kind(e.value("kind", "exact")).value_or(MappingKind::ExactMatch);
        if (e.contains("provenance")) {
            edge.provenance = provenance_from_json(e["provenance"]);
        }
        g.mappings_.push_back(std::move(edge));
    }
    for (const auto& q : j.value("quarantined", json::array())) {
        g.quarantined_.push_back({q.value("from", ""), q.value("to", ""),
                                  q.value("relation", ""), q.value("is_mapping", false),
                                  q.value("reason", "")});
    }
    std::sort(g.relations_.begin(), g.relations_.end(), relation_order);
    std::sort(g.mappings_.begin(), g.mappings_.end(), mapping_order);
    g.rebuild_adjacency();
    return g;
}

void SkillGraph::save(const std::string& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw IoError("cannot write snapshot: " + path);
    }
    out << to_snapshot_json();
    if (!out) {
        throw IoError("failed writing snapshot: " + path);
    }
}

SkillGraph SkillGraph::load(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot read snapshot: " + path);
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return from_snapshot_json(buf.str());
}

void SkillGraph::rebuild_adjacency() {
    out_by_node_.clear();
    in_by_node_.clear();
    for (std::size_t i = 0; i < relations_.size(); ++i) {
        out_by_node_[relations_[i].from_id].push_back(i);
        in_by_node_[relations_[i].to_id].push_back(i);
    }
}

}  // namespace skillgraph::kg

#pragma once

#include <cstddef>
#include <iosfwd>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "skillgraph/types.hpp"

namespace skillgraph::kg {

enum class ValidationPolicy { Strict, Lenient };

enum class Direction { Out, In, Both };

struct RejectedRecord {
    std::size_t line = 0;  // 1-based JSONL line, 0 if not line-bound
    std::string id;
    std::string reason;
};

struct IngestSummary {
    std::size_t nodes = 0;     // newly materialized nodes
    std::size_t edges = 0;     // newly materialized relation edges
    std::size_t mappings = 0;  // newly materialized mapping edges
    std::size_t duplicates = 0;  // identical re-ingested records (no-ops)
    std::size_t quarantined = 0;  // dangling edges held back under Lenient
    std::size_t unknown_field_warnings = 0;
    std::map<std::string, std::size_t> nodes_per_kind;
    std::map<std::string, std::size_t> nodes_per_framework;
    std::vector<RejectedRecord> rejected;
    bool aborted = false;
    std::string abort_reason;

    std::string to_json() const;
};

struct QuarantinedEdge {
    std::string from_id;
    std::string to_id;
    std::string relation;  // relation or mapping kind name
    bool is_mapping = false;
    std::string reason;
};

struct ConstraintViolation {
    std::string code;     // constraint:framework-or-occupation | dangling-edge |
                          // self-loop | missing-label
    std::string subject;  // node id or "<from> -<relation>-> <to>"
    std::string detail;
};

struct NeighborHit {
    const RelationEdge* edge;
    const SkillNode* node;
};

struct IngestOptions {
    ValidationPolicy policy = ValidationPolicy::Lenient;
    // Timestamp recorded on every ingested record. Fixing it makes rebuilt
    // snapshots byte-identical; <0 means "use current wall clock".
    std::int64_t ingested_at = -1;
};

// In-memory provenance-preserving skill graph. Mutable only while ingesting;
// the service treats a loaded instance as immutable and swaps whole instances
// on re-ingest, so concurrent readers need no locks.
class SkillGraph {
public:
    IngestSummary ingest(std::istream& jsonl, const IngestOptions& options = {});

    const SkillNode* node(const std::string& id) const;

    // Neighbors filtered by relation kind and direction, ordered by
    // (relation kind, neighbor id). `Both` deduplicates per (kind, neighbor).
    std::vector<NeighborHit> neighbors(const std::string& id,
                                       const std::set<RelationKind>& relations,
                                       Direction direction) const;

    std::vector<ConstraintViolation> validate() const;

    const std::map<std::string, SkillNode>& nodes() const { return nodes_; }
    const std::vector<RelationEdge>& relations() const { return relations_; }
    const std::vector<MappingEdge>& mappings() const { return mappings_; }
    const std::vector<QuarantinedEdge>& quarantined() const { return quarantined_; }

    std::vector<const RelationEdge*> out_edges(const std::string& id) const;
    std::vector<const RelationEdge*> in_edges(const std::string& id) const;

    // Canonical JSON snapshot: sorted keys, sorted entity order, stable bytes
    // for identical content.
    std::string to_snapshot_json() const;
    static SkillGraph from_snapshot_json(const std::string& json_text);

    void save(const std::string& path) const;
    static SkillGraph load(const std::string& path);

    std::size_t node_count() const { return nodes_.size(); }

private:
    void rebuild_adjacency();
    std::string signature_of_existing(const std::string& id) const;

    std::map<std::string, SkillNode> nodes_;
    std::vector<RelationEdge> relations_;  // sorted by (relation, from, to)
    std::vector<MappingEdge> mappings_;    // sorted by (from, to, kind)
    std::vector<QuarantinedEdge> quarantined_;
    std::map<std::string, std::vector<std::size_t>> out_by_node_;
    std::map<std::string, std::vector<std::size_t>> in_by_node_;
};

}  // namespace skillgraph::kg

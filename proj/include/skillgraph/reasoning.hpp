#pragma once

#include <string>
#include <vector>

#include "skillgraph/searcher.hpp"
#include "skillgraph/skill_graph.hpp"
#include "skillgraph/vector_index.hpp"

namespace skillgraph::reasoning {

struct CandidateSignal {
    std::string node_id;
    double graph_proximity = 0.0;  // 1/(1 + shortest path length), 0 if unreachable
    double text_similarity = 0.0;  // cosine of stored embeddings
    double co_link_count = 0.0;    // shared occupation/related neighbors
    double combined = 0.0;         // mean of the three, min-max normalized in-set
};

struct StructuralItem {
    std::string node_id;
    double score = 0.0;
    retrieval::SourceTag tag = retrieval::SourceTag::InferredGraph;
};

struct StructuralAnswer {
    std::string target_id;
    std::vector<StructuralItem> items;
    bool inferred = false;          // no explicit edges; neighborhood heuristic used
    bool narrower_as_subskill = false;
    bool ranker_applied = false;    // items re-ordered and tagged llm-candidate
    bool ranker_skipped = false;
    bool ranker_violation = false;
};

// Answers prerequisite / sub-skill queries: explicit edges verbatim when
// present, otherwise a closed candidate neighborhood ordered by transparent
// signals. An optional ranker may permute the inferred list but can never
// introduce ids from outside it.
class GraphReasoner {
public:
    GraphReasoner(const kg::SkillGraph& graph, const dense::VectorIndex& vectors,
                  std::string language = "en", retrieval::RerankerClient* ranker = nullptr)
        : graph_(graph), vectors_(vectors), language_(std::move(language)), ranker_(ranker) {}

    StructuralAnswer prerequisites(const std::string& id, std::size_t k) const;
    StructuralAnswer subskills(const std::string& id, std::size_t k) const;

    // Union of the 2-hop neighborhood over taxonomic/pedagogic relations and
    // skills sharing an occupation link; excludes the target and occupation
    // nodes; capped at 100 by (graph distance, id).
    std::vector<std::string> candidate_neighborhood(const std::string& id) const;

    std::vector<CandidateSignal> signals(const std::string& target_id,
                                         const std::vector<std::string>& candidates) const;

    StructuralAnswer order_candidates_llm(const std::string& target_id,
                                          StructuralAnswer inferred) const;

private:
    StructuralAnswer structural(const std::string& id, std::size_t k,
                                kg::RelationKind primary, bool narrower_fallback) const;
    StructuralAnswer inferred_answer(const std::string& id, std::size_t k) const;

    const kg::SkillGraph& graph_;
    const dense::VectorIndex& vectors_;
    std::string language_;
    retrieval::RerankerClient* ranker_;
};

}  // namespace skillgraph::reasoning

#include "skillgraph/reasoning.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <set>

#include "skillgraph/errors.hpp"

namespace skillgraph::reasoning {

using kg::RelationKind;

namespace {

const std::set<RelationKind> kTaxonomic = {
    RelationKind::Broader, RelationKind::Narrower, RelationKind::Related,
    RelationKind::HasPrerequisite, RelationKind::HasSubSkill};

const std::set<RelationKind> kCoLink = {RelationKind::IsRelevantForOccupation,
                                        RelationKind::Related};

constexpr std::size_t kNeighborhoodCap = 100;
constexpr int kProximityDepthCap = 6;

// Undirected BFS distances from a start node, over a relation subset.
std::map<std::string, int> bfs_distances(const kg::SkillGraph& graph, const std::string& start,
                                         const std::set<RelationKind>& kinds, int max_depth) {
    std::map<std::string, int> dist;
    dist[start] = 0;
    std::deque<std::string> frontier{start};
    while (!frontier.empty()) {
        const std::string current = frontier.front();
        frontier.pop_front();
        const int d = dist[current];
        if (d >= max_depth) continue;
        auto visit = [&](const std::string& next) {
            if (!dist.count(next)) {
                dist[next] = d + 1;
                frontier.push_back(next);
            }
        };
        for (const auto* e : graph.out_edges(current)) {
            if (kinds.count(e->relation)) visit(e->to_id);
        }
        for (const auto* e : graph.in_edges(current)) {
            if (kinds.count(e->relation)) visit(e->from_id);
        }
    }
    return dist;
}

std::set<std::string> co_link_neighbors(const kg::SkillGraph& graph, const std::string& id) {
    std::set<std::string> out;
    for (const auto* e : graph.out_edges(id)) {
        if (kCoLink.count(e->relation)) out.insert(e->to_id);
    }
    for (const auto* e : graph.in_edges(id)) {
        if (kCoLink.count(e->relation)) out.insert(e->from_id);
    }
    return out;
}

double minmax_or_one(double value, double lo, double hi) {
    return hi == lo ? 1.0 : (value - lo) / (hi - lo);
}

}  // namespace

std::vector<std::string> GraphReasoner::candidate_neighborhood(const std::string& id) const {
    if (!graph_.node(id)) {
        throw NotFoundError("unknown node id: " + id);
    }
    std::set<std::string> members;

    auto two_hop = bfs_distances(graph_, id, kTaxonomic, 2);
    for (const auto& [node_id, d] : two_hop) {
        if (node_id != id) members.insert(node_id);
    }
    // Skills tied to the same occupations.
    for (const auto* e : graph_.out_edges(id)) {
        if (e->relation != RelationKind::IsRelevantForOccupation) continue;
        for (const auto* in : graph_.in_edges(e->to_id)) {
            if (in->relation == RelationKind::IsRelevantForOccupation && in->from_id != id) {
                members.insert(in->from_id);
            }
        }
    }

    // Suggestions are skills, not occupations.
    for (auto it = members.begin(); it != members.end();) {
        const auto* node = graph_.node(*it);
        if (!node || node->kind == kg::NodeKind::Occupation) {
            it = members.erase(it);
        } else {
            ++it;
        }
    }

    std::vector<std::string> out(members.begin(), members.end());
    if (out.size() > kNeighborhoodCap) {
        auto dist = bfs_distances(graph_, id, kTaxonomic, kProximityDepthCap);
        std::sort(out.begin(), out.end(), [&](const std::string& a, const std::string& b) {
            const int da = dist.count(a) ? dist.at(a) : kProximityDepthCap + 1;
            const int db = dist.count(b) ? dist.at(b) : kProximityDepthCap + 1;
            if (da != db) return da < db;
            return a < b;
        });
        out.resize(kNeighborhoodCap);
        std::sort(out.begin(), out.end());
    }
    return out;
}

std::vector<CandidateSignal> GraphReasoner::signals(
    const std::string& target_id, const std::vector<std::string>& candidates) const {
    std::vector<CandidateSignal> out;
    if (candidates.empty()) {
        return out;
    }
    std::set<RelationKind> all_kinds = kTaxonomic;
    all_kinds.insert(RelationKind::IsRelevantForOccupation);
    all_kinds.insert(RelationKind::IsAssessedBy);
    const auto dist = bfs_distances(graph_, target_id, all_kinds, kProximityDepthCap);
    const auto target_links = co_link_neighbors(graph_, target_id);
    const float* target_vec = vectors_.embedding_for(target_id, language_);

    out.reserve(candidates.size());
    for (const auto& cand : candidates) {
        CandidateSignal s;
        s.node_id = cand;
        if (auto it = dist.find(cand); it != dist.end()) {
            s.graph_proximity = 1.0 / (1.0 + it->second);
        }
        if (target_vec) {
            if (const float* cv = vectors_.embedding_for(cand, language_)) {
                s.text_similarity = dense::dot(target_vec, cv, dense::kEmbeddingDim);
            }
        }
        const auto cand_links = co_link_neighbors(graph_, cand);
        std::size_t shared = 0;
        for (const auto& n : cand_links) {
            if (n != target_id && n != cand && target_links.count(n)) ++shared;
        }
        s.co_link_count = static_cast<double>(shared);
        out.push_back(std::move(s));
    }

    auto bounds = [&](auto getter) {
        double lo = getter(out.front());
        double hi = lo;
        for (const auto& s : out) {
            lo = std::min(lo, getter(s));
            hi = std::max(hi, getter(s));
        }
        return std::pair{lo, hi};
    };
    const auto [plo, phi] = bounds([](const CandidateSignal& s) { return s.graph_proximity; });
    const auto [tlo, thi] = bounds([](const CandidateSignal& s) { return s.text_similarity; });
    const auto [clo, chi] = bounds([](const CandidateSignal& s) { return s.co_link_count; });
    for (auto& s : out) {
        s.combined = (minmax_or_one(s.graph_proximity, plo, phi) +
                      minmax_or_one(s.text_similarity, tlo, thi) +
                      minmax_or_one(s.co_link_count, clo, chi)) /
                     3.0;
    }
    return out;
}

StructuralAnswer GraphReasoner::inferred_answer(const std::string& id, std::size_t k) const {
    StructuralAnswer answer;
    answer.target_id = id;
    answer.inferred = true;
    auto candidates = candidate_neighborhood(id);
    auto scored = signals(id, candidates);
    std::sort(scored.begin(), scored.end(), [](const CandidateSignal& a, const CandidateSignal& b) {
        if (a.combined != b.combined) return a.combined > b.combined;
        return a.node_id < b.node_id;
    });
    for (const auto& s : scored) {
        if (answer.items.size() >= k) break;
        answer.items.push_back({s.node_id, s.combined, retrieval::SourceTag::InferredGraph});
    }
    return answer;
}

StructuralAnswer GraphReasoner::structural(const std::string& id, std::size_t k,
                                           RelationKind primary, bool narrower_fallback) const {
    if (!graph_.node(id)) {
        throw NotFoundError("unknown node id: " + id);
    }
    std::vector<std::string> explicit_targets;
    auto collect = [&](RelationKind kind) {
        for (const auto* e : graph_.out_edges(id)) {
            if (e->relation == kind && graph_.node(e->to_id)) {
                explicit_targets.push_back(e->to_id);
            }
        }
    };
    collect(primary);
    bool used_narrower = false;
    if (explicit_targets.empty() && narrower_fallback) {
        collect(RelationKind::Narrower);
        used_narrower = !explicit_targets.empty();
    }

    if (!explicit_targets.empty()) {
        std::sort(explicit_targets.begin(), explicit_targets.end());
        explicit_targets.erase(std::unique(explicit_targets.begin(), explicit_targets.end()),
                               explicit_targets.end());
        StructuralAnswer answer;
        answer.target_id = id;
        answer.narrower_as_subskill = used_narrower;
        for (const auto& target : explicit_targets) {
            if (answer.items.size() >= k) break;
            answer.items.push_back({target, 1.0, retrieval::SourceTag::Explicit});
        }
        return answer;
    }

    auto answer = inferred_answer(id, k);
    if (ranker_ && !answer.items.empty()) {
        answer = order_candidates_llm(id, std::move(answer));
    }
    return answer;
}

StructuralAnswer GraphReasoner::prerequisites(const std::string& id, std::size_t k) const {
    return structural(id, k, RelationKind::HasPrerequisite, false);
}

StructuralAnswer GraphReasoner::subskills(const std::string& id, std::size_t k) const {
    return structural(id, k, RelationKind::HasSubSkill, true);
}

StructuralAnswer GraphReasoner::order_candidates_llm(const std::string& target_id,
                                                     StructuralAnswer inferred) const {
    if (!ranker_ || inferred.items.empty()) {
        inferred.ranker_skipped = true;
        return inferred;
    }
    std::vector<retrieval::RerankCandidate> wire;
    wire.reserve(inferred.items.size());
    for (const auto& item : inferred.items) {
        retrieval::RerankCandidate rc;
        rc.id = item.node_id;
        if (const auto* node = graph_.node(item.node_id)) {
            rc.label = node->label_in(language_).second;
            auto it = node->descriptions.find(language_);
            if (it == node->descriptions.end() && !node->descriptions.empty()) {
                it = node->descriptions.begin();
            }
            if (it != node->descriptions.end()) {
                rc.snippet = it->second.substr(0, 200);
            }
        }
        wire.push_back(std::move(rc));
    }
    const auto* target = graph_.node(target_id);
    const std::string query = target ? target->label_in(language_).second : target_id;

    auto order = ranker_->order(query, wire);
    if (!order) {
        inferred.ranker_skipped = true;
        return inferred;  // signal-ordered list retained, tags unchanged
    }

    std::set<std::string> input_ids;
    for (const auto& item : inferred.items) input_ids.insert(item.node_id);
    std::vector<std::string> kept;
    std::set<std::string> kept_set;
    bool violation = false;
    for (const auto& oid : *order) {
        if (!input_ids.count(oid) || !kept_set.insert(oid).second) {
            violation = true;  // invented or duplicated id; never admitted
            continue;
        }
        kept.push_back(oid);
    }
    if (kept.size() != inferred.items.size()) {
        violation = true;
        for (const auto& item : inferred.items) {
            if (!kept_set.count(item.node_id)) kept.push_back(item.node_id);
        }
    }

    StructuralAnswer out;
    out.target_id = inferred.target_id;
    out.inferred = true;
    out.ranker_applied = true;
    out.ranker_violation = violation;
    for (const auto& oid : kept) {
        auto it = std::find_if(inferred.items.begin(), inferred.items.end(),
                               [&](const StructuralItem& s) { return s.node_id == oid; });
        StructuralItem item = *it;
        item.tag = retrieval::SourceTag::LlmCandidate;
        out.items.push_back(std::move(item));
    }
    return out;
}

}  // namespace skillgraph::reasoning

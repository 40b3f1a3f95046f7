#pragma once

#include <cstdint>
#include <iosfwd>
#include <utility>
#include <vector>

namespace skillgraph::dense {

struct HnswParams {
    std::size_t m = 16;
    std::size_t ef_construction = 200;
    std::size_t ef_search = 100;
    std::uint64_t seed = 42;
};

struct HnswHit {
    std::uint32_t item = 0;
    double similarity = 0.0;  // cosine, assuming unit vectors
};

// Hierarchical navigable small world graph over unit vectors, cosine metric.
// Items are dense indices in insertion order; the caller owns the id mapping
// and fixes insertion order, so an identical input sequence plus seed always
// produces identical neighbor lists.
class HnswIndex {
public:
    HnswIndex(std::size_t dim, HnswParams params);

    void add(const std::vector<float>& vector);

    // Top-k by similarity descending, ties by item ascending. ef is clamped
    // to at least k; ef >= size degrades to an exact scan of the graph.
    std::vector<HnswHit> search(const float* query, std::size_t k, std::size_t ef) const;

    std::size_t size() const { return count_; }
    std::size_t dim() const { return dim_; }
    const HnswParams& params() const { return params_; }
    const float* vector_of(std::uint32_t item) const { return &vectors_[item * dim_]; }

    // Exposed for reproducibility checks and persistence.
    const std::vector<std::uint32_t>& neighbors(std::uint32_t item, std::size_t layer) const;
    int level_of(std::uint32_t item) const { return levels_[item]; }
    int max_level() const { return entry_level_; }

    void save(std::ostream& out) const;
    static HnswIndex load(std::istream& in);

private:
    struct Candidate {
        double dist;
        std::uint32_t item;
        bool operator<(const Candidate& o) const {
            return dist != o.dist ? dist < o.dist : item < o.item;
        }
        bool operator>(const Candidate& o) const { return o < *this; }
    };

    double distance(const float* a, const float* b) const;
    double distance_to(const float* q, std::uint32_t item) const;
    int draw_level();
    std::uint32_t greedy_descend(const float* q, std::uint32_t entry, int from_level,
                                 int to_level) const;
    std::vector<Candidate> search_layer(const float* q, std::uint32_t entry, std::size_t ef,
                                        std::size_t layer) const;
    std::vector<std::uint32_t> select_neighbors(std::vector<Candidate> candidates,
                                                std::size_t m) const;
    void shrink_links(std::uint32_t item, std::size_t layer);

    std::size_t dim_;
    HnswParams params_;
    std::size_t max_links_upper_;  // per layer > 0
    std::size_t max_links_base_;   // layer 0
    double level_norm_;

    std::size_t count_ = 0;
    std::vector<float> vectors_;                                // count * dim
    std::vector<int> levels_;                                   // per item
    std::vector<std::vector<std::vector<std::uint32_t>>> links_;  // item -> layer -> neighbors
    std::uint32_t entry_point_ = 0;
    int entry_level_ = -1;
    std::uint64_t rng_state_;
};

}  // namespace skillgraph::dense

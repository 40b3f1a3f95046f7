#include "skillgraph/hnsw.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <stdexcept>

#include "skillgraph/binio.hpp"
#include "skillgraph/embedder.hpp"

namespace skillgraph::dense {

namespace {
constexpr std::uint32_t kHnswMagic = 0x4E484753;  // "SGHN"
constexpr std::uint32_t kHnswVersion = 1;
}  // namespace

HnswIndex::HnswIndex(std::size_t dim, HnswParams params)
    : dim_(dim),
      params_(params),
      max_links_upper_(std::max<std::size_t>(params.m, 2)),
      max_links_base_(std::max<std::size_t>(params.m, 2) * 2),
      level_norm_(1.0 / std::log(static_cast<double>(std::max<std::size_t>(params.m, 2)))),
      rng_state_(params.seed ? params.seed : 0x9E3779B97F4A7C15ULL) {}

double HnswIndex::distance(const float* a, const float* b) const {
    return 1.0 - dot(a, b, dim_);
}

double HnswIndex::distance_to(const float* q, std::uint32_t item) const {
    return distance(q, &vectors_[item * dim_]);
}

// splitmix64; portable and stateable, unlike distribution adapters.
int HnswIndex::draw_level() {
    rng_state_ += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = rng_state_;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    z ^= z >> 31;
    const double u = static_cast<double>(z >> 11) * 0x1.0p-53;
    const double r = -std::log(u <= 0.0 ? 0x1.0p-53 : u) * level_norm_;
    return static_cast<int>(r);
}

std::uint32_t HnswIndex::greedy_descend(const float* q, std::uint32_t entry, int from_level,
                                        int to_level) const {
    std::uint32_t current = entry;
    double current_dist = distance_to(q, current);
    for (int level = from_level; level > to_level; --level) {
        bool improved = true;
        while (improved) {
            improved = false;
            for (std::uint32_t n : links_[current][level]) {
                const double d = distance_to(q, n);
                if (d < current_dist || (d == current_dist && n < current)) {
                    current = n;
                    current_dist = d;
                    improved = true;
                }
            }
        }
    }
    return current;
}

std::vector<HnswIndex::Candidate> HnswIndex::search_layer(const float* q, std::uint32_t entry,
                                                          std::size_t ef,
                                                          std::size_t layer) const {
    std::vector<std::uint8_t> visited(count_, 0);
    std::priority_queue<Candidate, std::vector<Candidate>, std::greater<>> to_expand;
    std::priority_queue<Candidate> best;  // max-heap; top is worst of the ef kept

    const Candidate start{distance_to(q, entry), entry};
    visited[entry] = 1;
    to_expand.push(start);
    best.push(start);

    while (!to_expand.empty()) {
        const Candidate c = to_expand.top();
        to_expand.pop();
        if (c.dist > best.top().dist && best.size() >= ef) {
            break;
        }
        for (std::uint32_t n : links_[c.item][layer]) {
            if (visited[n]) continue;
            visited[n] = 1;
            const double d = distance_to(q, n);
            if (best.size() < ef || d < best.top().dist) {
                const Candidate cand{d, n};
                to_expand.push(cand);
                best.push(cand);
                if (best.size() > ef) {
                    best.pop();
                }
            }
        }
    }

    std::vector<Candidate> out;
    out.reserve(best.size());
    while (!best.empty()) {
        out.push_back(best.top());
        best.pop();
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<std::uint32_t> HnswIndex::select_neighbors(std::vector<Candidate> candidates,
                                                       std::size_t m) const {
    std::sort(candidates.begin(), candidates.end());
    std::vector<std::uint32_t> selected;
    std::vector<Candidate> discarded;
    selected.reserve(m);
    for (const Candidate& c : candidates) {
        if (selected.size() >= m) break;
        // Keep c only if it is closer to the base than to any already
        // selected neighbor; spreads links across directions.
        bool closer_to_selected = false;
        const float* cv = &vectors_[c.item * dim_];
        for (std::uint32_t s : selected) {
            if (distance(cv, &vectors_[s * dim_]) < c.dist) {
                closer_to_selected = true;
                break;
            }
        }
        if (closer_to_selected) {
            discarded.push_back(c);
        } else {
            selected.push_back(c.item);
        }
    }
    // keepPrunedConnections: top up from the discard pile, closest first.
    for (const Candidate& c : discarded) {
        if (selected.size() >= m) break;
        selected.push_back(c.item);
    }
    return selected;
}

void HnswIndex::shrink_links(std::uint32_t item, std::size_t layer) {
    const std::size_t cap = layer == 0 ? max_links_base_ : max_links_upper_;
    auto& links = links_[item][layer];
    if (links.size() <= cap) return;
    const float* base = &vectors_[item * dim_];
    std::vector<Candidate> candidates;
    candidates.reserve(links.size());
    for (std::uint32_t n : links) {
        candidates.push_back({distance_to(base, n), n});
    }
    links = select_neighbors(std::move(candidates), cap);
}

void HnswIndex::add(const std::vector<float>& vector) {
    if (vector.size() != dim_) {
        throw std::invalid_argument("hnsw: vector dimension mismatch");
    }
    const auto item = static_cast<std::uint32_t>(count_);
    const int level = draw_level();
    vectors_.insert(vectors_.end(), vector.begin(), vector.end());
    levels_.push_back(level);
    links_.emplace_back(static_cast<std::size_t>(level) + 1);
    ++count_;

    if (count_ == 1) {
        entry_point_ = item;
        entry_level_ = level;
        return;
    }

    const float* q = &vectors_[item * dim_];
    std::uint32_t ep = greedy_descend(q, entry_point_, entry_level_, level);

    for (int layer = std::min(level, entry_level_); layer >= 0; --layer) {
        auto found = search_layer(q, ep, params_.ef_construction, layer);
        auto neighbors = select_neighbors(found, params_.m);
        links_[item][layer] = neighbors;
        for (std::uint32_t n : neighbors) {
            links_[n][layer].push_back(item);
            shrink_links(n, layer);
        }
        if (!found.empty()) {
            ep = found.front().item;
        }
    }

    if (level > entry_level_) {
        entry_level_ = level;
        entry_point_ = item;
    }
}

std::vector<HnswHit> HnswIndex::search(const float* query, std::size_t k,
                                       std::size_t ef) const {
    std::vector<HnswHit> out;
    if (count_ == 0 || k == 0) {
        return out;
    }
    ef = std::max(ef, k);
    const std::uint32_t ep = greedy_descend(query, entry_point_, entry_level_, 0);
    auto found = search_layer(query, ep, ef, 0);
    const std::size_t n = std::min(k, found.size());
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        out.push_back({found[i].item, 1.0 - found[i].dist});
    }
    return out;
}

const std::vector<std::uint32_t>& HnswIndex::neighbors(std::uint32_t item,
                                                       std::size_t layer) const {
    return links_.at(item).at(layer);
}

void HnswIndex::save(std::ostream& out) const {
    util::write_u32(out, kHnswMagic);
    util::write_u32(out, kHnswVersion);
    util::write_u64(out, dim_);
    util::write_u64(out, params_.m);
    util::write_u64(out, params_.ef_construction);
    util::write_u64(out, params_.ef_search);
    util::write_u64(out, params_.seed);
    util::write_u64(out, rng_state_);
    util::write_u64(out, count_);
    util::write_u32(out, static_cast<std::uint32_t>(entry_point_));
    util::write_u32(out, static_cast<std::uint32_t>(entry_level_ + 1));
    for (std::size_t i = 0; i < count_; ++i) {
        util::write_u32(out, static_cast<std::uint32_t>(levels_[i]));
        util::write_u32(out, static_cast<std::uint32_t>(links_[i].size()));
        for (const auto& layer : links_[i]) {
            util::write_u32_vec(out, layer);
        }
    }
    util::write_f32_vec(out, vectors_);
}

HnswIndex HnswIndex::load(std::istream& in) {
    if (util::read_u32(in) != kHnswMagic || util::read_u32(in) != kHnswVersion) {
        throw IoError("not an hnsw index file");
    }
    const std::size_t dim = util::read_u64(in);
    HnswParams params;
    params.m = util::read_u64(in);
    params.ef_construction = util::read_u64(in);
    params.ef_search = util::read_u64(in);
    params.seed = util::read_u64(in);
    HnswIndex index(dim, params);
    index.rng_state_ = util::read_u64(in);
    index.count_ = util::read_u64(in);
    index.entry_point_ = util::read_u32(in);
    index.entry_level_ = static_cast<int>(util::read_u32(in)) - 1;
    index.levels_.reserve(index.count_);
    index.links_.reserve(index.count_);
    for (std::size_t i = 0; i < index.count_; ++i) {
        index.levels_.push_back(static_cast<int>(util::read_u32(in)));
        const auto n_layers = util::read_u32(in);
        std::vector<std::vector<std::uint32_t>> layers;
        layers.reserve(n_layers);
        for (std::uint32_t l = 0; l < n_layers; ++l) {
            layers.push_back(util::read_u32_vec(in));
        }
        index.links_.push_back(std::move(layers));
    }
    index.vectors_ = util::read_f32_vec(in);
    if (index.vectors_.size() != index.count_ * dim) {
        throw IoError("hnsw index file is truncated");
    }
    return index;
}

}  // namespace skillgraph::dense

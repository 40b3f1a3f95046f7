#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace skillgraph::dense {

inline constexpr std::size_t kEmbeddingDim = 768;

std::uint64_t fnv1a64(std::string_view s);

// Dot product with fixed 4-way unrolling: fast enough for brute-force scans
// and bit-reproducible because the summation order never changes.
double dot(const float* a, const float* b, std::size_t dim);

void l2_normalize(std::vector<float>& v);

// Text-to-vector interface. Implementations: TrigramHashEmbedder (offline,
// deterministic) and HttpEmbedder (external service, see http_clients.hpp).
class Embedder {
public:
    virtual ~Embedder() = default;

    // Returns one kEmbeddingDim unit vector per input text.
    virtual std::vector<std::vector<float>> embed(const std::vector<std::string>& texts,
                                                  std::string_view language) = 0;
    virtual std::string name() const = 0;
};

// Hashed character trigrams bucketed into kEmbeddingDim dimensions and
// L2-normalized. No model download, no randomness: the same text always maps
// to the same vector. Trigrams are taken over codepoints of the lowercased,
// NFC-normalized text, so accented characters hash as single units.
class TrigramHashEmbedder final : public Embedder {
public:
    std::vector<std::vector<float>> embed(const std::vector<std::string>& texts,
                                          std::string_view language) override;
    std::string name() const override { return "trigram-hash"; }

    static std::vector<float> embed_one(std::string_view text);
};

}  // namespace skillgraph::dense

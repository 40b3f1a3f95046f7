#include "skillgraph/embedder.hpp"

#include <cmath>
#include <stdexcept>

#include "skillgraph/text.hpp"

namespace skillgraph::dense {

std::uint64_t fnv1a64(std::string_view s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

double dot(const float* a, const float* b, std::size_t dim) {
    double s0 = 0, s1 = 0, s2 = 0, s3 = 0;
    std::size_t i = 0;
    for (; i + 4 <= dim; i += 4) {
        s0 += static_cast<double>(a[i]) * b[i];
        s1 += static_cast<double>(a[i + 1]) * b[i + 1];
        s2 += static_cast<double>(a[i + 2]) * b[i + 2];
        s3 += static_cast<double>(a[i + 3]) * b[i + 3];
    }
    for (; i < dim; ++i) {
        s0 += static_cast<double>(a[i]) * b[i];
    }
    return (s0 + s1) + (s2 + s3);
}

void l2_normalize(std::vector<float>& v) {
    double norm_sq = 0;
    for (float x : v) {
        norm_sq += static_cast<double>(x) * x;
    }
    if (norm_sq <= 0) {
        throw std::invalid_argument("cannot normalize a zero vector");
    }
    const double inv = 1.0 / std::sqrt(norm_sq);
    for (float& x : v) {
        x = static_cast<float>(x * inv);
    }
}

std::vector<float> TrigramHashEmbedder::embed_one(std::string_view raw) {
    const std::string normalized = text::lower(text::nfc(raw));
    const std::u32string cps = text::decode_utf8(normalized);
    if (cps.empty()) {
        throw std::invalid_argument("cannot embed empty text");
    }
    std::vector<float> v(kEmbeddingDim, 0.0f);
    if (cps.size() < 3) {
        // Short texts hash as a single gram.
        v[fnv1a64(normalized) % kEmbeddingDim] += 1.0f;
    } else {
        for (std::size_t i = 0; i + 3 <= cps.size(); ++i) {
            const std::string gram = text::encode_utf8(cps.substr(i, 3));
            v[fnv1a64(gram) % kEmbeddingDim] += 1.0f;
        }
    }
    l2_normalize(v);
    return v;
}

std::vector<std::vector<float>> TrigramHashEmbedder::embed(
    const std::vector<std::string>& texts, std::string_view) {
    std::vector<std::vector<float>> out;
    out.reserve(texts.size());
    for (const auto& t : texts) {
        out.push_back(embed_one(t));
    }
    return out;
}

}  // namespace skillgraph::dense

#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "support/fixtures.hpp"
#include "support/oracles.hpp"

using namespace skillgraph;

namespace {

std::vector<std::vector<float>> random_unit_vectors(std::size_t n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<float> gauss(0.0f, 1.0f);
    std::vector<std::vector<float>> out(n);
    for (auto& v : out) {
        v.resize(dense::kEmbeddingDim);
        for (auto& x : v) x = gauss(rng);
        dense::l2_normalize(v);
    }
    return out;
}

}  // namespace

TEST_CASE("fallback embedder is deterministic, 768-dim, unit length") {
    dense::TrigramHashEmbedder embedder;
    auto a = embedder.embed({"data analysis"}, "en").at(0);
    auto b = embedder.embed({"data analysis"}, "en").at(0);
    CHECK(a == b);  // bit-identical
    CHECK(a.size() == 768);
    double norm = 0;
    for (float x : a) norm += static_cast<double>(x) * x;
    CHECK(std::sqrt(norm) == doctest::Approx(1.0).epsilon(1e-6));
    CHECK_THROWS_AS(embedder.embed({""}, "en"), std::invalid_argument);
}

TEST_CASE("trigram similarity orders near-paraphrases above unrelated text") {
    dense::TrigramHashEmbedder embedder;
    auto vecs = embedder.embed({"data analysis", "data analyses", "network routing"}, "en");
    const double near = dense::dot(vecs[0].data(), vecs[1].data(), dense::kEmbeddingDim);
    const double far = dense::dot(vecs[0].data(), vecs[2].data(), dense::kEmbeddingDim);
    CHECK(near > far);
}

TEST_CASE("compose_text concatenates label, alt labels, description") {
    kg::SkillNode node;
    node.id = "t:S1";
    node.labels["en"] = "data analysis";
    node.descriptions["en"] = "inspecting data";
    auto composed = dense::compose_text(node, "en");
    CHECK(composed.text == "data analysis\n\ninspecting data");
    CHECK_FALSE(composed.language_fallback);

    node.alt_labels["en"] = {"data analytics", "data crunching"};
    CHECK(dense::compose_text(node, "en").text ==
          "data analysis\ndata analytics; data crunching\ninspecting data");

    // Same node twice -> identical string.
    CHECK(dense::compose_text(node, "en").text == dense::compose_text(node, "en").text);
}

TEST_CASE("compose_text falls back to another language with a flag") {
    kg::SkillNode node;
    node.id = "t:S1";
    node.labels["fr"] = "analyse de données";
    auto composed = dense::compose_text(node, "en");
    CHECK(composed.language_fallback);
    CHECK(composed.language_used == "fr");
    CHECK(composed.text == "analyse de données\n\n");

    kg::SkillNode empty;
    empty.id = "t:NONE";
    CHECK_THROWS_AS(dense::compose_text(empty, "en"), std::invalid_argument);
}

TEST_CASE("empty index searches return nothing") {
    dense::HnswIndex index(dense::kEmbeddingDim, {});
    std::vector<float> q(dense::kEmbeddingDim, 0.0f);
    q[0] = 1.0f;
    CHECK(index.search(q.data(), 10, 100).empty());
    CHECK(index.size() == 0);
}

TEST_CASE("all inserted vectors are retrievable by self-query") {
    auto vectors = random_unit_vectors(100, 11);
    dense::HnswParams params;
    dense::HnswIndex index(dense::kEmbeddingDim, params);
    for (const auto& v : vectors) index.add(v);
    CHECK(index.size() == 100);
    for (std::size_t i = 0; i < vectors.size(); ++i) {
        auto hits = index.search(vectors[i].data(), 1, 100);
        REQUIRE(!hits.empty());
        CHECK(hits[0].item == i);
        CHECK(hits[0].similarity == doctest::Approx(1.0).epsilon(1e-6));
    }
}

TEST_CASE("k larger than the index returns every id") {
    auto vectors = random_unit_vectors(7, 3);
    dense::HnswIndex index(dense::kEmbeddingDim, {});
    for (const auto& v : vectors) index.add(v);
    auto hits = index.search(vectors[0].data(), 50, 100);
    CHECK(hits.size() == 7);
}

TEST_CASE("ef_search >= size makes results equal exact kNN") {
    auto vectors = random_unit_vectors(200, 17);
    dense::HnswIndex index(dense::kEmbeddingDim, {});
    for (const auto& v : vectors) index.add(v);

    auto queries = random_unit_vectors(20, 99);
    for (const auto& q : queries) {
        auto got = index.search(q.data(), 10, 200);
        auto expected = oracle::exact_knn(vectors, q, 10);
        REQUIRE(got.size() == expected.size());
        for (std::size_t i = 0; i < got.size(); ++i) {
            CHECK(got[i].item == expected[i].index);
        }
    }
}

TEST_CASE("hnsw recall at moderate ef clears 0.9 on 500 vectors") {
    auto vectors = random_unit_vectors(500, 23);
    dense::HnswIndex index(dense::kEmbeddingDim, {});
    for (const auto& v : vectors) index.add(v);

    auto queries = random_unit_vectors(20, 7);
    double recall_sum = 0;
    for (const auto& q : queries) {
        auto got = index.search(q.data(), 10, 100);
        auto expected = oracle::exact_knn(vectors, q, 10);
        std::set<std::uint32_t> got_set;
        for (const auto& h : got) got_set.insert(h.item);
        std::size_t overlap = 0;
        for (const auto& e : expected) {
            if (got_set.count(static_cast<std::uint32_t>(e.index))) ++overlap;
        }
        recall_sum += static_cast<double>(overlap) / expected.size();
    }
    CHECK(recall_sum / queries.size() >= 0.9);
}

TEST_CASE("hnsw build is reproducible for a fixed seed") {
    auto vectors = random_unit_vectors(120, 41);
    dense::HnswParams params;
    params.seed = 7;
    dense::HnswIndex a(dense::kEmbeddingDim, params);
    dense::HnswIndex b(dense::kEmbeddingDim, params);
    for (const auto& v : vectors) {
        a.add(v);
        b.add(v);
    }
    REQUIRE(a.size() == b.size());
    CHECK(a.max_level() == b.max_level());
    for (std::uint32_t i = 0; i < a.size(); ++i) {
        REQUIRE(a.level_of(i) == b.level_of(i));
        for (int l = 0; l <= a.level_of(i); ++l) {
            CHECK(a.neighbors(i, l) == b.neighbors(i, l));
        }
    }
}

TEST_CASE("hnsw save and load round trip") {
    auto vectors = random_unit_vectors(60, 5);
    dense::HnswIndex index(dense::kEmbeddingDim, {});
    for (const auto& v : vectors) index.add(v);
    std::stringstream buf;
    index.save(buf);
    auto loaded = dense::HnswIndex::load(buf);
    REQUIRE(loaded.size() == index.size());
    auto q = random_unit_vectors(1, 77)[0];
    auto h1 = index.search(q.data(), 10, 60);
    auto h2 = loaded.search(q.data(), 10, 60);
    REQUIRE(h1.size() == h2.size());
    for (std::size_t i = 0; i < h1.size(); ++i) {
        CHECK(h1[i].item == h2[i].item);
        CHECK(h1[i].similarity == h2[i].similarity);
    }
}

TEST_CASE("vector index is per-language with id mapping") {
    auto b = fixtures::build_indices(fixtures::kToyGraphJsonl);
    CHECK(b.vectors.languages() == std::vector<std::string>{"en", "fr"});
    CHECK(b.vectors.size("en") == 8);  // rome nodes are fr-only
    CHECK(b.vectors.size("fr") == 7);

    // Query with an indexed node's own composed text: that node comes first.
    const auto* node = b.graph.node("esco:S2");
    REQUIRE(node);
    auto text = dense::compose_text(*node, "en").text;
    auto qv = b.embedder.embed({text}, "en").at(0);
    auto result = b.vectors.search(qv, "en", 3, 100);
    REQUIRE(!result.scores.empty());
    CHECK(result.scores[0].node_id == "esco:S2");
    CHECK(result.scores[0].s_sem == doctest::Approx(1.0).epsilon(1e-6));

    // Missing language flagged.
    auto missing = b.vectors.search(qv, "de", 3, 100);
    CHECK(missing.language_missing);
    CHECK(missing.scores.empty());

    // Dimension checks.
    std::vector<float> wrong(3, 1.0f);
    CHECK_THROWS_AS(b.vectors.search(wrong, "en", 3, 100), std::invalid_argument);
}

TEST_CASE("embedding_for prefers the requested language then falls back") {
    auto b = fixtures::build_indices(fixtures::kToyGraphJsonl);
    CHECK(b.vectors.embedding_for("esco:S1", "fr") != nullptr);
    CHECK(b.vectors.embedding_for("esco:S5", "fr") != nullptr);  // en-only node, fallback
    CHECK(b.vectors.embedding_for("nope:X", "en") == nullptr);

    const float* fr = b.vectors.embedding_for("esco:S1", "fr");
    const float* en = b.vectors.embedding_for("esco:S1", "en");
    CHECK(fr != en);  // distinct per-language vectors
}

TEST_CASE("vector index save and load round trip") {
    auto b = fixtures::build_indices(fixtures::kToyGraphJsonl);
    std::stringstream buf;
    b.vectors.save(buf);
    auto loaded = dense::VectorIndex::load(buf);
    CHECK(loaded.size("en") == b.vectors.size("en"));
    CHECK(loaded.size("fr") == b.vectors.size("fr"));

    auto qv = b.embedder.embed({"statistics"}, "en").at(0);
    auto r1 = b.vectors.search(qv, "en", 5, 100);
    auto r2 = loaded.search(qv, "en", 5, 100);
    REQUIRE(r1.scores.size() == r2.scores.size());
    for (std::size_t i = 0; i < r1.scores.size(); ++i) {
        CHECK(r1.scores[i].node_id == r2.scores[i].node_id);
        CHECK(r1.scores[i].s_sem == r2.scores[i].s_sem);
    }
}

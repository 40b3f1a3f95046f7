#include <doctest.h>

#include <sstream>

#include "skillgraph/text.hpp"
#include "support/fixtures.hpp"
#include "support/oracles.hpp"

using namespace skillgraph;
using fixtures::graph_from_jsonl;

namespace {

std::string record(const std::string& id, const std::string& lang, const std::string& label,
                   const std::string& desc = "", const std::string& alt = "") {
    std::string r = "{\"id\":\"" + id + "\",\"kind\":\"skill\",\"labels\":{\"" + lang +
                    "\":\"" + label + "\"}";
    if (!desc.empty()) {
        r += ",\"descriptions\":{\"" + lang + "\":\"" + desc + "\"}";
    }
    if (!alt.empty()) {
        r += ",\"alt_labels\":{\"" + lang + "\":[\"" + alt + "\"]}";
    }
    r += ",\"provenance\":{\"framework\":\"T\",\"version\":\"1\",\"uri\":\"u\"}}";
    return r;
}

}  // namespace

TEST_CASE("build creates one sub-index per language") {
    std::string jsonl;
    for (int i = 1; i <= 3; ++i) {
        jsonl += "{\"id\":\"t:S" + std::to_string(i) +
                 "\",\"kind\":\"skill\",\"labels\":{\"en\":\"skill number " +
                 std::to_string(i) + "\",\"fr\":\"compétence numéro " + std::to_string(i) +
                 "\"},\"provenance\":{\"framework\":\"T\",\"version\":\"1\",\"uri\":\"u\"}}\n";
    }
    auto graph = graph_from_jsonl(jsonl);
    lexical::LexicalIndex index;
    index.build(graph, {"en", "fr"});
    CHECK(index.languages() == std::vector<std::string>{"en", "fr"});
    CHECK(index.stats("en")->docs == 3);
    CHECK(index.stats("fr")->docs == 3);

    // Node lacking fr text is absent from the fr sub-index.
    auto graph2 = graph_from_jsonl(jsonl + record("t:S4", "en", "english only skill") + "\n");
    lexical::LexicalIndex index2;
    index2.build(graph2, {"en", "fr"});
    CHECK(index2.stats("en")->docs == 4);
    CHECK(index2.stats("fr")->docs == 3);
}

TEST_CASE("rebuild over identical nodes yields identical statistics") {
    auto graph = fixtures::toy_graph();
    lexical::LexicalIndex a, b;
    a.build(graph, {"en", "fr"});
    b.build(graph, {"en", "fr"});
    for (const auto& lang : {"en", "fr"}) {
        auto sa = a.stats(lang);
        auto sb = b.stats(lang);
        CHECK(sa->docs == sb->docs);
        CHECK(sa->distinct_terms == sb->distinct_terms);
        for (std::size_t f = 0; f < lexical::kFieldCount; ++f) {
            CHECK(sa->avgdl[f] == sb->avgdl[f]);
        }
    }
}

TEST_CASE("single-document hit and miss") {
    auto graph = graph_from_jsonl(record("t:S1", "en", "welding basics"));
    lexical::LexicalIndex index;
    index.build(graph, {"en"});

    auto hit = index.search("welding", "en", 5);
    REQUIRE(hit.scores.size() == 1);
    CHECK(hit.scores[0].node_id == "t:S1");
    CHECK(hit.scores[0].s_lex > 0.0);

    CHECK(index.search("plumbing", "en", 5).scores.empty());
}

TEST_CASE("token-OR scores match the brute-force BM25 oracle") {
    // Ten docs with overlapping vocabulary across all three fields.
    std::string jsonl;
    const char* labels[] = {
        "data analysis methods",     "data management",        "statistical analysis",
        "visualization of data",     "machine learning data",  "survey design",
        "report writing",            "data quality checks",    "spreadsheet analysis",
        "database analysis tooling"};
    const char* descs[] = {
        "inspecting data for analysis",  "storing data safely",
        "analysis of numeric data",      "charts and dashboards",
        "training models on data",       "asking good questions",
        "writing clear analysis notes",  "profiling data defects",
        "formulas over data tables",     "indexes and analysis plans"};
    const char* alts[] = {"data analytics", "data stewardship", "stats",      "dataviz",
                          "ml engineering", "questionnaires",   "reporting",  "data probing",
                          "sheet analysis", "database tooling"};
    for (int i = 0; i < 10; ++i) {
        jsonl += record("t:S" + std::to_string(i), "en", labels[i], descs[i], alts[i]) + "\n";
    }
    auto graph = graph_from_jsonl(jsonl);
    lexical::LexicalIndex index;
    index.build(graph, {"en"});

    // '^' forces the token-OR stage and is stripped by the analyzer.
    auto got = index.search("data analysis^", "en", 10);
    CHECK(got.stage == lexical::QueryStage::TokenOr);

    // Oracle recomputes from analyzed token lists.
    std::vector<oracle::Bm25Doc> docs;
    for (int i = 0; i < 10; ++i) {
        oracle::Bm25Doc d;
        d.id = "t:S" + std::to_string(i);
        d.label = text::analyze(labels[i], "en");
        d.alt = text::analyze(alts[i], "en");
        d.desc = text::analyze(descs[i], "en");
        docs.push_back(std::move(d));
    }
    auto expected = oracle::bm25_scores(docs, text::analyze("data analysis", "en"));

    REQUIRE(!got.scores.empty());
    for (const auto& s : got.scores) {
        REQUIRE(expected.count(s.node_id));
        CHECK(s.s_lex == doctest::Approx(expected.at(s.node_id)).epsilon(1e-6));
    }
    // Everything the oracle scored surfaced (limit covers all docs).
    std::size_t oracle_hits = 0;
    for (const auto& [id, score] : expected) {
        if (score > 0) ++oracle_hits;
    }
    CHECK(got.scores.size() == oracle_hits);
}

TEST_CASE("phrase stage outranks everything else and fires first") {
    auto graph = graph_from_jsonl(
        record("t:S1", "en", "data analysis", "general breakdown") + "\n" +
        record("t:S2", "en", "cooking skills", "data analysis data analysis in the kitchen") +
        "\n" + record("t:S3", "en", "gardening", "no relevant words here") + "\n");
    lexical::LexicalIndex index;
    index.build(graph, {"en"});

    auto result = index.search("data analysis", "en", 5);
    CHECK(result.stage == lexical::QueryStage::Phrase);
    // Only phrase-matching docs appear, and the label match outranks the
    // repeated description match.
    REQUIRE(result.scores.size() == 2);
    CHECK(result.scores[0].node_id == "t:S1");  // label field carries more weight
}

TEST_CASE("prefix stage fires when the phrase stage is empty") {
    auto graph = graph_from_jsonl(record("t:S1", "en", "databases for beginners") + "\n" +
                                  record("t:S2", "en", "cooking for beginners") + "\n");
    lexical::LexicalIndex index;
    index.build(graph, {"en"});
    auto result = index.search("datab", "en", 5);
    CHECK(result.stage == lexical::QueryStage::Prefix);
    REQUIRE(result.scores.size() == 1);
    CHECK(result.scores[0].node_id == "t:S1");

    // Multi-token: exact lead + prefix tail.
    auto r2 = index.search("cooking for beg", "en", 5);
    CHECK(r2.stage == lexical::QueryStage::Prefix);
    REQUIRE(r2.scores.size() == 1);
    CHECK(r2.scores[0].node_id == "t:S2");
}

TEST_CASE("duplicating a description term into the label raises the score") {
    auto base = record("t:S1", "en", "quality work", "welding practice") + "\n" +
                record("t:S2", "en", "other topic", "unrelated notes") + "\n";
    auto boosted = record("t:S1", "en", "welding quality work", "welding practice") + "\n" +
                   record("t:S2", "en", "other topic", "unrelated notes") + "\n";
    lexical::LexicalIndex a, b;
    auto ga = graph_from_jsonl(base);
    auto gb = graph_from_jsonl(boosted);
    a.build(ga, {"en"});
    b.build(gb, {"en"});
    auto sa = a.search("welding^", "en", 5);
    auto sb = b.search("welding^", "en", 5);
    REQUIRE(!sa.scores.empty());
    REQUIRE(!sb.scores.empty());
    CHECK(sb.scores[0].s_lex > sa.scores[0].s_lex);
}

TEST_CASE("adding an unrelated document preserves rank order") {
    auto jsonl = record("t:S1", "en", "data analysis", "inspecting data") + "\n" +
                 record("t:S2", "en", "data management", "storing data") + "\n";
    auto extended = jsonl + record("t:S9", "en", "pastry baking", "ovens and dough") + "\n";
    lexical::LexicalIndex a, b;
    auto ga = graph_from_jsonl(jsonl);
    auto gb = graph_from_jsonl(extended);
    a.build(ga, {"en"});
    b.build(gb, {"en"});

    auto ranks = [](const lexical::LexicalSearchResult& r) {
        std::vector<std::string> ids;
        for (const auto& s : r.scores) ids.push_back(s.node_id);
        return ids;
    };
    CHECK(ranks(a.search("data^", "en", 5)) == ranks(b.search("data^", "en", 5)));
}

TEST_CASE("search is deterministic, bit-exact") {
    auto b = fixtures::build_indices(fixtures::kToyGraphJsonl);
    auto r1 = b.lexical.search("data analysis", "en", 10);
    auto r2 = b.lexical.search("data analysis", "en", 10);
    REQUIRE(r1.scores.size() == r2.scores.size());
    for (std::size_t i = 0; i < r1.scores.size(); ++i) {
        CHECK(r1.scores[i].node_id == r2.scores[i].node_id);
        CHECK(r1.scores[i].s_lex == r2.scores[i].s_lex);
    }
}

TEST_CASE("unsupported language flags the analyzer fallback") {
    auto b = fixtures::build_indices(fixtures::kToyGraphJsonl);
    auto r = b.lexical.search("data", "es", 5);
    CHECK(r.analyzer_fallback);
    CHECK(r.scores.empty());  // no es sub-index

    auto ok = b.lexical.search("data", "en", 5);
    CHECK_FALSE(ok.analyzer_fallback);
}

TEST_CASE("limit is enforced and validated") {
    auto b = fixtures::build_indices(fixtures::kToyGraphJsonl);
    auto r = b.lexical.search("data", "en", 1);
    CHECK(r.scores.size() <= 1);
    CHECK_THROWS_AS(b.lexical.search("data", "en", 0), std::invalid_argument);
}

TEST_CASE("save and load preserve search behavior") {
    auto b = fixtures::build_indices(fixtures::kToyGraphJsonl);
    std::stringstream buf;
    b.lexical.save(buf);
    auto loaded = lexical::LexicalIndex::load(buf);

    auto r1 = b.lexical.search("data analysis", "en", 10);
    auto r2 = loaded.search("data analysis", "en", 10);
    REQUIRE(r1.scores.size() == r2.scores.size());
    for (std::size_t i = 0; i < r1.scores.size(); ++i) {
        CHECK(r1.scores[i].node_id == r2.scores[i].node_id);
        CHECK(r1.scores[i].s_lex == r2.scores[i].s_lex);
    }
    CHECK(loaded.stats("fr")->docs == b.lexical.stats("fr")->docs);
}

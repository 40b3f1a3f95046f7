#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace skillgraph::synth {

struct SynthQuery {
    std::string query_id;
    std::string text;
    std::string language;  // en or fr
};

struct SynthCorpus {
    std::string jsonl;               // ingest-ready records
    std::vector<SynthQuery> queries;  // label-derived probes, half en half fr
};

// Deterministic synthetic skill corpus: n records split between en and fr,
// with generated labels/descriptions, occasional alt labels, relation edges
// to earlier records and occupation nodes. Same (n, queries, seed) always
// yields identical bytes.
SynthCorpus generate(std::size_t nodes, std::size_t queries, std::uint64_t seed);

}  // namespace skillgraph::synth

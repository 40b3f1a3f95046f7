#include "skillgraph/synth.hpp"

#include <json.hpp>

namespace skillgraph::synth {

using nlohmann::json;

namespace {

const char* const kEnNouns[] = {
    "analysis",    "programming", "communication", "management",  "design",
    "teaching",    "assessment",  "planning",      "negotiation", "modelling",
    "maintenance", "reporting",   "budgeting",     "forecasting", "translation",
    "mediation",   "logistics",   "accounting",    "marketing",   "recruitment",
    "supervision", "engineering", "documentation", "testing",     "debugging",
    "research",    "writing",     "editing",       "coaching",    "auditing"};

const char* const kEnModifiers[] = {
    "data",      "software",  "project",   "financial",  "digital",  "technical",
    "strategic", "clinical",  "customer",  "industrial", "chemical", "statistical",
    "network",   "database",  "hardware",  "energy",     "safety",   "quality",
    "supply",    "inventory", "classroom", "laboratory", "legal",    "medical"};

const char* const kFrNouns[] = {
    "analyse",      "programmation", "communication", "gestion",      "conception",
    "enseignement", "évaluation",    "planification", "négociation",  "modélisation",
    "maintenance",  "rédaction",     "budgétisation", "prévision",    "traduction",
    "médiation",    "logistique",    "comptabilité",  "marketing",    "recrutement",
    "supervision",  "ingénierie",    "documentation", "vérification", "dépannage",
    "recherche",    "écriture",      "relecture",     "encadrement",  "audit"};

const char* const kFrModifiers[] = {
    "des données",    "logicielle",   "de projet",     "financière",   "numérique",
    "technique",      "stratégique",  "clinique",      "client",       "industrielle",
    "chimique",       "statistique",  "réseau",        "documentaire", "matérielle",
    "énergétique",    "de sécurité",  "de qualité",    "logistique",   "de stock",
    "pédagogique",    "de laboratoire", "juridique",   "médicale"};

struct Rng {
    std::uint64_t state;
    std::uint64_t next() {
        state += 0x9E3779B97F4A7C15ULL;
        std::uint64_t z = state;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }
    std::size_t below(std::size_t n) { return static_cast<std::size_t>(next() % n); }
};

}  // namespace

SynthCorpus generate(std::size_t nodes, std::size_t queries, std::uint64_t seed) {
    Rng rng{seed ? seed : 1};
    SynthCorpus corpus;
    std::vector<std::string> labels(nodes);
    std::vector<std::string> langs(nodes);

    constexpr std::size_t kOccupationEvery = 50;
    std::string jsonl;
    std::vector<std::string> occupation_ids;

    for (std::size_t i = 0; i < nodes; ++i) {
        const bool french = i % 2 == 1;
        const std::string id = "syn:S" + std::to_string(i);
        const char* lang = french ? "fr" : "en";
        langs[i] = lang;

        std::string label;
        if (french) {
            label = std::string(kFrNouns[rng.below(std::size(kFrNouns))]) + " " +
                    kFrModifiers[rng.below(std::size(kFrModifiers))];
        } else {
            label = std::string(kEnModifiers[rng.below(std::size(kEnModifiers))]) + " " +
                    kEnNouns[rng.below(std::size(kEnNouns))];
        }
        // Suffix a serial so labels stay mostly distinct at 10k scale.
        label += " " + std::to_string(i / 97);
        labels[i] = label;

        std::string desc;
        for (int w = 0; w < 10; ++w) {
            if (w) desc += " ";
            desc += french ? kFrNouns[rng.below(std::size(kFrNouns))]
                           : kEnNouns[rng.below(std::size(kEnNouns))];
        }

        json rec;
        rec["id"] = id;
        const bool occupation = i % kOccupationEvery == kOccupationEvery - 1;
        rec["kind"] = occupation ? "occupation" : "skill";
        rec["labels"] = {{lang, label}};
        rec["descriptions"] = {{lang, desc}};
        if (rng.below(4) == 0) {
            rec["alt_labels"] = {{lang, json::array({label + (french ? " générale" : " general")})}};
        }
        rec["provenance"] = {{"framework", "SYN"},
                             {"version", "1.0"},
                             {"uri", "urn:syn:" + std::to_string(i)}};

        json relations = json::array();
        if (i > 2 && rng.below(3) == 0) {
            relations.push_back({{"type", "related"},
                                 {"target", "syn:S" + std::to_string(rng.below(i))}});
        }
        if (i > 2 && rng.below(5) == 0) {
            relations.push_back({{"type", "hasPrerequisite"},
                                 {"target", "syn:S" + std::to_string(rng.below(i))}});
        }
        if (!occupation && !occupation_ids.empty() && rng.below(4) == 0) {
            relations.push_back(
                {{"type", "isRelevantForOccupation"},
                 {"target", occupation_ids[rng.below(occupation_ids.size())]}});
        }
        if (!relations.empty()) {
            rec["relations"] = std::move(relations);
        }
        if (occupation) {
            occupation_ids.push_back(id);
        }
        jsonl += rec.dump();
        jsonl += "\n";
    }
    corpus.jsonl = std::move(jsonl);

    for (std::size_t q = 0; q < queries; ++q) {
        const bool french = q % 2 == 1;
        // Probe with an existing label of the right language.
        std::size_t idx = rng.below(nodes);
        for (std::size_t tries = 0; tries < nodes; ++tries) {
            if ((langs[idx] == "fr") == french) break;
            idx = (idx + 1) % nodes;
        }
        corpus.queries.push_back(
            {"q" + std::to_string(q), labels[idx], french ? "fr" : "en"});
    }
    return corpus;
}

}  // namespace skillgraph::synth

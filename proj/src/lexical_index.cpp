#include "skillgraph/lexical_index.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <stdexcept>

#include "skillgraph/binio.hpp"
#include "skillgraph/text.hpp"

namespace skillgraph::lexical {

namespace {

constexpr std::uint32_t kLexMagic = 0x584C4753;  // "SGLX"
constexpr std::uint32_t kLexVersion = 1;

// Position gap between alt-label entries, so phrases cannot span entries.
constexpr std::uint32_t kAltEntryGap = 100;

constexpr std::string_view kBreakingChars = "\"'()*:^";

std::string primary_tag(std::string_view language) {
    std::string out;
    for (char c : language) {
        if (c == '-' || c == '_') break;
        out.push_back(c >= 'A' && c <= 'Z' ? static_cast<char>(c + 0x20) : c);
    }
    return out;
}

bool starts_with(std::string_view s, std::string_view prefix) {
    return s.size() >= prefix.size() && s.compare(0, prefix.size(), prefix) == 0;
}

}  // namespace

std::string_view to_string(QueryStage stage) {
    switch (stage) {
        case QueryStage::Phrase: return "phrase";
        case QueryStage::Prefix: return "prefix";
        case QueryStage::TokenOr: return "token_or";
    }
    return "token_or";
}

void LexicalIndex::build(const kg::SkillGraph& graph,
                         const std::vector<std::string>& languages) {
    by_language_.clear();
    for (const auto& language : languages) {
        const std::string lang = primary_tag(language);
        SubIndex sub;
        const auto analyzer = text::analyzer_for(lang);

        for (const auto& [id, node] : graph.nodes()) {
            const std::string* label = nullptr;
            const std::vector<std::string>* alts = nullptr;
            const std::string* desc = nullptr;
            if (auto it = node.labels.find(lang); it != node.labels.end() && !it->second.empty())
                label = &it->second;
            if (auto it = node.alt_labels.find(lang);
                it != node.alt_labels.end() && !it->second.empty())
                alts = &it->second;
            if (auto it = node.descriptions.find(lang);
                it != node.descriptions.end() && !it->second.empty())
                desc = &it->second;
            if (!label && !alts && !desc) {
                continue;
            }

            const auto doc = static_cast<std::uint32_t>(sub.doc_ids.size());
            sub.doc_ids.push_back(id);

            auto index_tokens = [&](FieldIndex& field, const std::vector<std::string>& tokens,
                                    std::uint32_t base_pos) {
                for (std::uint32_t p = 0; p < tokens.size(); ++p) {
                    auto& postings = field.postings[tokens[p]];
                    if (postings.empty() || postings.back().doc != doc) {
                        postings.push_back({doc, {}});
                    }
                    postings.back().positions.push_back(base_pos + p);
                }
            };

            for (std::size_t f = 0; f < kFieldCount; ++f) {
                sub.fields[f].doc_len.push_back(0);
            }
            if (label) {
                auto tokens = text::analyze(*label, analyzer);
                index_tokens(sub.fields[0], tokens, 0);
                sub.fields[0].doc_len[doc] = static_cast<std::uint32_t>(tokens.size());
            }
            if (alts) {
                std::uint32_t pos = 0;
                std::uint32_t len = 0;
                for (const auto& alt : *alts) {
                    auto tokens = text::analyze(alt, analyzer);
                    index_tokens(sub.fields[1], tokens, pos);
                    pos += static_cast<std::uint32_t>(tokens.size()) + kAltEntryGap;
                    len += static_cast<std::uint32_t>(tokens.size());
                }
                sub.fields[1].doc_len[doc] = len;
            }
            if (desc) {
                auto tokens = text::analyze(*desc, analyzer);
                index_tokens(sub.fields[2], tokens, 0);
                sub.fields[2].doc_len[doc] = static_cast<std::uint32_t>(tokens.size());
            }
        }

        for (auto& field : sub.fields) {
            double total = 0;
            for (auto len : field.doc_len) total += len;
            field.avgdl = field.doc_len.empty() ? 0.0 : total / field.doc_len.size();
        }
        by_language_.emplace(lang, std::move(sub));
    }
}

std::vector<std::uint32_t> LexicalIndex::phrase_candidates(
    const SubIndex& sub, const std::vector<std::string>& tokens) const {
    std::set<std::uint32_t> docs;
    for (const auto& field : sub.fields) {
        std::vector<const std::vector<Posting>*> lists;
        bool all_present = true;
        for (const auto& t : tokens) {
            auto it = field.postings.find(t);
            if (it == field.postings.end()) {
                all_present = false;
                break;
            }
            lists.push_back(&it->second);
        }
        if (!all_present) continue;

        for (const auto& first : *lists[0]) {
            bool doc_everywhere = true;
            std::vector<const Posting*> doc_postings{&first};
            for (std::size_t i = 1; i < lists.size(); ++i) {
                auto it = std::lower_bound(
                    lists[i]->begin(), lists[i]->end(), first.doc,
                    [](const Posting& p, std::uint32_t d) { return p.doc < d; });
                if (it == lists[i]->end() || it->doc != first.doc) {
                    doc_everywhere = false;
                    break;
                }
                doc_postings.push_back(&*it);
            }
            if (!doc_everywhere) continue;
            for (std::uint32_t p : first.positions) {
                bool consecutive = true;
                for (std::size_t i = 1; i < doc_postings.size(); ++i) {
                    const auto& pos = doc_postings[i]->positions;
                    if (!std::binary_search(pos.begin(), pos.end(),
                                            p + static_cast<std::uint32_t>(i))) {
                        consecutive = false;
                        break;
                    }
                }
                if (consecutive) {
                    docs.insert(first.doc);
                    break;
                }
            }
        }
    }
    return {docs.begin(), docs.end()};
}

std::vector<std::uint32_t> LexicalIndex::prefix_candidates(
    const SubIndex& sub, const std::vector<std::string>& tokens) const {
    const std::string& prefix = tokens.back();
    std::set<std::uint32_t> docs;
    for (const auto& field : sub.fields) {
        // Phrase positions of the leading tokens per doc; empty lead == any position.
        std::vector<const std::vector<Posting>*> lists;
        bool all_present = true;
        for (std::size_t i = 0; i + 1 < tokens.size(); ++i) {
            auto it = field.postings.find(tokens[i]);
            if (it == field.postings.end()) {
                all_present = false;
                break;
            }
            lists.push_back(&it->second);
        }
        if (!all_present) continue;

        auto range_begin = field.postings.lower_bound(prefix);
        for (auto it = range_begin; it != field.postings.end() && starts_with(it->first, prefix);
             ++it) {
            for (const auto& posting : it->second) {
                if (lists.empty()) {
                    docs.insert(posting.doc);
                    continue;
                }
                // Leading tokens must occur consecutively just before the
                // prefix-matched term.
                bool doc_everywhere = true;
                std::vector<const Posting*> doc_postings;
                for (const auto* list : lists) {
                    auto pit = std::lower_bound(
                        list->begin(), list->end(), posting.doc,
                        [](const Posting& p, std::uint32_t d) { return p.doc < d; });
                    if (pit == list->end() || pit->doc != posting.doc) {
                        doc_everywhere = false;
                        break;
                    }
                    doc_postings.push_back(&*pit);
                }
                if (!doc_everywhere) continue;
                const auto lead = static_cast<std::uint32_t>(lists.size());
                for (std::uint32_t tail_pos : posting.positions) {
                    if (tail_pos < lead) continue;
                    std::uint32_t start = tail_pos - lead;
                    bool consecutive = true;
                    for (std::size_t i = 0; i < doc_postings.size(); ++i) {
                        const auto& pos = doc_postings[i]->positions;
                        if (!std::binary_search(pos.begin(), pos.end(),
                                                start + static_cast<std::uint32_t>(i))) {
                            consecutive = false;
                            break;
                        }
                    }
                    if (consecutive) {
                        docs.insert(posting.doc);
                        break;
                    }
                }
            }
        }
    }
    return {docs.begin(), docs.end()};
}

std::vector<LexicalScore> LexicalIndex::score_docs(const SubIndex& sub,
                                                   const std::vector<std::string>& tokens,
                                                   const std::string* prefix_token,
                                                   const std::vector<std::uint32_t>& docs,
                                                   std::size_t limit) const {
    // Deduplicated, sorted terms give a fixed summation order.
    std::vector<std::string> terms(tokens);
    std::sort(terms.begin(), terms.end());
    terms.erase(std::unique(terms.begin(), terms.end()), terms.end());

    const double n_docs = static_cast<double>(sub.doc_ids.size());
    std::vector<double> scores(docs.size(), 0.0);

    for (std::size_t f = 0; f < kFieldCount; ++f) {
        const auto& field = sub.fields[f];
        if (field.avgdl <= 0.0) continue;
        const double w =
            f == 0 ? weights.label : (f == 1 ? weights.alt : weights.desc);

        auto accumulate = [&](double df, auto tf_of_doc) {
            if (df <= 0.0) return;
            const double idf = std::log(1.0 + (n_docs - df + 0.5) / (df + 0.5));
            for (std::size_t i = 0; i < docs.size(); ++i) {
                const double tf = tf_of_doc(docs[i]);
                if (tf <= 0.0) continue;
                const double len = field.doc_len[docs[i]];
                const double denom =
                    tf + bm25.k1 * (1.0 - bm25.b + bm25.b * len / field.avgdl);
                scores[i] += w * idf * (tf * (bm25.k1 + 1.0) / denom);
            }
        };

        for (const auto& term : terms) {
            auto it = field.postings.find(term);
            if (it == field.postings.end()) continue;
            const auto& postings = it->second;
            accumulate(static_cast<double>(postings.size()), [&](std::uint32_t doc) -> double {
                auto pit = std::lower_bound(
                    postings.begin(), postings.end(), doc,
                    [](const Posting& p, std::uint32_t d) { return p.doc < d; });
                if (pit == postings.end() || pit->doc != doc) return 0.0;
                return static_cast<double>(pit->positions.size());
            });
        }
        if (prefix_token) {
            // Pooled prefix pseudo-term: df over docs containing any expansion,
            // tf summed over expansions.
            std::set<std::uint32_t> df_docs;
            std::map<std::uint32_t, double> tf_by_doc;
            for (auto it = field.postings.lower_bound(*prefix_token);
                 it != field.postings.end() && starts_with(it->first, *prefix_token); ++it) {
                for (const auto& posting : it->second) {
                    df_docs.insert(posting.doc);
                    tf_by_doc[posting.doc] += static_cast<double>(posting.positions.size());
                }
            }
            accumulate(static_cast<double>(df_docs.size()), [&](std::uint32_t doc) -> double {
                auto tit = tf_by_doc.find(doc);
                return tit == tf_by_doc.end() ? 0.0 : tit->second;
            });
        }
    }

    std::vector<LexicalScore> out;
    out.reserve(docs.size());
    for (std::size_t i = 0; i < docs.size(); ++i) {
        if (scores[i] > 0.0) {
            out.push_back({sub.doc_ids[docs[i]], scores[i]});
        }
    }
    std::sort(out.begin(), out.end(), [](const LexicalScore& a, const LexicalScore& b) {
        if (a.s_lex != b.s_lex) return a.s_lex > b.s_lex;
        return a.node_id < b.node_id;
    });
    if (out.size() > limit) {
        out.resize(limit);
    }
    return out;
}

LexicalSearchResult LexicalIndex::search(std::string_view query, std::string_view language,
                                         std::size_t limit) const {
    if (limit < 1) {
        throw std::invalid_argument("lexical search limit must be >= 1");
    }
    LexicalSearchResult result;
    const std::string lang = primary_tag(language);
    result.analyzer_fallback = !text::language_supported(lang);

    auto sub_it = by_language_.find(lang);
    if (sub_it == by_language_.end()) {
        return result;
    }
    const SubIndex& sub = sub_it->second;

    auto tokens = text::analyze(query, lang);
    if (tokens.empty()) {
        return result;
    }

    const bool breaking =
        query.find_first_of(kBreakingChars) != std::string_view::npos;

    if (!breaking) {
        auto phrase_docs = phrase_candidates(sub, tokens);
        if (!phrase_docs.empty()) {
            result.stage = QueryStage::Phrase;
            result.scores = score_docs(sub, tokens, nullptr, phrase_docs, limit);
            return result;
        }
        auto prefix_docs = prefix_candidates(sub, tokens);
        if (!prefix_docs.empty()) {
            result.stage = QueryStage::Prefix;
            std::vector<std::string> exact(tokens.begin(), tokens.end() - 1);
            result.scores = score_docs(sub, exact, &tokens.back(), prefix_docs, limit);
            return result;
        }
    }

    result.stage = QueryStage::TokenOr;
    std::set<std::uint32_t> docs;
    for (const auto& field : sub.fields) {
        for (const auto& t : tokens) {
            auto it = field.postings.find(t);
            if (it == field.postings.end()) continue;
            for (const auto& posting : it->second) {
                docs.insert(posting.doc);
            }
        }
    }
    std::vector<std::uint32_t> doc_vec(docs.begin(), docs.end());
    result.scores = score_docs(sub, tokens, nullptr, doc_vec, limit);
    return result;
}

std::vector<std::string> LexicalIndex::languages() const {
    std::vector<std::string> out;
    out.reserve(by_language_.size());
    for (const auto& [lang, sub] : by_language_) {
        out.push_back(lang);
    }
    return out;
}

std::optional<SubIndexStats> LexicalIndex::stats(std::string_view language) const {
    auto it = by_language_.find(primary_tag(language));
    if (it == by_language_.end()) {
        return std::nullopt;
    }
    SubIndexStats s;
    s.docs = it->second.doc_ids.size();
    std::set<std::string> terms;
    for (std::size_t f = 0; f < kFieldCount; ++f) {
        s.avgdl[f] = it->second.fields[f].avgdl;
        for (const auto& [term, postings] : it->second.fields[f].postings) {
            terms.insert(term);
        }
    }
    s.distinct_terms = terms.size();
    return s;
}

void LexicalIndex::save(std::ostream& out) const {
    util::write_u32(out, kLexMagic);
    util::write_u32(out, kLexVersion);
    util::write_u32(out, static_cast<std::uint32_t>(by_language_.size()));
    for (const auto& [lang, sub] : by_language_) {
        util::write_string(out, lang);
        util::write_u32(out, static_cast<std::uint32_t>(sub.doc_ids.size()));
        for (const auto& id : sub.doc_ids) {
            util::write_string(out, id);
        }
        for (const auto& field : sub.fields) {
            util::write_f64(out, field.avgdl);
            util::write_u32_vec(out, field.doc_len);
            util::write_u32(out, static_cast<std::uint32_t>(field.postings.size()));
            for (const auto& [term, postings] : field.postings) {
                util::write_string(out, term);
                util::write_u32(out, static_cast<std::uint32_t>(postings.size()));
                for (const auto& p : postings) {
                    util::write_u32(out, p.doc);
                    util::write_u32_vec(out, p.positions);
                }
            }
        }
    }
}

LexicalIndex LexicalIndex::load(std::istream& in) {
    if (util::read_u32(in) != kLexMagic || util::read_u32(in) != kLexVersion) {
        throw IoError("not a lexical index file");
    }
    LexicalIndex index;
    auto n_langs = util::read_u32(in);
    for (std::uint32_t l = 0; l < n_langs; ++l) {
        std::string lang = util::read_string(in);
        SubIndex sub;
        auto n_docs = util::read_u32(in);
        sub.doc_ids.reserve(n_docs);
        for (std::uint32_t d = 0; d < n_docs; ++d) {
            sub.doc_ids.push_back(util::read_string(in));
        }
        for (auto& field : sub.fields) {
            field.avgdl = util::read_f64(in);
            field.doc_len = util::read_u32_vec(in);
            auto n_terms = util::read_u32(in);
            for (std::uint32_t t = 0; t < n_terms; ++t) {
                std::string term = util::read_string(in);
                auto n_postings = util::read_u32(in);
                auto& postings = field.postings[term];
                postings.reserve(n_postings);
                for (std::uint32_t p = 0; p < n_postings; ++p) {
                    Posting posting;
                    posting.doc = util::read_u32(in);
                    posting.positions = util::read_u32_vec(in);
                    postings.push_back(std::move(posting));
                }
            }
        }
        index.by_language_.emplace(std::move(lang), std::move(sub));
    }
    return index;
}

void LexicalIndex::save_file(const std::string& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write lexical index: " + path);
    save(out);
    if (!out) throw IoError("failed writing lexical index: " + path);
}

LexicalIndex LexicalIndex::load_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot read lexical index: " + path);
    return load(in);
}

}  // namespace skillgraph::lexical

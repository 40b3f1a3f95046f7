#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace skillgraph::text {

// Minimal UTF-8 codec. Ill-formed byte sequences decode to U+FFFD.
std::u32string decode_utf8(std::string_view s);
std::string encode_utf8(const std::u32string& cps);

// Codepoint lowercase for ASCII, Latin-1 Supplement and Latin Extended-A.
char32_t lower_cp(char32_t cp);
std::string lower(std::string_view s);

// Canonical composition for Latin base + combining mark sequences
// (U+0300..U+0328 onto a..z/A..Z and their precomposed forms). Text outside
// that repertoire passes through unchanged.
std::string nfc(std::string_view s);

// Strips diacritics: é -> e, Č -> c, œ -> oe, ß -> ss. Lowercases as a side
// effect, since folding targets are lowercase ASCII.
std::string fold_diacritics(std::string_view s);

// Porter stemmer (with the bli->ble and logi->log revisions of the reference
// implementation). Input must be lowercase ASCII; words of length <= 2 and
// words containing non [a-z] characters are returned unchanged.
std::string porter_stem(std::string_view word);

enum class AnalyzerKind { English, French, Generic };

// en -> English, fr -> French, anything else -> Generic fallback.
// Language tags are matched on their primary subtag, case-insensitively.
AnalyzerKind analyzer_for(std::string_view language);
bool language_supported(std::string_view language);

// English: lowercase, fold diacritics, strip punctuation, Porter-stem.
// French: lowercase, keep diacritics, strip punctuation, no stemming.
// Generic: whitespace split + lowercase only.
std::vector<std::string> analyze(std::string_view s, AnalyzerKind kind);
std::vector<std::string> analyze(std::string_view s, std::string_view language);

}  // namespace skillgraph::text

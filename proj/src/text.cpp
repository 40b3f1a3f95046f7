#include "skillgraph/text.hpp"

#include <algorithm>
#include <array>
#include <cstdint>
#include <unordered_map>

namespace skillgraph::text {

namespace {

constexpr char32_t kReplacement = 0xFFFD;

struct LatinComposition {
    char32_t composed;
    char32_t base;
    char32_t mark;
};

// Canonical (base, combining mark) pairs for the Latin repertoire used by
// European skill frameworks. Derived fold targets reuse the same table.
constexpr LatinComposition kCompositions[] = {
    {0x00C0, U'A', 0x0300}, {0x00C1, U'A', 0x0301}, {0x00C2, U'A', 0x0302},
    {0x00C3, U'A', 0x0303}, {0x00C4, U'A', 0x0308}, {0x00C5, U'A', 0x030A},
    {0x00C7, U'C', 0x0327}, {0x00C8, U'E', 0x0300}, {0x00C9, U'E', 0x0301},
    {0x00CA, U'E', 0x0302}, {0x00CB, U'E', 0x0308}, {0x00CC, U'I', 0x0300},
    {0x00CD, U'I', 0x0301}, {0x00CE, U'I', 0x0302}, {0x00CF, U'I', 0x0308},
    {0x00D1, U'N', 0x0303}, {0x00D2, U'O', 0x0300}, {0x00D3, U'O', 0x0301},
    {0x00D4, U'O', 0x0302}, {0x00D5, U'O', 0x0303}, {0x00D6, U'O', 0x0308},
    {0x00D9, U'U', 0x0300}, {0x00DA, U'U', 0x0301}, {0x00DB, U'U', 0x0302},
    {0x00DC, U'U', 0x0308}, {0x00DD, U'Y', 0x0301},
    {0x00E0, U'a', 0x0300}, {0x00E1, U'a', 0x0301}, {0x00E2, U'a', 0x0302},
    {0x00E3, U'a', 0x0303}, {0x00E4, U'a', 0x0308}, {0x00E5, U'a', 0x030A},
    {0x00E7, U'c', 0x0327}, {0x00E8, U'e', 0x0300}, {0x00E9, U'e', 0x0301},
    {0x00EA, U'e', 0x0302}, {0x00EB, U'e', 0x0308}, {0x00EC, U'i', 0x0300},
    {0x00ED, U'i', 0x0301}, {0x00EE, U'i', 0x0302}, {0x00EF, U'i', 0x0308},
    {0x00F1, U'n', 0x0303}, {0x00F2, U'o', 0x0300}, {0x00F3, U'o', 0x0301},
    {0x00F4, U'o', 0x0302}, {0x00F5, U'o', 0x0303}, {0x00F6, U'o', 0x0308},
    {0x00F9, U'u', 0x0300}, {0x00FA, U'u', 0x0301}, {0x00FB, U'u', 0x0302},
    {0x00FC, U'u', 0x0308}, {0x00FD, U'y', 0x0301}, {0x00FF, U'y', 0x0308},
    {0x0100, U'A', 0x0304}, {0x0101, U'a', 0x0304}, {0x0102, U'A', 0x0306},
    {0x0103, U'a', 0x0306}, {0x0104, U'A', 0x0328}, {0x0105, U'a', 0x0328},
    {0x0106, U'C', 0x0301}, {0x0107, U'c', 0x0301}, {0x0108, U'C', 0x0302},
    {0x0109, U'c', 0x0302}, {0x010A, U'C', 0x0307}, {0x010B, U'c', 0x0307},
    {0x010C, U'C', 0x030C}, {0x010D, U'c', 0x030C}, {0x010E, U'D', 0x030C},
    {0x010F, U'd', 0x030C}, {0x0112, U'E', 0x0304}, {0x0113, U'e', 0x0304},
    {0x0114, U'E', 0x0306}, {0x0115, U'e', 0x0306}, {0x0116, U'E', 0x0307},
    {0x0117, U'e', 0x0307}, {0x0118, U'E', 0x0328}, {0x0119, U'e', 0x0328},
    {0x011A, U'E', 0x030C}, {0x011B, U'e', 0x030C}, {0x011C, U'G', 0x0302},
    {0x011D, U'g', 0x0302}, {0x011E, U'G', 0x0306}, {0x011F, U'g', 0x0306},
    {0x0120, U'G', 0x0307}, {0x0121, U'g', 0x0307}, {0x0122, U'G', 0x0327},
    {0x0123, U'g', 0x0327}, {0x0124, U'H', 0x0302}, {0x0125, U'h', 0x0302},
    {0x0128, U'I', 0x0303}, {0x0129, U'i', 0x0303}, {0x012A, U'I', 0x0304},
    {0x012B, U'i', 0x0304}, {0x012C, U'I', 0x0306}, {0x012D, U'i', 0x0306},
    {0x012E, U'I', 0x0328}, {0x012F, U'i', 0x0328}, {0x0134, U'J', 0x0302},
    {0x0135, U'j', 0x0302}, {0x0136, U'K', 0x0327}, {0x0137, U'k', 0x0327},
    {0x0139, U'L', 0x0301}, {0x013A, U'l', 0x0301}, {0x013B, U'L', 0x0327},
    {0x013C, U'l', 0x0327}, {0x013D, U'L', 0x030C}, {0x013E, U'l', 0x030C},
    {0x0143, U'N', 0x0301}, {0x0144, U'n', 0x0301}, {0x0145, U'N', 0x0327},
    {0x0146, U'n', 0x0327}, {0x0147, U'N', 0x030C}, {0x0148, U'n', 0x030C},
    {0x014C, U'O', 0x0304}, {0x014D, U'o', 0x0304}, {0x014E, U'O', 0x0306},
    {0x014F, U'o', 0x0306}, {0x0150, U'O', 0x030B}, {0x0151, U'o', 0x030B},
    {0x0154, U'R', 0x0301}, {0x0155, U'r', 0x0301}, {0x0156, U'R', 0x0327},
    {0x0157, U'r', 0x0327}, {0x0158, U'R', 0x030C}, {0x0159, U'r', 0x030C},
    {0x015A, U'S', 0x0301}, {0x015B, U's', 0x0301}, {0x015C, U'S', 0x0302},
    {0x015D, U's', 0x0302}, {0x015E, U'S', 0x0327}, {0x015F, U's', 0x0327},
    {0x0160, U'S', 0x030C}, {0x0161, U's', 0x030C}, {0x0162, U'T', 0x0327},
    {0x0163, U't', 0x0327}, {0x0164, U'T', 0x030C}, {0x0165, U't', 0x030C},
    {0x0168, U'U', 0x0303}, {0x0169, U'u', 0x0303}, {0x016A, U'U', 0x0304},
    {0x016B, U'u', 0x0304}, {0x016C, U'U', 0x0306}, {0x016D, U'u', 0x0306},
    {0x016E, U'U', 0x030A}, {0x016F, U'u', 0x030A}, {0x0170, U'U', 0x030B},
    {0x0171, U'u', 0x030B}, {0x0172, U'U', 0x0328}, {0x0173, U'u', 0x0328},
    {0x0174, U'W', 0x0302}, {0x0175, U'w', 0x0302}, {0x0176, U'Y', 0x0302},
    {0x0177, U'y', 0x0302}, {0x0178, U'Y', 0x0308}, {0x0179, U'Z', 0x0301},
    {0x017A, U'z', 0x0301}, {0x017B, U'Z', 0x0307}, {0x017C, U'z', 0x0307},
    {0x017D, U'Z', 0x030C}, {0x017E, U'z', 0x030C},
};

// Letters without a canonical decomposition that still fold to ASCII.
struct SpecialFold {
    char32_t cp;
    const char* ascii;
};

constexpr SpecialFold kSpecialFolds[] = {
    {0x00C6, "ae"}, {0x00E6, "ae"}, {0x0152, "oe"}, {0x0153, "oe"},
    {0x00DF, "ss"}, {0x00D8, "o"},  {0x00F8, "o"},  {0x00D0, "d"},
    {0x00F0, "d"},  {0x00DE, "th"}, {0x00FE, "th"}, {0x0110, "d"},
    {0x0111, "d"},  {0x0126, "h"},  {0x0127, "h"},  {0x0131, "i"},
    {0x0141, "l"},  {0x0142, "l"},  {0x0149, "n"},  {0x014A, "n"},
    {0x014B, "n"},  {0x0138, "k"},  {0x017F, "s"},
};

const std::unordered_map<char32_t, LatinComposition>& decomp_map() {
    static const auto* m = [] {
        auto* map = new std::unordered_map<char32_t, LatinComposition>();
        for (const auto& c : kCompositions) {
            map->emplace(c.composed, c);
        }
        return map;
    }();
    return *m;
}

const std::unordered_map<std::uint64_t, char32_t>& compose_map() {
    static const auto* m = [] {
        auto* map = new std::unordered_map<std::uint64_t, char32_t>();
        for (const auto& c : kCompositions) {
            std::uint64_t key = (static_cast<std::uint64_t>(c.base) << 32) | c.mark;
            map->emplace(key, c.composed);
        }
        return map;
    }();
    return *m;
}

bool is_combining_mark(char32_t cp) {
    return cp >= 0x0300 && cp <= 0x036F;
}

bool is_latin_letter(char32_t cp) {
    if (cp >= 0x00C0 && cp <= 0x00FF) {
        return cp != 0x00D7 && cp != 0x00F7;
    }
    return cp >= 0x0100 && cp <= 0x017F;
}

bool is_word_cp(char32_t cp) {
    if (cp < 0x80) {
        return (cp >= U'a' && cp <= U'z') || (cp >= U'0' && cp <= U'9');
    }
    return is_latin_letter(cp);
}

}  // namespace

std::u32string decode_utf8(std::string_view s) {
    std::u32string out;
    out.reserve(s.size());
    std::size_t i = 0;
    while (i < s.size()) {
        unsigned char b0 = static_cast<unsigned char>(s[i]);
        if (b0 < 0x80) {
            out.push_back(b0);
            ++i;
            continue;
        }
        int len = 0;
        char32_t cp = 0;
        if ((b0 & 0xE0) == 0xC0) {
            len = 2;
            cp = b0 & 0x1F;
        } else if ((b0 & 0xF0) == 0xE0) {
            len = 3;
            cp = b0 & 0x0F;
        } else if ((b0 & 0xF8) == 0xF0) {
            len = 4;
            cp = b0 & 0x07;
        } else {
            out.push_back(kReplacement);
            ++i;
            continue;
        }
        if (i + len > s.size()) {
            out.push_back(kReplacement);
            ++i;
            continue;
        }
        bool ok = true;
        for (int j = 1; j < len; ++j) {
            unsigned char b = static_cast<unsigned char>(s[i + j]);
            if ((b & 0xC0) != 0x80) {
                ok = false;
                break;
            }
            cp = (cp << 6) | (b & 0x3F);
        }
        if (!ok || cp > 0x10FFFF) {
            out.push_back(kReplacement);
            ++i;
            continue;
        }
        out.push_back(cp);
        i += len;
    }
    return out;
}

std::string encode_utf8(const std::u32string& cps) {
    std::string out;
    out.reserve(cps.size());
    for (char32_t cp : cps) {
        if (cp < 0x80) {
            out.push_back(static_cast<char>(cp));
        } else if (cp < 0x800) {
            out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
            out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
        } else if (cp < 0x10000) {
            out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
            out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
            out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
        } else {
            out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
            out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
            out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
            out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
        }
    }
    return out;
}

char32_t lower_cp(char32_t cp) {
    if (cp >= U'A' && cp <= U'Z') {
        return cp + 0x20;
    }
    if (cp >= 0x00C0 && cp <= 0x00DE && cp != 0x00D7) {
        return cp + 0x20;
    }
    if (cp == 0x0178) {
        return 0x00FF;  // Y with diaeresis
    }
    if (cp >= 0x0100 && cp <= 0x0137) {
        return (cp % 2 == 0) ? cp + 1 : cp;
    }
    if (cp >= 0x0139 && cp <= 0x0148) {
        return (cp % 2 == 1) ? cp + 1 : cp;
    }
    if (cp >= 0x014A && cp <= 0x0177) {
        return (cp % 2 == 0) ? cp + 1 : cp;
    }
    if (cp >= 0x0179 && cp <= 0x017E) {
        return (cp % 2 == 1) ? cp + 1 : cp;
    }
    return cp;
}

std::string lower(std::string_view s) {
    auto cps = decode_utf8(s);
    for (auto& cp : cps) {
        cp = lower_cp(cp);
    }
    return encode_utf8(cps);
}

std::string nfc(std::string_view s) {
    auto cps = decode_utf8(s);
    std::u32string out;
    out.reserve(cps.size());
    const auto& compose = compose_map();
    for (char32_t cp : cps) {
        if (is_combining_mark(cp) && !out.empty()) {
            std::uint64_t key = (static_cast<std::uint64_t>(out.back()) << 32) | cp;
            auto it = compose.find(key);
            if (it != compose.end()) {
                out.back() = it->second;
                continue;
            }
        }
        out.push_back(cp);
    }
    return encode_utf8(out);
}

std::string fold_diacritics(std::string_view s) {
    auto cps = decode_utf8(nfc(s));
    std::string out;
    out.reserve(cps.size());
    const auto& decomp = decomp_map();
    for (char32_t cp : cps) {
        cp = lower_cp(cp);
        // Strip mark chains down to the base letter.
        for (auto it = decomp.find(cp); it != decomp.end(); it = decomp.find(cp)) {
            cp = lower_cp(it->second.base);
        }
        if (cp < 0x80) {
            out.push_back(static_cast<char>(cp));
            continue;
        }
        bool folded = false;
        for (const auto& f : kSpecialFolds) {
            if (f.cp == cp || lower_cp(f.cp) == cp) {
                out += f.ascii;
                folded = true;
                break;
            }
        }
        if (!folded) {
            out += encode_utf8(std::u32string(1, cp));
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Porter stemmer
// ---------------------------------------------------------------------------

namespace {

class PorterStemmer {
public:
    explicit PorterStemmer(std::string word) : b_(std::move(word)), k_(b_.size()) {}

    std::string run() {
        if (k_ <= 2) {
            return b_;
        }
        step1ab();
        step1c();
        step2();
        step3();
        step4();
        step5();
        return b_.substr(0, k_);
    }

private:
    std::string b_;
    std::size_t k_;  // current word length
    std::size_t j_ = 0;  // stem length while matching a suffix

    bool cons(std::size_t i) const {
        switch (b_[i]) {
            case 'a': case 'e': case 'i': case 'o': case 'u':
                return false;
            case 'y':
                return i == 0 ? true : !cons(i - 1);
            default:
                return true;
        }
    }

    // Measure of b_[0..j_): the m in [C](VC)^m[V].
    int measure() const {
        int n = 0;
        std::size_t i = 0;
        while (true) {
            if (i >= j_) return n;
            if (!cons(i)) break;
            ++i;
        }
        ++i;
        while (true) {
            while (true) {
                if (i >= j_) return n;
                if (cons(i)) break;
                ++i;
            }
            ++i;
            ++n;
            while (true) {
                if (i >= j_) return n;
                if (!cons(i)) break;
                ++i;
            }
            ++i;
        }
    }

    bool vowel_in_stem() const {
        for (std::size_t i = 0; i < j_; ++i) {
            if (!cons(i)) return true;
        }
        return false;
    }

    bool double_cons(std::size_t end) const {
        if (end < 2) return false;
        if (b_[end - 1] != b_[end - 2]) return false;
        return cons(end - 1);
    }

    // cvc at positions ending at i (inclusive), final c not w, x or y.
    bool cvc(std::size_t i_plus1) const {
        if (i_plus1 < 3) return false;
        std::size_t i = i_plus1 - 1;
        if (!cons(i) || cons(i - 1) || !cons(i - 2)) return false;
        char ch = b_[i];
        return ch != 'w' && ch != 'x' && ch != 'y';
    }

    bool ends(std::string_view suffix) {
        if (suffix.size() > k_) return false;
        if (b_.compare(k_ - suffix.size(), suffix.size(), suffix) != 0) return false;
        j_ = k_ - suffix.size();
        return true;
    }

    void set_to(std::string_view repl) {
        b_.replace(j_, k_ - j_, repl);
        k_ = j_ + repl.size();
    }

    void replace_if_m_gt0(std::string_view repl) {
        if (measure() > 0) set_to(repl);
    }

    void step1ab() {
        if (b_[k_ - 1] == 's') {
            if (ends("sses")) {
                k_ -= 2;
            } else if (ends("ies")) {
                set_to("i");
            } else if (b_[k_ - 2] != 's') {
                --k_;
            }
        }
        if (ends("eed")) {
            if (measure() > 0) --k_;
        } else if ((ends("ed") || ends("ing")) && vowel_in_stem()) {
            k_ = j_;
            if (ends("at")) {
                set_to("ate");
            } else if (ends("bl")) {
                set_to("ble");
            } else if (ends("iz")) {
                set_to("ize");
            } else if (double_cons(k_)) {
                char ch = b_[k_ - 1];
                if (ch != 'l' && ch != 's' && ch != 'z') --k_;
            } else {
                j_ = k_;
                if (measure() == 1 && cvc(k_)) {
                    b_.replace(k_, b_.size() - k_, "");
                    b_.push_back('e');
                    ++k_;
                }
            }
        }
    }

    void step1c() {
        if (ends("y") && vowel_in_stem()) {
            b_[k_ - 1] = 'i';
        }
    }

    void step2() {
        if (k_ < 2) return;
        switch (b_[k_ - 2]) {
            case 'a':
                if (ends("ational")) { replace_if_m_gt0("ate"); break; }
                if (ends("tional")) { replace_if_m_gt0("tion"); break; }
                break;
            case 'c':
                if (ends("enci")) { replace_if_m_gt0("ence"); break; }
                if (ends("anci")) { replace_if_m_gt0("ance"); break; }
                break;
            case 'e':
                if (ends("izer")) { replace_if_m_gt0("ize"); break; }
                break;
            case 'l':
                if (ends("bli")) { replace_if_m_gt0("ble"); break; }
                if (ends("alli")) { replace_if_m_gt0("al"); break; }
                if (ends("entli")) { replace_if_m_gt0("ent"); break; }
                if (ends("eli")) { replace_if_m_gt0("e"); break; }
                if (ends("ousli")) { replace_if_m_gt0("ous"); break; }
                break;
            case 'o':
                if (ends("ization")) { replace_if_m_gt0("ize"); break; }
                if (ends("ation")) { replace_if_m_gt0("ate"); break; }
                if (ends("ator")) { replace_if_m_gt0("ate"); break; }
                break;
            case 's':
                if (ends("alism")) { replace_if_m_gt0("al"); break; }
                if (ends("iveness")) { replace_if_m_gt0("ive"); break; }
                if (ends("fulness")) { replace_if_m_gt0("ful"); break; }
                if (ends("ousness")) { replace_if_m_gt0("ous"); break; }
                break;
            case 't':
                if (ends("aliti")) { replace_if_m_gt0("al"); break; }
                if (ends("iviti")) { replace_if_m_gt0("ive"); break; }
                if (ends("biliti")) { replace_if_m_gt0("ble"); break; }
                break;
            case 'g':
                if (ends("logi")) { replace_if_m_gt0("log"); break; }
                break;
            default:
                break;
        }
    }

    void step3() {
        switch (b_[k_ - 1]) {
            case 'e':
                if (ends("icate")) { replace_if_m_gt0("ic"); break; }
                if (ends("ative")) { replace_if_m_gt0(""); break; }
                if (ends("alize")) { replace_if_m_gt0("al"); break; }
                break;
            case 'i':
                if (ends("iciti")) { replace_if_m_gt0("ic"); break; }
                break;
            case 'l':
                if (ends("ical")) { replace_if_m_gt0("ic"); break; }
                if (ends("ful")) { replace_if_m_gt0(""); break; }
                break;
            case 's':
                if (ends("ness")) { replace_if_m_gt0(""); break; }
                break;
            default:
                break;
        }
    }

    void step4() {
        if (k_ < 2) return;
        bool matched = false;
        switch (b_[k_ - 2]) {
            case 'a': matched = ends("al"); break;
            case 'c': matched = ends("ance") || ends("ence"); break;
            case 'e': matched = ends("er"); break;
            case 'i': matched = ends("ic"); break;
            case 'l': matched = ends("able") || ends("ible"); break;
            case 'n':
                matched = ends("ant") || ends("ement") || ends("ment") || ends("ent");
                break;
            case 'o':
                if (ends("ion") && j_ > 0 && (b_[j_ - 1] == 's' || b_[j_ - 1] == 't')) {
                    matched = true;
                } else {
                    matched = ends("ou");
                }
                break;
            case 's': matched = ends("ism"); break;
            case 't': matched = ends("ate") || ends("iti"); break;
            case 'u': matched = ends("ous"); break;
            case 'v': matched = ends("ive"); break;
            case 'z': matched = ends("ize"); break;
            default: break;
        }
        if (matched && measure() > 1) {
            k_ = j_;
        }
    }

    void step5() {
        j_ = k_;
        if (b_[k_ - 1] == 'e') {
            j_ = k_ - 1;
            int m = measure();
            if (m > 1 || (m == 1 && !cvc(k_ - 1))) {
                --k_;
            }
        }
        j_ = k_;
        if (b_[k_ - 1] == 'l' && double_cons(k_) && measure() > 1) {
            --k_;
        }
    }
};

}  // namespace

std::string porter_stem(std::string_view word) {
    if (word.size() <= 2) {
        return std::string(word);
    }
    for (char c : word) {
        if (c < 'a' || c > 'z') {
            return std::string(word);
        }
    }
    return PorterStemmer(std::string(word)).run();
}

AnalyzerKind analyzer_for(std::string_view language) {
    std::string primary;
    for (char c : language) {
        if (c == '-' || c == '_') break;
        primary.push_back(c >= 'A' && c <= 'Z' ? static_cast<char>(c + 0x20) : c);
    }
    if (primary == "en") return AnalyzerKind::English;
    if (primary == "fr") return AnalyzerKind::French;
    return AnalyzerKind::Generic;
}

bool language_supported(std::string_view language) {
    return analyzer_for(language) != AnalyzerKind::Generic;
}

std::vector<std::string> analyze(std::string_view s, AnalyzerKind kind) {
    std::vector<std::string> tokens;
    if (kind == AnalyzerKind::Generic) {
        // Whitespace split + lowercase, nothing else.
        auto cps = decode_utf8(s);
        std::u32string current;
        auto flush = [&] {
            if (!current.empty()) {
                tokens.push_back(encode_utf8(current));
                current.clear();
            }
        };
        for (char32_t cp : cps) {
            if (cp == U' ' || cp == U'\t' || cp == U'\n' || cp == U'\r' || cp == 0x00A0) {
                flush();
            } else {
                current.push_back(lower_cp(cp));
            }
        }
        flush();
        return tokens;
    }

    auto cps = decode_utf8(nfc(s));
    std::u32string current;
    auto flush = [&] {
        if (current.empty()) return;
        std::string token = encode_utf8(current);
        current.clear();
        if (kind == AnalyzerKind::English) {
            token = fold_diacritics(token);
            token = porter_stem(token);
        }
        if (!token.empty()) {
            tokens.push_back(std::move(token));
        }
    };
    for (char32_t cp : cps) {
        char32_t lc = lower_cp(cp);
        if (is_word_cp(lc)) {
            current.push_back(lc);
        } else {
            flush();
        }
    }
    flush();
    return tokens;
}

std::vector<std::string> analyze(std::string_view s, std::string_view language) {
    return analyze(s, analyzer_for(language));
}

}  // namespace skillgraph::text

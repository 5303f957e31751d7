#include "mathdup/reference.hpp"

#include <algorithm>
#include <cctype>
#include <unordered_set>

#include "mathdup/text.hpp"

namespace mathdup::citesim {
namespace {

// Words too common in titles to identify a work (English, French, German).
const std::unordered_set<std::string>& title_stopwords() {
    static const std::unordered_set<std::string> words = {
        "a",    "an",   "the",  "of",   "on",   "in",    "and",  "for",  "to",   "with", "by",
        "from", "at",   "as",   "some", "its",  "their", "is",   "are",  "via",  "into", "over",
        "de",   "des",  "du",   "la",   "le",   "les",   "et",   "sur",  "une",  "un",   "dans",
        "der",  "die",  "das",  "und",  "uber", "ein",   "eine", "zur",  "zum",  "von",  "mit",
        "note", "notes", "remark", "remarks",
    };
    return words;
}

std::vector<std::string> split(std::string_view s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == sep) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    out.push_back(cur);
    return out;
}

std::vector<std::string> split_words(std::string_view s) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (std::isspace(static_cast<unsigned char>(c))) {
            if (!cur.empty()) out.push_back(std::move(cur));
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    if (!cur.empty()) out.push_back(std::move(cur));
    return out;
}

// Splits "G. Ford and G. Uhlenbeck" / "Ford & Uhlenbeck" into parts.
std::vector<std::string> split_author_list(const std::string& segment) {
    std::vector<std::string> parts;
    std::vector<std::string> cur;
    for (auto& w : split_words(segment)) {
        const std::string f = text::fold(w);
        if (f == "and" || f == "&" || f == "et" || f == "und") {
            if (!cur.empty()) {
                std::string joined;
                for (auto& x : cur) joined += (joined.empty() ? "" : " ") + x;
                parts.push_back(joined);
            }
            cur.clear();
        } else {
            cur.push_back(w);
        }
    }
    if (!cur.empty()) {
        std::string joined;
        for (auto& x : cur) joined += (joined.empty() ? "" : " ") + x;
        parts.push_back(joined);
    }
    return parts;
}

// Letters of a name word with '.', '-' and apostrophes removed; empty when
// the word contains anything else (digits, OCR debris).
std::string name_letters(const std::string& word) {
    std::string out;
    for (std::size_t i = 0; i < word.size();) {
        const auto c = static_cast<unsigned char>(word[i]);
        if (c == '.' || c == '-' || c == '\'' || c == '\\') {
            ++i;
            continue;
        }
        if (std::isalpha(c)) {
            out.push_back(static_cast<char>(c));
            ++i;
            continue;
        }
        if (c >= 0x80) {
            // Multi-byte letters (accented capitals in names).
            std::size_t len = (c & 0xE0) == 0xC0 ? 2 : (c & 0xF0) == 0xE0 ? 3 : (c & 0xF8) == 0xF0 ? 4 : 1;
            const std::string piece = word.substr(i, len);
            const auto toks = text::tokenize(piece);
            if (toks.empty()) return {};
            out += piece;
            i += len;
            continue;
        }
        return {};
    }
    return out;
}

struct NameInfo {
    bool name_like = false;
    bool has_initial = false;
    std::string surname;
};

bool name_particle(const std::string& folded) {
    static const std::unordered_set<std::string> particles = {"van", "von", "der", "den", "de", "la",
                                                              "le",  "du",  "des", "di",  "da", "del", "ter", "ten"};
    return particles.contains(folded);
}

// A name is a few capitalized words with at least one surname; title words
// such as "On" or lower-case words rule it out.
NameInfo inspect_name(const std::string& part) {
    NameInfo info;
    const auto words = split_words(part);
    if (words.empty() || words.size() > 5) return info;
    int surnames = 0;
    for (const auto& w : words) {
        const std::string letters = name_letters(w);
        if (letters.empty()) return info;
        const std::string folded = text::fold(letters);
        if (folded.size() == 1 || (w.find('.') != std::string::npos && folded.size() <= 2)) {
            info.has_initial = true;
            continue;
        }
        if (name_particle(folded)) continue;
        if (title_stopwords().contains(folded)) return info;
        if (words.size() > 1 && std::islower(static_cast<unsigned char>(letters[0]))) return info;
        info.surname = folded;
        ++surnames;
    }
    info.name_like = surnames >= 1 && surnames <= 2;
    return info;
}

std::string strip_label(std::string_view raw) {
    std::size_t i = 0;
    while (i < raw.size() && std::isspace(static_cast<unsigned char>(raw[i]))) ++i;
    std::size_t j = i;
    if (j < raw.size() && (raw[j] == '[' || raw[j] == '(')) {
        ++j;
        std::size_t digits = 0;
        while (j < raw.size() && std::isdigit(static_cast<unsigned char>(raw[j]))) {
            ++j;
            ++digits;
        }
        if (digits > 0 && j < raw.size() && (raw[j] == ']' || raw[j] == ')')) return std::string(raw.substr(j + 1));
    }
    return std::string(raw.substr(i));
}

std::optional<int> find_year(std::string_view s) {
    std::optional<int> year;
    std::size_t i = 0;
    while (i < s.size()) {
        if (!std::isdigit(static_cast<unsigned char>(s[i]))) {
            ++i;
            continue;
        }
        std::size_t j = i;
        while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) ++j;
        if (j - i == 4) {
            const int v = std::stoi(std::string(s.substr(i, 4)));
            if (v >= 1800 && v <= 2100) year = v;
        }
        i = j;
    }
    return year;
}

bool is_numeric_segment(const std::string& seg) {
    bool any = false;
    for (char c : seg) {
        if (std::isdigit(static_cast<unsigned char>(c))) {
            any = true;
        } else if (!std::isspace(static_cast<unsigned char>(c)) && c != '.' && c != '-' && c != '(' && c != ')') {
            return false;
        }
    }
    return any;
}

std::string join(const std::vector<std::string>& parts, std::string_view sep) {
    std::string out;
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (i) out += sep;
        out += parts[i];
    }
    return out;
}

}  // namespace

std::string match_key(const NormalizedReference& n) {
    std::vector<std::string> candidates;
    for (const auto& t : n.title_tokens) {
        if (!title_stopwords().contains(t)) candidates.push_back(t);
    }
    if (candidates.empty()) candidates = n.title_tokens;
    std::sort(candidates.begin(), candidates.end());
    candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());
    // Rarity proxy: longer tokens first, then lexicographic.
    std::stable_sort(candidates.begin(), candidates.end(),
                     [](const std::string& a, const std::string& b) { return a.size() > b.size(); });
    if (candidates.size() > 3) candidates.resize(3);
    std::sort(candidates.begin(), candidates.end());

    std::string key = n.authors.empty() ? std::string() : n.authors.front();
    key += '|';
    key += join(candidates, " ");
    key += '|';
    if (n.year) key += std::to_string(*n.year);
    return key;
}

ReferenceRecord make_reference(std::string raw, NormalizedReference normalized) {
    ReferenceRecord r;
    r.raw = std::move(raw);
    r.normalized = std::move(normalized);
    r.match_key = r.normalized.empty() ? join(text::normalized_tokens(r.raw), " ") : match_key(r.normalized);
    return r;
}

ReferenceRecord normalize_reference(std::string_view raw) {
    const std::string body = strip_label(raw);
    std::vector<std::string> segments;
    for (auto& s : split(body, ',')) {
        auto t = text::trim(s);
        if (!t.empty()) segments.push_back(std::move(t));
    }

    NormalizedReference n;
    n.year = find_year(body);

    std::size_t idx = 0;
    if (segments.size() >= 2) {
        for (; idx + 1 < segments.size(); ++idx) {
            const auto parts = split_author_list(segments[idx]);
            if (parts.empty()) break;
            std::vector<NameInfo> infos;
            bool all_names = true;
            bool any_initial = false;
            for (const auto& p : parts) {
                infos.push_back(inspect_name(p));
                all_names = all_names && infos.back().name_like;
                any_initial = any_initial || infos.back().has_initial;
            }
            // A leading segment of bare surnames ("renyi and ford") also counts.
            const bool bare_surnames =
                idx == 0 && std::all_of(parts.begin(), parts.end(),
                                        [](const std::string& p) { return split_words(p).size() == 1; });
            // "Serre, J.-P.": initials split off the preceding surname.
            const bool initials_only = std::all_of(infos.begin(), infos.end(), [](const NameInfo& i) {
                return i.has_initial && i.surname.empty();
            });
            if (initials_only && !n.authors.empty()) continue;
            if (!all_names || !(any_initial || bare_surnames)) break;
            for (const auto& info : infos) n.authors.push_back(info.surname);
        }
    }

    if (n.authors.empty() && !n.year) {
        return make_reference(std::string(raw), NormalizedReference{});
    }
    if (idx < segments.size() && !is_numeric_segment(segments[idx])) {
        n.title_tokens = text::normalized_tokens(segments[idx]);
    }
    return make_reference(std::string(raw), std::move(n));
}

std::string print_normalized(const NormalizedReference& n) {
    std::vector<std::string> segs;
    if (!n.authors.empty()) segs.push_back(join(n.authors, " and "));
    if (!n.title_tokens.empty()) segs.push_back(join(n.title_tokens, " "));
    if (n.year) segs.push_back(std::to_string(*n.year));
    return join(segs, ", ");
}

std::string comparison_string(const ReferenceRecord& r) {
    if (r.normalized.empty()) return join(text::normalized_tokens(r.raw), " ");
    std::vector<std::string> parts = r.normalized.authors;
    parts.insert(parts.end(), r.normalized.title_tokens.begin(), r.normalized.title_tokens.end());
    if (r.normalized.year) parts.push_back(std::to_string(*r.normalized.year));
    return join(parts, " ");
}

}  // namespace mathdup::citesim

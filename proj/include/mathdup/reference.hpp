#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace mathdup {

struct NormalizedReference {
    std::vector<std::string> authors;       // folded surnames, citation order
    std::vector<std::string> title_tokens;  // folded, punctuation stripped
    std::optional<int> year;

    bool empty() const { return authors.empty() && title_tokens.empty() && !year; }

    friend bool operator==(const NormalizedReference&, const NormalizedReference&) = default;
};

struct ReferenceRecord {
    std::string raw;
    NormalizedReference normalized;
    std::string match_key;

    friend bool operator==(const ReferenceRecord&, const ReferenceRecord&) = default;
};

namespace citesim {

// Heuristic split of a free-form bibliography entry into surnames, title and
// year. Tolerates OCR noise in the sense that it never fails: an entry with
// neither authors nor a year is left unparsed and keyed on its folded text.
ReferenceRecord normalize_reference(std::string_view raw);

// Rebuilds the record around already-normalized fields (used when a document
// file carries its own normalization).
ReferenceRecord make_reference(std::string raw, NormalizedReference normalized);

// Deterministic key: first-author surname | three rarest title tokens (sorted) | year.
std::string match_key(const NormalizedReference& n);

// Printable form of the normalized fields that normalize_reference parses
// back to the same key.
std::string print_normalized(const NormalizedReference& n);

// Characters compared by the edit-distance matcher.
std::string comparison_string(const ReferenceRecord& r);

}  // namespace citesim
}  // namespace mathdup

#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace mathdup {

// Byte range [start, end) into the UTF-8 source text.
struct CharSpan {
    std::size_t start = 0;
    std::size_t end = 0;

    friend bool operator==(const CharSpan&, const CharSpan&) = default;
};

struct Token {
    std::string surface;
    std::string normalized;
    CharSpan span;

    friend bool operator==(const Token&, const Token&) = default;
};

using TokenStream = std::vector<Token>;

namespace text {

// Lower-cases and strips diacritics (Latin-1, Latin Extended-A, combining
// marks); Greek and Cyrillic capitals are lower-cased. Other code points pass
// through unchanged.
std::string fold(std::string_view s);

// Splits on whitespace and punctuation (ASCII and the Unicode punctuation and
// symbol blocks). Spans index bytes of the input.
TokenStream tokenize(std::string_view s);

// Convenience: normalized forms only.
std::vector<std::string> normalized_tokens(std::string_view s);

std::string trim(std::string_view s);

}  // namespace text
}  // namespace mathdup

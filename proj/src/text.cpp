#include "mathdup/text.hpp"

#include <cstdint>

namespace mathdup::text {
namespace {

struct Decoded {
    char32_t cp;
    std::size_t len;
    bool valid;
};

Decoded decode(std::string_view s, std::size_t i) {
    const auto b0 = static_cast<unsigned char>(s[i]);
    if (b0 < 0x80) return {b0, 1, true};
    std::size_t len = 0;
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
        return {0xFFFD, 1, false};
    }
    if (i + len > s.size()) return {0xFFFD, 1, false};
    for (std::size_t k = 1; k < len; ++k) {
        const auto b = static_cast<unsigned char>(s[i + k]);
        if ((b & 0xC0) != 0x80) return {0xFFFD, 1, false};
        cp = (cp << 6) | (b & 0x3F);
    }
    return {cp, len, true};
}

void encode(char32_t cp, std::string& out) {
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

// Base letters for U+00C0..U+00FF; '?' marks entries handled specially.
constexpr std::string_view kLatin1 =
    "AAAAAA?CEEEEIIII"
    "DNOOOOO?OUUUUY??"
    "aaaaaa?ceeeeiiii"
    "dnooooo?ouuuuy?y";

// Base letters for U+0100..U+017F.
constexpr std::string_view kLatinExtA =
    "AaAaAaCcCcCcCcDd"
    "DdEeEeEeEeEeGgGg"
    "GgGgHhHhIiIiIiIi"
    "Ii??JjKkkLlLlLlL"
    "lLlNnNnNnnNnOoOo"
    "Oo??RrRrRrSsSsSs"
    "SsTtTtTtUuUuUuUu"
    "UuUuWwYyYZzZzZzs";

bool is_word_cp(char32_t cp) {
    if (cp < 0x80) {
        return (cp >= '0' && cp <= '9') || (cp >= 'a' && cp <= 'z') || (cp >= 'A' && cp <= 'Z');
    }
    if (cp <= 0xBF) return cp == 0xAA || cp == 0xB5 || cp == 0xBA;
    if (cp == 0xD7 || cp == 0xF7) return false;
    if (cp == 0x37E || cp == 0x387) return false;
    if (cp >= 0x2100 && cp <= 0x214F) return true;  // letterlike symbols
    if (cp >= 0x2000 && cp <= 0x2BFF) return false;
    if (cp >= 0x2E00 && cp <= 0x2E7F) return false;
    if (cp >= 0x3000 && cp <= 0x303F) return false;
    if (cp >= 0xFE10 && cp <= 0xFE6F) return false;
    if (cp >= 0xFF00 && cp <= 0xFF0F) return false;
    if (cp >= 0xFF1A && cp <= 0xFF20) return false;
    if (cp >= 0xFF3B && cp <= 0xFF40) return false;
    if (cp >= 0xFF5B && cp <= 0xFF65) return false;
    if (cp == 0xFFFD) return false;
    return true;
}

void fold_cp(char32_t cp, std::string& out) {
    if (cp < 0x80) {
        if (cp >= 'A' && cp <= 'Z') cp += 'a' - 'A';
        out.push_back(static_cast<char>(cp));
        return;
    }
    if (cp >= 0x300 && cp <= 0x36F) return;  // combining marks
    if (cp >= 0xC0 && cp <= 0xFF) {
        switch (cp) {
            case 0xC6: case 0xE6: out += "ae"; return;
            case 0xDE: case 0xFE: out += "th"; return;
            case 0xDF: out += "ss"; return;
            default: break;
        }
        const char c = kLatin1[cp - 0xC0];
        if (c != '?') {
            fold_cp(static_cast<unsigned char>(c), out);
            return;
        }
    }
    if (cp >= 0x100 && cp <= 0x17F) {
        switch (cp) {
            case 0x132: case 0x133: out += "ij"; return;
            case 0x152: case 0x153: out += "oe"; return;
            default: break;
        }
        fold_cp(static_cast<unsigned char>(kLatinExtA[cp - 0x100]), out);
        return;
    }
    if (cp >= 0x391 && cp <= 0x3A9) cp += 0x20;               // Greek capitals
    else if (cp >= 0x410 && cp <= 0x42F) cp += 0x20;          // Cyrillic capitals
    else if (cp >= 0x400 && cp <= 0x40F) cp += 0x50;
    encode(cp, out);
}

}  // namespace

std::string fold(std::string_view s) {
    std::string out;
    out.reserve(s.size());
    for (std::size_t i = 0; i < s.size();) {
        const auto d = decode(s, i);
        if (d.valid) fold_cp(d.cp, out);
        i += d.len;
    }
    return out;
}

TokenStream tokenize(std::string_view s) {
    TokenStream tokens;
    std::size_t i = 0;
    while (i < s.size()) {
        auto d = decode(s, i);
        if (!d.valid || !is_word_cp(d.cp)) {
            i += d.len;
            continue;
        }
        const std::size_t start = i;
        std::string normalized;
        while (i < s.size()) {
            d = decode(s, i);
            if (!d.valid || !is_word_cp(d.cp)) break;
            fold_cp(d.cp, normalized);
            i += d.len;
        }
        // A run made only of combining marks folds to nothing.
        if (normalized.empty()) continue;
        tokens.push_back(Token{std::string(s.substr(start, i - start)), std::move(normalized),
                               CharSpan{start, i}});
    }
    return tokens;
}

std::vector<std::string> normalized_tokens(std::string_view s) {
    std::vector<std::string> out;
    for (auto& t : tokenize(s)) out.push_back(std::move(t.normalized));
    return out;
}

std::string trim(std::string_view s) {
    const auto ws = [](char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v'; };
    std::size_t b = 0, e = s.size();
    while (b < e && ws(s[b])) ++b;
    while (e > b && ws(s[e - 1])) --e;
    return std::string(s.substr(b, e - b));
}

}  // namespace mathdup::text

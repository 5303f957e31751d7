#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "mathdup/document.hpp"
#include "mathdup/text.hpp"

namespace mathdup {

struct Fingerprint {
    std::uint64_t hash = 0;
    std::size_t ngram_start = 0;  // token index of the first word
    std::size_t n = 0;

    friend bool operator==(const Fingerprint&, const Fingerprint&) = default;
};

struct TextConfig {
    std::size_t ngram = 3;
    std::size_t window = 4;
    std::uint64_t hash_seed = 0x6d61746864757031ULL;

    friend bool operator==(const TextConfig&, const TextConfig&) = default;
};

// Aligned region: token range [start, end) in each document plus the byte
// span it covers in that document's body text.
struct SpanPair {
    std::size_t a_token_start = 0;
    std::size_t a_token_end = 0;
    std::size_t b_token_start = 0;
    std::size_t b_token_end = 0;
    CharSpan a;
    CharSpan b;

    friend bool operator==(const SpanPair&, const SpanPair&) = default;
};

struct TextSimilarity {
    double jaccard = 0.0;
    double containment_a_in_b = 0.0;
    double containment_b_in_a = 0.0;
    std::vector<SpanPair> matched_spans;
    bool empty = false;  // both fingerprint sets empty; scores reported as 0
};

namespace textsim {

// Hash of every n-gram, index i covering tokens [i, i + n). Polynomial
// rolling hash over per-token hashes, finalized by a seeded 64-bit mixer.
std::vector<std::uint64_t> ngram_hashes(const TokenStream& ts, std::size_t n, std::uint64_t seed);

// Winnowing: minimum hash of each window of `window` consecutive n-gram
// hashes, rightmost on ties. Sorted by ngram_start, unique by (hash, start).
std::vector<Fingerprint> fingerprint_winnow(const TokenStream& ts, std::size_t n, std::size_t window,
                                            std::uint64_t seed = TextConfig{}.hash_seed);

std::vector<Fingerprint> fingerprint_winnow(std::span<const std::uint64_t> hashes, std::size_t n, std::size_t window);

std::vector<std::uint64_t> fingerprint_set(std::span<const Fingerprint> fps);  // sorted, unique hashes

// Text channel over the body text of both documents.
TextSimilarity text_similarity(const Document& a, const Document& b, const TextConfig& cfg = {});
TextSimilarity text_similarity(const TokenStream& a, const TokenStream& b, const TextConfig& cfg = {});

}  // namespace textsim
}  // namespace mathdup

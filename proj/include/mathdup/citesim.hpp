#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "mathdup/document.hpp"
#include "mathdup/reference.hpp"

namespace mathdup::citesim {

inline constexpr double kDefaultTolerance = 0.25;

std::size_t edit_distance(std::string_view a, std::string_view b);

// Levenshtein distance of the comparison strings over the longer length;
// 0 when match keys agree.
double reference_distance(const ReferenceRecord& a, const ReferenceRecord& b);

// One-to-one pairs (index_a, index_b), greedy by ascending distance, pairs
// with distance <= tol only. Sorted by index_a. Symmetric:
// match_references(b, a) is the transpose of match_references(a, b).
std::vector<std::pair<std::size_t, std::size_t>> match_references(std::span<const ReferenceRecord> a,
                                                                  std::span<const ReferenceRecord> b,
                                                                  double tol = kDefaultTolerance);

// |matches| / min(|refs_a|, |refs_b|); 0 when either list is empty.
double bibliographic_coupling(const Document& a, const Document& b, double tol = kDefaultTolerance);

// In-text citation streams mapped to matched-reference ids, compared by
// LCS / longer stream length.
double citation_sequence_similarity(const Document& a, const Document& b, double tol = kDefaultTolerance);

struct CitationSimilarity {
    double coupling = 0.0;
    double sequence = 0.0;
    std::vector<std::pair<std::size_t, std::size_t>> matches;
};

// Both statistics from one matching.
CitationSimilarity citation_similarity(const Document& a, const Document& b, double tol = kDefaultTolerance);

}  // namespace mathdup::citesim

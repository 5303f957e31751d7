#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "mathdup/document.hpp"
#include "mathdup/formula.hpp"

namespace mathdup {

struct MathFeatureVector {
    std::map<std::string, std::size_t> identifier_freq;
    std::map<std::string, std::size_t> operator_freq;
    std::map<std::string, std::size_t> number_freq;
    std::vector<std::string> identifier_seq;  // document reading order

    bool empty() const { return identifier_seq.empty() && operator_freq.empty() && number_freq.empty(); }

    friend bool operator==(const MathFeatureVector&, const MathFeatureVector&) = default;
};

enum class MathReuseCategory {
    identical,
    equivalent,
    order_changes,
    different_presentation,
    splits_or_merges,
    different_concepts,  // reviewer-assigned only
    unrelated,
};

std::string_view to_string(MathReuseCategory c);
std::optional<MathReuseCategory> math_reuse_category_from_string(std::string_view s);

struct MathReuseLabel {
    MathReuseCategory category = MathReuseCategory::unrelated;
    std::vector<std::pair<std::size_t, std::size_t>> evidence;  // (formula in a, formula in b)

    friend bool operator==(const MathReuseLabel&, const MathReuseLabel&) = default;
};

struct CanonicalizeOptions {
    std::set<std::string, std::less<>> commutative = {"+", "*", "=", "∪", "∩"};
};

namespace mathsim {

MathFeatureVector extract_features(const Document& doc);
MathFeatureVector extract_features(std::span<const Formula> formulae);

// Cosine of the relative identifier frequencies; 0 when either side is empty.
double histogram_similarity(const MathFeatureVector& a, const MathFeatureVector& b);

std::size_t lcs_length(std::span<const std::string> a, std::span<const std::string> b);

// LCS(identifier sequences) / max length; 0 when either is empty.
double identifier_sequence_similarity(const MathFeatureVector& a, const MathFeatureVector& b);

// Flattens nested applications of the same commutative operator and sorts the
// operands of commutative operators by their serialized form. Idempotent.
// Distributivity is not applied. Throws MalformedTree.
FormulaTree canonicalize_formula(const FormulaTree& tree, const CanonicalizeOptions& opts = {});

// Relation of one formula in a to one in b, strongest first.
enum class FormulaMatch { identical, presentation, equivalent, none };
FormulaMatch compare_formulae(const Formula& a, const Formula& b, const CanonicalizeOptions& opts = {});

MathReuseLabel classify_math_reuse(const Document& a, const Document& b, const CanonicalizeOptions& opts = {});
MathReuseLabel classify_math_reuse(std::span<const Formula> a, std::span<const Formula> b,
                                   const CanonicalizeOptions& opts = {});

}  // namespace mathsim
}  // namespace mathdup

#include "mathdup/mathsim.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "mathdup/error.hpp"

namespace mathdup {

std::string_view to_string(MathReuseCategory c) {
    switch (c) {
        case MathReuseCategory::identical: return "identical";
        case MathReuseCategory::equivalent: return "equivalent";
        case MathReuseCategory::order_changes: return "order_changes";
        case MathReuseCategory::different_presentation: return "different_presentation";
        case MathReuseCategory::splits_or_merges: return "splits_or_merges";
        case MathReuseCategory::different_concepts: return "different_concepts";
        case MathReuseCategory::unrelated: return "unrelated";
    }
    return "unrelated";
}

std::optional<MathReuseCategory> math_reuse_category_from_string(std::string_view s) {
    for (auto c : {MathReuseCategory::identical, MathReuseCategory::equivalent, MathReuseCategory::order_changes,
                   MathReuseCategory::different_presentation, MathReuseCategory::splits_or_merges,
                   MathReuseCategory::different_concepts, MathReuseCategory::unrelated}) {
        if (to_string(c) == s) return c;
    }
    return std::nullopt;
}

namespace mathsim {
namespace {

FormulaTree canonical(const FormulaTree& t, const CanonicalizeOptions& opts) {
    if (t.kind != FormulaNodeKind::apply) return t;
    std::vector<FormulaTree> kids;
    kids.reserve(t.children.size());
    const bool commutative = opts.commutative.contains(t.value);
    for (const auto& c : t.children) {
        FormulaTree cc = canonical(c, opts);
        if (commutative && cc.kind == FormulaNodeKind::apply && cc.value == t.value) {
            for (auto& g : cc.children) kids.push_back(std::move(g));
        } else {
            kids.push_back(std::move(cc));
        }
    }
    if (commutative) {
        std::vector<std::pair<std::string, FormulaTree>> keyed;
        keyed.reserve(kids.size());
        for (auto& k : kids) {
            std::string key = formula::serialize(k);
            keyed.emplace_back(std::move(key), std::move(k));
        }
        std::stable_sort(keyed.begin(), keyed.end(),
                         [](const auto& x, const auto& y) { return x.first < y.first; });
        kids.clear();
        for (auto& [_, k] : keyed) kids.push_back(std::move(k));
    }
    return FormulaNode::apply(t.value, std::move(kids));
}

struct Prepared {
    const Formula* formula;
    std::vector<MathToken> stripped;
    std::optional<std::string> canonical_key;
};

Prepared prepare(const Formula& f, const CanonicalizeOptions& opts) {
    Prepared p{&f, formula::strip_presentation(f.tokens), std::nullopt};
    if (f.tree) {
        try {
            p.canonical_key = formula::serialize(canonicalize_formula(*f.tree, opts));
        } catch (const MalformedTree&) {
            p.canonical_key.reset();
        }
    }
    return p;
}

FormulaMatch compare(const Prepared& a, const Prepared& b) {
    if (a.formula->tokens.empty() || b.formula->tokens.empty()) return FormulaMatch::none;
    if (a.formula->tokens == b.formula->tokens) return FormulaMatch::identical;
    if (a.formula->tree && b.formula->tree) {
        if (*a.formula->tree == *b.formula->tree) return FormulaMatch::presentation;
    } else if (a.stripped == b.stripped) {
        return FormulaMatch::presentation;
    }
    if (a.canonical_key && b.canonical_key && *a.canonical_key == *b.canonical_key) return FormulaMatch::equivalent;
    return FormulaMatch::none;
}

// Runs of >= 2 consecutive unused formulae on `many` whose stripped tokens
// concatenate to one unused formula on `one`.
void find_splits(const std::vector<Prepared>& one, const std::vector<Prepared>& many, std::vector<char>& used_one,
                 std::vector<char>& used_many, bool one_is_a,
                 std::vector<std::pair<std::size_t, std::size_t>>& evidence) {
    for (std::size_t i = 0; i < one.size(); ++i) {
        if (used_one[i]) continue;
        const auto& target = one[i].stripped;
        if (target.size() < 2) continue;
        for (std::size_t j = 0; j < many.size(); ++j) {
            if (used_many[j]) continue;
            std::size_t off = 0;
            std::size_t k = j;
            bool found = false;
            while (k < many.size() && !used_many[k]) {
                const auto& piece = many[k].stripped;
                if (piece.empty() || off + piece.size() > target.size() ||
                    !std::equal(piece.begin(), piece.end(), target.begin() + static_cast<std::ptrdiff_t>(off))) {
                    break;
                }
                off += piece.size();
                ++k;
                if (off == target.size()) {
                    found = k - j >= 2;
                    break;
                }
            }
            if (!found) continue;
            used_one[i] = 1;
            for (std::size_t m = j; m < k; ++m) {
                used_many[m] = 1;
                evidence.emplace_back(one_is_a ? i : m, one_is_a ? m : i);
            }
            break;
        }
    }
}

}  // namespace

MathFeatureVector extract_features(std::span<const Formula> formulae) {
    MathFeatureVector v;
    for (const auto& f : formulae) {
        for (const auto& t : f.tokens) {
            switch (t.kind) {
                case MathTokenKind::identifier:
                    ++v.identifier_freq[t.value];
                    v.identifier_seq.push_back(t.value);
                    break;
                case MathTokenKind::number: ++v.number_freq[t.value]; break;
                case MathTokenKind::op:
                    if (!formula::is_presentation_token(t)) ++v.operator_freq[formula::canonical_operator(t.value)];
                    break;
                case MathTokenKind::structural: break;
            }
        }
    }
    return v;
}

MathFeatureVector extract_features(const Document& doc) { return extract_features(doc.formulae); }

double histogram_similarity(const MathFeatureVector& a, const MathFeatureVector& b) {
    if (a.identifier_freq.empty() || b.identifier_freq.empty()) return 0.0;
    double dot = 0.0, na = 0.0, nb = 0.0;
    for (const auto& [id, c] : a.identifier_freq) {
        na += static_cast<double>(c) * static_cast<double>(c);
        const auto it = b.identifier_freq.find(id);
        if (it != b.identifier_freq.end()) dot += static_cast<double>(c) * static_cast<double>(it->second);
    }
    for (const auto& [_, c] : b.identifier_freq) nb += static_cast<double>(c) * static_cast<double>(c);
    // Relative frequencies rescale each vector; cosine is unchanged by that.
    const double s = dot / (std::sqrt(na) * std::sqrt(nb));
    return std::clamp(s, 0.0, 1.0);
}

std::size_t lcs_length(std::span<const std::string> a, std::span<const std::string> b) {
    if (a.empty() || b.empty()) return 0;
    std::unordered_map<std::string_view, int> ids;
    std::vector<int> ia, ib;
    ia.reserve(a.size());
    ib.reserve(b.size());
    for (const auto& s : a) ia.push_back(ids.try_emplace(s, static_cast<int>(ids.size())).first->second);
    for (const auto& s : b) ib.push_back(ids.try_emplace(s, static_cast<int>(ids.size())).first->second);
    std::vector<std::size_t> prev(ib.size() + 1, 0), cur(ib.size() + 1, 0);
    for (std::size_t i = 1; i <= ia.size(); ++i) {
        for (std::size_t j = 1; j <= ib.size(); ++j) {
            cur[j] = ia[i - 1] == ib[j - 1] ? prev[j - 1] + 1 : std::max(prev[j], cur[j - 1]);
        }
        std::swap(prev, cur);
    }
    return prev[ib.size()];
}

double identifier_sequence_similarity(const MathFeatureVector& a, const MathFeatureVector& b) {
    if (a.identifier_seq.empty() || b.identifier_seq.empty()) return 0.0;
    const double l = static_cast<double>(lcs_length(a.identifier_seq, b.identifier_seq));
    return l / static_cast<double>(std::max(a.identifier_seq.size(), b.identifier_seq.size()));
}

FormulaTree canonicalize_formula(const FormulaTree& tree, const CanonicalizeOptions& opts) {
    formula::validate_tree(tree);
    return canonical(tree, opts);
}

FormulaMatch compare_formulae(const Formula& a, const Formula& b, const CanonicalizeOptions& opts) {
    return compare(prepare(a, opts), prepare(b, opts));
}

MathReuseLabel classify_math_reuse(std::span<const Formula> fa, std::span<const Formula> fb,
                                   const CanonicalizeOptions& opts) {
    std::vector<Prepared> pa, pb;
    for (const auto& f : fa) pa.push_back(prepare(f, opts));
    for (const auto& f : fb) pb.push_back(prepare(f, opts));

    std::vector<std::vector<FormulaMatch>> rel(pa.size(), std::vector<FormulaMatch>(pb.size(), FormulaMatch::none));
    for (std::size_t i = 0; i < pa.size(); ++i) {
        for (std::size_t j = 0; j < pb.size(); ++j) rel[i][j] = compare(pa[i], pb[j]);
    }

    std::vector<char> used_a(pa.size(), 0), used_b(pb.size(), 0);
    struct Pair {
        std::size_t i, j;
        FormulaMatch level;
    };
    std::vector<Pair> matched;
    for (auto level : {FormulaMatch::identical, FormulaMatch::presentation, FormulaMatch::equivalent}) {
        for (std::size_t i = 0; i < pa.size(); ++i) {
            if (used_a[i]) continue;
            for (std::size_t j = 0; j < pb.size(); ++j) {
                if (!used_b[j] && rel[i][j] == level) {
                    used_a[i] = used_b[j] = 1;
                    matched.push_back({i, j, level});
                    break;
                }
            }
        }
    }

    std::vector<std::pair<std::size_t, std::size_t>> split_evidence;
    find_splits(pa, pb, used_a, used_b, true, split_evidence);
    find_splits(pb, pa, used_b, used_a, false, split_evidence);

    MathReuseLabel label;
    for (const auto& m : matched) label.evidence.emplace_back(m.i, m.j);
    label.evidence.insert(label.evidence.end(), split_evidence.begin(), split_evidence.end());
    std::sort(label.evidence.begin(), label.evidence.end());
    if (label.evidence.empty()) return label;

    bool inverted = false;
    for (std::size_t x = 0; x < matched.size() && !inverted; ++x) {
        for (std::size_t y = x + 1; y < matched.size() && !inverted; ++y) {
            inverted = (matched[x].i < matched[y].i) != (matched[x].j < matched[y].j);
        }
    }
    const auto has = [&](FormulaMatch l) {
        return std::any_of(matched.begin(), matched.end(), [l](const Pair& p) { return p.level == l; });
    };
    if (inverted) label.category = MathReuseCategory::order_changes;
    else if (!split_evidence.empty()) label.category = MathReuseCategory::splits_or_merges;
    else if (has(FormulaMatch::equivalent)) label.category = MathReuseCategory::equivalent;
    else if (has(FormulaMatch::presentation)) label.category = MathReuseCategory::different_presentation;
    else label.category = MathReuseCategory::identical;
    return label;
}

MathReuseLabel classify_math_reuse(const Document& a, const Document& b, const CanonicalizeOptions& opts) {
    return classify_math_reuse(a.formulae, b.formulae, opts);
}

}  // namespace mathsim
}  // namespace mathdup

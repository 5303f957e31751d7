#include "mathdup/citesim.hpp"

#include <algorithm>
#include <cstdint>
#include <limits>
#include <string>
#include <tuple>

namespace mathdup::citesim {
namespace {

struct Prepared {
    std::string text;
    std::vector<std::uint16_t> bigrams;  // sorted
};

Prepared prepare(const ReferenceRecord& r) {
    Prepared p;
    p.text = comparison_string(r);
    for (std::size_t i = 0; i + 1 < p.text.size(); ++i) {
        p.bigrams.push_back(static_cast<std::uint16_t>((static_cast<unsigned char>(p.text[i]) << 8) |
                                                       static_cast<unsigned char>(p.text[i + 1])));
    }
    std::sort(p.bigrams.begin(), p.bigrams.end());
    return p;
}

std::size_t common_count(const std::vector<std::uint16_t>& a, const std::vector<std::uint16_t>& b) {
    std::size_t i = 0, j = 0, n = 0;
    while (i < a.size() && j < b.size()) {
        if (a[i] < b[j]) ++i;
        else if (b[j] < a[i]) ++j;
        else {
            ++n;
            ++i;
            ++j;
        }
    }
    return n;
}

// Levenshtein distance if <= limit, otherwise limit + 1. Banded DP.
std::size_t bounded_edit_distance(std::string_view a, std::string_view b, std::size_t limit) {
    const std::size_t n = a.size(), m = b.size();
    const std::size_t diff = n > m ? n - m : m - n;
    if (diff > limit) return limit + 1;
    const std::size_t inf = limit + 1;
    std::vector<std::size_t> prev(m + 1, inf), cur(m + 1, inf);
    for (std::size_t j = 0; j <= std::min(m, limit); ++j) prev[j] = j;
    for (std::size_t i = 1; i <= n; ++i) {
        const std::size_t lo = i > limit ? i - limit : 0;
        const std::size_t hi = std::min(m, i + limit);
        std::fill(cur.begin(), cur.end(), inf);
        if (lo == 0) cur[0] = i <= limit ? i : inf;
        std::size_t row_min = cur[0];
        for (std::size_t j = std::max<std::size_t>(lo, 1); j <= hi; ++j) {
            const std::size_t sub = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
            const std::size_t del = prev[j] + 1;
            const std::size_t ins = cur[j - 1] + 1;
            cur[j] = std::min({sub, del, ins, inf});
            row_min = std::min(row_min, cur[j]);
        }
        if (row_min > limit) return limit + 1;
        std::swap(prev, cur);
    }
    return std::min(prev[m], inf);
}

// Distance fraction when <= tol, otherwise +inf.
double bounded_distance(const ReferenceRecord& ra, const Prepared& a, const ReferenceRecord& rb, const Prepared& b,
                        double tol) {
    if (ra.match_key == rb.match_key) return 0.0;
    const std::size_t longest = std::max(a.text.size(), b.text.size());
    if (longest == 0) return 0.0;
    const auto limit = static_cast<std::size_t>(tol * static_cast<double>(longest) + 1e-9);
    // q-gram count filter (q = 2): k edits destroy at most 2k bigrams.
    const std::size_t need = longest >= 1 + 2 * limit ? longest - 1 - 2 * limit : 0;
    if (need > 0 && common_count(a.bigrams, b.bigrams) < need) return std::numeric_limits<double>::infinity();
    const std::size_t d = bounded_edit_distance(a.text, b.text, limit);
    if (d > limit) return std::numeric_limits<double>::infinity();
    return static_cast<double>(d) / static_cast<double>(longest);
}

bool lexicographically_after(std::span<const ReferenceRecord> a, std::span<const ReferenceRecord> b) {
    return std::lexicographical_compare(b.begin(), b.end(), a.begin(), a.end(),
                                        [](const ReferenceRecord& x, const ReferenceRecord& y) {
                                            return std::tie(x.match_key, x.raw) < std::tie(y.match_key, y.raw);
                                        });
}

std::vector<std::pair<std::size_t, std::size_t>> greedy_match(std::span<const ReferenceRecord> a,
                                                              std::span<const ReferenceRecord> b, double tol) {
    std::vector<Prepared> pa, pb;
    for (const auto& r : a) pa.push_back(prepare(r));
    for (const auto& r : b) pb.push_back(prepare(r));
    struct Candidate {
        double d;
        std::size_t i, j;
    };
    std::vector<Candidate> cands;
    for (std::size_t i = 0; i < a.size(); ++i) {
        for (std::size_t j = 0; j < b.size(); ++j) {
            const double d = bounded_distance(a[i], pa[i], b[j], pb[j], tol);
            if (d <= tol) cands.push_back({d, i, j});
        }
    }
    std::sort(cands.begin(), cands.end(),
              [](const Candidate& x, const Candidate& y) { return std::tie(x.d, x.i, x.j) < std::tie(y.d, y.i, y.j); });
    std::vector<char> ua(a.size(), 0), ub(b.size(), 0);
    std::vector<std::pair<std::size_t, std::size_t>> out;
    for (const auto& c : cands) {
        if (ua[c.i] || ub[c.j]) continue;
        ua[c.i] = ub[c.j] = 1;
        out.emplace_back(c.i, c.j);
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::size_t lcs_ints(const std::vector<std::size_t>& a, const std::vector<std::size_t>& b) {
    if (a.empty() || b.empty()) return 0;
    std::vector<std::size_t> prev(b.size() + 1, 0), cur(b.size() + 1, 0);
    for (std::size_t i = 1; i <= a.size(); ++i) {
        for (std::size_t j = 1; j <= b.size(); ++j) {
            cur[j] = a[i - 1] == b[j - 1] ? prev[j - 1] + 1 : std::max(prev[j], cur[j - 1]);
        }
        std::swap(prev, cur);
    }
    return prev[b.size()];
}

double sequence_score(const Document& a, const Document& b, const std::vector<std::pair<std::size_t, std::size_t>>& m) {
    if (a.citation_markers.empty() || b.citation_markers.empty()) return 0.0;
    const std::size_t M = m.size();
    std::vector<std::size_t> id_a(a.references.size()), id_b(b.references.size());
    for (std::size_t r = 0; r < id_a.size(); ++r) id_a[r] = M + r;
    for (std::size_t r = 0; r < id_b.size(); ++r) id_b[r] = M + id_a.size() + r;
    for (std::size_t k = 0; k < M; ++k) {
        id_a[m[k].first] = k;
        id_b[m[k].second] = k;
    }
    std::vector<std::size_t> sa, sb;
    for (const auto& c : a.citation_markers) sa.push_back(id_a.at(c.reference - 1));
    for (const auto& c : b.citation_markers) sb.push_back(id_b.at(c.reference - 1));
    return static_cast<double>(lcs_ints(sa, sb)) / static_cast<double>(std::max(sa.size(), sb.size()));
}

}  // namespace

std::size_t edit_distance(std::string_view a, std::string_view b) {
    return bounded_edit_distance(a, b, std::max(a.size(), b.size()));
}

double reference_distance(const ReferenceRecord& a, const ReferenceRecord& b) {
    if (a.match_key == b.match_key) return 0.0;
    const std::string sa = comparison_string(a), sb = comparison_string(b);
    const std::size_t longest = std::max(sa.size(), sb.size());
    if (longest == 0) return 0.0;
    return static_cast<double>(edit_distance(sa, sb)) / static_cast<double>(longest);
}

std::vector<std::pair<std::size_t, std::size_t>> match_references(std::span<const ReferenceRecord> a,
                                                                  std::span<const ReferenceRecord> b, double tol) {
    // Always solve in one orientation so that swapping the arguments yields
    // exactly the transposed pair set.
    if (lexicographically_after(a, b)) {
        auto t = greedy_match(b, a, tol);
        for (auto& [x, y] : t) std::swap(x, y);
        std::sort(t.begin(), t.end());
        return t;
    }
    return greedy_match(a, b, tol);
}

CitationSimilarity citation_similarity(const Document& a, const Document& b, double tol) {
    CitationSimilarity s;
    if (a.references.empty() || b.references.empty()) return s;
    s.matches = match_references(a.references, b.references, tol);
    s.coupling = static_cast<double>(s.matches.size()) /
                 static_cast<double>(std::min(a.references.size(), b.references.size()));
    s.sequence = sequence_score(a, b, s.matches);
    return s;
}

double bibliographic_coupling(const Document& a, const Document& b, double tol) {
    return citation_similarity(a, b, tol).coupling;
}

double citation_sequence_similarity(const Document& a, const Document& b, double tol) {
    return citation_similarity(a, b, tol).sequence;
}

}  // namespace mathdup::citesim

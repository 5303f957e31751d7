#include "mathdup/textsim.hpp"

#include <algorithm>
#include <unordered_map>
#include <unordered_set>

namespace mathdup::textsim {
namespace {

std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::uint64_t fnv1a(std::string_view s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

// Pairs (i, j) with equal n-gram hash occur this often at most before a hash
// stops seeding alignment runs (runs still extend through it).
constexpr std::size_t kMaxSeedPairs = 64;

std::vector<SpanPair> align(const TokenStream& ta, const TokenStream& tb, const std::vector<std::uint64_t>& ha,
                            const std::vector<std::uint64_t>& hb, const std::vector<std::uint64_t>& shared_winnowed,
                            std::size_t n) {
    std::unordered_map<std::uint64_t, std::vector<std::size_t>> pos_b;
    for (std::size_t j = 0; j < hb.size(); ++j) pos_b[hb[j]].push_back(j);
    std::unordered_map<std::uint64_t, std::size_t> count_a;
    for (auto h : ha) ++count_a[h];
    const std::unordered_set<std::uint64_t> anchors(shared_winnowed.begin(), shared_winnowed.end());

    const auto seeds = [&](std::uint64_t h) {
        const auto it = pos_b.find(h);
        if (it == pos_b.end()) return false;
        return count_a[h] * it->second.size() <= kMaxSeedPairs;
    };

    std::vector<SpanPair> spans;
    for (std::size_t i = 0; i < ha.size(); ++i) {
        if (!seeds(ha[i])) continue;
        for (std::size_t j : pos_b.at(ha[i])) {
            if (i > 0 && j > 0 && ha[i - 1] == hb[j - 1] && seeds(ha[i - 1])) continue;  // not a run start
            std::size_t len = 0;
            bool anchored = false;
            while (i + len < ha.size() && j + len < hb.size() && ha[i + len] == hb[j + len]) {
                anchored = anchored || anchors.contains(ha[i + len]);
                ++len;
            }
            if (!anchored) continue;
            SpanPair sp;
            sp.a_token_start = i;
            sp.a_token_end = i + len - 1 + n;
            sp.b_token_start = j;
            sp.b_token_end = j + len - 1 + n;
            sp.a = {ta[sp.a_token_start].span.start, ta[sp.a_token_end - 1].span.end};
            sp.b = {tb[sp.b_token_start].span.start, tb[sp.b_token_end - 1].span.end};
            spans.push_back(sp);
        }
    }
    std::sort(spans.begin(), spans.end(), [](const SpanPair& x, const SpanPair& y) {
        return std::tie(x.a_token_start, x.b_token_start) < std::tie(y.a_token_start, y.b_token_start);
    });
    return spans;
}

}  // namespace

std::vector<std::uint64_t> ngram_hashes(const TokenStream& ts, std::size_t n, std::uint64_t seed) {
    std::vector<std::uint64_t> out;
    if (n == 0 || ts.size() < n) return out;
    const std::uint64_t base = mix64(seed) | 1ULL;
    std::uint64_t top = 1;  // base^(n-1)
    for (std::size_t k = 1; k < n; ++k) top *= base;

    std::vector<std::uint64_t> th(ts.size());
    for (std::size_t i = 0; i < ts.size(); ++i) th[i] = fnv1a(ts[i].normalized);

    std::uint64_t h = 0;
    for (std::size_t k = 0; k < n; ++k) h = h * base + th[k];
    out.reserve(ts.size() - n + 1);
    out.push_back(mix64(h ^ seed));
    for (std::size_t i = 1; i + n <= ts.size(); ++i) {
        h = (h - th[i - 1] * top) * base + th[i + n - 1];
        out.push_back(mix64(h ^ seed));
    }
    return out;
}

std::vector<Fingerprint> fingerprint_winnow(std::span<const std::uint64_t> hashes, std::size_t n,
                                            std::size_t window) {
    std::vector<Fingerprint> out;
    if (hashes.empty() || window == 0) return out;
    const std::size_t w = std::min(window, hashes.size());
    std::size_t last = hashes.size();  // no selection yet
    for (std::size_t start = 0; start + w <= hashes.size(); ++start) {
        std::size_t best = start;
        for (std::size_t k = start + 1; k < start + w; ++k) {
            if (hashes[k] <= hashes[best]) best = k;
        }
        if (best != last) {
            out.push_back({hashes[best], best, n});
            last = best;
        }
    }
    std::sort(out.begin(), out.end(), [](const Fingerprint& x, const Fingerprint& y) {
        return std::tie(x.ngram_start, x.hash) < std::tie(y.ngram_start, y.hash);
    });
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

std::vector<Fingerprint> fingerprint_winnow(const TokenStream& ts, std::size_t n, std::size_t window,
                                            std::uint64_t seed) {
    const auto hashes = ngram_hashes(ts, n, seed);
    return fingerprint_winnow(hashes, n, window);
}

std::vector<std::uint64_t> fingerprint_set(std::span<const Fingerprint> fps) {
    std::vector<std::uint64_t> out;
    out.reserve(fps.size());
    for (const auto& f : fps) out.push_back(f.hash);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

TextSimilarity text_similarity(const TokenStream& a, const TokenStream& b, const TextConfig& cfg) {
    const auto ha = ngram_hashes(a, cfg.ngram, cfg.hash_seed);
    const auto hb = ngram_hashes(b, cfg.ngram, cfg.hash_seed);
    const auto fa = fingerprint_set(fingerprint_winnow(ha, cfg.ngram, cfg.window));
    const auto fb = fingerprint_set(fingerprint_winnow(hb, cfg.ngram, cfg.window));

    TextSimilarity r;
    if (fa.empty() && fb.empty()) {
        r.empty = true;
        return r;
    }
    std::vector<std::uint64_t> shared;
    std::set_intersection(fa.begin(), fa.end(), fb.begin(), fb.end(), std::back_inserter(shared));
    const double inter = static_cast<double>(shared.size());
    const double uni = static_cast<double>(fa.size() + fb.size()) - inter;
    r.jaccard = uni > 0 ? inter / uni : 0.0;
    r.containment_a_in_b = fa.empty() ? 0.0 : inter / static_cast<double>(fa.size());
    r.containment_b_in_a = fb.empty() ? 0.0 : inter / static_cast<double>(fb.size());
    if (!shared.empty()) r.matched_spans = align(a, b, ha, hb, shared, cfg.ngram);
    return r;
}

TextSimilarity text_similarity(const Document& a, const Document& b, const TextConfig& cfg) {
    return text_similarity(a.body_tokens, b.body_tokens, cfg);
}

}  // namespace mathdup::textsim

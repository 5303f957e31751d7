#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <set>

#include "mathdup/citesim.hpp"
#include "mathdup/document.hpp"
#include "support.hpp"

using namespace mathdup;
using Pairs = std::vector<std::pair<std::size_t, std::size_t>>;

namespace {

std::string random_name(testing::Rng& rng, std::size_t len) {
    static const std::string letters = "bcdfgklmnprstvz";
    static const std::string vowels = "aeiou";
    std::string s;
    for (std::size_t i = 0; i < len; ++i) s += (i % 2 ? vowels[testing::pick(rng, 5)] : letters[testing::pick(rng, 15)]);
    s[0] = static_cast<char>(std::toupper(s[0]));
    return s;
}

std::string random_ref(testing::Rng& rng) {
    std::string title;
    for (int i = 0; i < 4; ++i) title += (i ? " " : "") + random_name(rng, 5 + testing::pick(rng, 4));
    title[0] = static_cast<char>(std::toupper(title[0]));
    return "B. " + random_name(rng, 7) + ", " + title + ", J. " + random_name(rng, 6) + " " +
           std::to_string(1 + testing::pick(rng, 40)) + " (" + std::to_string(1950 + testing::pick(rng, 60)) + "), " +
           std::to_string(1 + testing::pick(rng, 300)) + "-" + std::to_string(301 + testing::pick(rng, 300)) + ".";
}

// Swaps a few letters inside the title part, as OCR confusions do.
std::string corrupt(const std::string& raw, testing::Rng& rng) {
    std::string s = raw;
    const std::size_t from = s.find(", ") + 2, to = s.find(", J.");
    for (int k = 0; k < 2; ++k) {
        const std::size_t i = from + testing::pick(rng, to - from);
        if (std::isalpha(static_cast<unsigned char>(s[i]))) s[i] = s[i] == 'x' ? 'q' : 'x';
    }
    return s;
}

std::vector<ReferenceRecord> records(const std::vector<std::string>& raws) {
    std::vector<ReferenceRecord> out;
    for (const auto& r : raws) out.push_back(citesim::normalize_reference(r));
    return out;
}

Document with_refs(std::string id, const std::vector<std::string>& raws, const std::vector<std::size_t>& cites) {
    Document d = testing::make_doc(std::move(id), 2000, std::string(40, 'w'));
    std::string body;
    for (int i = 0; i < 40; ++i) body += "w" + std::to_string(i) + " ";
    d.body_text = body;
    d.references = records(raws);
    for (std::size_t i = 0; i < cites.size(); ++i) d.citation_markers.push_back({i, cites[i]});
    corpus::prepare(d);
    corpus::validate(d);
    return d;
}

}  // namespace

TEST_CASE("reference parsing") {
    const auto r = citesim::normalize_reference("A. Rényi, On connected graphs I, Publ. Math. Inst. Hung. Acad. Sci. 4 (1959), 385–388.");
    CHECK(r.normalized.authors == std::vector<std::string>{"renyi"});
    CHECK(r.normalized.year == 1959);
    const auto& t = r.normalized.title_tokens;
    CHECK(std::find(t.begin(), t.end(), "connected") != t.end());
    CHECK(std::find(t.begin(), t.end(), "graphs") != t.end());

    const auto u = citesim::normalize_reference("untitled");
    CHECK(u.match_key == "untitled");
    CHECK(u.raw == "untitled");
}

TEST_CASE("normalization round trip keeps the key") {
    testing::Rng rng(1);
    for (int i = 0; i < 300; ++i) {
        const auto r = citesim::normalize_reference(random_ref(rng));
        const auto back = citesim::normalize_reference(citesim::print_normalized(r.normalized));
        CHECK(back.match_key == r.match_key);
    }
    const auto renyi = citesim::normalize_reference("A. Rényi, On connected graphs I, 1959");
    CHECK(citesim::normalize_reference(citesim::print_normalized(renyi.normalized)).match_key == renyi.match_key);
}

TEST_CASE("edit distance") {
    CHECK(citesim::edit_distance("kitten", "sitting") == 3);
    CHECK(citesim::edit_distance("", "abc") == 3);
    CHECK(citesim::edit_distance("abc", "abc") == 0);
}

TEST_CASE("identical lists match one to one") {
    testing::Rng rng(2);
    std::vector<std::string> raws;
    for (int i = 0; i < 10; ++i) raws.push_back(random_ref(rng));
    const auto a = records(raws);
    Pairs expected;
    for (std::size_t i = 0; i < a.size(); ++i) expected.emplace_back(i, i);
    CHECK(citesim::match_references(a, a) == expected);
}

TEST_CASE("OCR noise from a scanned bibliography") {
    const auto clean = citesim::normalize_reference("A. Rényi, On connected graphs I, Publ. Math. Inst. Hung. Acad. Sci. 4 (1959), 385-388.");
    const auto noisy = citesim::normalize_reference("A. RÉNYI, On oonnected g1'aphs I, Publ. Math. Inst. Hung. Acad. Sci. 4 (1959), 385-388.");
    const std::vector<ReferenceRecord> a = {clean}, b = {noisy};
    CHECK(citesim::match_references(a, b, 0.3) == Pairs{{0, 0}});
}

TEST_CASE("planted corrupted copies are exactly the matches") {
    testing::Rng rng(3);
    for (int round = 0; round < 100; ++round) {
        std::vector<std::string> ra, rb;
        for (std::size_t i = 0, n = 3 + testing::pick(rng, 10); i < n; ++i) ra.push_back(random_ref(rng));
        for (std::size_t i = 0, n = 3 + testing::pick(rng, 10); i < n; ++i) rb.push_back(random_ref(rng));
        const std::size_t k = testing::pick(rng, std::min(ra.size(), rb.size()) + 1);
        std::vector<std::size_t> slots(rb.size());
        std::iota(slots.begin(), slots.end(), 0);
        std::shuffle(slots.begin(), slots.end(), rng);
        Pairs expected;
        for (std::size_t i = 0; i < k; ++i) {
            rb[slots[i]] = corrupt(ra[i], rng);
            expected.emplace_back(i, slots[i]);
        }
        std::sort(expected.begin(), expected.end());
        const auto a = records(ra), b = records(rb);
        CHECK(citesim::match_references(a, b) == expected);

        auto transposed = citesim::match_references(b, a);
        for (auto& [x, y] : transposed) std::swap(x, y);
        std::sort(transposed.begin(), transposed.end());
        CHECK(transposed == expected);
    }
}

TEST_CASE("zero tolerance means equal keys") {
    testing::Rng rng(4);
    for (int round = 0; round < 100; ++round) {
        std::vector<std::string> ra, rb;
        for (int i = 0; i < 8; ++i) ra.push_back(random_ref(rng));
        for (int i = 0; i < 8; ++i) rb.push_back(testing::pick(rng, 3) == 0 ? ra[testing::pick(rng, 8)] : random_ref(rng));
        for (int i = 0; i < 2; ++i) rb[testing::pick(rng, 8)] = corrupt(ra[testing::pick(rng, 8)], rng);
        const auto a = records(ra), b = records(rb);
        std::set<std::string> ka, kb;
        for (const auto& r : a) ka.insert(r.match_key);
        for (const auto& r : b) kb.insert(r.match_key);
        std::vector<std::string> shared;
        std::set_intersection(ka.begin(), ka.end(), kb.begin(), kb.end(), std::back_inserter(shared));
        const auto m = citesim::match_references(a, b, 0.0);
        CHECK(m.size() == shared.size());
        for (const auto& [i, j] : m) CHECK(a[i].match_key == b[j].match_key);
    }
}

TEST_CASE("coupling and sequence scores") {
    testing::Rng rng(5);
    std::vector<std::string> base;
    for (int i = 0; i < 12; ++i) base.push_back(random_ref(rng));
    const std::vector<std::string> four = {base[0], base[1], base[2], base[11]};
    std::vector<std::string> ten(base.begin(), base.begin() + 10);
    const auto a = with_refs("a", four, {1, 2, 3});
    const auto b = with_refs("b", ten, {1, 2, 3, 4, 5});
    CHECK(citesim::bibliographic_coupling(a, b) == doctest::Approx(0.75));
    CHECK(citesim::citation_sequence_similarity(a, b) == doctest::Approx(3.0 / 5.0));
    CHECK(citesim::bibliographic_coupling(a, a) == 1.0);
    CHECK(citesim::citation_sequence_similarity(a, a) == 1.0);

    const auto none = with_refs("n", {base[10]}, {});
    CHECK(citesim::bibliographic_coupling(a, none) == 0.0);
    CHECK(citesim::citation_sequence_similarity(a, none) == 0.0);
    const auto empty = with_refs("e", {}, {});
    CHECK(citesim::bibliographic_coupling(a, empty) == 0.0);

    std::vector<std::string> shuffled = ten;
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    CHECK(citesim::bibliographic_coupling(a, with_refs("s", shuffled, {})) == doctest::Approx(0.75));
    const auto s = citesim::citation_similarity(a, b);
    CHECK(s.coupling == doctest::Approx(0.75));
    CHECK(s.sequence == doctest::Approx(0.6));
}

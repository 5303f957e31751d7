#include <doctest.h>

#include "mathdup/error.hpp"
#include "mathdup/query.hpp"
#include "mathdup/synth.hpp"
#include "support.hpp"

using namespace mathdup;
using K = QueryNode::Kind;

TEST_CASE("year range filter") {
    const auto q = query::parse_query("py:2007-2018");
    CHECK(q == QueryNode::filter("py", QueryNode::years(2007, 2018)));
    CHECK(query::parse_query("py:2010") == QueryNode::filter("py", QueryNode::years(2010, 2010)));
}

TEST_CASE("disjunction of abstract phrases") {
    const auto q = query::parse_query("ab:\"editorial remark\" | ab:\"editorial note\"");
    CHECK(q == QueryNode::or_of({QueryNode::filter("ab", QueryNode::phrase("editorial remark")),
                                 QueryNode::filter("ab", QueryNode::phrase("editorial note"))}));
}

TEST_CASE("and-not needs a left operand") {
    CHECK_THROWS_AS(query::parse_query("!(x)"), ParseError);
    try {
        query::parse_query("!(x)");
    } catch (const ParseError& e) {
        CHECK(e.offset() == 0);
        CHECK_FALSE(e.expected().empty());
    }
}

TEST_CASE("syntax errors carry offsets") {
    const std::pair<const char*, std::size_t> bad[] = {
        {"a & (b | c", 10}, {"ab:\"open", 3}, {"a & ", 4}, {"py:20x0", 3}, {"pl*g", 2}, {"a )", 2}};
    for (const auto& [text, offset] : bad) {
        CAPTURE(text);
        try {
            query::parse_query(text);
            FAIL("expected ParseError");
        } catch (const ParseError& e) {
            CHECK(e.offset() == offset);
        }
    }
    CHECK_THROWS_AS(query::parse_query("   "), ParseError);
}

TEST_CASE("editorial query structure") {
    const auto q = query::parse_query(synth::kEditorialQuery);
    REQUIRE(q.kind == K::And);
    REQUIRE(q.children.size() == 4);
    CHECK(q.children[0] == QueryNode::filter("py", QueryNode::years(2007, 2018)));
    CHECK(q.children[1].kind == K::Or);
    CHECK(q.children[2].kind == K::Or);
    CHECK(q.children[2].children.size() == 7);
    CHECK(q.children[3].kind == K::Not);
    CHECK(q.children[3].children[0].children.size() == 12);
    CHECK(query::parse_query(query::print_query(q)) == q);
}

TEST_CASE("field semantics") {
    Document a = testing::make_doc("1191.35223", 2010);
    a.abstract_text = "An editorial remark: this paper shows substantial overlap.";
    a.journal = "IEEE Trans. Something";
    Document b = testing::make_doc("0001.00001", 2005);
    b.abstract_text = "Plagiarism-free results.";
    b.series = "00000250";
    b.publisher = "AIP Publishing";
    const Corpus c({a, b});
    auto run = [&](const char* q) { return query::evaluate_query(query::parse_query(q), c); };
    CHECK(run("an:1191.35223") == std::vector<std::string>{"1191.35223"});
    CHECK(run("ab:\"editorial remark\"") == std::vector<std::string>{"1191.35223"});
    CHECK(run("ab:\"remark editorial\"").empty());
    CHECK(run("plagiari*") == std::vector<std::string>{"0001.00001"});
    CHECK(run("so:ieee") == std::vector<std::string>{"1191.35223"});
    CHECK(run("se:00000250") == std::vector<std::string>{"0001.00001"});
    CHECK(run("pu:AIP") == std::vector<std::string>{"0001.00001"});
    CHECK(run("py:2006-2018") == std::vector<std::string>{"1191.35223"});
    CHECK(run("OVERLAP") == std::vector<std::string>{"1191.35223"});
    CHECK(run("py:2000-2020 !(so:ieee)") == std::vector<std::string>{"0001.00001"});
    CHECK_THROWS_AS(run("xx:foo"), UnsupportedField);
}

TEST_CASE("single editorial document") {
    Document hit = testing::make_doc("hit", 2010);
    hit.abstract_text = "Editorial remark: see the earlier paper.";
    Document old = testing::make_doc("old", 2003);
    old.abstract_text = "Editorial remark: see the earlier paper.";
    Document other = testing::make_doc("other", 2010);
    other.abstract_text = "A study of remarks.";
    const Corpus c({hit, old, other});
    const auto q = query::parse_query("py:2007-2018 & ( ab:\"editorial remark\" | ab:\"editorial note\" )");
    CHECK(query::evaluate_query(q, c) == std::vector<std::string>{"hit"});
}

TEST_CASE("complement covers the corpus") {
    testing::Rng rng(5);
    std::vector<Document> docs;
    for (std::size_t i = 0; i < 40; ++i) docs.push_back(testing::random_query_doc(rng, i));
    const Corpus c(docs);
    std::vector<std::string> all;
    for (const auto& d : docs) all.push_back(d.id);
    std::sort(all.begin(), all.end());
    for (int i = 0; i < 100; ++i) {
        const auto q = testing::random_query(rng, 2);
        auto pos = query::evaluate_query(q, c);
        const auto neg = query::evaluate_query(QueryNode::not_of(q), c);
        std::vector<std::string> both;
        std::set_union(pos.begin(), pos.end(), neg.begin(), neg.end(), std::back_inserter(both));
        CHECK(both == all);
        std::vector<std::string> inter;
        std::set_intersection(pos.begin(), pos.end(), neg.begin(), neg.end(), std::back_inserter(inter));
        CHECK(inter.empty());
    }
}

TEST_CASE("evaluator agrees with the per-document predicate") {
    testing::Rng rng(99);
    for (int round = 0; round < 300; ++round) {
        std::vector<Document> docs;
        for (std::size_t i = 0, n = 1 + testing::pick(rng, 25); i < n; ++i) docs.push_back(testing::random_query_doc(rng, i));
        const Corpus c(docs);
        const auto q = testing::random_query(rng, 3);
        std::vector<std::string> expected;
        for (const auto& d : docs) {
            if (testing::query_matches(q, d)) expected.push_back(d.id);
        }
        std::sort(expected.begin(), expected.end());
        CAPTURE(query::print_query(q));
        CHECK(query::evaluate_query(q, c) == expected);
    }
}

TEST_CASE("print and parse round trip") {
    testing::Rng rng(7);
    for (int i = 0; i < 1000; ++i) {
        const auto q = testing::random_query(rng, 3);
        CHECK_NOTHROW(query::validate_query(q));
        const auto text = query::print_query(q);
        CAPTURE(text);
        CHECK(query::parse_query(text) == q);
    }
}

TEST_CASE("structural validation") {
    CHECK_THROWS_AS(query::validate_query(QueryNode::and_of({QueryNode::phrase("a")})), InvariantViolation);
    CHECK_THROWS_AS(query::validate_query(QueryNode::years(2010, 2000)), InvariantViolation);
    CHECK_THROWS_AS(query::validate_query(QueryNode::wildcard("a*b*")), InvariantViolation);
    CHECK_THROWS_AS(query::validate_query(QueryNode::wildcard("ab")), InvariantViolation);
}

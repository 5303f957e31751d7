#include <doctest.h>

#include <algorithm>
#include <fstream>
#include <functional>

#include "mathdup/document.hpp"
#include "mathdup/error.hpp"
#include "mathdup/synth.hpp"
#include "support.hpp"

using namespace mathdup;
using nlohmann::json;

namespace {

json sample_doc_json() {
    return json::parse(R"({
      "id": "1234.56789", "title": "On graphs", "authors": ["A. Rényi", "P. Erdős"],
      "journal": "Publ. Math. Inst.", "year": 1960, "language": "en",
      "abstract": "We count graphs.", "body": "Let x be a graph with n vertices as in [1] and [2].",
      "formulae": [{"raw": "x + y", "position": 2,
                    "tokens": [{"kind": "identifier", "value": "x"}, {"kind": "operator", "value": "+"},
                               {"kind": "identifier", "value": "y"}]}],
      "references": [{"raw": "A. Rényi, On connected graphs I, Publ. Math. Inst. 4 (1959), 385-388."},
                     {"raw": "P. Erdős, Graph theory and probability, Canad. J. Math. 11 (1959), 34-38."}],
      "citations": [{"position": 9, "ref": 1}, {"position": 11, "ref": 2}],
      "metadata": {"spread": "5 reads"}
    })");
}

void write_json(const std::filesystem::path& p, const json& j) {
    std::ofstream(p) << j.dump(2);
}

}  // namespace

TEST_CASE("empty body and no formulae is valid") {
    json j = sample_doc_json();
    j["body"] = "";
    j["formulae"] = json::array();
    j["citations"] = json::array();
    const Document d = corpus::document_from_json(j);
    CHECK(d.body_tokens.empty());
    CHECK(d.formulae.empty());
}

TEST_CASE("citation ordinal beyond the reference list") {
    json j = sample_doc_json();
    j["references"] = json::array({{{"raw", "a"}}, {{"raw", "b"}}, {{"raw", "c"}}});
    j["citations"] = json::array({{{"position", 0}, {"ref", 7}}});
    try {
        corpus::document_from_json(j);
        FAIL("expected InvariantViolation");
    } catch (const InvariantViolation& e) {
        CHECK(std::string(e.detail()).find("citations[0].ref") != std::string::npos);
    }
}

TEST_CASE("missing required field names the field") {
    json j = sample_doc_json();
    j.erase("year");
    try {
        corpus::document_from_json(j);
        FAIL("expected MalformedInput");
    } catch (const MalformedInput& e) {
        CHECK(std::string(e.detail()).find("year") != std::string::npos);
    }
}

TEST_CASE("load, save, load is identity") {
    const auto dir = testing::temp_dir("roundtrip");
    write_json(dir / "a.json", sample_doc_json());
    const Document a = corpus::load_document(dir / "a.json");
    corpus::save_document(a, dir / "b.json");
    const Document b = corpus::load_document(dir / "b.json");
    CHECK(a == b);
    CHECK(a.references[0].normalized.authors == std::vector<std::string>{"renyi"});

    const auto bench = synth::make_benchmark({.documents = 40, .seed = 5, .verbatim = 1, .formula_only = 1,
                                              .citation_order = 1, .near_threshold = 1});
    for (const auto& d : bench.documents) {
        const Document back = corpus::document_from_json(corpus::document_to_json(d));
        CHECK(back == d);
    }
    std::filesystem::remove_all(dir);
}

TEST_CASE("mutated inputs violating an invariant are rejected") {
    using Mutation = std::function<void(json&)>;
    const std::vector<std::pair<const char*, Mutation>> bad = {
        {"empty id", [](json& j) { j["id"] = ""; }},
        {"year type", [](json& j) { j["year"] = "1960"; }},
        {"year range", [](json& j) { j["year"] = 1200; }},
        {"language", [](json& j) { j["language"] = "english!"; }},
        {"authors type", [](json& j) { j["authors"] = "A. Rényi"; }},
        {"ref zero", [](json& j) { j["citations"][0]["ref"] = 0; }},
        {"ref high", [](json& j) { j["citations"][1]["ref"] = 3; }},
        {"cite position", [](json& j) { j["citations"][0]["position"] = 999; }},
        {"negative position", [](json& j) { j["citations"][0]["position"] = -1; }},
        {"formula position", [](json& j) { j["formulae"][0]["position"] = 999; }},
        {"token kind", [](json& j) { j["formulae"][0]["tokens"][0]["kind"] = "glyph"; }},
        {"empty token", [](json& j) { j["formulae"][0]["tokens"][1]["value"] = ""; }},
        {"raw without tokens", [](json& j) { j["formulae"][0]["tokens"] = json::array(); }},
        {"empty reference", [](json& j) { j["references"][0]["raw"] = ""; }},
        {"bad tree", [](json& j) { j["formulae"][0]["tree"] = {{"op", "+"}, {"args", json::array()}}; }},
        {"not an object", [](json& j) { j = json::array(); }},
        {"metadata type", [](json& j) { j["metadata"] = 3; }},
        {"missing title", [](json& j) { j.erase("title"); }},
    };
    const std::vector<std::pair<const char*, Mutation>> fine = {
        {"no journal", [](json& j) { j.erase("journal"); }},
        {"no metadata", [](json& j) { j.erase("metadata"); }},
        {"no abstract", [](json& j) { j.erase("abstract"); }},
        {"region tag", [](json& j) { j["language"] = "de-AT"; }},
        {"extra keyword", [](json& j) { j["keywords"] = {"graphs"}; }},
        {"tree supplied", [](json& j) {
             j["formulae"][0]["tree"] = {{"op", "+"}, {"args", {{{"id", "x"}}, {{"id", "y"}}}}};
         }},
    };
    testing::Rng rng(17);
    for (int round = 0; round < 500; ++round) {
        json j = sample_doc_json();
        const std::size_t n_fine = testing::pick(rng, 3);
        for (std::size_t k = 0; k < n_fine; ++k) fine[testing::pick(rng, fine.size())].second(j);
        if (testing::pick(rng, 2) == 0) {
            const auto& [name, m] = bad[testing::pick(rng, bad.size())];
            m(j);
            CAPTURE(name);
            bool rejected = false;
            try {
                corpus::document_from_json(j);
            } catch (const MalformedInput&) {
                rejected = true;
            } catch (const InvariantViolation&) {
                rejected = true;
            }
            CHECK(rejected);
        } else {
            const Document d = corpus::document_from_json(j);
            CHECK_NOTHROW(corpus::validate(d));
            CHECK(corpus::document_from_json(corpus::document_to_json(d)) == d);
        }
    }
}

TEST_CASE("case manifest fixture") {
    const auto dir = testing::source_dir() / "tests/fixtures/cases";
    const Corpus c = corpus::load_corpus(dir);
    const auto cases = corpus::load_manifest(dir / "manifest.json", c);
    REQUIRE(cases.size() == 11);
    CHECK(cases[0].earlier_docs.size() == 2);
    CHECK(cases[10].earlier_docs.size() == 2);
    CHECK(cases[10].earlier_docs[1].starts_with("ext:"));
    CHECK(cases[4].label == CaseLabel::translation);
    CHECK(c.at("0247.05143").language == "fr");
    CHECK(corpus::manifest_from_json(corpus::manifest_to_json(cases), c) == cases);
}

TEST_CASE("manifest edge cases") {
    const Corpus c({testing::make_doc("a", 2000), testing::make_doc("b", 2001)});
    const auto dir = testing::temp_dir("manifest");
    std::ofstream(dir / "empty.json") << "[]";
    CHECK(corpus::load_manifest(dir / "empty.json", c).empty());

    const json self = json::array({{{"case", 1}, {"later", "a"}, {"earlier", {"a"}}, {"label", "unclear"}}});
    CHECK_THROWS_AS(corpus::manifest_from_json(self, c), InvariantViolation);
    const json unknown = json::array({{{"case", 1}, {"later", "a"}, {"earlier", {"zzz"}}, {"label", "unclear"}}});
    CHECK_THROWS_AS(corpus::manifest_from_json(unknown, c), UnresolvedDocument);
    const json label = json::array({{{"case", 1}, {"later", "a"}, {"earlier", {"b"}}, {"label", "novel"}}});
    CHECK_THROWS_AS(corpus::manifest_from_json(label, c), MalformedInput);
    std::filesystem::remove_all(dir);
}

TEST_CASE("duplicate ids") {
    CHECK_THROWS_AS(Corpus({testing::make_doc("a", 2000), testing::make_doc("a", 2001)}), DuplicateDocId);
    const Corpus c({testing::make_doc("a", 2000)});
    CHECK_THROWS_AS(c.at("b"), UnknownDocId);
}

TEST_CASE("corpus statistics") {
    CHECK_THROWS_AS(corpus::corpus_stats({}), EmptyCorpus);

    Document one = testing::make_doc("only", 2001);
    one.journal = "J. Only";
    const auto s1 = corpus::corpus_stats({one});
    CHECK(s1.journals.counts.size() == 1);
    CHECK(s1.authors.counts.size() == 1);
    CHECK(s1.years.size() == 1);
    CHECK(s1.journals.counts.begin()->second == 1);
    CHECK(s1.authors.counts.begin()->second == 1);

    auto docs = synth::tally_fixture();
    const auto base = corpus::corpus_stats(docs);
    std::size_t pairs = 0;
    for (const auto& d : docs) pairs += d.authors.size();
    CHECK(base.authors.total() == pairs);
    testing::Rng rng(23);
    for (int i = 0; i < 5; ++i) {
        std::shuffle(docs.begin(), docs.end(), rng);
        const auto s = corpus::corpus_stats(docs);
        CHECK(s.journals.counts == base.journals.counts);
        CHECK(s.authors.counts == base.authors.counts);
        CHECK(s.years == base.years);
        CHECK(corpus::stats_to_json(s) == corpus::stats_to_json(base));
    }
    const auto rf = base.journals.rank_frequency();
    for (std::size_t i = 1; i < rf.size(); ++i) CHECK(rf[i - 1].second >= rf[i].second);
}

TEST_CASE("stats fold case and whitespace") {
    Document a = testing::make_doc("a", 2000), b = testing::make_doc("b", 2000);
    a.journal = "  J. Algebra ";
    b.journal = "j. algebra";
    a.authors = {"Smith, J."};
    b.authors = {" SMITH, J."};
    const auto s = corpus::corpus_stats({a, b});
    CHECK(s.journals.counts.size() == 1);
    CHECK(s.authors.counts.size() == 1);
}

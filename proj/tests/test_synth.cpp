#include <doctest.h>

#include "mathdup/query.hpp"
#include "mathdup/synth.hpp"
#include "support.hpp"

using namespace mathdup;

TEST_CASE("benchmark is seeded and well formed") {
    const synth::BenchmarkOptions opts{.documents = 80, .seed = 3};
    const auto a = synth::make_benchmark(opts);
    const auto b = synth::make_benchmark(opts);
    CHECK(a.documents == b.documents);
    CHECK(a.documents.size() == 80);
    CHECK(a.planted.size() == 10);
    CHECK(a.queries.size() == 10);
    for (const auto& d : a.documents) CHECK_NOTHROW(corpus::validate(d));
    const Corpus c(a.documents);
    for (const auto& p : a.planted) {
        CHECK(c.at(p.source).publication_year <= c.at(p.reuse).publication_year);
    }
    CHECK(synth::make_benchmark({.documents = 80, .seed = 4}).documents != a.documents);
}

TEST_CASE("tally fixture") {
    const auto docs = synth::tally_fixture();
    CHECK(docs.size() == 149);
    const auto s = corpus::corpus_stats(docs);
    CHECK(s.with_journal == 139);
    CHECK(s.journals.counts.size() == 101);
    CHECK(s.authors.counts.size() == 215);
}

TEST_CASE("editorial fixture") {
    const auto f = synth::editorial_fixture();
    const Corpus c(f.documents);
    CHECK(query::evaluate_query(query::parse_query(synth::kEditorialQuery), c) == f.positives);
    CHECK(f.positives.size() < f.documents.size());
}

TEST_CASE("written corpus loads back") {
    const auto dir = testing::temp_dir("synth");
    const auto f = synth::editorial_fixture();
    synth::write_corpus(f.documents, dir);
    const Corpus c = corpus::load_corpus(dir);
    CHECK(c.size() == f.documents.size());
    for (const auto& d : f.documents) CHECK(c.at(d.id) == d);
    std::filesystem::remove_all(dir);
}

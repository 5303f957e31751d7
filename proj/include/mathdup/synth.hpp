#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "mathdup/detect.hpp"
#include "mathdup/document.hpp"

// Seeded synthetic corpora: a retrieval benchmark with planted reuse pairs,
// a journal/author tally fixture and a fixture for the editorial query.
namespace mathdup::synth {

enum class PlantKind { verbatim, formula_only, citation_order, near_threshold };

std::string_view to_string(PlantKind k);

struct PlantedPair {
    PlantKind kind = PlantKind::verbatim;
    std::string source;  // earlier document
    std::string reuse;   // later document, used as the query
};

struct BenchmarkOptions {
    std::size_t documents = 500;  // including the reusing documents
    std::uint64_t seed = 20210301;
    std::size_t verbatim = 3;
    std::size_t formula_only = 3;
    std::size_t citation_order = 2;
    std::size_t near_threshold = 2;
};

struct Benchmark {
    std::vector<Document> documents;  // prepared, sorted by id
    std::vector<PlantedPair> planted;
    std::vector<detect::BenchmarkQuery> queries;  // one per planted pair
};

Benchmark make_benchmark(const BenchmarkOptions& opts = {});

// 149 documents: 139 carry a journal (101 distinct; two journals with six
// articles, 76 with one) and 215 distinct authors (one with six documents,
// 173 with one).
std::vector<Document> tally_fixture();

// Boolean field query used to collect editorial-remark cases.
inline constexpr std::string_view kEditorialQuery =
    "py:2007-2018 &\n"
    "( ab:\"editorial remark\" | ab:\"editorial note\" ) &\n"
    "( \"very similar\" | \"high similarity\" | overlap |  plagiari* | identical | substantial* | essentially )\n"
    "!( so:ieee | se:00000250 | se:00001661 | pu:AIP | an:0584.10010 | an:0712.35001 | an:0597.14041 | "
    "an:1375.14126 | an:0156.05104 | an:1345.15011 | an:1262.11083 | an:1360.47003)";

struct EditorialFixture {
    std::vector<Document> documents;
    std::vector<std::string> positives;  // sorted ids the query must return
};

// Planted positives plus documents failing each clause of kEditorialQuery.
EditorialFixture editorial_fixture(std::uint64_t seed = 7);

// Writes each document as <id>.json (ids sanitized for the file system).
void write_corpus(const std::vector<Document>& docs, const std::filesystem::path& dir);

}  // namespace mathdup::synth

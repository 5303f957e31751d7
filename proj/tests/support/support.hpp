#pragma once

#include <cstdint>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "mathdup/document.hpp"
#include "mathdup/formula.hpp"
#include "mathdup/query.hpp"

namespace mathdup::testing {

using Rng = std::mt19937_64;

std::size_t pick(Rng& rng, std::size_t n);  // uniform in [0, n)

// Space-separated words w0..w{vocab-1}.
std::vector<std::string> random_words(Rng& rng, std::size_t len, std::size_t vocab);
std::string join(const std::vector<std::string>& words, const std::string& sep = " ");

// Jaccard of the sets of word n-grams, compared as strings.
double ngram_jaccard_oracle(const std::vector<std::string>& a, const std::vector<std::string>& b, std::size_t n);

// Longest common subsequence by enumerating the subsequences of the shorter side.
std::size_t brute_lcs(const std::vector<std::string>& a, const std::vector<std::string>& b);

// Random expression over a few identifiers, numbers and operators.
FormulaTree random_tree(Rng& rng, int depth);
// Formula whose tokens are the infix rendering of the tree.
Formula formula_of(const FormulaTree& tree, std::size_t position = 0);
Formula formula_of_tokens(std::vector<MathToken> tokens, std::size_t position = 0);

// Minimal valid, prepared document.
Document make_doc(std::string id, int year, std::string body = {});

// Valid query ASTs that survive print/parse, and random documents over the
// same small vocabulary.
QueryAst random_query(Rng& rng, int depth);
Document random_query_doc(Rng& rng, std::size_t index);
// Straight per-document predicate, written independently of the evaluator.
bool query_matches(const QueryAst& q, const Document& d);

// Fresh empty directory under the system temp dir.
std::filesystem::path temp_dir(const std::string& tag);

// Repository locations baked in at configure time.
std::filesystem::path source_dir();
std::filesystem::path cli_path();

}  // namespace mathdup::testing

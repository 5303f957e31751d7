#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "mathdup/citesim.hpp"
#include "mathdup/document.hpp"
#include "mathdup/mathsim.hpp"
#include "mathdup/textsim.hpp"

namespace mathdup {

enum class Channel { text, math, cite, combined };
enum class FlagLevel { none = 0, warning = 1, suspicious = 2 };

std::string_view to_string(Channel c);
std::string_view to_string(FlagLevel l);
std::optional<FlagLevel> flag_level_from_string(std::string_view s);

struct ChannelThreshold {
    double warning = 0.0;
    double suspicious = 0.0;

    friend bool operator==(const ChannelThreshold&, const ChannelThreshold&) = default;
};

// A score strictly above a threshold reaches that level.
struct Thresholds {
    ChannelThreshold text{0.12, 0.20};
    ChannelThreshold math{0.60, 0.85};
    ChannelThreshold cite{0.15, 0.50};

    friend bool operator==(const Thresholds&, const Thresholds&) = default;
};

struct RetrievalWeights {
    double text = 1.0;
    double math = 1.0;
    double cite = 1.0;
    // Each channel is divided by max(largest raw value, floor), so chance
    // overlap alone is not stretched to 1.
    double text_floor = 0.10;
    double math_floor = 0.5;
    double cite_floor = 0.5;
};

struct DetectConfig {
    TextConfig text;
    double cite_tolerance = citesim::kDefaultTolerance;
    Thresholds thresholds;
    RetrievalWeights weights;
    CanonicalizeOptions canonicalize;
};

struct SuspicionFlag {
    Channel channel = Channel::combined;
    FlagLevel level = FlagLevel::none;

    friend bool operator==(const SuspicionFlag&, const SuspicionFlag&) = default;
};

// Headline channel scores; nullopt marks an unavailable channel.
struct ChannelScores {
    std::optional<double> text;
    std::optional<double> math;
    std::optional<double> cite;
};

struct SimilarityReport {
    std::pair<std::string, std::string> pair;  // earlier publication first

    struct Text {
        bool available = false;
        double jaccard = 0.0;
        double containment_first_in_second = 0.0;
        double containment_second_in_first = 0.0;
        std::vector<SpanPair> spans;  // a = first of pair, b = second
    } text;

    struct Math {
        bool available = false;
        double histogram = 0.0;
        double sequence = 0.0;
        MathReuseLabel label;
    } math;

    struct Cite {
        bool available = false;
        double coupling = 0.0;
        double sequence = 0.0;
        std::vector<std::pair<std::size_t, std::size_t>> matches;
    } cite;

    std::vector<SuspicionFlag> flags;  // text, math, cite, combined
    nlohmann::json metadata;           // years, languages, free-form notes

    ChannelScores scores() const;
    double combined_score() const;  // max of available headline scores
    FlagLevel level(Channel c) const;
};

namespace detect {

// Throws InvalidThresholds when warning > suspicious or a value lies outside [0, 1].
void validate(const Thresholds& t);

FlagLevel flag_level(double score, const ChannelThreshold& t);

// Channel flags plus the combined flag (max level over channels).
std::vector<SuspicionFlag> flag_suspicion(const ChannelScores& scores, const Thresholds& thresholds);

// ---------------------------------------------------------------------------
// Candidate retrieval

struct Posting {
    std::uint32_t doc = 0;   // index into ReuseIndex::doc_ids
    std::uint32_t value = 0; // n-gram position or identifier count

    friend bool operator==(const Posting&, const Posting&) = default;
};

struct DocNorms {
    std::uint32_t fingerprints = 0;  // distinct winnowed hashes
    std::uint32_t identifiers = 0;   // total identifier occurrences
    std::uint32_t refkeys = 0;       // distinct reference match keys

    friend bool operator==(const DocNorms&, const DocNorms&) = default;
};

struct ReuseIndex {
    static constexpr int kFormatVersion = 1;

    TextConfig text;
    std::vector<std::string> doc_ids;  // sorted
    std::map<std::uint64_t, std::vector<Posting>> fingerprint_index;
    std::map<std::string, std::vector<Posting>> identifier_index;
    std::map<std::string, std::vector<std::uint32_t>> refkey_index;
    std::vector<DocNorms> doc_norms;

    bool empty() const { return doc_ids.empty(); }

    friend bool operator==(const ReuseIndex&, const ReuseIndex&) = default;
};

ReuseIndex build_index(const std::vector<Document>& docs, const TextConfig& cfg = {});
ReuseIndex build_index(const Corpus& corpus, const TextConfig& cfg = {});

nlohmann::json index_to_json(const ReuseIndex& index);
ReuseIndex index_from_json(const nlohmann::json& j);
void save_index(const ReuseIndex& index, const std::string& path);
ReuseIndex load_index(const std::string& path);

// Per-document retrieval features, shared by the index route and the
// exhaustive route.
struct QueryFeatures {
    std::vector<std::uint64_t> fingerprints;           // sorted unique
    std::map<std::string, std::size_t> identifiers;
    std::vector<std::string> refkeys;                  // sorted unique
};
QueryFeatures query_features(const Document& doc, const TextConfig& cfg);

struct Candidate {
    std::string doc_id;
    double prescore = 0.0;
    double text = 0.0;  // raw channel values before max-normalization
    double math = 0.0;
    double cite = 0.0;

    friend bool operator==(const Candidate&, const Candidate&) = default;
};

// Top-k documents sharing any feature with the query, by weighted sum of the
// max-normalized channel values (shared fingerprints / query fingerprints,
// weighted Jaccard of identifier counts, shared refkeys / query refkeys); ties by id. The query's own id is excluded.
std::vector<Candidate> retrieve_candidates(const Document& query, const ReuseIndex& index, std::size_t k,
                                           const RetrievalWeights& weights = {});

// Ranks raw channel values the way retrieve_candidates does.
std::vector<Candidate> rank_candidates(std::vector<Candidate> raw, std::size_t k, const RetrievalWeights& weights);

// ---------------------------------------------------------------------------
// Detailed analysis

SimilarityReport detailed_analysis(const Document& a, const Document& b, const DetectConfig& cfg = {});

// Recomputes flags for new thresholds; scores untouched.
void reflag(SimilarityReport& report, const Thresholds& thresholds);

nlohmann::json report_to_json(const SimilarityReport& report);

// ---------------------------------------------------------------------------
// Evaluation

struct BenchmarkQuery {
    std::string query_id;
    std::vector<std::string> relevant;
};

struct RetrievalMetrics {
    double mrr = 0.0;
    double recall_at_k = 0.0;
    std::vector<std::size_t> first_relevant_rank;  // 0 = not retrieved within k
};

RetrievalMetrics evaluate_retrieval(const std::vector<BenchmarkQuery>& benchmark, const Corpus& corpus,
                                    const ReuseIndex& index, std::size_t k, const RetrievalWeights& weights = {});

std::vector<BenchmarkQuery> benchmark_from_json(const nlohmann::json& j);
nlohmann::json benchmark_to_json(const std::vector<BenchmarkQuery>& b);

}  // namespace detect
}  // namespace mathdup

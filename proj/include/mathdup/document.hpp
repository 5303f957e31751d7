#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "mathdup/formula.hpp"
#include "mathdup/reference.hpp"
#include "mathdup/text.hpp"

namespace mathdup {

struct CitationMarker {
    std::size_t position = 0;       // token index into the body text
    std::size_t reference = 0;      // 1-based ordinal into Document::references

    friend bool operator==(const CitationMarker&, const CitationMarker&) = default;
};

struct Document {
    std::string id;
    std::string title;
    std::vector<std::string> authors;
    std::optional<std::string> journal;
    std::optional<std::string> series;
    std::optional<std::string> publisher;
    std::vector<std::string> keywords;
    int publication_year = 0;
    std::string language;
    std::string abstract_text;
    std::string body_text;
    std::vector<Formula> formulae;
    std::vector<ReferenceRecord> references;
    std::vector<CitationMarker> citation_markers;
    // Free-form impact/availability notes; carried into reports, never scored.
    nlohmann::json metadata = nlohmann::json::object();

    // Derived from body_text on load.
    TokenStream body_tokens;

    friend bool operator==(const Document&, const Document&) = default;
};

enum class CaseLabel {
    legitimate_reuse,
    retracted,
    plagiarism,
    translation,
    topical_relatedness,
    distribution_stopped,
    identical,
    unclear,
    compilation,
};

std::string_view to_string(CaseLabel label);
std::optional<CaseLabel> case_label_from_string(std::string_view s);

struct CaseManifest {
    int case_id = 0;
    std::string later_doc;
    std::vector<std::string> earlier_docs;  // "ext:"-prefixed ids have no corpus content
    CaseLabel label = CaseLabel::unclear;
    std::string notes;

    friend bool operator==(const CaseManifest&, const CaseManifest&) = default;
};

// Immutable after load; documents keep file order (sorted by file name).
class Corpus {
public:
    Corpus() = default;
    explicit Corpus(std::vector<Document> docs);  // throws DuplicateDocId

    const std::vector<Document>& documents() const { return docs_; }
    std::size_t size() const { return docs_.size(); }
    bool empty() const { return docs_.empty(); }
    const Document* find(std::string_view id) const;
    const Document& at(std::string_view id) const;  // throws UnknownDocId

private:
    std::vector<Document> docs_;
    std::map<std::string, std::size_t, std::less<>> by_id_;
};

struct FrequencyTable {
    std::map<std::string, std::size_t> counts;

    std::size_t total() const;
    // (rank, frequency), rank 1 = most frequent; ties broken by key.
    std::vector<std::pair<std::size_t, std::size_t>> rank_frequency() const;
    // frequency -> number of keys with that frequency.
    std::map<std::size_t, std::size_t> count_of_counts() const;
};

struct StatsSummary {
    std::size_t documents = 0;
    std::size_t with_journal = 0;
    FrequencyTable journals;
    FrequencyTable authors;
    std::map<int, std::size_t> years;
};

namespace corpus {

// Throws MalformedInput or InvariantViolation naming the offending field.
Document document_from_json(const nlohmann::json& j);
nlohmann::json document_to_json(const Document& doc);

Document load_document(const std::filesystem::path& path);
void save_document(const Document& doc, const std::filesystem::path& path);

// Checks every Document invariant; throws InvariantViolation.
void validate(const Document& doc);

// Fills the derived fields of a programmatically built document: body
// tokens, and expression trees for formulae that lack one.
void prepare(Document& doc);

// Directory of *.json documents; manifest.json (if present) is not a document.
Corpus load_corpus(const std::filesystem::path& dir);

std::vector<CaseManifest> manifest_from_json(const nlohmann::json& j, const Corpus& corpus);
nlohmann::json manifest_to_json(const std::vector<CaseManifest>& cases);
std::vector<CaseManifest> load_manifest(const std::filesystem::path& path, const Corpus& corpus);

// Authors and journals are trimmed and case-folded before counting.
StatsSummary corpus_stats(const std::vector<Document>& docs);
nlohmann::json stats_to_json(const StatsSummary& stats);

}  // namespace corpus
}  // namespace mathdup

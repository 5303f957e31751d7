#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "mathdup/detect.hpp"
#include "mathdup/document.hpp"

namespace mathdup {

// ---------------------------------------------------------------------------
// Configuration

struct ServiceConfig {
    DetectConfig detect;
    std::size_t scan_k = 10;  // candidates per document for the pair queue
};

namespace service {

// JSON key-value config; every key optional, unknown keys rejected:
//   ngram, window, hash_seed (integer or "0x..." string), cite_tolerance,
//   thresholds {text|math|cite: {warning, suspicious}},
//   weights {text, math, cite, text_floor, math_floor, cite_floor}, scan_k
ServiceConfig config_from_json(const nlohmann::json& j);
nlohmann::json config_to_json(const ServiceConfig& cfg);
ServiceConfig load_config(const std::filesystem::path& path);

nlohmann::json thresholds_to_json(const Thresholds& t);

// Applies a partial update {channel: {warning?, suspicious?}}. When only one
// bound of a channel is given, the other moves with it if needed to keep
// warning <= suspicious. Throws InvalidThresholds.
Thresholds update_thresholds(const Thresholds& current, const nlohmann::json& patch);

}  // namespace service

// ---------------------------------------------------------------------------
// Verdicts

enum class Decision { legitimate, editorial_remark, retraction_recommended, undecided };

std::string_view to_string(Decision d);
std::optional<Decision> decision_from_string(std::string_view s);

using DocPair = std::pair<std::string, std::string>;

struct Verdict {
    DocPair pair;
    Decision decision = Decision::undecided;
    std::optional<std::string> taxonomy_label;  // math reuse category or case label
    std::string reviewer;
    std::string timestamp;  // UTC, YYYY-MM-DDTHH:MM:SS[.fff]Z
    std::string rationale;
    std::uint64_t seq = 0;  // assigned by the store, 1-based

    friend bool operator==(const Verdict&, const Verdict&) = default;
};

namespace service {

nlohmann::json verdict_to_json(const Verdict& v);
// Full record as written to the log. Throws InvalidVerdict.
Verdict verdict_from_json(const nlohmann::json& j);
// Checks pair, taxonomy label, reviewer and timestamp; throws InvalidVerdict.
void validate(const Verdict& v);

std::string utc_now();

}  // namespace service

// Storage backend: an ordered log of records.
class VerdictLog {
public:
    virtual ~VerdictLog() = default;
    virtual std::vector<Verdict> read_all() = 0;
    virtual void append(const Verdict& v) = 0;  // durable on return
};

// One JSON object per line, append-only. A truncated final line (crash
// mid-write) is ignored on replay.
class JsonlVerdictLog final : public VerdictLog {
public:
    explicit JsonlVerdictLog(std::filesystem::path path);  // throws StorageUnavailable
    std::vector<Verdict> read_all() override;
    void append(const Verdict& v) override;

private:
    std::filesystem::path path_;
};

class MemoryVerdictLog final : public VerdictLog {
public:
    std::vector<Verdict> read_all() override { return records_; }
    void append(const Verdict& v) override { records_.push_back(v); }

private:
    std::vector<Verdict> records_;
};

struct VerdictState {
    std::map<DocPair, std::vector<Verdict>> history;  // oldest first; back() is active
    std::uint64_t last_seq = 0;

    const Verdict* active(const DocPair& p) const;

    friend bool operator==(const VerdictState&, const VerdictState&) = default;
};

// Replays a record stream: records repeating (pair, timestamp, reviewer) are
// dropped, sequence numbers are kept as written.
VerdictState replay(const std::vector<Verdict>& records);

// Writers are serialized; readers take an immutable snapshot.
class VerdictStore {
public:
    explicit VerdictStore(std::shared_ptr<VerdictLog> log);

    // `supersedes`: the seq of the active verdict the caller saw (0 = none).
    // Throws VerdictConflict when it is stale. Resubmitting a record with the
    // same (pair, timestamp, reviewer) returns the stored one unchanged.
    Verdict submit(Verdict v, std::optional<std::uint64_t> supersedes = std::nullopt);

    std::shared_ptr<const VerdictState> snapshot() const;

private:
    std::shared_ptr<VerdictLog> log_;
    std::mutex write_mutex_;
    std::shared_ptr<const VerdictState> state_;
};

// ---------------------------------------------------------------------------
// Review API

struct ApiResponse {
    int status = 200;
    nlohmann::json body;
};

// Route handlers independent of the transport. Corpus and index are fixed
// for the lifetime of the object; thresholds and verdicts change.
class ReviewApi {
public:
    ReviewApi(const Corpus& corpus, const detect::ReuseIndex& index, ServiceConfig cfg, VerdictStore& verdicts);

    ApiResponse handle(std::string_view method, std::string_view path,
                       const std::map<std::string, std::string>& params, std::string_view body);

    // Report for the pair as currently flagged. Throws UnknownDocId.
    SimilarityReport report(std::string_view a, std::string_view b);
    Thresholds thresholds() const;

private:
    nlohmann::json list_documents() const;
    nlohmann::json pairs(FlagLevel min_flag);
    nlohmann::json post_verdict(std::string_view a, std::string_view b, std::string_view body);
    nlohmann::json list_verdicts() const;
    nlohmann::json post_thresholds(std::string_view body);
    nlohmann::json health() const;

    const Document& indexed(std::string_view id) const;
    DocPair oriented(std::string_view a, std::string_view b) const;
    std::shared_ptr<const SimilarityReport> cached_report(const DocPair& p);
    void ensure_queue();

    const Corpus& corpus_;
    const detect::ReuseIndex& index_;
    ServiceConfig cfg_;
    VerdictStore& verdicts_;

    mutable std::mutex thresholds_mutex_;
    std::shared_ptr<const Thresholds> thresholds_;

    std::mutex cache_mutex_;
    std::map<DocPair, std::shared_ptr<const SimilarityReport>> cache_;

    std::once_flag queue_once_;
    std::vector<DocPair> queue_;  // candidate pairs, filled once
};

// cpp-httplib front end for ReviewApi.
class HttpServer {
public:
    explicit HttpServer(ReviewApi& api);
    ~HttpServer();

    int bind(const std::string& host, int port);  // port 0 picks a free port; returns it
    void listen();                                // blocks until stop()
    void stop();
    void wait_until_ready() const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

}  // namespace mathdup

#include <atomic>
#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <regex>
#include <set>
#include <tuple>

#include "mathdup/error.hpp"
#include "mathdup/mathsim.hpp"
#include "mathdup/service.hpp"

namespace mathdup {

using nlohmann::json;

std::string_view to_string(Decision d) {
    switch (d) {
        case Decision::legitimate: return "legitimate";
        case Decision::editorial_remark: return "editorial_remark";
        case Decision::retraction_recommended: return "retraction_recommended";
        case Decision::undecided: return "undecided";
    }
    return "undecided";
}

std::optional<Decision> decision_from_string(std::string_view s) {
    for (auto d : {Decision::legitimate, Decision::editorial_remark, Decision::retraction_recommended,
                   Decision::undecided}) {
        if (to_string(d) == s) return d;
    }
    return std::nullopt;
}

namespace service {

void validate(const Verdict& v) {
    if (v.pair.first.empty() || v.pair.second.empty()) throw InvalidVerdict("pair: empty document id");
    if (v.reviewer.empty()) throw InvalidVerdict("reviewer: must be nonempty");
    static const std::regex ts(R"(\d{4}-\d{2}-\d{2}T\d{2}:\d{2}:\d{2}(\.\d{1,9})?Z)");
    if (!std::regex_match(v.timestamp, ts)) throw InvalidVerdict("timestamp: expected YYYY-MM-DDTHH:MM:SS[.fff]Z");
    if (v.taxonomy_label && !math_reuse_category_from_string(*v.taxonomy_label) &&
        !case_label_from_string(*v.taxonomy_label)) {
        throw InvalidVerdict("taxonomy_label: unknown label '" + *v.taxonomy_label + "'");
    }
}

json verdict_to_json(const Verdict& v) {
    return json{{"pair", {v.pair.first, v.pair.second}},
                {"decision", to_string(v.decision)},
                {"taxonomy_label", v.taxonomy_label ? json(*v.taxonomy_label) : json(nullptr)},
                {"reviewer", v.reviewer},
                {"timestamp", v.timestamp},
                {"rationale", v.rationale},
                {"seq", v.seq}};
}

Verdict verdict_from_json(const json& j) {
    try {
        Verdict v;
        const auto& p = j.at("pair");
        if (!p.is_array() || p.size() != 2) throw InvalidVerdict("pair: expected two ids");
        v.pair = {p[0].get<std::string>(), p[1].get<std::string>()};
        const auto d = decision_from_string(j.at("decision").get<std::string>());
        if (!d) throw InvalidVerdict("decision: not one of legitimate, editorial_remark, retraction_recommended, undecided");
        v.decision = *d;
        if (j.contains("taxonomy_label") && !j["taxonomy_label"].is_null()) {
            v.taxonomy_label = j["taxonomy_label"].get<std::string>();
        }
        v.reviewer = j.at("reviewer").get<std::string>();
        v.timestamp = j.at("timestamp").get<std::string>();
        v.rationale = j.value("rationale", std::string());
        v.seq = j.value("seq", std::uint64_t{0});
        validate(v);
        return v;
    } catch (const json::exception& e) {
        throw InvalidVerdict(e.what());
    }
}

std::string utc_now() {
    const auto now = std::chrono::system_clock::now();
    const auto t = std::chrono::system_clock::to_time_t(now);
    const auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(now.time_since_epoch()).count() % 1000;
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[64];
    std::snprintf(buf, sizeof buf, "%04d-%02d-%02dT%02d:%02d:%02d.%03dZ", tm.tm_year + 1900, tm.tm_mon + 1, tm.tm_mday,
                  tm.tm_hour, tm.tm_min, tm.tm_sec, static_cast<int>(ms));
    return buf;
}

}  // namespace service

// ---------------------------------------------------------------------------

JsonlVerdictLog::JsonlVerdictLog(std::filesystem::path path) : path_(std::move(path)) {
    std::ofstream touch(path_, std::ios::app);
    if (!touch) throw StorageUnavailable(path_.string() + ": cannot open verdict log");
}

std::vector<Verdict> JsonlVerdictLog::read_all() {
    std::ifstream in(path_);
    if (!in) throw StorageUnavailable(path_.string() + ": cannot read verdict log");
    std::vector<std::string> lines;
    for (std::string line; std::getline(in, line);) {
        if (!line.empty()) lines.push_back(std::move(line));
    }
    std::vector<Verdict> out;
    for (std::size_t i = 0; i < lines.size(); ++i) {
        try {
            out.push_back(service::verdict_from_json(json::parse(lines[i])));
        } catch (const std::exception& e) {
            if (i + 1 == lines.size()) break;  // torn final write
            throw StorageUnavailable(path_.string() + ":" + std::to_string(i + 1) + ": " + e.what());
        }
    }
    return out;
}

void JsonlVerdictLog::append(const Verdict& v) {
    std::ofstream out(path_, std::ios::app);
    out << service::verdict_to_json(v).dump() << '\n';
    out.flush();
    if (!out) throw StorageUnavailable(path_.string() + ": write failed");
}

const Verdict* VerdictState::active(const DocPair& p) const {
    const auto it = history.find(p);
    return it == history.end() || it->second.empty() ? nullptr : &it->second.back();
}

VerdictState replay(const std::vector<Verdict>& records) {
    VerdictState s;
    std::set<std::tuple<DocPair, std::string, std::string>> seen;
    for (const auto& v : records) {
        if (!seen.emplace(v.pair, v.timestamp, v.reviewer).second) continue;
        s.history[v.pair].push_back(v);
        s.last_seq = std::max(s.last_seq, v.seq);
    }
    return s;
}

VerdictStore::VerdictStore(std::shared_ptr<VerdictLog> log)
    : log_(std::move(log)), state_(std::make_shared<const VerdictState>(replay(log_->read_all()))) {}

std::shared_ptr<const VerdictState> VerdictStore::snapshot() const { return std::atomic_load(&state_); }

Verdict VerdictStore::submit(Verdict v, std::optional<std::uint64_t> supersedes) {
    service::validate(v);
    std::lock_guard lock(write_mutex_);
    const auto cur = std::atomic_load(&state_);
    if (const auto it = cur->history.find(v.pair); it != cur->history.end()) {
        for (const auto& old : it->second) {
            if (old.timestamp == v.timestamp && old.reviewer == v.reviewer) return old;  // retried submission
        }
    }
    const Verdict* active = cur->active(v.pair);
    const std::uint64_t active_seq = active ? active->seq : 0;
    if (supersedes && *supersedes != active_seq) {
        throw VerdictConflict("active verdict for the pair is " + std::to_string(active_seq) + ", request supersedes " +
                              std::to_string(*supersedes));
    }
    v.seq = cur->last_seq + 1;
    log_->append(v);
    auto next = std::make_shared<VerdictState>(*cur);
    next->history[v.pair].push_back(v);
    next->last_seq = v.seq;
    std::atomic_store(&state_, std::shared_ptr<const VerdictState>(std::move(next)));
    return v;
}

}  // namespace mathdup

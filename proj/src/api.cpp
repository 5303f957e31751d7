#include <algorithm>
#include <set>
#include <tuple>

#include "mathdup/error.hpp"
#include "mathdup/service.hpp"

namespace mathdup {

using nlohmann::json;

namespace {

std::vector<std::string_view> split_path(std::string_view path) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < path.size()) {
        if (path[i] == '/') {
            ++i;
            continue;
        }
        const auto j = path.find('/', i);
        const auto end = j == std::string_view::npos ? path.size() : j;
        out.push_back(path.substr(i, end - i));
        i = end;
    }
    return out;
}

int status_for(const Error& e) {
    const auto& k = e.kind();
    if (k == "UnknownDocId") return 404;
    if (k == "VerdictConflict") return 409;
    if (k == "InvalidThresholds" || k == "InvalidVerdict" || k == "MalformedInput") return 422;
    if (k == "EmptyIndex") return 409;
    if (k == "StorageUnavailable") return 503;
    return 500;
}

ApiResponse error_response(int status, std::string error, std::string detail) {
    return {status, json{{"error", std::move(error)}, {"detail", std::move(detail)}}};
}

json parse_body(std::string_view body, const char* what) {
    try {
        return json::parse(body);
    } catch (const json::parse_error& e) {
        throw MalformedInput(std::string(what) + ": body is not JSON (" + e.what() + ")");
    }
}

json nullable(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

}  // namespace

ReviewApi::ReviewApi(const Corpus& corpus, const detect::ReuseIndex& index, ServiceConfig cfg, VerdictStore& verdicts)
    : corpus_(corpus), index_(index), cfg_(std::move(cfg)), verdicts_(verdicts),
      thresholds_(std::make_shared<const Thresholds>(cfg_.detect.thresholds)) {
    detect::validate(cfg_.detect.thresholds);
}

Thresholds ReviewApi::thresholds() const { return *std::atomic_load(&thresholds_); }

const Document& ReviewApi::indexed(std::string_view id) const {
    if (!std::binary_search(index_.doc_ids.begin(), index_.doc_ids.end(), id, std::less<>{})) {
        throw UnknownDocId(std::string(id) + " is not indexed");
    }
    return corpus_.at(id);
}

DocPair ReviewApi::oriented(std::string_view a, std::string_view b) const {
    const auto& x = indexed(a);
    const auto& y = indexed(b);
    if (std::tie(y.publication_year, y.id) < std::tie(x.publication_year, x.id)) return {y.id, x.id};
    return {x.id, y.id};
}

std::shared_ptr<const SimilarityReport> ReviewApi::cached_report(const DocPair& p) {
    {
        std::lock_guard lock(cache_mutex_);
        if (const auto it = cache_.find(p); it != cache_.end()) return it->second;
    }
    auto r = std::make_shared<const SimilarityReport>(
        detect::detailed_analysis(corpus_.at(p.first), corpus_.at(p.second), cfg_.detect));
    std::lock_guard lock(cache_mutex_);
    return cache_.emplace(p, std::move(r)).first->second;
}

SimilarityReport ReviewApi::report(std::string_view a, std::string_view b) {
    SimilarityReport r = *cached_report(oriented(a, b));
    detect::reflag(r, thresholds());
    return r;
}

void ReviewApi::ensure_queue() {
    std::call_once(queue_once_, [this] {
        std::set<DocPair> pairs;
        for (const auto& id : index_.doc_ids) {
            const Document* d = corpus_.find(id);
            if (!d) continue;
            for (const auto& c : detect::retrieve_candidates(*d, index_, cfg_.scan_k, cfg_.detect.weights)) {
                if (corpus_.find(c.doc_id)) pairs.insert(oriented(id, c.doc_id));
            }
        }
        queue_.assign(pairs.begin(), pairs.end());
        for (const auto& p : queue_) cached_report(p);
    });
}

json ReviewApi::list_documents() const {
    json docs = json::array();
    for (const auto& id : index_.doc_ids) {
        const Document* d = corpus_.find(id);
        if (!d) continue;
        docs.push_back({{"id", d->id},
                        {"title", d->title},
                        {"authors", d->authors},
                        {"year", d->publication_year},
                        {"language", d->language},
                        {"journal", d->journal ? json(*d->journal) : json(nullptr)}});
    }
    return json{{"documents", std::move(docs)}};
}

json ReviewApi::pairs(FlagLevel min_flag) {
    ensure_queue();
    const Thresholds t = thresholds();
    const auto verdicts = verdicts_.snapshot();
    struct Row {
        double score;
        DocPair pair;
        json body;
    };
    std::vector<Row> rows;
    for (const auto& p : queue_) {
        SimilarityReport r = *cached_report(p);
        detect::reflag(r, t);
        if (r.level(Channel::combined) < min_flag) continue;
        const auto s = r.scores();
        json flags = json::object();
        for (const auto& f : r.flags) flags[std::string(to_string(f.channel))] = to_string(f.level);
        const Verdict* v = verdicts->active(p);
        rows.push_back({r.combined_score(), p,
                        json{{"pair", {p.first, p.second}},
                             {"scores", {{"text", nullable(s.text)}, {"math", nullable(s.math)}, {"cite", nullable(s.cite)}}},
                             {"flags", std::move(flags)},
                             {"combined_score", r.combined_score()},
                             {"verdict", v ? json(to_string(v->decision)) : json(nullptr)}}});
    }
    std::sort(rows.begin(), rows.end(), [](const Row& x, const Row& y) {
        if (x.score != y.score) return x.score > y.score;
        return x.pair < y.pair;
    });
    json out = json::array();
    for (auto& r : rows) out.push_back(std::move(r.body));
    return json{{"min_flag", to_string(min_flag)}, {"pairs", std::move(out)}};
}

json ReviewApi::post_verdict(std::string_view a, std::string_view b, std::string_view body) {
    const DocPair p = oriented(a, b);
    const json j = parse_body(body, "verdict");
    if (!j.is_object()) throw InvalidVerdict("expected JSON object");
    static const std::set<std::string> allowed = {"decision", "taxonomy_label", "reviewer", "timestamp", "rationale",
                                                  "supersedes"};
    for (const auto& [k, v] : j.items()) {
        if (!allowed.contains(k)) throw InvalidVerdict("unknown key '" + k + "'");
    }
    Verdict v;
    v.pair = p;
    if (!j.contains("decision") || !j["decision"].is_string()) throw InvalidVerdict("decision: required string");
    const auto d = decision_from_string(j["decision"].get<std::string>());
    if (!d) throw InvalidVerdict("decision: not one of legitimate, editorial_remark, retraction_recommended, undecided");
    v.decision = *d;
    if (j.contains("taxonomy_label") && !j["taxonomy_label"].is_null()) {
        if (!j["taxonomy_label"].is_string()) throw InvalidVerdict("taxonomy_label: expected string or null");
        v.taxonomy_label = j["taxonomy_label"].get<std::string>();
    }
    if (!j.contains("reviewer") || !j["reviewer"].is_string()) throw InvalidVerdict("reviewer: required string");
    v.reviewer = j["reviewer"].get<std::string>();
    if (j.contains("timestamp")) {
        if (!j["timestamp"].is_string()) throw InvalidVerdict("timestamp: expected string");
        v.timestamp = j["timestamp"].get<std::string>();
    } else {
        v.timestamp = service::utc_now();
    }
    if (j.contains("rationale")) {
        if (!j["rationale"].is_string()) throw InvalidVerdict("rationale: expected string");
        v.rationale = j["rationale"].get<std::string>();
    }
    std::optional<std::uint64_t> supersedes;
    if (j.contains("supersedes") && !j["supersedes"].is_null()) {
        if (!j["supersedes"].is_number_unsigned() && !(j["supersedes"].is_number_integer() && j["supersedes"] >= 0)) {
            throw InvalidVerdict("supersedes: expected non-negative integer");
        }
        supersedes = j["supersedes"].get<std::uint64_t>();
    }
    const Verdict stored = verdicts_.submit(std::move(v), supersedes);
    const auto snap = verdicts_.snapshot();
    return json{{"verdict", service::verdict_to_json(stored)}, {"history_length", snap->history.at(p).size()}};
}

json ReviewApi::list_verdicts() const {
    const auto snap = verdicts_.snapshot();
    json out = json::array();
    for (const auto& [p, hist] : snap->history) {
        json h = json::array();
        for (const auto& v : hist) h.push_back(service::verdict_to_json(v));
        out.push_back({{"pair", {p.first, p.second}}, {"active", service::verdict_to_json(hist.back())}, {"history", h}});
    }
    return json{{"verdicts", std::move(out)}};
}

json ReviewApi::post_thresholds(std::string_view body) {
    const json patch = parse_body(body, "thresholds");
    std::lock_guard lock(thresholds_mutex_);
    const Thresholds next = service::update_thresholds(*std::atomic_load(&thresholds_), patch);
    std::atomic_store(&thresholds_, std::make_shared<const Thresholds>(next));
    return json{{"thresholds", service::thresholds_to_json(next)}};
}

json ReviewApi::health() const {
    return json{{"status", "ok"},
                {"documents", corpus_.size()},
                {"indexed", index_.doc_ids.size()},
                {"verdicts", verdicts_.snapshot()->history.size()}};
}

ApiResponse ReviewApi::handle(std::string_view method, std::string_view path,
                              const std::map<std::string, std::string>& params, std::string_view body) {
    const auto seg = split_path(path);
    const bool get = method == "GET";
    const bool post = method == "POST";
    auto wrong_method = [&] {
        return error_response(405, "MethodNotAllowed", std::string(method) + " " + std::string(path));
    };
    try {
        if (seg.size() == 1 && seg[0] == "health") return get ? ApiResponse{200, health()} : wrong_method();
        if (seg.size() == 1 && seg[0] == "documents") return get ? ApiResponse{200, list_documents()} : wrong_method();
        if (seg.size() == 2 && seg[0] == "documents") {
            if (!get) return wrong_method();
            return {200, corpus::document_to_json(indexed(seg[1]))};
        }
        if (seg.size() == 1 && seg[0] == "pairs") {
            if (!get) return wrong_method();
            FlagLevel min_flag = FlagLevel::warning;
            if (const auto it = params.find("min_flag"); it != params.end()) {
                const auto l = flag_level_from_string(it->second);
                if (!l) throw MalformedInput("min_flag: expected none, warning or suspicious");
                min_flag = *l;
            }
            return {200, pairs(min_flag)};
        }
        if (seg.size() == 4 && seg[0] == "pairs" && seg[3] == "report") {
            if (!get) return wrong_method();
            return {200, detect::report_to_json(report(seg[1], seg[2]))};
        }
        if (seg.size() == 4 && seg[0] == "pairs" && seg[3] == "verdict") {
            if (!post) return wrong_method();
            return {201, post_verdict(seg[1], seg[2], body)};
        }
        if (seg.size() == 1 && seg[0] == "verdicts") return get ? ApiResponse{200, list_verdicts()} : wrong_method();
        if (seg.size() == 1 && seg[0] == "thresholds") {
            if (get) return {200, json{{"thresholds", service::thresholds_to_json(thresholds())}}};
            if (post) return {200, post_thresholds(body)};
            return wrong_method();
        }
        return error_response(404, "NotFound", "no route for " + std::string(path));
    } catch (const Error& e) {
        return error_response(status_for(e), e.kind(), e.detail());
    } catch (const std::exception& e) {
        return error_response(500, "InternalError", e.what());
    }
}

}  // namespace mathdup

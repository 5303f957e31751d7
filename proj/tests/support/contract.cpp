#include "contract.hpp"

#include <httplib.h>

#include <thread>

#include "mathdup/service.hpp"
#include "mathdup/synth.hpp"
#include "mathdup/textsim.hpp"
#include "schema.hpp"
#include "support.hpp"

namespace mathdup::testing {

using nlohmann::json;

std::pair<Document, Document> warning_text_pair() {
    Rng rng(2024);
    const auto base = random_words(rng, 300, 5000);
    for (std::size_t block = 10; block < 200; ++block) {
        auto other = random_words(rng, 300, 5000);
        other.insert(other.begin() + 100, base.begin() + 50, base.begin() + 50 + static_cast<long>(block));
        Document a = make_doc("txt-a", 2001, join(base));
        Document b = make_doc("txt-b", 2003, join(other));
        const double j = textsim::text_similarity(a, b).jaccard;
        if (j > 0.13 && j <= 0.19) return {a, b};
    }
    throw std::runtime_error("no warning-level pair found");
}

std::vector<Document> service_corpus() {
    auto docs = synth::make_benchmark({.documents = 60, .seed = 11}).documents;
    auto [a, b] = warning_text_pair();
    docs.push_back(a);
    docs.push_back(b);
    return docs;
}

namespace {

class Checker {
public:
    Checker(httplib::Client& c, SchemaSet& s, ContractResult& r) : client_(c), schemas_(s), result_(r) {}

    void expect(bool ok, const std::string& what) {
        ++result_.checks;
        if (!ok) result_.failures.push_back(what);
    }

    // Issues the request, checks status and schema, returns the body.
    json call(const std::string& method, const std::string& path, int status, const std::string& schema,
              const std::string& body = {}) {
        httplib::Result res = method == "GET" ? client_.Get(path)
                              : method == "POST" ? client_.Post(path, body, "application/json")
                                                 : client_.Delete(path);
        const std::string what = method + " " + path;
        if (!res) {
            expect(false, what + ": no response");
            return json();
        }
        expect(res->status == status, what + ": status " + std::to_string(res->status) + ", expected " + std::to_string(status));
        expect(res->get_header_value("Content-Type").starts_with("application/json"), what + ": content type");
        json j;
        try {
            j = json::parse(res->body);
        } catch (const json::exception&) {
            expect(false, what + ": body is not JSON");
            return json();
        }
        const auto errors = schemas_.validate(schema, j);
        for (const auto& e : errors) expect(false, what + ": " + schema + ": " + e);
        if (errors.empty()) ++result_.checks;
        return j;
    }

private:
    httplib::Client& client_;
    SchemaSet& schemas_;
    ContractResult& result_;
};

json scores_only(json report) {
    report.erase("flags");
    return report;
}

}  // namespace

ContractResult run_service_contract() {
    ContractResult result;
    const auto dir = temp_dir("contract");
    const Corpus corpus(service_corpus());
    const auto index = detect::build_index(corpus);
    auto store = std::make_unique<VerdictStore>(std::make_shared<JsonlVerdictLog>(dir / "verdicts.jsonl"));
    ReviewApi api(corpus, index, ServiceConfig{}, *store);
    HttpServer server(api);
    const int port = server.bind("127.0.0.1", 0);
    std::thread th([&] { server.listen(); });
    server.wait_until_ready();

    httplib::Client client("127.0.0.1", port);
    SchemaSet schemas(source_dir() / "docs/schema");
    Checker c(client, schemas, result);

    const json health = c.call("GET", "/health", 200, "health.json");
    c.expect(health.value("documents", 0) == static_cast<int>(corpus.size()), "health: document count");

    const json docs = c.call("GET", "/documents", 200, "document_list.json");
    c.expect(docs.contains("documents") && docs["documents"].size() == corpus.size(), "documents: count");
    const json one = c.call("GET", "/documents/txt-a", 200, "document.json");
    c.expect(one.value("id", "") == "txt-a", "documents/{id}: id");
    c.call("GET", "/documents/no-such-doc", 404, "error.json");

    const json pairs = c.call("GET", "/pairs", 200, "pairs.json");
    c.call("GET", "/pairs?min_flag=none", 200, "pairs.json");
    c.call("GET", "/pairs?min_flag=suspicious", 200, "pairs.json");
    c.call("GET", "/pairs?min_flag=loud", 422, "error.json");
    bool ranked = true;
    for (std::size_t i = 1; i < pairs.value("pairs", json::array()).size(); ++i) {
        ranked = ranked && pairs["pairs"][i - 1]["combined_score"].get<double>() >= pairs["pairs"][i]["combined_score"].get<double>();
    }
    c.expect(ranked, "pairs: ranked by combined score");
    bool listed = false;
    for (const auto& p : pairs.value("pairs", json::array())) {
        if (p["pair"] == json::array({"txt-a", "txt-b"})) listed = p["flags"]["text"] == "warning";
    }
    c.expect(listed, "pairs: warning pair listed with a text warning");

    const json before = c.call("GET", "/pairs/txt-b/txt-a/report", 200, "report.json");
    c.expect(before.value("pair", json()) == json::array({"txt-a", "txt-b"}), "report: earlier document first");
    c.expect(before["flags"]["text"] == "warning", "report: text warning before threshold change");
    c.call("GET", "/pairs/txt-a/no-such-doc/report", 404, "error.json");
    c.call("GET", "/pairs/txt-a/txt-b/summary", 404, "error.json");

    c.call("GET", "/thresholds", 200, "thresholds.json");
    const json t = c.call("POST", "/thresholds", 200, "thresholds.json", R"({"text": {"suspicious": 0.1}})");
    c.expect(t["thresholds"]["text"] == json{{"warning", 0.1}, {"suspicious", 0.1}}, "thresholds: warning follows suspicious down");
    const json after = c.call("GET", "/pairs/txt-a/txt-b/report", 200, "report.json");
    c.expect(after["flags"]["text"] == "suspicious", "report: text suspicious after threshold change");
    c.expect(scores_only(before).dump() == scores_only(after).dump(), "report: scores byte-identical after threshold change");
    c.call("POST", "/thresholds", 422, "error.json", R"({"text": {"warning": 0.5, "suspicious": 0.2}})");
    c.call("POST", "/thresholds", 422, "error.json", R"({"text": {"warning": 1.5}})");
    c.call("POST", "/thresholds", 422, "error.json", R"({"sound": {"warning": 0.5}})");
    c.call("POST", "/thresholds", 422, "error.json", "not json");
    c.call("POST", "/thresholds", 200, "thresholds.json", R"({"text": {"warning": 0.12, "suspicious": 0.2}})");
    const json reset = c.call("GET", "/pairs/txt-a/txt-b/report", 200, "report.json");
    c.expect(reset.dump() == before.dump(), "report: restoring thresholds restores the report");

    const json v1 = c.call("POST", "/pairs/txt-a/txt-b/verdict", 201, "verdict.json",
                           R"({"decision": "editorial_remark", "taxonomy_label": "plagiarism", "reviewer": "ed1",
                               "timestamp": "2024-03-01T10:00:00Z", "rationale": "copied block", "supersedes": 0})");
    c.expect(v1.value("history_length", 0) == 1, "verdict: first in history");
    const auto seq1 = v1.contains("verdict") ? v1["verdict"].value("seq", 0) : 0;
    c.call("POST", "/pairs/txt-b/txt-a/verdict", 409, "error.json",
           R"({"decision": "legitimate", "reviewer": "ed2", "timestamp": "2024-03-02T10:00:00Z", "supersedes": 0})");
    const json v2 = c.call("POST", "/pairs/txt-b/txt-a/verdict", 201, "verdict.json",
                           json{{"decision", "legitimate"}, {"reviewer", "ed2"}, {"timestamp", "2024-03-02T10:00:00Z"},
                                {"supersedes", seq1}}.dump());
    c.expect(v2.value("history_length", 0) == 2, "verdict: second in history");
    const json again = c.call("POST", "/pairs/txt-b/txt-a/verdict", 201, "verdict.json",
                              R"({"decision": "legitimate", "reviewer": "ed2", "timestamp": "2024-03-02T10:00:00Z"})");
    c.expect(again.value("history_length", 0) == 2, "verdict: resubmission is idempotent");
    c.call("POST", "/pairs/txt-a/txt-b/verdict", 201, "verdict.json", R"({"decision": "undecided", "reviewer": "ed3"})");
    c.call("POST", "/pairs/txt-a/txt-b/verdict", 422, "error.json", R"({"decision": "guilty", "reviewer": "ed1"})");
    c.call("POST", "/pairs/txt-a/txt-b/verdict", 422, "error.json", R"({"decision": "legitimate"})");
    c.call("POST", "/pairs/txt-a/txt-b/verdict", 422, "error.json",
           R"({"decision": "legitimate", "reviewer": "ed1", "taxonomy_label": "weird"})");
    c.call("POST", "/pairs/txt-a/txt-b/verdict", 422, "error.json",
           R"({"decision": "legitimate", "reviewer": "ed1", "timestamp": "yesterday"})");
    c.call("POST", "/pairs/txt-a/no-such-doc/verdict", 404, "error.json", R"({"decision": "legitimate", "reviewer": "ed1"})");

    const json vs = c.call("GET", "/verdicts", 200, "verdicts.json");
    bool found = false;
    for (const auto& v : vs.value("verdicts", json::array())) {
        if (v["pair"] == json::array({"txt-a", "txt-b"})) {
            found = v["history"].size() == 3 && v["active"]["reviewer"] == "ed3" &&
                    v["history"][0]["rationale"] == "copied block";
        }
    }
    c.expect(found, "verdicts: history round-trips the submitted records");
    const json flagged = c.call("GET", "/pairs?min_flag=warning", 200, "pairs.json");
    bool shown = false;
    for (const auto& p : flagged.value("pairs", json::array())) {
        if (p["pair"] == json::array({"txt-a", "txt-b"})) shown = p["verdict"] == "undecided";
    }
    c.expect(shown, "pairs: active verdict shown");

    c.call("DELETE", "/verdicts", 405, "error.json");
    c.call("GET", "/nowhere", 404, "error.json");
    c.call("POST", "/health", 405, "error.json");

    server.stop();
    th.join();

    // Restart on the same log: verdicts survive.
    VerdictStore reopened(std::make_shared<JsonlVerdictLog>(dir / "verdicts.jsonl"));
    const auto snap = reopened.snapshot();
    c.expect(snap->history.size() == 1 && snap->history.begin()->second.size() == 3, "verdicts: survive a restart");
    std::filesystem::remove_all(dir);
    return result;
}

}  // namespace mathdup::testing

// mathdup command line: ingest, index, query, compare, scan, stats, eval,
// serve, synth. JSON goes to stdout, summaries to stderr.
// Exit codes: 0 success, 1 user error, 2 internal error.

#include <csignal>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "mathdup/detect.hpp"
#include "mathdup/document.hpp"
#include "mathdup/error.hpp"
#include "mathdup/query.hpp"
#include "mathdup/service.hpp"
#include "mathdup/synth.hpp"

using namespace mathdup;
using nlohmann::json;

namespace {

struct Options {
    std::string corpus;
    std::string index;
    std::string config;
    std::string verdicts = "verdicts.jsonl";
    std::string host = "127.0.0.1";
    int port = 8080;
    std::optional<std::size_t> ngram;
    std::optional<std::size_t> window;
    std::optional<std::string> hash_seed;
    std::optional<double> cite_tol;
    std::size_t k = 10;
    bool json_out = false;
    std::string query;
    std::string doc_a;
    std::string doc_b;
    std::string benchmark;
    std::string out;
    std::string kind = "benchmark";
    std::uint64_t seed = synth::BenchmarkOptions{}.seed;
    std::size_t documents = 500;
};

ServiceConfig make_config(const Options& o) {
    ServiceConfig cfg = o.config.empty() ? ServiceConfig{} : service::load_config(o.config);
    json overrides = json::object();
    if (o.ngram) overrides["ngram"] = *o.ngram;
    if (o.window) overrides["window"] = *o.window;
    if (o.hash_seed) overrides["hash_seed"] = *o.hash_seed;
    if (o.cite_tol) overrides["cite_tolerance"] = *o.cite_tol;
    if (!overrides.empty()) {
        json merged = service::config_to_json(cfg);
        merged.update(overrides);
        cfg = service::config_from_json(merged);
    }
    return cfg;
}

detect::ReuseIndex index_for(const Options& o, const Corpus& c, const ServiceConfig& cfg) {
    if (!o.index.empty()) return detect::load_index(o.index);
    return detect::build_index(c, cfg.detect.text);
}

void print(const json& j) { std::cout << j.dump(2) << '\n'; }

int cmd_ingest(const Options& o) {
    const Corpus c = corpus::load_corpus(o.corpus);
    std::size_t formulae = 0, refs = 0, cites = 0;
    std::map<std::string, std::size_t> languages;
    for (const auto& d : c.documents()) {
        formulae += d.formulae.size();
        refs += d.references.size();
        cites += d.citation_markers.size();
        ++languages[d.language];
    }
    json out{{"documents", c.size()}, {"formulae", formulae}, {"references", refs}, {"citations", cites},
             {"languages", languages}};
    const auto manifest = std::filesystem::path(o.corpus) / "manifest.json";
    if (std::filesystem::exists(manifest)) out["cases"] = corpus::load_manifest(manifest, c).size();
    print(out);
    std::cerr << "ingest: " << c.size() << " documents valid\n";
    return 0;
}

int cmd_index(const Options& o) {
    const auto cfg = make_config(o);
    const Corpus c = corpus::load_corpus(o.corpus);
    const auto idx = detect::build_index(c, cfg.detect.text);
    detect::save_index(idx, o.index);
    print(json{{"documents", idx.doc_ids.size()},
               {"fingerprints", idx.fingerprint_index.size()},
               {"identifiers", idx.identifier_index.size()},
               {"refkeys", idx.refkey_index.size()},
               {"index", o.index}});
    std::cerr << "index: " << idx.doc_ids.size() << " documents -> " << o.index << '\n';
    return 0;
}

int cmd_query(const Options& o) {
    const Corpus c = corpus::load_corpus(o.corpus);
    const auto ast = query::parse_query(o.query);
    const auto ids = query::evaluate_query(ast, c);
    if (o.json_out) {
        print(json{{"query", query::print_query(ast)}, {"matches", ids}});
    } else {
        for (const auto& id : ids) std::cout << id << '\n';
    }
    std::cerr << "query: " << ids.size() << " of " << c.size() << " documents match\n";
    return 0;
}

int cmd_compare(const Options& o) {
    const auto cfg = make_config(o);
    const Corpus c = corpus::load_corpus(o.corpus);
    const auto r = detect::detailed_analysis(c.at(o.doc_a), c.at(o.doc_b), cfg.detect);
    print(detect::report_to_json(r));
    std::cerr << "compare " << r.pair.first << " " << r.pair.second << ": combined "
              << to_string(r.level(Channel::combined)) << " (" << r.combined_score() << ")\n";
    return 0;
}

int cmd_scan(const Options& o) {
    const auto cfg = make_config(o);
    const Corpus c = corpus::load_corpus(o.corpus);
    const auto idx = index_for(o, c, cfg);
    if (idx.empty()) throw EmptyIndex("no documents indexed");
    const auto& q = c.at(o.doc_a);
    const auto cands = detect::retrieve_candidates(q, idx, o.k, cfg.detect.weights);
    json cj = json::array(), reports = json::array();
    for (const auto& cand : cands) {
        cj.push_back({{"id", cand.doc_id}, {"prescore", cand.prescore}, {"text", cand.text}, {"math", cand.math},
                      {"cite", cand.cite}});
        const Document* d = c.find(cand.doc_id);
        if (!d) throw UnknownDocId(cand.doc_id + " is indexed but missing from the corpus");
        reports.push_back(detect::report_to_json(detect::detailed_analysis(q, *d, cfg.detect)));
    }
    print(json{{"query", q.id}, {"k", o.k}, {"candidates", cj}, {"reports", reports}});
    std::cerr << "scan " << q.id << ": " << cands.size() << " candidates\n";
    return 0;
}

int cmd_stats(const Options& o) {
    const Corpus c = corpus::load_corpus(o.corpus);
    const auto s = corpus::corpus_stats(c.documents());
    print(corpus::stats_to_json(s));
    std::cerr << "stats: " << s.documents << " documents, " << s.with_journal << " with journal, "
              << s.journals.counts.size() << " journals, " << s.authors.counts.size() << " authors\n";
    return 0;
}

int cmd_eval(const Options& o) {
    const auto cfg = make_config(o);
    const Corpus c = corpus::load_corpus(o.corpus);
    const auto idx = index_for(o, c, cfg);
    std::ifstream in(o.benchmark);
    if (!in) throw MalformedInput(o.benchmark + ": cannot open benchmark");
    json bj;
    try {
        bj = json::parse(in);
    } catch (const json::parse_error& e) {
        throw MalformedInput(o.benchmark + ": " + e.what());
    }
    const auto bench = detect::benchmark_from_json(bj);
    const auto m = detect::evaluate_retrieval(bench, c, idx, o.k, cfg.detect.weights);
    json per = json::array();
    for (std::size_t i = 0; i < bench.size(); ++i) {
        per.push_back({{"query", bench[i].query_id}, {"first_relevant_rank", m.first_relevant_rank[i]}});
    }
    print(json{{"k", o.k}, {"mrr", m.mrr}, {"recall_at_k", m.recall_at_k}, {"queries", per}});
    std::cerr << "eval: MRR " << m.mrr << ", recall@" << o.k << " " << m.recall_at_k << '\n';
    return 0;
}

HttpServer* g_server = nullptr;

extern "C" void on_signal(int) {
    if (g_server) g_server->stop();
}

int cmd_serve(const Options& o) {
    const auto cfg = make_config(o);
    const Corpus c = corpus::load_corpus(o.corpus);
    const auto idx = index_for(o, c, cfg);
    VerdictStore store(std::make_shared<JsonlVerdictLog>(o.verdicts));
    ReviewApi api(c, idx, cfg, store);
    HttpServer server(api);
    const int port = server.bind(o.host, o.port);
    g_server = &server;
    std::signal(SIGINT, on_signal);
    std::signal(SIGTERM, on_signal);
    print(json{{"host", o.host}, {"port", port}, {"documents", c.size()}, {"indexed", idx.doc_ids.size()}});
    std::cout.flush();
    std::cerr << "serve: listening on " << o.host << ":" << port << '\n';
    server.listen();
    g_server = nullptr;
    return 0;
}

int cmd_synth(const Options& o) {
    json out{{"kind", o.kind}, {"out", o.out}};
    if (o.kind == "benchmark") {
        synth::BenchmarkOptions bo;
        bo.seed = o.seed;
        bo.documents = o.documents;
        const auto b = synth::make_benchmark(bo);
        synth::write_corpus(b.documents, o.out);
        json planted = json::array();
        for (const auto& p : b.planted) planted.push_back({{"kind", synth::to_string(p.kind)}, {"source", p.source}, {"reuse", p.reuse}});
        out["documents"] = b.documents.size();
        out["planted"] = planted;
        if (!o.benchmark.empty()) {
            std::ofstream bf(o.benchmark);
            if (!bf) throw StorageUnavailable(o.benchmark + ": cannot write");
            bf << detect::benchmark_to_json(b.queries).dump(2) << '\n';
            out["benchmark"] = o.benchmark;
        }
    } else if (o.kind == "tally") {
        const auto docs = synth::tally_fixture();
        synth::write_corpus(docs, o.out);
        out["documents"] = docs.size();
    } else if (o.kind == "editorial") {
        const auto fx = synth::editorial_fixture(o.seed);
        synth::write_corpus(fx.documents, o.out);
        out["documents"] = fx.documents.size();
        out["query"] = synth::kEditorialQuery;
        out["positives"] = fx.positives;
    } else {
        throw MalformedInput("synth: unknown kind '" + o.kind + "' (benchmark, tally, editorial)");
    }
    print(out);
    std::cerr << "synth: wrote " << out["documents"].get<std::size_t>() << " documents to " << o.out << '\n';
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"mathdup: math-aware content reuse detection"};
    app.require_subcommand(1);
    Options o;

    auto add_corpus = [&](CLI::App* s) { s->add_option("--corpus", o.corpus, "Corpus directory of *.json documents")->required(); };
    auto add_tuning = [&](CLI::App* s) {
        s->add_option("--config", o.config, "JSON config file");
        s->add_option("--ngram", o.ngram, "Word n-gram length (default 3)");
        s->add_option("--window", o.window, "Winnowing window (default 4)");
        s->add_option("--hash-seed", o.hash_seed, "Fingerprint hash seed");
        s->add_option("--cite-tol", o.cite_tol, "Reference match tolerance (default 0.25)");
    };

    auto* ingest = app.add_subcommand("ingest", "Validate a corpus directory");
    add_corpus(ingest);

    auto* index = app.add_subcommand("index", "Build and save the reuse index");
    add_corpus(index);
    add_tuning(index);
    index->add_option("--index", o.index, "Output index file")->required();

    auto* query = app.add_subcommand("query", "Evaluate a boolean field query");
    add_corpus(query);
    query->add_option("query", o.query, "Query text")->required();
    query->add_flag("--json", o.json_out, "Print JSON instead of one id per line");

    auto* compare = app.add_subcommand("compare", "Detailed analysis of one pair");
    add_corpus(compare);
    add_tuning(compare);
    compare->add_option("a", o.doc_a)->required();
    compare->add_option("b", o.doc_b)->required();

    auto* scan = app.add_subcommand("scan", "Retrieve candidates for a document and analyse them");
    add_corpus(scan);
    add_tuning(scan);
    scan->add_option("--index", o.index, "Index file (built from the corpus when omitted)");
    scan->add_option("doc", o.doc_a)->required();
    scan->add_option("-k", o.k, "Number of candidates")->check(CLI::PositiveNumber);

    auto* stats = app.add_subcommand("stats", "Journal and author frequency tables");
    add_corpus(stats);

    auto* eval = app.add_subcommand("eval", "MRR and recall@k on a benchmark file");
    add_corpus(eval);
    add_tuning(eval);
    eval->add_option("--index", o.index, "Index file (built from the corpus when omitted)");
    eval->add_option("--benchmark", o.benchmark, "Benchmark JSON [{query, relevant}]")->required();
    eval->add_option("-k", o.k, "Cutoff")->check(CLI::PositiveNumber);

    auto* serve = app.add_subcommand("serve", "Run the review HTTP API");
    add_corpus(serve);
    add_tuning(serve);
    serve->add_option("--index", o.index, "Index file (built from the corpus when omitted)");
    serve->add_option("--verdicts", o.verdicts, "Verdict log (JSON lines)");
    serve->add_option("--port", o.port, "Port, 0 for any free port");
    serve->add_option("--host", o.host, "Bind address");

    auto* synth_cmd = app.add_subcommand("synth", "Write a synthetic corpus");
    synth_cmd->add_option("--out", o.out, "Output directory")->required();
    synth_cmd->add_option("--kind", o.kind, "benchmark, tally or editorial");
    synth_cmd->add_option("--seed", o.seed, "Random seed");
    synth_cmd->add_option("--documents", o.documents, "Benchmark corpus size");
    synth_cmd->add_option("--benchmark", o.benchmark, "Write benchmark queries to this file");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 1;
    }

    const std::string name = app.get_subcommands().front()->get_name();
    try {
        if (name == "ingest") return cmd_ingest(o);
        if (name == "index") return cmd_index(o);
        if (name == "query") return cmd_query(o);
        if (name == "compare") return cmd_compare(o);
        if (name == "scan") return cmd_scan(o);
        if (name == "stats") return cmd_stats(o);
        if (name == "eval") return cmd_eval(o);
        if (name == "serve") return cmd_serve(o);
        if (name == "synth") return cmd_synth(o);
    } catch (const Error& e) {
        std::cerr << "mathdup " << name << ": " << e.kind() << ": " << e.detail() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "mathdup " << name << ": internal error: " << e.what() << '\n';
        return 2;
    }
    return 2;
}

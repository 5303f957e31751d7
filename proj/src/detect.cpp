#include "mathdup/detect.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <tuple>

#include "mathdup/error.hpp"

namespace mathdup {

using nlohmann::json;

std::string_view to_string(Channel c) {
    switch (c) {
        case Channel::text: return "text";
        case Channel::math: return "math";
        case Channel::cite: return "cite";
        case Channel::combined: return "combined";
    }
    return "combined";
}

std::string_view to_string(FlagLevel l) {
    switch (l) {
        case FlagLevel::none: return "none";
        case FlagLevel::warning: return "warning";
        case FlagLevel::suspicious: return "suspicious";
    }
    return "none";
}

std::optional<FlagLevel> flag_level_from_string(std::string_view s) {
    if (s == "none") return FlagLevel::none;
    if (s == "warning") return FlagLevel::warning;
    if (s == "suspicious") return FlagLevel::suspicious;
    return std::nullopt;
}

ChannelScores SimilarityReport::scores() const {
    ChannelScores s;
    if (text.available) s.text = text.jaccard;
    if (math.available) s.math = math.histogram;
    if (cite.available) s.cite = std::max(cite.coupling, cite.sequence);
    return s;
}

double SimilarityReport::combined_score() const {
    const auto s = scores();
    double m = 0.0;
    for (const auto& v : {s.text, s.math, s.cite}) {
        if (v) m = std::max(m, *v);
    }
    return m;
}

FlagLevel SimilarityReport::level(Channel c) const {
    for (const auto& f : flags) {
        if (f.channel == c) return f.level;
    }
    return FlagLevel::none;
}

namespace detect {
namespace {

std::string hex64(std::uint64_t v) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

std::uint64_t parse_hex64(const std::string& s) {
    if (s.size() != 16) throw MalformedInput("index: bad hash key '" + s + "'");
    return std::stoull(s, nullptr, 16);
}

json span_json(const CharSpan& c, std::size_t tok_start, std::size_t tok_end) {
    return json{{"start", c.start}, {"end", c.end}, {"token_start", tok_start}, {"token_end", tok_end}};
}

json optional_score(bool available, double v) { return available ? json(v) : json(nullptr); }

}  // namespace

void validate(const Thresholds& t) {
    for (const auto& [name, c] : {std::pair{"text", t.text}, std::pair{"math", t.math}, std::pair{"cite", t.cite}}) {
        if (!(c.warning >= 0.0 && c.warning <= 1.0 && c.suspicious >= 0.0 && c.suspicious <= 1.0)) {
            throw InvalidThresholds(std::string(name) + ": thresholds must lie in [0, 1]");
        }
        if (c.warning > c.suspicious) {
            throw InvalidThresholds(std::string(name) + ": warning " + std::to_string(c.warning) +
                                    " exceeds suspicious " + std::to_string(c.suspicious));
        }
    }
}

FlagLevel flag_level(double score, const ChannelThreshold& t) {
    if (score > t.suspicious) return FlagLevel::suspicious;
    if (score > t.warning) return FlagLevel::warning;
    return FlagLevel::none;
}

std::vector<SuspicionFlag> flag_suspicion(const ChannelScores& scores, const Thresholds& thresholds) {
    validate(thresholds);
    const FlagLevel text = scores.text ? flag_level(*scores.text, thresholds.text) : FlagLevel::none;
    const FlagLevel math = scores.math ? flag_level(*scores.math, thresholds.math) : FlagLevel::none;
    const FlagLevel cite = scores.cite ? flag_level(*scores.cite, thresholds.cite) : FlagLevel::none;
    const FlagLevel combined = std::max({text, math, cite});
    return {{Channel::text, text}, {Channel::math, math}, {Channel::cite, cite}, {Channel::combined, combined}};
}

// ---------------------------------------------------------------------------

QueryFeatures query_features(const Document& doc, const TextConfig& cfg) {
    QueryFeatures q;
    q.fingerprints = textsim::fingerprint_set(
        textsim::fingerprint_winnow(doc.body_tokens, cfg.ngram, cfg.window, cfg.hash_seed));
    q.identifiers = mathsim::extract_features(doc).identifier_freq;
    for (const auto& r : doc.references) {
        if (!r.match_key.empty()) q.refkeys.push_back(r.match_key);
    }
    std::sort(q.refkeys.begin(), q.refkeys.end());
    q.refkeys.erase(std::unique(q.refkeys.begin(), q.refkeys.end()), q.refkeys.end());
    return q;
}

ReuseIndex build_index(const std::vector<Document>& docs, const TextConfig& cfg) {
    std::vector<const Document*> order;
    order.reserve(docs.size());
    for (const auto& d : docs) order.push_back(&d);
    std::sort(order.begin(), order.end(), [](const Document* x, const Document* y) { return x->id < y->id; });
    for (std::size_t i = 1; i < order.size(); ++i) {
        if (order[i]->id == order[i - 1]->id) throw DuplicateDocId(order[i]->id);
    }

    ReuseIndex index;
    index.text = cfg;
    for (std::size_t i = 0; i < order.size(); ++i) {
        const Document& d = *order[i];
        const auto doc = static_cast<std::uint32_t>(i);
        index.doc_ids.push_back(d.id);

        const auto fps = textsim::fingerprint_winnow(d.body_tokens, cfg.ngram, cfg.window, cfg.hash_seed);
        for (const auto& f : fps) {
            index.fingerprint_index[f.hash].push_back({doc, static_cast<std::uint32_t>(f.ngram_start)});
        }
        const auto q = query_features(d, cfg);
        std::uint32_t total = 0;
        for (const auto& [id, c] : q.identifiers) {
            index.identifier_index[id].push_back({doc, static_cast<std::uint32_t>(c)});
            total += static_cast<std::uint32_t>(c);
        }
        for (const auto& key : q.refkeys) index.refkey_index[key].push_back(doc);
        index.doc_norms.push_back({static_cast<std::uint32_t>(q.fingerprints.size()), total,
                                   static_cast<std::uint32_t>(q.refkeys.size())});
    }
    return index;
}

ReuseIndex build_index(const Corpus& corpus, const TextConfig& cfg) { return build_index(corpus.documents(), cfg); }

json index_to_json(const ReuseIndex& index) {
    json fp = json::object();
    for (const auto& [h, postings] : index.fingerprint_index) {
        json arr = json::array();
        for (const auto& p : postings) arr.push_back({p.doc, p.value});
        fp[hex64(h)] = std::move(arr);
    }
    json ids = json::object();
    for (const auto& [id, postings] : index.identifier_index) {
        json arr = json::array();
        for (const auto& p : postings) arr.push_back({p.doc, p.value});
        ids[id] = std::move(arr);
    }
    json refs = json::object();
    for (const auto& [key, docs] : index.refkey_index) refs[key] = docs;
    json norms = json::array();
    for (const auto& n : index.doc_norms) norms.push_back({n.fingerprints, n.identifiers, n.refkeys});
    return json{{"format", "mathdup-index"},
                {"version", ReuseIndex::kFormatVersion},
                {"config",
                 {{"ngram", index.text.ngram}, {"window", index.text.window}, {"hash_seed", hex64(index.text.hash_seed)}}},
                {"doc_ids", index.doc_ids},
                {"doc_norms", std::move(norms)},
                {"fingerprints", std::move(fp)},
                {"identifiers", std::move(ids)},
                {"refkeys", std::move(refs)}};
}

ReuseIndex index_from_json(const json& j) {
    try {
        if (j.at("format") != "mathdup-index") throw MalformedInput("index: not a mathdup index");
        if (j.at("version") != ReuseIndex::kFormatVersion) {
            throw MalformedInput("index: unsupported version " + j.at("version").dump());
        }
        ReuseIndex index;
        const auto& cfg = j.at("config");
        index.text.ngram = cfg.at("ngram").get<std::size_t>();
        index.text.window = cfg.at("window").get<std::size_t>();
        index.text.hash_seed = parse_hex64(cfg.at("hash_seed").get<std::string>());
        index.doc_ids = j.at("doc_ids").get<std::vector<std::string>>();
        for (const auto& n : j.at("doc_norms")) {
            index.doc_norms.push_back({n.at(0).get<std::uint32_t>(), n.at(1).get<std::uint32_t>(), n.at(2).get<std::uint32_t>()});
        }
        for (const auto& [h, arr] : j.at("fingerprints").items()) {
            auto& postings = index.fingerprint_index[parse_hex64(h)];
            for (const auto& p : arr) postings.push_back({p.at(0).get<std::uint32_t>(), p.at(1).get<std::uint32_t>()});
        }
        for (const auto& [id, arr] : j.at("identifiers").items()) {
            auto& postings = index.identifier_index[id];
            for (const auto& p : arr) postings.push_back({p.at(0).get<std::uint32_t>(), p.at(1).get<std::uint32_t>()});
        }
        for (const auto& [key, arr] : j.at("refkeys").items()) {
            index.refkey_index[key] = arr.get<std::vector<std::uint32_t>>();
        }
        if (index.doc_norms.size() != index.doc_ids.size()) throw MalformedInput("index: doc_norms size mismatch");
        return index;
    } catch (const json::exception& e) {
        throw MalformedInput(std::string("index: ") + e.what());
    }
}

void save_index(const ReuseIndex& index, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw StorageUnavailable(path);
    out << index_to_json(index).dump() << '\n';
}

ReuseIndex load_index(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw MalformedInput(path + ": cannot open index");
    try {
        return index_from_json(json::parse(in));
    } catch (const json::exception& e) {
        throw MalformedInput(path + ": " + e.what());
    }
}

std::vector<Candidate> rank_candidates(std::vector<Candidate> raw, std::size_t k, const RetrievalWeights& weights) {
    double mt = weights.text_floor, mm = weights.math_floor, mc = weights.cite_floor;
    for (const auto& c : raw) {
        mt = std::max(mt, c.text);
        mm = std::max(mm, c.math);
        mc = std::max(mc, c.cite);
    }
    for (auto& c : raw) {
        c.prescore = (mt > 0 ? weights.text * c.text / mt : 0.0) + (mm > 0 ? weights.math * c.math / mm : 0.0) +
                     (mc > 0 ? weights.cite * c.cite / mc : 0.0);
    }
    std::sort(raw.begin(), raw.end(), [](const Candidate& x, const Candidate& y) {
        if (x.prescore != y.prescore) return x.prescore > y.prescore;
        return x.doc_id < y.doc_id;
    });
    if (raw.size() > k) raw.resize(k);
    return raw;
}

std::vector<Candidate> retrieve_candidates(const Document& query, const ReuseIndex& index, std::size_t k,
                                           const RetrievalWeights& weights) {
    if (index.empty()) throw EmptyIndex("no documents indexed");
    const auto q = query_features(query, index.text);
    const std::size_t N = index.doc_ids.size();
    std::vector<std::uint32_t> shared_fp(N, 0), shared_ref(N, 0);
    std::vector<std::uint32_t> overlap(N, 0);  // sum of min(count_q, count_d)
    std::vector<std::uint32_t> last_seen(N, UINT32_MAX);

    for (std::size_t qi = 0; qi < q.fingerprints.size(); ++qi) {
        const auto it = index.fingerprint_index.find(q.fingerprints[qi]);
        if (it == index.fingerprint_index.end()) continue;
        for (const auto& p : it->second) {
            if (last_seen[p.doc] == qi) continue;  // several positions, one shared hash
            last_seen[p.doc] = static_cast<std::uint32_t>(qi);
            ++shared_fp[p.doc];
        }
    }
    std::uint32_t qtotal = 0;
    for (const auto& [id, c] : q.identifiers) {
        qtotal += static_cast<std::uint32_t>(c);
        const auto it = index.identifier_index.find(id);
        if (it == index.identifier_index.end()) continue;
        for (const auto& p : it->second) overlap[p.doc] += std::min(static_cast<std::uint32_t>(c), p.value);
    }
    for (const auto& key : q.refkeys) {
        const auto it = index.refkey_index.find(key);
        if (it == index.refkey_index.end()) continue;
        for (auto d : it->second) ++shared_ref[d];
    }

    std::vector<Candidate> raw;
    for (std::size_t d = 0; d < N; ++d) {
        if (index.doc_ids[d] == query.id) continue;
        if (shared_fp[d] == 0 && overlap[d] == 0 && shared_ref[d] == 0) continue;
        Candidate c;
        c.doc_id = index.doc_ids[d];
        c.text = q.fingerprints.empty() ? 0.0 : static_cast<double>(shared_fp[d]) / static_cast<double>(q.fingerprints.size());
        // Weighted Jaccard of the identifier histograms.
        const std::uint32_t uni = qtotal + index.doc_norms[d].identifiers - overlap[d];
        c.math = uni > 0 ? static_cast<double>(overlap[d]) / static_cast<double>(uni) : 0.0;
        c.cite = q.refkeys.empty() ? 0.0 : static_cast<double>(shared_ref[d]) / static_cast<double>(q.refkeys.size());
        raw.push_back(std::move(c));
    }
    return rank_candidates(std::move(raw), k, weights);
}

// ---------------------------------------------------------------------------

SimilarityReport detailed_analysis(const Document& a_in, const Document& b_in, const DetectConfig& cfg) {
    const bool swap = std::tie(b_in.publication_year, b_in.id) < std::tie(a_in.publication_year, a_in.id);
    const Document& a = swap ? b_in : a_in;
    const Document& b = swap ? a_in : b_in;

    SimilarityReport r;
    r.pair = {a.id, b.id};

    const auto ts = textsim::text_similarity(a, b, cfg.text);
    r.text.available = !ts.empty;
    r.text.jaccard = ts.jaccard;
    r.text.containment_first_in_second = ts.containment_a_in_b;
    r.text.containment_second_in_first = ts.containment_b_in_a;
    r.text.spans = ts.matched_spans;

    if (!a.formulae.empty() && !b.formulae.empty()) {
        const auto fa = mathsim::extract_features(a);
        const auto fb = mathsim::extract_features(b);
        r.math.available = true;
        r.math.histogram = mathsim::histogram_similarity(fa, fb);
        r.math.sequence = mathsim::identifier_sequence_similarity(fa, fb);
        r.math.label = mathsim::classify_math_reuse(a, b, cfg.canonicalize);
    }

    if (!a.references.empty() && !b.references.empty()) {
        const auto cs = citesim::citation_similarity(a, b, cfg.cite_tolerance);
        r.cite.available = true;
        r.cite.coupling = cs.coupling;
        r.cite.sequence = cs.sequence;
        r.cite.matches = cs.matches;
    }

    r.metadata = json{{"years", {a.publication_year, b.publication_year}},
                      {"languages", {a.language, b.language}},
                      {"notes", {a.metadata, b.metadata}}};
    reflag(r, cfg.thresholds);
    return r;
}

void reflag(SimilarityReport& report, const Thresholds& thresholds) {
    report.flags = flag_suspicion(report.scores(), thresholds);
}

json report_to_json(const SimilarityReport& r) {
    json spans = json::array();
    for (const auto& s : r.text.spans) {
        spans.push_back({{"a", span_json(s.a, s.a_token_start, s.a_token_end)},
                         {"b", span_json(s.b, s.b_token_start, s.b_token_end)}});
    }
    json evidence = json::array();
    for (const auto& [i, j] : r.math.label.evidence) evidence.push_back({i, j});
    json matches = json::array();
    for (const auto& [i, j] : r.cite.matches) matches.push_back({i, j});
    json flags = json::object();
    for (const auto& f : r.flags) flags[std::string(to_string(f.channel))] = to_string(f.level);

    return json{
        {"pair", {r.pair.first, r.pair.second}},
        {"text",
         {{"available", r.text.available},
          {"jaccard", optional_score(r.text.available, r.text.jaccard)},
          {"containment",
           {optional_score(r.text.available, r.text.containment_first_in_second),
            optional_score(r.text.available, r.text.containment_second_in_first)}},
          {"spans", std::move(spans)}}},
        {"math",
         {{"available", r.math.available},
          {"histogram", optional_score(r.math.available, r.math.histogram)},
          {"sequence", optional_score(r.math.available, r.math.sequence)},
          {"label",
           {{"category", r.math.available ? json(to_string(r.math.label.category)) : json(nullptr)},
            {"evidence", std::move(evidence)}}}}},
        {"cite",
         {{"available", r.cite.available},
          {"coupling", optional_score(r.cite.available, r.cite.coupling)},
          {"sequence", optional_score(r.cite.available, r.cite.sequence)},
          {"matches", std::move(matches)}}},
        {"flags", std::move(flags)},
        {"combined_score", r.combined_score()},
        {"metadata", r.metadata},
    };
}

// ---------------------------------------------------------------------------

RetrievalMetrics evaluate_retrieval(const std::vector<BenchmarkQuery>& benchmark, const Corpus& corpus,
                                    const ReuseIndex& index, std::size_t k, const RetrievalWeights& weights) {
    if (benchmark.empty()) throw MalformedInput("benchmark: no queries");
    RetrievalMetrics m;
    double rr_sum = 0.0, recall_sum = 0.0;
    for (const auto& q : benchmark) {
        const Document& doc = corpus.at(q.query_id);
        for (const auto& r : q.relevant) corpus.at(r);
        const auto cands = retrieve_candidates(doc, index, k, weights);
        std::size_t first = 0, hits = 0;
        for (std::size_t i = 0; i < cands.size(); ++i) {
            if (std::find(q.relevant.begin(), q.relevant.end(), cands[i].doc_id) != q.relevant.end()) {
                ++hits;
                if (first == 0) first = i + 1;
            }
        }
        m.first_relevant_rank.push_back(first);
        rr_sum += first ? 1.0 / static_cast<double>(first) : 0.0;
        recall_sum += q.relevant.empty() ? 0.0 : static_cast<double>(hits) / static_cast<double>(q.relevant.size());
    }
    m.mrr = rr_sum / static_cast<double>(benchmark.size());
    m.recall_at_k = recall_sum / static_cast<double>(benchmark.size());
    return m;
}

std::vector<BenchmarkQuery> benchmark_from_json(const json& j) {
    if (!j.is_array()) throw MalformedInput("benchmark: expected array");
    std::vector<BenchmarkQuery> out;
    try {
        for (const auto& e : j) {
            out.push_back({e.at("query").get<std::string>(), e.at("relevant").get<std::vector<std::string>>()});
        }
    } catch (const json::exception& e) {
        throw MalformedInput(std::string("benchmark: ") + e.what());
    }
    return out;
}

json benchmark_to_json(const std::vector<BenchmarkQuery>& b) {
    json out = json::array();
    for (const auto& q : b) out.push_back({{"query", q.query_id}, {"relevant", q.relevant}});
    return out;
}

}  // namespace detect
}  // namespace mathdup

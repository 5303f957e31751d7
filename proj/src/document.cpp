#include "mathdup/document.hpp"

#include <algorithm>
#include <fstream>
#include <regex>
#include <set>
#include <sstream>

#include "mathdup/error.hpp"

namespace mathdup {

using nlohmann::json;

std::string_view to_string(CaseLabel label) {
    switch (label) {
        case CaseLabel::legitimate_reuse: return "legitimate_reuse";
        case CaseLabel::retracted: return "retracted";
        case CaseLabel::plagiarism: return "plagiarism";
        case CaseLabel::translation: return "translation";
        case CaseLabel::topical_relatedness: return "topical_relatedness";
        case CaseLabel::distribution_stopped: return "distribution_stopped";
        case CaseLabel::identical: return "identical";
        case CaseLabel::unclear: return "unclear";
        case CaseLabel::compilation: return "compilation";
    }
    return "unclear";
}

std::optional<CaseLabel> case_label_from_string(std::string_view s) {
    for (auto l : {CaseLabel::legitimate_reuse, CaseLabel::retracted, CaseLabel::plagiarism,
                   CaseLabel::translation, CaseLabel::topical_relatedness, CaseLabel::distribution_stopped,
                   CaseLabel::identical, CaseLabel::unclear, CaseLabel::compilation}) {
        if (to_string(l) == s) return l;
    }
    return std::nullopt;
}

Corpus::Corpus(std::vector<Document> docs) : docs_(std::move(docs)) {
    for (std::size_t i = 0; i < docs_.size(); ++i) {
        if (!by_id_.emplace(docs_[i].id, i).second) throw DuplicateDocId(docs_[i].id);
    }
}

const Document* Corpus::find(std::string_view id) const {
    const auto it = by_id_.find(id);
    return it == by_id_.end() ? nullptr : &docs_[it->second];
}

const Document& Corpus::at(std::string_view id) const {
    if (const auto* d = find(id)) return *d;
    throw UnknownDocId(std::string(id));
}

std::size_t FrequencyTable::total() const {
    std::size_t n = 0;
    for (const auto& [_, c] : counts) n += c;
    return n;
}

std::vector<std::pair<std::size_t, std::size_t>> FrequencyTable::rank_frequency() const {
    std::vector<std::pair<std::string, std::size_t>> entries(counts.begin(), counts.end());
    std::stable_sort(entries.begin(), entries.end(),
                     [](const auto& a, const auto& b) { return a.second > b.second; });
    std::vector<std::pair<std::size_t, std::size_t>> out;
    out.reserve(entries.size());
    for (std::size_t i = 0; i < entries.size(); ++i) out.emplace_back(i + 1, entries[i].second);
    return out;
}

std::map<std::size_t, std::size_t> FrequencyTable::count_of_counts() const {
    std::map<std::size_t, std::size_t> out;
    for (const auto& [_, c] : counts) ++out[c];
    return out;
}

namespace corpus {
namespace {

[[noreturn]] void malformed(const std::string& field, const std::string& what) {
    throw MalformedInput(field + ": " + what);
}

[[noreturn]] void violation(const std::string& field, const std::string& what) {
    throw InvariantViolation(field + ": " + what);
}

const json* member(const json& j, const char* key) {
    const auto it = j.find(key);
    if (it == j.end() || it->is_null()) return nullptr;
    return &*it;
}

std::string req_string(const json& j, const char* key, const std::string& ctx) {
    const json* v = member(j, key);
    if (!v) malformed(ctx + key, "missing required field");
    if (!v->is_string()) malformed(ctx + key, "expected string");
    return v->get<std::string>();
}

std::string opt_string(const json& j, const char* key, const std::string& ctx) {
    const json* v = member(j, key);
    if (!v) return {};
    if (!v->is_string()) malformed(ctx + key, "expected string");
    return v->get<std::string>();
}

std::optional<std::string> opt_nullable_string(const json& j, const char* key, const std::string& ctx) {
    const json* v = member(j, key);
    if (!v) return std::nullopt;
    if (!v->is_string()) malformed(ctx + key, "expected string");
    return v->get<std::string>();
}

std::vector<std::string> string_array(const json& j, const char* key, const std::string& ctx, bool required) {
    const json* v = member(j, key);
    if (!v) {
        if (required) malformed(ctx + key, "missing required field");
        return {};
    }
    if (!v->is_array()) malformed(ctx + key, "expected array");
    std::vector<std::string> out;
    for (std::size_t i = 0; i < v->size(); ++i) {
        if (!(*v)[i].is_string()) malformed(ctx + key + "[" + std::to_string(i) + "]", "expected string");
        out.push_back((*v)[i].get<std::string>());
    }
    return out;
}

std::size_t index_value(const json& j, const char* key, const std::string& ctx) {
    const json* v = member(j, key);
    if (!v) malformed(ctx + key, "missing required field");
    if (!v->is_number_integer()) malformed(ctx + key, "expected non-negative integer");
    const auto n = v->get<long long>();
    if (n < 0) violation(ctx + key, "negative index");
    return static_cast<std::size_t>(n);
}

const json& array_member(const json& j, const char* key, const std::string& ctx) {
    static const json empty = json::array();
    const json* v = member(j, key);
    if (!v) return empty;
    if (!v->is_array()) malformed(ctx + key, "expected array");
    return *v;
}

FormulaTree tree_from_json(const json& j, const std::string& ctx) {
    if (!j.is_object()) malformed(ctx, "expected tree object");
    if (const json* id = member(j, "id")) {
        if (!id->is_string()) malformed(ctx + ".id", "expected string");
        return FormulaNode::identifier(id->get<std::string>());
    }
    if (const json* num = member(j, "num")) {
        if (num->is_string()) return FormulaNode::number(num->get<std::string>());
        if (num->is_number()) return FormulaNode::number(num->dump());
        malformed(ctx + ".num", "expected number or string");
    }
    if (const json* op = member(j, "op")) {
        if (!op->is_string()) malformed(ctx + ".op", "expected string");
        const json& args = array_member(j, "args", ctx + ".");
        std::vector<FormulaTree> children;
        for (std::size_t i = 0; i < args.size(); ++i) {
            children.push_back(tree_from_json(args[i], ctx + ".args[" + std::to_string(i) + "]"));
        }
        return FormulaNode::apply(op->get<std::string>(), std::move(children));
    }
    malformed(ctx, "tree node needs one of op/id/num");
}

json tree_to_json(const FormulaTree& t) {
    switch (t.kind) {
        case FormulaNodeKind::identifier: return json{{"id", t.value}};
        case FormulaNodeKind::number: return json{{"num", t.value}};
        case FormulaNodeKind::apply: break;
    }
    json args = json::array();
    for (const auto& c : t.children) args.push_back(tree_to_json(c));
    return json{{"op", t.value}, {"args", std::move(args)}};
}

bool valid_language_tag(const std::string& tag) {
    static const std::regex re("^[A-Za-z]{2,3}(-[A-Za-z0-9]{2,8})*$");
    return std::regex_match(tag, re);
}

void rethrow_with_context(const std::string& ctx) {
    try {
        throw;
    } catch (const MalformedInput& e) {
        throw MalformedInput(ctx + ": " + e.detail());
    } catch (const InvariantViolation& e) {
        throw InvariantViolation(ctx + ": " + e.detail());
    } catch (const MalformedTree& e) {
        throw InvariantViolation(ctx + ": " + e.detail());
    } catch (const json::exception& e) {
        throw MalformedInput(ctx + ": " + e.what());
    }
}

}  // namespace

void validate(const Document& doc) {
    if (doc.id.empty()) violation("id", "must be nonempty");
    if (doc.publication_year < 1800 || doc.publication_year > 2100) {
        violation("year", std::to_string(doc.publication_year) + " outside [1800, 2100]");
    }
    if (!valid_language_tag(doc.language)) violation("language", "'" + doc.language + "' is not a language tag");

    const std::size_t n_tokens = doc.body_tokens.size();
    std::size_t last_pos = 0;
    for (std::size_t i = 0; i < doc.formulae.size(); ++i) {
        const auto& f = doc.formulae[i];
        const std::string ctx = "formulae[" + std::to_string(i) + "]";
        if (!f.raw.empty() && f.tokens.empty()) violation(ctx + ".tokens", "empty although raw is nonempty");
        for (std::size_t k = 0; k < f.tokens.size(); ++k) {
            if (f.tokens[k].value.empty()) violation(ctx + ".tokens[" + std::to_string(k) + "]", "empty value");
        }
        if (f.position > n_tokens) violation(ctx + ".position", "beyond body token count");
        if (f.position < last_pos) violation(ctx + ".position", "positions must be nondecreasing");
        last_pos = f.position;
        if (f.tree) {
            try {
                formula::validate_tree(*f.tree);
            } catch (const MalformedTree& e) {
                violation(ctx + ".tree", e.detail());
            }
        }
    }
    for (std::size_t i = 0; i < doc.references.size(); ++i) {
        if (doc.references[i].raw.empty()) violation("references[" + std::to_string(i) + "].raw", "empty");
    }
    for (std::size_t i = 0; i < doc.citation_markers.size(); ++i) {
        const auto& c = doc.citation_markers[i];
        const std::string ctx = "citations[" + std::to_string(i) + "]";
        if (c.reference < 1 || c.reference > doc.references.size()) {
            violation(ctx + ".ref", "ordinal " + std::to_string(c.reference) + " but only " +
                                        std::to_string(doc.references.size()) + " references");
        }
        if (c.position > n_tokens) violation(ctx + ".position", "beyond body token count");
    }
}

void prepare(Document& doc) {
    doc.body_tokens = text::tokenize(doc.body_text);
    for (auto& f : doc.formulae) {
        if (!f.tree) f.tree = formula::parse_tokens(f.tokens);
    }
}

Document document_from_json(const json& j) {
    if (!j.is_object()) malformed("document", "expected JSON object");
    Document d;
    d.id = req_string(j, "id", "");
    d.title = req_string(j, "title", "");
    d.authors = string_array(j, "authors", "", true);
    d.journal = opt_nullable_string(j, "journal", "");
    d.series = opt_nullable_string(j, "series", "");
    d.publisher = opt_nullable_string(j, "publisher", "");
    d.keywords = string_array(j, "keywords", "", false);
    {
        const json* y = member(j, "year");
        if (!y) malformed("year", "missing required field");
        if (!y->is_number_integer()) malformed("year", "expected integer");
        const auto year = y->get<long long>();
        if (year < 1800 || year > 2100) violation("year", std::to_string(year) + " outside [1800, 2100]");
        d.publication_year = static_cast<int>(year);
    }
    d.language = req_string(j, "language", "");
    d.abstract_text = opt_string(j, "abstract", "");
    d.body_text = opt_string(j, "body", "");
    if (const json* m = member(j, "metadata")) {
        if (!m->is_object()) malformed("metadata", "expected object");
        d.metadata = *m;
    }

    const json& formulae = array_member(j, "formulae", "");
    for (std::size_t i = 0; i < formulae.size(); ++i) {
        const std::string ctx = "formulae[" + std::to_string(i) + "].";
        const json& fj = formulae[i];
        if (!fj.is_object()) malformed(ctx, "expected object");
        Formula f;
        f.raw = opt_string(fj, "raw", ctx);
        const json& toks = array_member(fj, "tokens", ctx);
        for (std::size_t k = 0; k < toks.size(); ++k) {
            const std::string tctx = ctx + "tokens[" + std::to_string(k) + "].";
            if (!toks[k].is_object()) malformed(tctx, "expected object");
            const std::string kind = req_string(toks[k], "kind", tctx);
            const auto parsed = math_token_kind_from_string(kind);
            if (!parsed) violation(tctx + "kind", "'" + kind + "' not in {identifier, number, operator, structural}");
            f.tokens.push_back(MathToken{*parsed, req_string(toks[k], "value", tctx)});
        }
        f.position = index_value(fj, "position", ctx);
        if (const json* t = member(fj, "tree")) {
            f.tree = tree_from_json(*t, ctx + "tree");
        } else {
            f.tree = formula::parse_tokens(f.tokens);
        }
        d.formulae.push_back(std::move(f));
    }

    const json& refs = array_member(j, "references", "");
    for (std::size_t i = 0; i < refs.size(); ++i) {
        const std::string ctx = "references[" + std::to_string(i) + "].";
        const json& rj = refs[i];
        if (!rj.is_object()) malformed(ctx, "expected object");
        std::string raw = req_string(rj, "raw", ctx);
        if (raw.empty()) violation(ctx + "raw", "empty");
        if (const json* nj = member(rj, "normalized")) {
            if (!nj->is_object()) malformed(ctx + "normalized", "expected object");
            NormalizedReference n;
            n.authors = string_array(*nj, "authors", ctx + "normalized.", false);
            n.title_tokens = string_array(*nj, "title_tokens", ctx + "normalized.", false);
            if (const json* y = member(*nj, "year")) {
                if (!y->is_number_integer()) malformed(ctx + "normalized.year", "expected integer");
                n.year = y->get<int>();
            }
            d.references.push_back(citesim::make_reference(std::move(raw), std::move(n)));
        } else {
            d.references.push_back(citesim::normalize_reference(raw));
        }
    }

    const json& cites = array_member(j, "citations", "");
    for (std::size_t i = 0; i < cites.size(); ++i) {
        const std::string ctx = "citations[" + std::to_string(i) + "].";
        if (!cites[i].is_object()) malformed(ctx, "expected object");
        CitationMarker c;
        c.position = index_value(cites[i], "position", ctx);
        c.reference = index_value(cites[i], "ref", ctx);
        d.citation_markers.push_back(c);
    }

    d.body_tokens = text::tokenize(d.body_text);
    validate(d);
    return d;
}

json document_to_json(const Document& doc) {
    json j;
    j["id"] = doc.id;
    j["title"] = doc.title;
    j["authors"] = doc.authors;
    if (doc.journal) j["journal"] = *doc.journal;
    if (doc.series) j["series"] = *doc.series;
    if (doc.publisher) j["publisher"] = *doc.publisher;
    if (!doc.keywords.empty()) j["keywords"] = doc.keywords;
    j["year"] = doc.publication_year;
    j["language"] = doc.language;
    j["abstract"] = doc.abstract_text;
    j["body"] = doc.body_text;
    json formulae = json::array();
    for (const auto& f : doc.formulae) {
        json toks = json::array();
        for (const auto& t : f.tokens) toks.push_back({{"kind", to_string(t.kind)}, {"value", t.value}});
        json fj = {{"raw", f.raw}, {"tokens", std::move(toks)}, {"position", f.position}};
        if (f.tree) fj["tree"] = tree_to_json(*f.tree);
        formulae.push_back(std::move(fj));
    }
    j["formulae"] = std::move(formulae);
    json refs = json::array();
    for (const auto& r : doc.references) {
        json n = {{"authors", r.normalized.authors}, {"title_tokens", r.normalized.title_tokens}};
        if (r.normalized.year) n["year"] = *r.normalized.year;
        refs.push_back({{"raw", r.raw}, {"normalized", std::move(n)}});
    }
    j["references"] = std::move(refs);
    json cites = json::array();
    for (const auto& c : doc.citation_markers) cites.push_back({{"position", c.position}, {"ref", c.reference}});
    j["citations"] = std::move(cites);
    if (!doc.metadata.empty()) j["metadata"] = doc.metadata;
    return j;
}

Document load_document(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw MalformedInput(path.string() + ": cannot open file");
    try {
        const json j = json::parse(in);
        return document_from_json(j);
    } catch (...) {
        rethrow_with_context(path.string());
    }
    throw MalformedInput(path.string());  // unreachable
}

void save_document(const Document& doc, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw StorageUnavailable(path.string());
    out << document_to_json(doc).dump(2) << '\n';
}

Corpus load_corpus(const std::filesystem::path& dir) {
    if (!std::filesystem::is_directory(dir)) throw MalformedInput(dir.string() + ": not a directory");
    std::vector<std::filesystem::path> files;
    for (const auto& entry : std::filesystem::directory_iterator(dir)) {
        if (!entry.is_regular_file()) continue;
        const auto& p = entry.path();
        if (p.extension() != ".json" || p.filename() == "manifest.json") continue;
        files.push_back(p);
    }
    std::sort(files.begin(), files.end());
    std::vector<Document> docs;
    docs.reserve(files.size());
    for (const auto& f : files) docs.push_back(load_document(f));
    return Corpus(std::move(docs));
}

std::vector<CaseManifest> manifest_from_json(const json& j, const Corpus& corpus) {
    if (!j.is_array()) malformed("manifest", "expected array");
    std::vector<CaseManifest> out;
    for (std::size_t i = 0; i < j.size(); ++i) {
        const std::string ctx = "manifest[" + std::to_string(i) + "].";
        const json& cj = j[i];
        if (!cj.is_object()) malformed(ctx, "expected object");
        CaseManifest c;
        const json* id = member(cj, "case");
        if (!id || !id->is_number_integer()) malformed(ctx + "case", "expected integer");
        c.case_id = id->get<int>();
        c.later_doc = req_string(cj, "later", ctx);
        c.earlier_docs = string_array(cj, "earlier", ctx, true);
        const std::string label = req_string(cj, "label", ctx);
        const auto parsed = case_label_from_string(label);
        if (!parsed) malformed(ctx + "label", "unknown label '" + label + "'");
        c.label = *parsed;
        c.notes = opt_string(cj, "notes", ctx);

        for (const auto& e : c.earlier_docs) {
            if (e == c.later_doc) violation(ctx + "earlier", "later document '" + e + "' listed as its own source");
        }
        if (!corpus.find(c.later_doc)) throw UnresolvedDocument(ctx + "later: '" + c.later_doc + "'");
        for (const auto& e : c.earlier_docs) {
            if (e.starts_with("ext:")) continue;
            if (!corpus.find(e)) throw UnresolvedDocument(ctx + "earlier: '" + e + "'");
        }
        out.push_back(std::move(c));
    }
    return out;
}

json manifest_to_json(const std::vector<CaseManifest>& cases) {
    json out = json::array();
    for (const auto& c : cases) {
        out.push_back({{"case", c.case_id},
                       {"later", c.later_doc},
                       {"earlier", c.earlier_docs},
                       {"label", to_string(c.label)},
                       {"notes", c.notes}});
    }
    return out;
}

std::vector<CaseManifest> load_manifest(const std::filesystem::path& path, const Corpus& corpus) {
    std::ifstream in(path);
    if (!in) throw MalformedInput(path.string() + ": cannot open file");
    json j;
    try {
        j = json::parse(in);
    } catch (const json::exception& e) {
        throw MalformedInput(path.string() + ": " + e.what());
    }
    return manifest_from_json(j, corpus);
}

StatsSummary corpus_stats(const std::vector<Document>& docs) {
    if (docs.empty()) throw EmptyCorpus("corpus_stats needs at least one document");
    StatsSummary s;
    s.documents = docs.size();
    for (const auto& d : docs) {
        if (d.journal) {
            const std::string j = text::fold(text::trim(*d.journal));
            if (!j.empty()) {
                ++s.journals.counts[j];
                ++s.with_journal;
            }
        }
        std::set<std::string> seen;
        for (const auto& a : d.authors) {
            const std::string key = text::fold(text::trim(a));
            if (!key.empty() && seen.insert(key).second) ++s.authors.counts[key];
        }
        ++s.years[d.publication_year];
    }
    return s;
}

json stats_to_json(const StatsSummary& stats) {
    const auto table = [](const FrequencyTable& t) {
        json rf = json::array();
        for (const auto& [rank, freq] : t.rank_frequency()) rf.push_back({rank, freq});
        json coc = json::object();
        for (const auto& [freq, n] : t.count_of_counts()) coc[std::to_string(freq)] = n;
        return json{{"distinct", t.counts.size()},
                    {"total", t.total()},
                    {"counts", t.counts},
                    {"rank_frequency", std::move(rf)},
                    {"count_of_counts", std::move(coc)}};
    };
    json years = json::object();
    for (const auto& [y, n] : stats.years) years[std::to_string(y)] = n;
    return json{{"documents", stats.documents},
                {"with_journal", stats.with_journal},
                {"journals", table(stats.journals)},
                {"authors", table(stats.authors)},
                {"years", std::move(years)}};
}

}  // namespace corpus
}  // namespace mathdup

#include "mathdup/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <random>
#include <set>
#include <unordered_set>

#include "mathdup/error.hpp"
#include "mathdup/formula.hpp"

namespace mathdup::synth {
namespace {

using Rng = std::mt19937_64;

std::size_t uniform(Rng& rng, std::size_t lo, std::size_t hi) {  // inclusive
    return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

bool coin(Rng& rng, double p) { return std::bernoulli_distribution(p)(rng); }

std::string padded(std::size_t v, int width) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%0*zu", width, v);
    return buf;
}

// Pronounceable lowercase pseudo-words, unique, none from `avoid`.
std::vector<std::string> pseudo_words(Rng& rng, std::size_t n, const std::vector<std::string>& onsets,
                                      const std::vector<std::string>& nuclei,
                                      const std::unordered_set<std::string>& avoid = {}) {
    std::vector<std::string> out;
    std::unordered_set<std::string> seen;
    while (out.size() < n) {
        std::string w;
        const std::size_t syll = uniform(rng, 1, 4);
        for (std::size_t s = 0; s < syll; ++s) {
            w += onsets[uniform(rng, 0, onsets.size() - 1)];
            w += nuclei[uniform(rng, 0, nuclei.size() - 1)];
        }
        if (w.size() < 3 || avoid.contains(w) || !seen.insert(w).second) continue;
        out.push_back(std::move(w));
    }
    return out;
}

class Zipf {
public:
    Zipf(std::size_t n, double s) {
        std::vector<double> w(n);
        for (std::size_t r = 0; r < n; ++r) w[r] = 1.0 / std::pow(static_cast<double>(r + 1), s);
        dist_ = std::discrete_distribution<std::size_t>(w.begin(), w.end());
    }
    std::size_t operator()(Rng& rng) { return dist_(rng); }

private:
    std::discrete_distribution<std::size_t> dist_;
};

std::string capitalize(std::string w) {
    if (!w.empty() && w[0] >= 'a' && w[0] <= 'z') w[0] = static_cast<char>(w[0] - 'a' + 'A');
    return w;
}

struct Publication {
    std::vector<std::string> authors;  // "I. Surname"
    std::string title;
    std::string journal;
    int volume = 1;
    int year = 2000;
    int first_page = 1;
};

std::string format_reference(const Publication& p, bool translated) {
    std::string out;
    for (std::size_t i = 0; i < p.authors.size(); ++i) {
        if (i > 0) out += translated ? " und " : ", ";
        out += p.authors[i];
    }
    out += ", " + p.title + ", ";
    if (translated) {
        out += p.journal + " " + std::to_string(p.volume) + ", " + std::to_string(p.first_page) + " (" +
               std::to_string(p.year) + ").";
    } else {
        out += p.journal + " " + std::to_string(p.volume) + " (" + std::to_string(p.year) + "), " +
               std::to_string(p.first_page) + "-" + std::to_string(p.first_page + 20) + ".";
    }
    return out;
}

// Words joined into sentences; one token per word.
std::string render_body(const std::vector<std::string>& words, Rng& rng) {
    std::string out;
    std::size_t until_stop = uniform(rng, 8, 16);
    for (std::size_t i = 0; i < words.size(); ++i) {
        if (i > 0) out.push_back(' ');
        out += words[i];
        if (--until_stop == 0 || i + 1 == words.size()) {
            out.push_back('.');
            until_stop = uniform(rng, 8, 16);
        }
    }
    return out;
}

struct Draft {
    std::string id;
    std::string title;
    std::vector<std::string> authors;
    std::string journal;
    int year = 2000;
    std::string language = "en";
    std::vector<std::string> abstract_words;
    std::vector<std::string> words;
    std::vector<FormulaTree> trees;
    std::vector<std::size_t> refs;           // publication indices
    std::vector<std::size_t> cite_sequence;  // 0-based ordinals into refs, in reading order
    bool translated_refs = false;
};

class Generator {
public:
    explicit Generator(std::uint64_t seed) : rng_(seed), zipf_en_(5000, 0.9), zipf_de_(3000, 0.9), zipf_ref_(3000, 0.7) {
        const std::vector<std::string> on_en = {"b", "d", "f", "g", "k", "l", "m", "n", "p", "r", "s", "t", "v", "z",
                                                "br", "tr", "st", "pl", "gr"};
        const std::vector<std::string> nu_en = {"a", "e", "i", "o", "u", "ar", "en", "ol"};
        en_ = pseudo_words(rng_, 5000, on_en, nu_en);
        const std::unordered_set<std::string> avoid(en_.begin(), en_.end());
        const std::vector<std::string> on_de = {"sch", "ch", "w", "h", "k", "b", "g", "pf", "z", "st", "kn"};
        const std::vector<std::string> nu_de = {"ei", "ie", "au", "eu", "u", "a", "o", "en", "er"};
        de_ = pseudo_words(rng_, 3000, on_de, nu_de, avoid);

        surnames_ = pseudo_words(rng_, 1500, on_en, nu_en, avoid);
        for (auto& s : surnames_) s = capitalize(s);
        for (std::size_t i = 0; i < 60; ++i) {
            journals_.push_back("J. " + capitalize(en_[100 + 7 * i]) + " " + capitalize(en_[101 + 7 * i]));
        }
        for (char c = 'a'; c <= 'z'; ++c) identifiers_.emplace_back(1, c);
        for (char c = 'A'; c <= 'Z'; ++c) identifiers_.emplace_back(1, c);
        for (const char* g : {"\\alpha", "\\beta", "\\gamma", "\\delta", "\\epsilon", "\\zeta", "\\eta", "\\theta",
                              "\\iota", "\\kappa", "\\lambda", "\\mu", "\\nu", "\\xi", "\\pi", "\\rho", "\\sigma",
                              "\\tau", "\\phi", "\\chi", "\\psi", "\\omega", "\\Gamma", "\\Omega"}) {
            identifiers_.emplace_back(g);
        }
        while (identifiers_.size() < 150) {
            identifiers_.push_back(std::string(1, static_cast<char>('a' + identifiers_.size() % 26)) +
                                   std::to_string(identifiers_.size() / 26));
        }
        for (std::size_t i = 0; i < 3000; ++i) pubs_.push_back(make_publication());
    }

    Rng& rng() { return rng_; }

    Draft base(int year) {
        Draft d;
        d.year = year;
        d.title = capitalize(join(sample_words(uniform(rng_, 4, 8), false)));
        const std::size_t na = uniform(rng_, 1, 3);
        for (std::size_t i = 0; i < na; ++i) d.authors.push_back(person());
        d.journal = journals_[uniform(rng_, 0, journals_.size() - 1)];
        d.abstract_words = sample_words(uniform(rng_, 30, 60), false);
        d.words = sample_words(uniform(rng_, 250, 400), false);
        d.trees = random_formulae();
        d.refs = random_refs(uniform(rng_, 8, 20));
        d.cite_sequence = random_citations(d.refs.size());
        return d;
    }

    std::vector<std::string> sample_words(std::size_t n, bool german) {
        std::vector<std::string> out;
        out.reserve(n);
        for (std::size_t i = 0; i < n; ++i) out.push_back(german ? de_[zipf_de_(rng_)] : en_[zipf_en_(rng_)]);
        return out;
    }

    std::vector<FormulaTree> random_formulae() {
        std::vector<std::string> ids = identifiers_;
        std::shuffle(ids.begin(), ids.end(), rng_);
        ids.resize(uniform(rng_, 6, 10));
        std::vector<FormulaTree> out;
        const std::size_t n = uniform(rng_, 4, 8);
        for (std::size_t i = 0; i < n; ++i) {
            FormulaTree t = random_tree(ids, 3);
            if (coin(rng_, 0.6)) t = FormulaNode::apply("=", {FormulaNode::identifier(ids[uniform(rng_, 0, ids.size() - 1)]), std::move(t)});
            out.push_back(std::move(t));
        }
        return out;
    }

    std::vector<std::size_t> random_refs(std::size_t n) {
        std::vector<std::size_t> out;
        std::set<std::size_t> seen;
        while (out.size() < n) {
            const std::size_t r = zipf_ref_(rng_);
            if (seen.insert(r).second) out.push_back(r);
        }
        return out;
    }

    std::vector<std::size_t> random_citations(std::size_t nrefs) {
        std::vector<std::size_t> seq;
        for (std::size_t r = 0; r < nrefs; ++r) {
            seq.push_back(r);
            if (coin(rng_, 0.3)) seq.push_back(r);
        }
        std::shuffle(seq.begin(), seq.end(), rng_);
        return seq;
    }

    Document finish(const Draft& d) {
        Document doc;
        doc.id = d.id;
        doc.title = d.title;
        doc.authors = d.authors;
        doc.journal = d.journal;
        doc.publication_year = d.year;
        doc.language = d.language;
        doc.abstract_text = render_body(d.abstract_words, rng_);
        doc.body_text = render_body(d.words, rng_);
        const std::size_t ntok = d.words.size();

        std::vector<std::size_t> fpos;
        for (std::size_t i = 0; i < d.trees.size(); ++i) fpos.push_back(uniform(rng_, 0, ntok));
        std::sort(fpos.begin(), fpos.end());
        for (std::size_t i = 0; i < d.trees.size(); ++i) {
            Formula f;
            f.tokens = formula::render_tokens(d.trees[i]);
            f.raw = formula::render_raw(f.tokens);
            f.position = fpos[i];
            doc.formulae.push_back(std::move(f));
        }
        for (std::size_t i = 0; i < d.refs.size(); ++i) {
            const std::string raw =
                "[" + std::to_string(i + 1) + "] " + format_reference(pubs_[d.refs[i]], d.translated_refs);
            doc.references.push_back(citesim::normalize_reference(raw));
        }
        std::vector<std::size_t> cpos;
        for (std::size_t i = 0; i < d.cite_sequence.size(); ++i) cpos.push_back(uniform(rng_, 0, ntok));
        std::sort(cpos.begin(), cpos.end());
        for (std::size_t i = 0; i < d.cite_sequence.size(); ++i) {
            doc.citation_markers.push_back({cpos[i], d.cite_sequence[i] + 1});
        }
        corpus::prepare(doc);
        return doc;
    }

private:
    static std::string join(const std::vector<std::string>& w) {
        std::string out;
        for (const auto& s : w) {
            if (!out.empty()) out.push_back(' ');
            out += s;
        }
        return out;
    }

    std::string person() {
        const char initial = static_cast<char>('A' + uniform(rng_, 0, 25));
        return std::string(1, initial) + ". " + surnames_[uniform(rng_, 0, surnames_.size() - 1)];
    }

    Publication make_publication() {
        Publication p;
        const std::size_t na = uniform(rng_, 1, 3);
        for (std::size_t i = 0; i < na; ++i) p.authors.push_back(person());
        p.title = capitalize(join(sample_words(uniform(rng_, 4, 8), false)));
        p.journal = journals_[uniform(rng_, 0, journals_.size() - 1)];
        p.volume = static_cast<int>(uniform(rng_, 1, 90));
        p.year = static_cast<int>(uniform(rng_, 1950, 2015));
        p.first_page = static_cast<int>(uniform(rng_, 1, 900));
        return p;
    }

    FormulaTree random_tree(const std::vector<std::string>& ids, int depth) {
        if (depth == 0 || coin(rng_, 0.3)) {
            if (coin(rng_, 0.85)) return FormulaNode::identifier(ids[uniform(rng_, 0, ids.size() - 1)]);
            return FormulaNode::number(std::to_string(uniform(rng_, 1, 9)));
        }
        static const char* ops[] = {"+", "-", "*", "/", "^"};
        const std::string op = ops[uniform(rng_, 0, 4)];
        if (op == "^") {
            return FormulaNode::apply(op, {FormulaNode::identifier(ids[uniform(rng_, 0, ids.size() - 1)]),
                                           FormulaNode::number(std::to_string(uniform(rng_, 2, 4)))});
        }
        return FormulaNode::apply(op, {random_tree(ids, depth - 1), random_tree(ids, depth - 1)});
    }

    Rng rng_;
    Zipf zipf_en_;
    Zipf zipf_de_;
    Zipf zipf_ref_;
    std::vector<std::string> en_;
    std::vector<std::string> de_;
    std::vector<std::string> surnames_;
    std::vector<std::string> journals_;
    std::vector<std::string> identifiers_;
    std::vector<Publication> pubs_;
};

// Swaps operands of some commutative nodes: same formula, new presentation.
FormulaTree commute(FormulaTree t, Rng& rng) {
    for (auto& c : t.children) c = commute(std::move(c), rng);
    if (t.kind == FormulaNodeKind::apply && (t.value == "+" || t.value == "*" || t.value == "=") && coin(rng, 0.5)) {
        std::reverse(t.children.begin(), t.children.end());
    }
    return t;
}

Draft reuse_of(Generator& g, const Draft& src, PlantKind kind) {
    auto& rng = g.rng();
    Draft d = g.base(src.year + static_cast<int>(uniform(rng, 1, 6)));
    switch (kind) {
        case PlantKind::verbatim: {
            d.words = src.words;
            for (auto& w : d.words) {
                if (coin(rng, 0.03)) w = g.sample_words(1, false)[0];
            }
            const auto intro = g.sample_words(uniform(rng, 20, 40), false);
            d.words.insert(d.words.begin(), intro.begin(), intro.end());
            d.trees = src.trees;
            d.refs = src.refs;
            d.cite_sequence = src.cite_sequence;
            break;
        }
        case PlantKind::formula_only: {
            d.trees.clear();
            for (const auto& t : src.trees) d.trees.push_back(coin(rng, 0.5) ? commute(t, rng) : t);
            break;
        }
        case PlantKind::citation_order: {
            d.language = "de";
            d.words = g.sample_words(src.words.size(), true);
            d.abstract_words = g.sample_words(d.abstract_words.size(), true);
            d.refs = src.refs;
            d.cite_sequence = src.cite_sequence;
            d.translated_refs = true;
            break;
        }
        case PlantKind::near_threshold: {
            // A few copied passages and a handful of shared references.
            const std::size_t passages = 5;
            for (std::size_t p = 0; p < passages; ++p) {
                const std::size_t len = uniform(rng, 18, 26);
                const std::size_t from = uniform(rng, 0, src.words.size() - len);
                const std::size_t to = uniform(rng, 0, d.words.size());
                d.words.insert(d.words.begin() + static_cast<std::ptrdiff_t>(to),
                               src.words.begin() + static_cast<std::ptrdiff_t>(from),
                               src.words.begin() + static_cast<std::ptrdiff_t>(from + len));
            }
            const std::size_t shared = std::max<std::size_t>(2, src.refs.size() / 5);
            for (std::size_t i = 0; i < shared && i < d.refs.size(); ++i) d.refs[i] = src.refs[i];
            std::sort(d.refs.begin(), d.refs.end());
            d.refs.erase(std::unique(d.refs.begin(), d.refs.end()), d.refs.end());
            d.cite_sequence = g.random_citations(d.refs.size());
            break;
        }
    }
    return d;
}

}  // namespace

std::string_view to_string(PlantKind k) {
    switch (k) {
        case PlantKind::verbatim: return "verbatim";
        case PlantKind::formula_only: return "formula_only";
        case PlantKind::citation_order: return "citation_order";
        case PlantKind::near_threshold: return "near_threshold";
    }
    return "verbatim";
}

Benchmark make_benchmark(const BenchmarkOptions& opts) {
    std::vector<PlantKind> kinds;
    kinds.insert(kinds.end(), opts.verbatim, PlantKind::verbatim);
    kinds.insert(kinds.end(), opts.formula_only, PlantKind::formula_only);
    kinds.insert(kinds.end(), opts.citation_order, PlantKind::citation_order);
    kinds.insert(kinds.end(), opts.near_threshold, PlantKind::near_threshold);
    if (opts.documents < 2 * kinds.size()) throw InvariantViolation("benchmark: too few documents for the planted pairs");

    Generator g(opts.seed);
    auto& rng = g.rng();
    std::vector<Draft> drafts;
    const std::size_t background = opts.documents - kinds.size();
    for (std::size_t i = 0; i < background; ++i) {
        drafts.push_back(g.base(static_cast<int>(uniform(rng, 1990, 2012))));
        if (coin(rng, 0.08)) {
            auto& d = drafts.back();
            d.language = "de";
            d.words = g.sample_words(d.words.size(), true);
            d.abstract_words = g.sample_words(d.abstract_words.size(), true);
            d.translated_refs = true;
        }
    }

    // Sources are drawn from the background documents.
    std::vector<std::size_t> order(background);
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), rng);
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    for (std::size_t i = 0; i < kinds.size(); ++i) {
        const std::size_t src = order[i];
        drafts.push_back(reuse_of(g, drafts[src], kinds[i]));
        pairs.emplace_back(src, drafts.size() - 1);
    }

    std::vector<std::size_t> numbers(drafts.size());
    std::iota(numbers.begin(), numbers.end(), 1);
    std::shuffle(numbers.begin(), numbers.end(), rng);
    for (std::size_t i = 0; i < drafts.size(); ++i) drafts[i].id = "syn-" + padded(numbers[i], 4);

    Benchmark b;
    for (const auto& d : drafts) b.documents.push_back(g.finish(d));
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        const auto& src = drafts[pairs[i].first].id;
        const auto& reuse = drafts[pairs[i].second].id;
        b.planted.push_back({kinds[i], src, reuse});
        b.queries.push_back({reuse, {src}});
    }
    std::sort(b.documents.begin(), b.documents.end(), [](const Document& x, const Document& y) { return x.id < y.id; });
    return b;
}

std::vector<Document> tally_fixture() {
    // Journal multiplicities: 2 x 6, 5 x 3, 18 x 2, 76 x 1 = 139 articles.
    std::vector<std::size_t> journal_sizes;
    journal_sizes.insert(journal_sizes.end(), 2, 6);
    journal_sizes.insert(journal_sizes.end(), 5, 3);
    journal_sizes.insert(journal_sizes.end(), 18, 2);
    journal_sizes.insert(journal_sizes.end(), 76, 1);
    std::vector<std::string> journal_slots;
    for (std::size_t j = 0; j < journal_sizes.size(); ++j) {
        journal_slots.insert(journal_slots.end(), journal_sizes[j], "Journal of Topic " + padded(j + 1, 3));
    }
    // Author multiplicities: 1 x 6, 41 x 2, 173 x 1 = 215 authors.
    std::vector<std::size_t> author_sizes;
    author_sizes.push_back(6);
    author_sizes.insert(author_sizes.end(), 41, 2);
    author_sizes.insert(author_sizes.end(), 173, 1);
    std::vector<std::string> author_slots;
    for (std::size_t a = 0; a < author_sizes.size(); ++a) {
        author_slots.insert(author_slots.end(), author_sizes[a], "Writer" + padded(a + 1, 3) + ", A.");
    }

    constexpr std::size_t kDocs = 149;
    std::vector<Document> docs(kDocs);
    for (std::size_t i = 0; i < kDocs; ++i) {
        auto& d = docs[i];
        d.id = "case-" + padded(i + 1, 3);
        d.title = "Case " + std::to_string(i + 1);
        d.publication_year = 2007 + static_cast<int>(i % 12);
        d.language = "en";
        d.abstract_text = "Editorial remark on case " + std::to_string(i + 1) + ".";
        d.body_text = "Full text unavailable.";
        if (i < journal_slots.size()) d.journal = journal_slots[i];
    }
    // Slot k goes to document k mod 149, so repeats of one author land in
    // distinct documents.
    for (std::size_t k = 0; k < author_slots.size(); ++k) docs[k % kDocs].authors.push_back(author_slots[k]);
    for (auto& d : docs) corpus::prepare(d);
    return docs;
}

EditorialFixture editorial_fixture(std::uint64_t seed) {
    Rng rng(seed);
    EditorialFixture fx;
    std::set<std::string> used_ids;
    const std::set<std::string> excluded_ids = {"0584.10010", "0712.35001", "0597.14041", "1375.14126",
                                                "0156.05104", "1345.15011", "1262.11083", "1360.47003"};
    auto fresh_id = [&] {
        for (;;) {
            std::string id = padded(uniform(rng, 1000, 1399), 4) + "." + padded(uniform(rng, 0, 99999), 5);
            if (!excluded_ids.contains(id) && used_ids.insert(id).second) return id;
        }
    };
    const std::vector<std::string> remarks = {"editorial remark", "Editorial Remark", "editorial note"};
    const std::vector<std::string> reuse = {"very similar",  "high similarity", "overlap",     "plagiarized",
                                            "plagiarism",    "identical",       "substantial", "substantially",
                                            "essentially",   "Plagiarised"};
    const std::vector<std::string> filler = {"we",      "study",   "the",      "operator", "spectrum", "of",
                                             "a",       "compact", "manifold", "and",      "prove",    "bounds",
                                             "related", "results", "similar",  "high",     "note",     "remarks"};
    auto sentence = [&](std::size_t n) {
        std::string s;
        for (std::size_t i = 0; i < n; ++i) {
            if (!s.empty()) s.push_back(' ');
            s += filler[uniform(rng, 0, filler.size() - 1)];
        }
        return s;
    };
    auto pick = [&](const std::vector<std::string>& v) { return v[uniform(rng, 0, v.size() - 1)]; };

    // Matches the first three lines; callers then break one clause.
    auto matching = [&] {
        Document d;
        d.id = fresh_id();
        d.title = "On " + sentence(4);
        d.authors = {"Author, " + std::string(1, static_cast<char>('A' + uniform(rng, 0, 25))) + "."};
        d.journal = "Journal of " + sentence(2);
        d.publication_year = static_cast<int>(uniform(rng, 2007, 2018));
        d.language = "en";
        const bool reuse_in_abstract = coin(rng, 0.5);
        const std::string word = pick(reuse);
        d.abstract_text = sentence(6) + ". " + pick(remarks) + ": " + sentence(3) + (reuse_in_abstract ? " " + word : "") +
                          " " + sentence(3) + ".";
        d.body_text = sentence(20) + (reuse_in_abstract ? "" : " " + word + " ") + sentence(10) + ".";
        return d;
    };

    for (int i = 0; i < 6; ++i) {
        auto d = matching();
        fx.positives.push_back(d.id);
        fx.documents.push_back(std::move(d));
    }
    // Excluded by the final clause.
    {
        auto d = matching();
        d.journal = "IEEE Transactions on Information Theory";
        fx.documents.push_back(std::move(d));
    }
    for (const char* series : {"00000250", "00001661"}) {
        auto d = matching();
        d.series = series;
        fx.documents.push_back(std::move(d));
    }
    {
        auto d = matching();
        d.publisher = "AIP";
        fx.documents.push_back(std::move(d));
    }
    for (const char* id : {"0584.10010", "1360.47003"}) {
        auto d = matching();
        used_ids.erase(d.id);
        d.id = id;
        fx.documents.push_back(std::move(d));
    }
    // Each fails one of the first three lines.
    for (int year : {2006, 2019}) {
        auto d = matching();
        d.publication_year = year;
        fx.documents.push_back(std::move(d));
    }
    {
        auto d = matching();
        d.abstract_text = sentence(8) + " remark editorial " + sentence(4) + " essentially.";
        fx.documents.push_back(std::move(d));
    }
    {
        auto d = matching();
        d.abstract_text = sentence(8) + " identical.";
        d.body_text = "editorial remark " + sentence(10);
        fx.documents.push_back(std::move(d));
    }
    {
        auto d = matching();
        d.abstract_text = "editorial note " + sentence(8) + ".";
        d.body_text = sentence(10) + " very much similar, high degree of similarity, overlapping " + sentence(5) + ".";
        fx.documents.push_back(std::move(d));
    }
    {
        auto d = matching();
        d.series = "00000251";  // near miss, still a positive
        fx.positives.push_back(d.id);
        fx.documents.push_back(std::move(d));
    }
    std::shuffle(fx.documents.begin(), fx.documents.end(), rng);
    for (auto& d : fx.documents) corpus::prepare(d);
    std::sort(fx.positives.begin(), fx.positives.end());
    return fx;
}

void write_corpus(const std::vector<Document>& docs, const std::filesystem::path& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw StorageUnavailable(dir.string() + ": " + ec.message());
    for (const auto& d : docs) {
        std::string name = d.id;
        for (auto& c : name) {
            const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '-' ||
                            c == '_' || c == '.';
            if (!ok) c = '_';
        }
        corpus::save_document(d, dir / (name + ".json"));
    }
}

}  // namespace mathdup::synth

#include "support.hpp"

#include <algorithm>
#include <set>

#include <unistd.h>

#include "mathdup/text.hpp"

namespace mathdup::testing {

std::size_t pick(Rng& rng, std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng); }

std::vector<std::string> random_words(Rng& rng, std::size_t len, std::size_t vocab) {
    std::vector<std::string> out;
    out.reserve(len);
    for (std::size_t i = 0; i < len; ++i) out.push_back("w" + std::to_string(pick(rng, vocab)));
    return out;
}

std::string join(const std::vector<std::string>& words, const std::string& sep) {
    std::string out;
    for (std::size_t i = 0; i < words.size(); ++i) out += (i ? sep : "") + words[i];
    return out;
}

namespace {

std::set<std::string> grams(const std::vector<std::string>& w, std::size_t n) {
    std::set<std::string> out;
    for (std::size_t i = 0; i + n <= w.size(); ++i) {
        out.insert(join(std::vector<std::string>(w.begin() + i, w.begin() + i + n), "\x1f"));
    }
    return out;
}

bool is_subsequence(const std::vector<std::string>& small, const std::vector<std::string>& big) {
    std::size_t j = 0;
    for (const auto& x : big) {
        if (j < small.size() && small[j] == x) ++j;
    }
    return j == small.size();
}

}  // namespace

double ngram_jaccard_oracle(const std::vector<std::string>& a, const std::vector<std::string>& b, std::size_t n) {
    const auto ga = grams(a, n);
    const auto gb = grams(b, n);
    if (ga.empty() && gb.empty()) return 0.0;
    std::size_t inter = 0;
    for (const auto& g : ga) inter += gb.count(g);
    return static_cast<double>(inter) / static_cast<double>(ga.size() + gb.size() - inter);
}

std::size_t brute_lcs(const std::vector<std::string>& a, const std::vector<std::string>& b) {
    const auto& s = a.size() <= b.size() ? a : b;
    const auto& l = a.size() <= b.size() ? b : a;
    std::size_t best = 0;
    for (std::uint32_t mask = 0; mask < (1u << s.size()); ++mask) {
        const auto bits = static_cast<std::size_t>(__builtin_popcount(mask));
        if (bits <= best) continue;
        std::vector<std::string> sub;
        for (std::size_t i = 0; i < s.size(); ++i) {
            if (mask & (1u << i)) sub.push_back(s[i]);
        }
        if (is_subsequence(sub, l)) best = bits;
    }
    return best;
}

FormulaTree random_tree(Rng& rng, int depth) {
    static const char* ids[] = {"x", "y", "z", "a", "b", "n", "k"};
    static const char* nums[] = {"0", "1", "2", "3"};
    static const char* ops[] = {"+", "*", "-", "/", "^", "="};
    if (depth <= 0 || pick(rng, 4) == 0) {
        return pick(rng, 3) == 0 ? FormulaNode::number(nums[pick(rng, 4)]) : FormulaNode::identifier(ids[pick(rng, 7)]);
    }
    const std::string op = ops[pick(rng, 6)];
    std::size_t arity = 2;
    if (op == "+" || op == "*") arity = 2 + pick(rng, 2);
    std::vector<FormulaTree> kids;
    for (std::size_t i = 0; i < arity; ++i) kids.push_back(random_tree(rng, depth - 1));
    return FormulaNode::apply(op, std::move(kids));
}

Formula formula_of(const FormulaTree& tree, std::size_t position) {
    Formula f;
    f.tokens = formula::render_tokens(tree);
    f.raw = formula::render_raw(f.tokens);
    f.position = position;
    f.tree = tree;
    return f;
}

Formula formula_of_tokens(std::vector<MathToken> tokens, std::size_t position) {
    Formula f;
    f.raw = formula::render_raw(tokens);
    f.tokens = std::move(tokens);
    f.position = position;
    f.tree = formula::parse_tokens(formula::strip_presentation(f.tokens));
    return f;
}

Document make_doc(std::string id, int year, std::string body) {
    Document d;
    d.id = std::move(id);
    d.title = "Title of " + d.id;
    d.authors = {"A. Author"};
    d.publication_year = year;
    d.language = "en";
    d.body_text = std::move(body);
    corpus::prepare(d);
    return d;
}

// ---------------------------------------------------------------------------
// Queries

namespace {

const char* kQueryWords[] = {"alpha", "beta", "gamma", "delta", "remark", "note", "editorial", "overlap"};

QueryAst random_term(Rng& rng, const std::string& field) {
    if (field == "py") {
        const int lo = 2000 + static_cast<int>(pick(rng, 20));
        return QueryNode::years(lo, lo + static_cast<int>(pick(rng, 6)));
    }
    if (field == "an") return QueryNode::phrase("q" + std::to_string(pick(rng, 12)));
    const std::string w = kQueryWords[pick(rng, 8)];
    switch (pick(rng, 3)) {
        case 0: return QueryNode::wildcard(w.substr(0, 1 + pick(rng, w.size())) + "*");
        case 1: return QueryNode::phrase(w + " " + kQueryWords[pick(rng, 8)]);
        default: return QueryNode::phrase(w);
    }
}

QueryAst random_leaf(Rng& rng) {
    static const char* fields[] = {"py", "ab", "so", "se", "pu", "an", "all"};
    const std::string f = fields[pick(rng, 7)];
    return QueryNode::filter(f, random_term(rng, f));
}

std::vector<std::string> tokens_of(const std::string& s) { return text::normalized_tokens(s); }

// Whole-token containment on the space-joined token strings.
bool has_phrase(const std::vector<std::string>& field, const std::vector<std::string>& words, bool prefix) {
    if (words.empty()) return false;
    const std::string hay = " " + join(field) + " ";
    const std::string needle = " " + join(words) + (prefix ? "" : " ");
    return hay.find(needle) != std::string::npos;
}

std::vector<std::vector<std::string>> field_values(const std::string& field, const Document& d) {
    std::vector<std::vector<std::string>> out;
    auto add = [&](const std::string& s) { out.push_back(tokens_of(s)); };
    auto add_opt = [&](const std::optional<std::string>& s) {
        if (s) add(*s);
    };
    if (field == "ab") {
        add(d.abstract_text);
    } else if (field == "so") {
        add_opt(d.journal);
    } else if (field == "se") {
        add_opt(d.series);
    } else if (field == "pu") {
        add_opt(d.publisher);
    } else {
        add(d.title);
        for (const auto& a : d.authors) add(a);
        for (const auto& k : d.keywords) add(k);
        add_opt(d.journal);
        add_opt(d.series);
        add_opt(d.publisher);
        add(d.abstract_text);
        add(d.body_text);
        add(d.id);
    }
    return out;
}

bool leaf_matches(const std::string& field, const QueryAst& term, const Document& d) {
    if (term.kind == QueryNode::Kind::YearRange) {
        return (field == "py" || field == "all") && d.publication_year >= term.lo && d.publication_year <= term.hi;
    }
    if (field == "py") return false;
    const bool wild = term.kind == QueryNode::Kind::WildcardTerm;
    std::string pattern = term.text;
    if (wild) pattern.pop_back();
    if (field == "an") {
        const std::string id = text::fold(d.id);
        const std::string p = text::fold(text::trim(pattern));
        return wild ? id.rfind(p, 0) == 0 : id == p;
    }
    const auto words = tokens_of(pattern);
    for (const auto& v : field_values(field, d)) {
        if (has_phrase(v, words, wild)) return true;
    }
    return false;
}

}  // namespace

QueryAst random_query(Rng& rng, int depth) {
    if (depth <= 0 || pick(rng, 3) == 0) return random_leaf(rng);
    const std::size_t n = 2 + pick(rng, 2);
    std::vector<QueryAst> kids;
    if (pick(rng, 2) == 0) {
        for (std::size_t i = 0; i < n; ++i) {
            QueryAst c = random_query(rng, depth - 1);
            if (i > 0 && pick(rng, 3) == 0) c = QueryNode::not_of(std::move(c));
            kids.push_back(std::move(c));
        }
        return QueryNode::and_of(std::move(kids));
    }
    for (std::size_t i = 0; i < n; ++i) kids.push_back(random_query(rng, depth - 1));
    return QueryNode::or_of(std::move(kids));
}

Document random_query_doc(Rng& rng, std::size_t index) {
    auto words = [&](std::size_t n) {
        std::vector<std::string> w;
        for (std::size_t i = 0; i < n; ++i) w.push_back(kQueryWords[pick(rng, 8)]);
        return join(w);
    };
    Document d;
    d.id = "q" + std::to_string(index);
    d.title = words(3);
    d.authors = {words(1)};
    if (pick(rng, 4)) d.journal = words(2);
    if (pick(rng, 3) == 0) d.series = words(1);
    if (pick(rng, 3) == 0) d.publisher = words(1);
    if (pick(rng, 2)) d.keywords = {words(1)};
    d.publication_year = 2000 + static_cast<int>(pick(rng, 25));
    d.language = "en";
    d.abstract_text = words(6);
    d.body_text = words(4);
    corpus::prepare(d);
    return d;
}

bool query_matches(const QueryAst& q, const Document& d) {
    using K = QueryNode::Kind;
    switch (q.kind) {
        case K::And:
            return std::all_of(q.children.begin(), q.children.end(), [&](const QueryAst& c) { return query_matches(c, d); });
        case K::Or:
            return std::any_of(q.children.begin(), q.children.end(), [&](const QueryAst& c) { return query_matches(c, d); });
        case K::Not: return !query_matches(q.children.front(), d);
        case K::FieldFilter: return leaf_matches(q.field, q.children.front(), d);
        default: return leaf_matches("all", q, d);
    }
}

std::filesystem::path temp_dir(const std::string& tag) {
    static std::uint64_t counter = 0;
    const auto p = std::filesystem::temp_directory_path() /
                   ("mathdup-" + tag + "-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
    std::filesystem::remove_all(p);
    std::filesystem::create_directories(p);
    return p;
}

std::filesystem::path source_dir() { return MATHDUP_SOURCE_DIR; }
std::filesystem::path cli_path() { return MATHDUP_CLI_PATH; }

}  // namespace mathdup::testing

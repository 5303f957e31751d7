#include "mathdup/query.hpp"

#include <algorithm>
#include <cctype>
#include <optional>

#include "mathdup/error.hpp"
#include "mathdup/text.hpp"

namespace mathdup::query {
namespace {

enum class Tok { lparen, rparen, amp, bar, bang, phrase, word, field, end };

struct Lexeme {
    Tok kind;
    std::string text;
    std::size_t offset;
};

bool bare_char(char c) {
    return !std::isspace(static_cast<unsigned char>(c)) && c != '(' && c != ')' && c != '&' && c != '|' &&
           c != '!' && c != '"';
}

std::vector<Lexeme> lex(std::string_view s) {
    std::vector<Lexeme> out;
    std::size_t i = 0;
    while (i < s.size()) {
        const char c = s[i];
        if (std::isspace(static_cast<unsigned char>(c))) {
            ++i;
            continue;
        }
        switch (c) {
            case '(': out.push_back({Tok::lparen, "(", i++}); continue;
            case ')': out.push_back({Tok::rparen, ")", i++}); continue;
            case '&': out.push_back({Tok::amp, "&", i++}); continue;
            case '|': out.push_back({Tok::bar, "|", i++}); continue;
            case '!': out.push_back({Tok::bang, "!", i++}); continue;
            default: break;
        }
        if (c == '"') {
            const std::size_t close = s.find('"', i + 1);
            if (close == std::string_view::npos) throw ParseError(i, {"\""}, "unterminated phrase");
            out.push_back({Tok::phrase, std::string(s.substr(i + 1, close - i - 1)), i});
            i = close + 1;
            continue;
        }
        const std::size_t start = i;
        std::size_t j = i;
        while (j < s.size() && std::isalpha(static_cast<unsigned char>(s[j]))) ++j;
        if (j > i && j < s.size() && s[j] == ':') {
            out.push_back({Tok::field, text::fold(s.substr(i, j - i)), start});
            i = j + 1;
            continue;
        }
        while (i < s.size() && bare_char(s[i])) ++i;
        out.push_back({Tok::word, std::string(s.substr(start, i - start)), start});
    }
    out.push_back({Tok::end, "", s.size()});
    return out;
}

const std::vector<std::string> kOperandStart = {"term", "\"phrase\"", "field:", "("};

class Parser {
public:
    explicit Parser(std::string_view s) : lexemes_(lex(s)) {}

    QueryAst run() {
        auto ast = or_expr();
        if (peek().kind != Tok::end) {
            throw ParseError(peek().offset, {"&", "|", "!", "end of query"}, "unexpected '" + peek().text + "'");
        }
        return ast;
    }

private:
    const Lexeme& peek() const { return lexemes_[pos_]; }
    const Lexeme& take() { return lexemes_[pos_++]; }

    static bool starts_operand(Tok t) {
        return t == Tok::lparen || t == Tok::phrase || t == Tok::word || t == Tok::field;
    }

    QueryAst or_expr() {
        std::vector<QueryAst> parts;
        parts.push_back(and_expr());
        while (peek().kind == Tok::bar) {
            take();
            parts.push_back(and_expr());
        }
        if (parts.size() == 1) return std::move(parts.front());
        return QueryNode::or_of(std::move(parts));
    }

    QueryAst and_expr() {
        if (peek().kind == Tok::bang) {
            throw ParseError(peek().offset, kOperandStart, "'!' (and-not) needs a left operand");
        }
        std::vector<QueryAst> parts;
        parts.push_back(unary());
        for (;;) {
            const Tok t = peek().kind;
            if (t == Tok::amp) {
                take();
                if (peek().kind == Tok::bang) {
                    take();
                    parts.push_back(QueryNode::not_of(unary()));
                } else {
                    parts.push_back(unary());
                }
            } else if (t == Tok::bang) {
                take();
                parts.push_back(QueryNode::not_of(unary()));
            } else if (starts_operand(t)) {
                parts.push_back(unary());
            } else {
                break;
            }
        }
        if (parts.size() == 1) return std::move(parts.front());
        return QueryNode::and_of(std::move(parts));
    }

    QueryAst unary() {
        const Lexeme& l = peek();
        switch (l.kind) {
            case Tok::lparen: {
                take();
                auto inner = or_expr();
                if (peek().kind != Tok::rparen) throw ParseError(peek().offset, {")"}, "missing ')'");
                take();
                return inner;
            }
            case Tok::phrase:
            case Tok::word: return QueryNode::filter("all", term(take(), "all"));
            case Tok::field: {
                const std::string field = take().text;
                const Lexeme& v = peek();
                if (v.kind != Tok::word && v.kind != Tok::phrase) {
                    throw ParseError(v.offset, {"term", "\"phrase\""}, "field '" + field + ":' needs a value");
                }
                return QueryNode::filter(field, term(take(), field));
            }
            default:
                throw ParseError(l.offset, kOperandStart,
                                 l.kind == Tok::end ? "unexpected end of query" : "unexpected '" + l.text + "'");
        }
    }

    static std::optional<int> year_value(std::string_view s) {
        if (s.size() != 4 || !std::all_of(s.begin(), s.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); })) {
            return std::nullopt;
        }
        return std::stoi(std::string(s));
    }

    static QueryAst term(const Lexeme& l, const std::string& field) {
        if (field == "py") {
            if (l.kind != Tok::word) throw ParseError(l.offset, {"year", "year-year"}, "py: expects a year range");
            const auto dash = l.text.find('-');
            const auto lo = year_value(std::string_view(l.text).substr(0, dash));
            const auto hi = dash == std::string::npos ? lo : year_value(std::string_view(l.text).substr(dash + 1));
            if (!lo || !hi) throw ParseError(l.offset, {"year", "year-year"}, "malformed year range '" + l.text + "'");
            if (*lo > *hi) throw ParseError(l.offset, {"year-year"}, "year range is reversed");
            return QueryNode::years(*lo, *hi);
        }
        if (l.kind == Tok::phrase) {
            if (l.text.empty()) throw ParseError(l.offset, {"\"phrase\""}, "empty phrase");
            return QueryNode::phrase(l.text);
        }
        const auto star = l.text.find('*');
        if (star == std::string::npos) return QueryNode::phrase(l.text);
        if (star + 1 != l.text.size() || star == 0) {
            throw ParseError(l.offset + star, {"term"}, "'*' is only allowed once, at the end of a term");
        }
        return QueryNode::wildcard(l.text);
    }

    std::vector<Lexeme> lexemes_;
    std::size_t pos_ = 0;
};

bool composite(const QueryAst& n) {
    return n.kind == QueryNode::Kind::And || n.kind == QueryNode::Kind::Or;
}

std::string wrap(const QueryAst& n) {
    return composite(n) ? "(" + print_query(n) + ")" : print_query(n);
}

// ---------------------------------------------------------------------------
// Evaluation

struct DocFields {
    int year = 0;
    std::string folded_id;
    std::vector<std::vector<std::string>> abstract;
    std::vector<std::vector<std::string>> source;
    std::vector<std::vector<std::string>> series;
    std::vector<std::vector<std::string>> publisher;
    std::vector<std::vector<std::string>> all;
};

DocFields fields_of(const Document& d) {
    DocFields f;
    f.year = d.publication_year;
    f.folded_id = text::fold(d.id);
    f.abstract.push_back(text::normalized_tokens(d.abstract_text));
    if (d.journal) f.source.push_back(text::normalized_tokens(*d.journal));
    if (d.series) f.series.push_back(text::normalized_tokens(*d.series));
    if (d.publisher) f.publisher.push_back(text::normalized_tokens(*d.publisher));
    f.all.push_back(text::normalized_tokens(d.title));
    for (const auto& a : d.authors) f.all.push_back(text::normalized_tokens(a));
    for (const auto& k : d.keywords) f.all.push_back(text::normalized_tokens(k));
    f.all.insert(f.all.end(), f.source.begin(), f.source.end());
    f.all.insert(f.all.end(), f.series.begin(), f.series.end());
    f.all.insert(f.all.end(), f.publisher.begin(), f.publisher.end());
    f.all.push_back(f.abstract.front());
    f.all.push_back(text::normalized_tokens(d.body_text));
    f.all.push_back(text::normalized_tokens(d.id));
    return f;
}

// Contiguous match of words; when prefix_last is set the final word only
// needs to be a prefix of the field token.
bool contains_sequence(const std::vector<std::string>& hay, const std::vector<std::string>& words, bool prefix_last) {
    if (words.empty() || words.size() > hay.size()) return false;
    for (std::size_t i = 0; i + words.size() <= hay.size(); ++i) {
        bool ok = true;
        for (std::size_t k = 0; k < words.size() && ok; ++k) {
            const bool last = k + 1 == words.size();
            ok = (last && prefix_last) ? hay[i + k].starts_with(words[k]) : hay[i + k] == words[k];
        }
        if (ok) return true;
    }
    return false;
}

using Bitmap = std::vector<char>;

class Evaluator {
public:
    explicit Evaluator(const Corpus& corpus) {
        fields_.reserve(corpus.size());
        for (const auto& d : corpus.documents()) fields_.push_back(fields_of(d));
    }

    Bitmap eval(const QueryAst& n) const {
        const std::size_t N = fields_.size();
        switch (n.kind) {
            case QueryNode::Kind::And: {
                Bitmap acc(N, 1);
                bool any_positive = false;
                for (const auto& c : n.children) {
                    if (c.kind == QueryNode::Kind::Not) continue;
                    any_positive = true;
                    const Bitmap b = eval(c);
                    for (std::size_t i = 0; i < N; ++i) acc[i] = acc[i] && b[i];
                }
                if (!any_positive) acc.assign(N, 1);
                for (const auto& c : n.children) {
                    if (c.kind != QueryNode::Kind::Not) continue;
                    const Bitmap b = eval(c.children.front());
                    for (std::size_t i = 0; i < N; ++i) acc[i] = acc[i] && !b[i];
                }
                return acc;
            }
            case QueryNode::Kind::Or: {
                Bitmap acc(N, 0);
                for (const auto& c : n.children) {
                    const Bitmap b = eval(c);
                    for (std::size_t i = 0; i < N; ++i) acc[i] = acc[i] || b[i];
                }
                return acc;
            }
            case QueryNode::Kind::Not: {
                // Outside a conjunction the left operand is the whole corpus.
                Bitmap b = eval(n.children.front());
                for (auto& x : b) x = !x;
                return b;
            }
            case QueryNode::Kind::FieldFilter: {
                Bitmap out(N, 0);
                for (std::size_t i = 0; i < N; ++i) out[i] = leaf(n.field, n.children.front(), fields_[i]);
                return out;
            }
            default:
                // Bare term outside a filter searches every field.
                return eval(QueryNode::filter("all", n));
        }
    }

private:
    static bool leaf(const std::string& field, const QueryAst& term, const DocFields& f) {
        using K = QueryNode::Kind;
        if (term.kind == K::YearRange) {
            if (field != "py" && field != "all") return false;
            return f.year >= term.lo && f.year <= term.hi;
        }
        if (field == "py") return false;
        const bool wildcard = term.kind == K::WildcardTerm;
        const std::string pattern = wildcard ? term.text.substr(0, term.text.size() - 1) : term.text;
        if (field == "an") {
            const std::string p = text::fold(text::trim(pattern));
            return wildcard ? f.folded_id.starts_with(p) : f.folded_id == p;
        }
        const auto words = text::normalized_tokens(pattern);
        const std::vector<std::vector<std::string>>* hay = nullptr;
        if (field == "ab") hay = &f.abstract;
        else if (field == "so") hay = &f.source;
        else if (field == "se") hay = &f.series;
        else if (field == "pu") hay = &f.publisher;
        else hay = &f.all;
        for (const auto& h : *hay) {
            if (contains_sequence(h, words, wildcard)) return true;
        }
        return false;
    }

    std::vector<DocFields> fields_;
};

void check_fields(const QueryAst& n) {
    if (n.kind == QueryNode::Kind::FieldFilter &&
        std::find(std::begin(kFields), std::end(kFields), n.field) == std::end(kFields)) {
        throw UnsupportedField("'" + n.field + "'");
    }
    for (const auto& c : n.children) check_fields(c);
}

}  // namespace

QueryAst parse_query(std::string_view text) {
    if (text::trim(text).empty()) throw ParseError(0, kOperandStart, "empty query");
    return Parser(text).run();
}

std::string print_query(const QueryAst& n) {
    using K = QueryNode::Kind;
    switch (n.kind) {
        case K::And: {
            std::string out;
            for (std::size_t i = 0; i < n.children.size(); ++i) {
                const auto& c = n.children[i];
                if (c.kind == K::Not) {
                    out += (i ? " " : "") + print_query(c);
                } else {
                    out += (i ? " & " : "") + wrap(c);
                }
            }
            return out;
        }
        case K::Or: {
            std::string out;
            for (std::size_t i = 0; i < n.children.size(); ++i) out += (i ? " | " : "") + wrap(n.children[i]);
            return out;
        }
        case K::Not: return "!(" + print_query(n.children.front()) + ")";
        case K::FieldFilter: {
            const std::string term = print_query(n.children.front());
            return n.field == "all" ? term : n.field + ":" + term;
        }
        case K::PhraseTerm: return "\"" + n.text + "\"";
        case K::WildcardTerm: return n.text;
        case K::YearRange:
            return n.lo == n.hi ? std::to_string(n.lo) : std::to_string(n.lo) + "-" + std::to_string(n.hi);
    }
    return {};
}

void validate_query(const QueryAst& n) {
    using K = QueryNode::Kind;
    switch (n.kind) {
        case K::And:
        case K::Or:
            if (n.children.size() < 2) throw InvariantViolation("And/Or needs at least two children");
            break;
        case K::Not:
            if (n.children.size() != 1) throw InvariantViolation("Not needs exactly one child");
            break;
        case K::FieldFilter:
            if (n.children.size() != 1) throw InvariantViolation("FieldFilter needs exactly one term");
            break;
        case K::YearRange:
            if (n.lo > n.hi) throw InvariantViolation("YearRange lo > hi");
            break;
        case K::WildcardTerm:
            if (n.text.size() < 2 || n.text.back() != '*' ||
                std::count(n.text.begin(), n.text.end(), '*') != 1) {
                throw InvariantViolation("WildcardTerm must end in exactly one '*'");
            }
            break;
        case K::PhraseTerm:
            if (n.text.empty()) throw InvariantViolation("empty PhraseTerm");
            break;
    }
    for (const auto& c : n.children) validate_query(c);
}

std::vector<std::string> evaluate_query(const QueryAst& ast, const Corpus& corpus) {
    check_fields(ast);
    validate_query(ast);
    const Bitmap hits = Evaluator(corpus).eval(ast);
    std::vector<std::string> ids;
    for (std::size_t i = 0; i < hits.size(); ++i) {
        if (hits[i]) ids.push_back(corpus.documents()[i].id);
    }
    std::sort(ids.begin(), ids.end());
    return ids;
}

}  // namespace mathdup::query

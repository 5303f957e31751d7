#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "mathdup/document.hpp"

namespace mathdup {

// Boolean field query language:
//   py:2007-2018 & ( ab:"editorial remark" | ab:"editorial note" ) & ( plagiari* | overlap ) !( so:ieee )
struct QueryNode {
    enum class Kind { And, Or, Not, FieldFilter, PhraseTerm, WildcardTerm, YearRange };

    Kind kind = Kind::PhraseTerm;
    std::string field;                 // FieldFilter: py, ab, so, se, pu, an, all
    std::string text;                  // PhraseTerm: phrase; WildcardTerm: pattern incl. trailing '*'
    int lo = 0;                        // YearRange
    int hi = 0;
    std::vector<QueryNode> children;   // And/Or: >= 2; Not: 1; FieldFilter: 1 term

    static QueryNode and_of(std::vector<QueryNode> c) { return {Kind::And, {}, {}, 0, 0, std::move(c)}; }
    static QueryNode or_of(std::vector<QueryNode> c) { return {Kind::Or, {}, {}, 0, 0, std::move(c)}; }
    static QueryNode not_of(QueryNode c) { return {Kind::Not, {}, {}, 0, 0, {std::move(c)}}; }
    static QueryNode filter(std::string field, QueryNode term) {
        return {Kind::FieldFilter, std::move(field), {}, 0, 0, {std::move(term)}};
    }
    static QueryNode phrase(std::string t) { return {Kind::PhraseTerm, {}, std::move(t), 0, 0, {}}; }
    static QueryNode wildcard(std::string t) { return {Kind::WildcardTerm, {}, std::move(t), 0, 0, {}}; }
    static QueryNode years(int lo, int hi) { return {Kind::YearRange, {}, {}, lo, hi, {}}; }

    friend bool operator==(const QueryNode&, const QueryNode&) = default;
};

using QueryAst = QueryNode;

namespace query {

inline constexpr std::string_view kFields[] = {"py", "ab", "so", "se", "pu", "an", "all"};

// Throws ParseError (byte offset + expected tokens) on bad syntax. Unknown
// field names parse; evaluate rejects them.
QueryAst parse_query(std::string_view text);

// Inverse of parse_query up to whitespace: parse(print(a)) == a.
std::string print_query(const QueryAst& ast);

// Structural checks (child counts, lo <= hi, single trailing '*').
// Throws InvariantViolation.
void validate_query(const QueryAst& ast);

// Sorted ids of matching documents. Throws UnsupportedField.
std::vector<std::string> evaluate_query(const QueryAst& ast, const Corpus& corpus);

}  // namespace query
}  // namespace mathdup

#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace mathdup {

enum class MathTokenKind { identifier, number, op, structural };

std::string_view to_string(MathTokenKind kind);
std::optional<MathTokenKind> math_token_kind_from_string(std::string_view s);

struct MathToken {
    MathTokenKind kind = MathTokenKind::identifier;
    std::string value;

    friend bool operator==(const MathToken&, const MathToken&) = default;
    friend auto operator<=>(const MathToken&, const MathToken&) = default;
};

enum class FormulaNodeKind { apply, identifier, number };

// Expression tree. Leaves carry the identifier or number literal in value;
// apply nodes carry the (alias-resolved) operator.
struct FormulaNode {
    FormulaNodeKind kind = FormulaNodeKind::identifier;
    std::string value;
    std::vector<FormulaNode> children;

    static FormulaNode identifier(std::string name) { return {FormulaNodeKind::identifier, std::move(name), {}}; }
    static FormulaNode number(std::string literal) { return {FormulaNodeKind::number, std::move(literal), {}}; }
    static FormulaNode apply(std::string op, std::vector<FormulaNode> args) {
        return {FormulaNodeKind::apply, std::move(op), std::move(args)};
    }

    friend bool operator==(const FormulaNode&, const FormulaNode&) = default;
};

using FormulaTree = FormulaNode;

struct Formula {
    std::string raw;
    std::vector<MathToken> tokens;
    std::size_t position = 0;          // token index into the body text
    std::optional<FormulaTree> tree;   // supplied, or parsed from tokens when possible

    friend bool operator==(const Formula&, const Formula&) = default;
};

namespace formula {

// Maps operator spellings onto one name: \cdot, ·, \times, × -> "*"; \le -> "≤"; etc.
std::string canonical_operator(std::string_view op);

// Spacing and sizing tokens (\left, \,, \quad, ...) that carry no structure.
bool is_presentation_token(const MathToken& token);

// Tokens with presentation tokens and grouping delimiters removed and
// operators alias-resolved.
std::vector<MathToken> strip_presentation(std::span<const MathToken> tokens);

// Precedence-climbing parse of an infix token sequence. Returns nullopt when
// the tokens do not form a single well-formed expression.
std::optional<FormulaTree> parse_tokens(std::span<const MathToken> tokens);

// Infix token rendering of a tree, fully parenthesized where precedence needs it.
std::vector<MathToken> render_tokens(const FormulaTree& tree);

std::string render_raw(std::span<const MathToken> tokens);

// Throws MalformedTree when a leaf has children, an apply node has none, or a
// value is empty.
void validate_tree(const FormulaTree& tree);

// Prefix serialization, e.g. (+ id:x num:2). Total order for canonicalization.
std::string serialize(const FormulaTree& tree);

std::size_t leaf_count(const FormulaTree& tree);

}  // namespace formula
}  // namespace mathdup

#include "mathdup/formula.hpp"

#include <array>
#include <unordered_map>
#include <unordered_set>

#include "mathdup/error.hpp"

namespace mathdup {

std::string_view to_string(MathTokenKind kind) {
    switch (kind) {
        case MathTokenKind::identifier: return "identifier";
        case MathTokenKind::number: return "number";
        case MathTokenKind::op: return "operator";
        case MathTokenKind::structural: return "structural";
    }
    return "identifier";
}

std::optional<MathTokenKind> math_token_kind_from_string(std::string_view s) {
    if (s == "identifier") return MathTokenKind::identifier;
    if (s == "number") return MathTokenKind::number;
    if (s == "operator") return MathTokenKind::op;
    if (s == "structural") return MathTokenKind::structural;
    return std::nullopt;
}

namespace formula {
namespace {

const std::unordered_map<std::string_view, std::string_view>& aliases() {
    static const std::unordered_map<std::string_view, std::string_view> table = {
        {"\\cdot", "*"},   {"·", "*"},       {"\\times", "*"}, {"×", "*"},     {"⋅", "*"},
        {"\\ast", "*"},    {"−", "-"},       {"\\div", "/"},   {"÷", "/"},     {"\\le", "≤"},
        {"\\leq", "≤"},    {"<=", "≤"},      {"\\ge", "≥"},    {"\\geq", "≥"}, {">=", "≥"},
        {"\\ne", "≠"},     {"\\neq", "≠"},   {"!=", "≠"},      {"\\cup", "∪"}, {"\\cap", "∩"},
        {"\\equiv", "≡"},  {"\\approx", "≈"}, {"\\pm", "±"},   {"\\setminus", "∖"},
        {"\\prime", "'"},  {"\\lt", "<"},    {"\\gt", ">"},
    };
    return table;
}

const std::unordered_set<std::string_view>& presentation_values() {
    static const std::unordered_set<std::string_view> values = {
        "\\left", "\\right", "\\big", "\\Big", "\\bigg", "\\Bigg", "\\bigl", "\\bigr",
        "\\Bigl", "\\Bigr", "\\,", "\\;", "\\:", "\\!", "\\quad", "\\qquad", "~", "\\ ",
        " ", "\\displaystyle", "\\textstyle",
    };
    return values;
}

bool is_open(const MathToken& t) {
    if (t.kind != MathTokenKind::structural && t.kind != MathTokenKind::op) return false;
    return t.value == "(" || t.value == "[" || t.value == "{" || t.value == "\\{";
}

bool is_close(const MathToken& t) {
    if (t.kind != MathTokenKind::structural && t.kind != MathTokenKind::op) return false;
    return t.value == ")" || t.value == "]" || t.value == "}" || t.value == "\\}";
}

std::string_view closer_for(std::string_view open) {
    if (open == "(") return ")";
    if (open == "[") return "]";
    if (open == "{") return "}";
    return "\\}";
}

// Binding strength of infix operators; 0 means "not infix".
int infix_level(std::string_view op) {
    static const std::unordered_map<std::string_view, int> levels = {
        {"=", 1}, {"≠", 1}, {"<", 1}, {">", 1}, {"≤", 1}, {"≥", 1}, {"≡", 1}, {"≈", 1},
        {"∪", 2}, {"∩", 2}, {"∖", 2},
        {"+", 3}, {"-", 3}, {"±", 3},
        {"*", 4}, {"/", 4},
    };
    const auto it = levels.find(op);
    return it == levels.end() ? 0 : it->second;
}

constexpr int kImplicitLevel = 4;

bool is_script(std::string_view op) { return op == "^" || op == "_"; }
bool is_postfix(std::string_view op) { return op == "!" || op == "'"; }

class TokenParser {
public:
    explicit TokenParser(std::vector<MathToken> tokens) : tokens_(std::move(tokens)) {}

    std::optional<FormulaTree> run() {
        if (tokens_.empty()) return std::nullopt;
        auto tree = binary(1);
        if (!tree || pos_ != tokens_.size()) return std::nullopt;
        return tree;
    }

private:
    const MathToken* peek() const { return pos_ < tokens_.size() ? &tokens_[pos_] : nullptr; }

    bool starts_operand(const MathToken& t) const {
        if (t.kind == MathTokenKind::identifier || t.kind == MathTokenKind::number) return true;
        if (is_open(t)) return true;
        if (t.kind == MathTokenKind::op) {
            return infix_level(t.value) == 0 && !is_script(t.value) && !is_postfix(t.value) && !is_close(t);
        }
        return false;
    }

    std::optional<FormulaTree> binary(int min_level) {
        auto lhs = prefix();
        if (!lhs) return std::nullopt;
        while (const MathToken* t = peek()) {
            if (t->kind == MathTokenKind::op && infix_level(t->value) > 0) {
                const int level = infix_level(t->value);
                if (level < min_level) break;
                std::string op = t->value;
                ++pos_;
                auto rhs = binary(level + 1);
                if (!rhs) return std::nullopt;
                lhs = FormulaNode::apply(std::move(op), {std::move(*lhs), std::move(*rhs)});
            } else if (starts_operand(*t) && kImplicitLevel >= min_level) {
                auto rhs = binary(kImplicitLevel + 1);
                if (!rhs) return std::nullopt;
                lhs = FormulaNode::apply("*", {std::move(*lhs), std::move(*rhs)});
            } else {
                break;
            }
        }
        return lhs;
    }

    std::optional<FormulaTree> prefix() {
        const MathToken* t = peek();
        if (!t) return std::nullopt;
        if (t->kind == MathTokenKind::op && !is_open(*t) && !is_close(*t) && !is_script(t->value) &&
            !is_postfix(t->value)) {
            std::string op = t->value;
            if (op == "-" || op == "+" || op == "±" || infix_level(op) == 0) {
                ++pos_;
                if (op == "\\frac" || op == "\\binom") {
                    auto num = power();
                    if (!num) return std::nullopt;
                    auto den = power();
                    if (!den) return std::nullopt;
                    return FormulaNode::apply(std::move(op), {std::move(*num), std::move(*den)});
                }
                auto operand = prefix();
                if (!operand) return std::nullopt;
                if (op == "+") return operand;
                return FormulaNode::apply(std::move(op), {std::move(*operand)});
            }
            return std::nullopt;
        }
        return power();
    }

    std::optional<FormulaTree> power() {
        auto base = postfix();
        if (!base) return std::nullopt;
        while (const MathToken* t = peek()) {
            if (t->kind != MathTokenKind::op || !is_script(t->value)) break;
            std::string op = t->value;
            ++pos_;
            auto rhs = op == "_" ? postfix() : prefix();
            if (!rhs) return std::nullopt;
            base = FormulaNode::apply(std::move(op), {std::move(*base), std::move(*rhs)});
        }
        return base;
    }

    std::optional<FormulaTree> postfix() {
        auto operand = primary();
        if (!operand) return std::nullopt;
        while (const MathToken* t = peek()) {
            if (t->kind != MathTokenKind::op || !is_postfix(t->value)) break;
            operand = FormulaNode::apply(t->value, {std::move(*operand)});
            ++pos_;
        }
        return operand;
    }

    std::optional<FormulaTree> primary() {
        const MathToken* t = peek();
        if (!t) return std::nullopt;
        if (t->kind == MathTokenKind::identifier) {
            ++pos_;
            return FormulaNode::identifier(t->value);
        }
        if (t->kind == MathTokenKind::number) {
            ++pos_;
            return FormulaNode::number(t->value);
        }
        if (is_open(*t)) {
            const std::string_view want = closer_for(t->value);
            ++pos_;
            auto inner = binary(1);
            if (!inner) return std::nullopt;
            const MathToken* c = peek();
            if (!c || !is_close(*c) || c->value != want) return std::nullopt;
            ++pos_;
            return inner;
        }
        return std::nullopt;
    }

    std::vector<MathToken> tokens_;
    std::size_t pos_ = 0;
};

MathToken op_token(std::string v) { return {MathTokenKind::op, std::move(v)}; }
MathToken open_paren() { return {MathTokenKind::structural, "("}; }
MathToken close_paren() { return {MathTokenKind::structural, ")"}; }

// Strength used to decide parenthesization when rendering.
int render_level(const FormulaTree& t) {
    if (t.kind != FormulaNodeKind::apply) return 100;
    if (t.children.size() >= 2) {
        if (const int l = infix_level(t.value)) return l;
        if (is_script(t.value)) return 6;
        return 7;  // \frac and friends render as prefix calls
    }
    if (is_postfix(t.value)) return 7;
    return 5;  // unary prefix
}

void render_into(const FormulaTree& t, std::vector<MathToken>& out);

void render_child(const FormulaTree& child, bool wrap, std::vector<MathToken>& out) {
    if (wrap) out.push_back(open_paren());
    render_into(child, out);
    if (wrap) out.push_back(close_paren());
}

void render_into(const FormulaTree& t, std::vector<MathToken>& out) {
    switch (t.kind) {
        case FormulaNodeKind::identifier: out.push_back({MathTokenKind::identifier, t.value}); return;
        case FormulaNodeKind::number: out.push_back({MathTokenKind::number, t.value}); return;
        case FormulaNodeKind::apply: break;
    }
    const int level = render_level(t);
    if (t.children.size() >= 2 && (infix_level(t.value) > 0 || is_script(t.value))) {
        for (std::size_t i = 0; i < t.children.size(); ++i) {
            const int cl = render_level(t.children[i]);
            bool wrap;
            if (is_script(t.value)) {
                wrap = cl <= 6;
            } else {
                wrap = cl < level || (cl == level && i > 0);
            }
            if (i > 0) out.push_back(op_token(t.value));
            render_child(t.children[i], wrap, out);
        }
        return;
    }
    if (t.children.size() == 1 && is_postfix(t.value)) {
        render_child(t.children[0], render_level(t.children[0]) < 7, out);
        out.push_back(op_token(t.value));
        return;
    }
    if (t.children.size() == 1 && (t.value == "-" || t.value == "±")) {
        out.push_back(op_token(t.value));
        render_child(t.children[0], render_level(t.children[0]) <= 5, out);
        return;
    }
    // Prefix application: op {c1} {c2} ...
    out.push_back(op_token(t.value));
    for (const auto& c : t.children) {
        out.push_back({MathTokenKind::structural, "{"});
        render_into(c, out);
        out.push_back({MathTokenKind::structural, "}"});
    }
}

}  // namespace

std::string canonical_operator(std::string_view op) {
    const auto& table = aliases();
    const auto it = table.find(op);
    return std::string(it == table.end() ? op : it->second);
}

bool is_presentation_token(const MathToken& token) {
    if (token.kind != MathTokenKind::structural && token.kind != MathTokenKind::op) return false;
    return presentation_values().contains(token.value);
}

std::vector<MathToken> strip_presentation(std::span<const MathToken> tokens) {
    std::vector<MathToken> out;
    out.reserve(tokens.size());
    for (const auto& t : tokens) {
        if (is_presentation_token(t)) continue;
        if (t.kind == MathTokenKind::op) {
            out.push_back({MathTokenKind::op, canonical_operator(t.value)});
        } else {
            out.push_back(t);
        }
    }
    return out;
}

std::optional<FormulaTree> parse_tokens(std::span<const MathToken> tokens) {
    auto stripped = strip_presentation(tokens);
    return TokenParser(std::move(stripped)).run();
}

std::vector<MathToken> render_tokens(const FormulaTree& tree) {
    std::vector<MathToken> out;
    render_into(tree, out);
    return out;
}

std::string render_raw(std::span<const MathToken> tokens) {
    std::string out;
    for (const auto& t : tokens) {
        if (!out.empty()) out.push_back(' ');
        out += t.value;
    }
    return out;
}

void validate_tree(const FormulaTree& tree) {
    if (tree.value.empty()) throw MalformedTree("node with empty value");
    if (tree.kind == FormulaNodeKind::apply) {
        if (tree.children.empty()) throw MalformedTree("apply node '" + tree.value + "' has no children");
        for (const auto& c : tree.children) validate_tree(c);
    } else if (!tree.children.empty()) {
        throw MalformedTree("leaf '" + tree.value + "' has children");
    }
}

std::string serialize(const FormulaTree& tree) {
    switch (tree.kind) {
        case FormulaNodeKind::identifier: return "id:" + tree.value;
        case FormulaNodeKind::number: return "num:" + tree.value;
        case FormulaNodeKind::apply: break;
    }
    std::string out = "(" + tree.value;
    for (const auto& c : tree.children) {
        out.push_back(' ');
        out += serialize(c);
    }
    out.push_back(')');
    return out;
}

std::size_t leaf_count(const FormulaTree& tree) {
    if (tree.kind != FormulaNodeKind::apply) return 1;
    std::size_t n = 0;
    for (const auto& c : tree.children) n += leaf_count(c);
    return n;
}

}  // namespace formula
}  // namespace mathdup

#ifndef PCS_EXPR_HPP
#define PCS_EXPR_HPP

#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace pcs {

/// Immutable propositional expression tree over named atoms.
/// Conjunction/disjunction are n-ary and flattened on construction.
class Expr {
public:
    enum class Kind { constant, atom, negation, conjunction, disjunction };

    static Expr constant(bool value);
    static Expr atom(std::string name);
    static Expr negation(Expr operand);
    static Expr conjunction(std::vector<Expr> operands);
    static Expr disjunction(std::vector<Expr> operands);

    Kind kind() const { return kind_; }
    bool value() const { return value_; }
    const std::string& name() const { return name_; }
    const std::vector<Expr>& operands() const { return operands_; }

    /// All atom names occurring in the tree.
    void collect_atoms(std::set<std::string>& into) const;

    bool operator==(const Expr&) const = default;

private:
    Expr() = default;
    Kind kind_ = Kind::constant;
    bool value_ = false;
    std::string name_;
    std::vector<Expr> operands_;
};

/// Parses the shared formula grammar: `!`, `&&`, `||`, parentheses, atom
/// names, `1` (or any nonzero integer) for true and `0` for false. In
/// C-preprocessor contexts `defined(X)` and `defined X` denote the atom X.
/// Throws ParseError on anything else (comparisons, arithmetic,
/// function-like macro invocations, stray tokens).
Expr parse_formula(std::string_view text);

/// Renders with minimal parentheses; `1` for constant true, `0` for false.
std::string to_string(const Expr& expr);

} // namespace pcs

#endif

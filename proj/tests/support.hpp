#ifndef PCS_TESTS_SUPPORT_HPP
#define PCS_TESTS_SUPPORT_HPP

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "pcs/core.hpp"
#include "pcs/coverage.hpp"
#include "pcs/expr.hpp"
#include "pcs/transform.hpp"

namespace pcs::testsupport {

inline CoverageOptions cov_at(std::uint32_t t) {
    CoverageOptions options;
    options.t = t;
    return options;
}

// Running example: TFTP features with first-occurrence indices
// G=1, P=2, T=3, B=4, D=5.
inline FeatureModel running_model() {
    return FeatureModel({"TFTP_GET", "TFTP_PUT", "TFTP", "TFTP_BLOCKSIZE", "TFTP_DEBUG"}, {});
}

inline FeatureModel letters_model(unsigned n) {
    std::vector<std::string> names;
    for (unsigned i = 0; i < n; ++i) names.push_back(std::string(1, static_cast<char>('A' + i)));
    return FeatureModel(std::move(names), {});
}

inline PresenceCondition pc_of(std::string_view formula, const FeatureModel& model) {
    return dnf_of_text(formula, model);
}

inline Clause clause_of(std::string_view formula, const FeatureModel& model) {
    PresenceCondition pc = pc_of(formula, model);
    REQUIRE(pc.is_proper());
    REQUIRE(pc.clauses().size() == 1);
    return pc.clauses().front();
}

inline Configuration config_of(std::string_view formula, const FeatureModel& model) {
    auto c = Configuration::try_from(clause_of(formula, model).literals());
    REQUIRE(c.has_value());
    return *c;
}

// ---- brute-force evaluation over complete assignments (bit f-1 = feature f) ----

inline bool eval_clause_mask(const Clause& clause, std::uint32_t mask) {
    for (Literal l : clause) {
        bool selected = (mask >> (l.feature() - 1)) & 1u;
        if (selected != l.is_positive()) return false;
    }
    return true;
}

inline bool eval_pc_mask(const PresenceCondition& pc, std::uint32_t mask) {
    if (pc.is_tautology()) return true;
    for (const Clause& clause : pc.clauses()) {
        if (eval_clause_mask(clause, mask)) return true;
    }
    return false;
}

inline bool eval_expr_mask(const Expr& expr, const FeatureModel& model, std::uint32_t mask) {
    switch (expr.kind()) {
    case Expr::Kind::constant:
        return expr.value();
    case Expr::Kind::atom: {
        auto index = model.index_of(expr.name());
        REQUIRE(index.has_value());
        return (mask >> (*index - 1)) & 1u;
    }
    case Expr::Kind::negation:
        return !eval_expr_mask(expr.operands().front(), model, mask);
    case Expr::Kind::conjunction:
        for (const Expr& op : expr.operands())
            if (!eval_expr_mask(op, model, mask)) return false;
        return true;
    case Expr::Kind::disjunction:
        for (const Expr& op : expr.operands())
            if (eval_expr_mask(op, model, mask)) return true;
        return false;
    }
    return false;
}

inline bool model_satisfied(const FeatureModel& model, std::uint32_t mask) {
    for (const Clause& dep : model.dependencies()) {
        bool sat = false;
        for (Literal l : dep) {
            bool selected = (mask >> (l.feature() - 1)) & 1u;
            if (selected == l.is_positive()) {
                sat = true;
                break;
            }
        }
        if (!sat) return false;
    }
    return true;
}

inline std::vector<std::uint32_t> valid_masks(const FeatureModel& model) {
    std::vector<std::uint32_t> masks;
    const std::uint64_t end = std::uint64_t{1} << model.feature_count();
    for (std::uint64_t mask = 0; mask < end; ++mask) {
        if (model_satisfied(model, static_cast<std::uint32_t>(mask)))
            masks.push_back(static_cast<std::uint32_t>(mask));
    }
    return masks;
}

inline Configuration config_of_mask(std::uint32_t mask, FeatureIndex n) {
    std::vector<Literal> literals;
    for (FeatureIndex f = 1; f <= n; ++f)
        literals.push_back(((mask >> (f - 1)) & 1u) ? Literal::positive(f)
                                                    : Literal::negative(f));
    return *Configuration::try_from(literals);
}

inline std::uint32_t mask_of_config(const Configuration& config) {
    std::uint32_t mask = 0;
    for (Literal l : config)
        if (l.is_positive()) mask |= 1u << (l.feature() - 1);
    return mask;
}

// Truth-table equality over all 2^n assignments.
inline bool semantically_equal(const PresenceCondition& a, const PresenceCondition& b,
                               FeatureIndex n) {
    const std::uint64_t end = std::uint64_t{1} << n;
    for (std::uint64_t mask = 0; mask < end; ++mask) {
        if (eval_pc_mask(a, static_cast<std::uint32_t>(mask)) !=
            eval_pc_mask(b, static_cast<std::uint32_t>(mask)))
            return false;
    }
    return true;
}

// ---- randomized instance generators ----

inline Expr random_expr(std::mt19937_64& rng, const FeatureModel& model, unsigned depth) {
    unsigned pick = static_cast<unsigned>(rng() % (depth == 0 ? 2 : 6));
    auto atom = [&] {
        FeatureIndex f = static_cast<FeatureIndex>(rng() % model.feature_count()) + 1;
        return Expr::atom(model.name_of(f));
    };
    switch (pick) {
    case 0:
    case 2:
        return atom();
    case 1:
        return Expr::negation(atom());
    case 3:
        return Expr::negation(random_expr(rng, model, depth - 1));
    default: {
        std::vector<Expr> parts;
        unsigned arity = 2 + static_cast<unsigned>(rng() % 2);
        for (unsigned i = 0; i < arity; ++i) parts.push_back(random_expr(rng, model, depth - 1));
        return pick == 4 ? Expr::conjunction(std::move(parts))
                         : Expr::disjunction(std::move(parts));
    }
    }
}

// Random CNF model over n features, kept satisfiable by construction
// (clauses that would make it unsatisfiable by brute force get dropped).
inline FeatureModel random_sat_model(std::mt19937_64& rng, FeatureIndex n,
                                     unsigned max_clauses) {
    std::vector<std::string> names;
    for (FeatureIndex i = 1; i <= n; ++i) names.push_back("F" + std::to_string(i));
    std::vector<Clause> clauses;
    unsigned wanted = static_cast<unsigned>(rng() % (max_clauses + 1));
    for (unsigned c = 0; c < wanted; ++c) {
        std::vector<Literal> lits;
        unsigned len = 1 + static_cast<unsigned>(rng() % 3);
        for (unsigned i = 0; i < len; ++i) {
            FeatureIndex f = static_cast<FeatureIndex>(rng() % n) + 1;
            lits.push_back((rng() & 1) ? Literal::positive(f) : Literal::negative(f));
        }
        clauses.emplace_back(std::move(lits));
        FeatureModel candidate(names, clauses);
        if (valid_masks(candidate).empty()) clauses.pop_back();
    }
    return FeatureModel(std::move(names), std::move(clauses));
}

} // namespace pcs::testsupport

#endif

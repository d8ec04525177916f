#ifndef PCS_TRANSFORM_HPP
#define PCS_TRANSFORM_HPP

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "pcs/core.hpp"
#include "pcs/expr.hpp"

namespace pcs {

struct TransformOptions {
    /// Abort a DNF transformation whose intermediate clause count exceeds
    /// this cap (BlowupError names the condition's origin).
    std::size_t clause_cap = 1'000'000;
};

/// Drops contradictory clauses and clauses subsumed by a smaller clause of
/// the same DNF, then canonicalizes. All clauses dropped => contradiction.
PresenceCondition simplify(const PresenceCondition& pc);

/// The complement DNF: De Morgan to a CNF of negated literals, then
/// distribution back to DNF, then simplification. Swaps tautology and
/// contradiction.
PresenceCondition negate(const PresenceCondition& pc, const TransformOptions& options = {});

/// DNF of the conjunction of all inputs, via pairwise clause union, then
/// simplification. The tautology is the identity element.
PresenceCondition conjoin(std::span<const PresenceCondition> pcs,
                          const TransformOptions& options = {});
PresenceCondition conjoin(std::initializer_list<PresenceCondition> pcs,
                          const TransformOptions& options = {});

/// Converts an arbitrary expression tree to a canonical simplified DNF by
/// recursive distribution (no CNF detour). Atoms resolve against the
/// model; unknown atoms raise StructuralError.
PresenceCondition dnf_of(const Expr& expr, const FeatureModel& model,
                         const TransformOptions& options = {});

/// Semantic equivalence: identical canonical forms, with a fallback
/// unsatisfiability check of both implication directions when the
/// canonical forms differ.
bool equivalent(const PresenceCondition& a, const PresenceCondition& b,
                const TransformOptions& options = {});

/// One extracted raw condition: a formula plus its source position.
struct RawCondition {
    Expr formula;
    std::string file;
    std::uint32_t line = 0;
};

enum class Grouping { none, file, folder };

/// The sampling universe: original DNFs in first-seen order followed by
/// their complements in the same order; no tautologies, contradictions,
/// or equivalent duplicates. fm/concrete modes synthesize single-literal
/// universes instead. Groups, when present, partition the entry indices.
struct PcUniverse {
    std::vector<PresenceCondition> entries;
    Mode mode = Mode::pc;
    std::vector<std::vector<std::size_t>> groups; // empty means no grouping
    std::vector<std::string> group_keys;

    std::size_t size() const { return entries.size(); }
    FeatureIndex max_feature() const;
    /// View of one group as a standalone universe (groups dropped).
    PcUniverse group_view(std::size_t group_index) const;
};

PcUniverse preprocess(std::span<const RawCondition> raw, const FeatureModel& model, Mode mode,
                      Grouping grouping = Grouping::none, const TransformOptions& options = {});

/// Parses a DNF back out of the shared formula grammar. Convenience for
/// fixtures, fault files and reports.
PresenceCondition dnf_of_text(std::string_view formula, const FeatureModel& model,
                              const TransformOptions& options = {});

/// Renders a DNF in the shared grammar: `1`, `0`, or
/// `(a && !b) || (c)` with clauses in canonical order.
std::string to_string(const PresenceCondition& pc, const FeatureModel& model);

} // namespace pcs

#endif

#include "pcs/transform.hpp"

#include <algorithm>
#include <map>

#include "pcs/error.hpp"

namespace pcs {

namespace {

std::string origin_of(const PresenceCondition& pc) {
    return pc.origin() ? pc.origin()->to_string() : std::string{};
}

// Clause-set workhorse shared by simplify/negate/conjoin. Removes
// contradictory clauses and strict supersets of other clauses. The
// subsumption scan is quadratic, so beyond a size threshold only
// deduplication runs; subsumed clauses are semantically redundant either
// way and the caller's clause cap bounds the set.
constexpr std::size_t subsumption_limit = 4096;

std::vector<Clause> prune(std::vector<Clause> clauses) {
    std::vector<Clause> kept;
    kept.reserve(clauses.size());
    std::sort(clauses.begin(), clauses.end());
    clauses.erase(std::unique(clauses.begin(), clauses.end()), clauses.end());
    const bool full = clauses.size() <= subsumption_limit;
    for (const Clause& c : clauses) {
        if (c.contradictory()) continue;
        bool subsumed = false;
        if (full) {
            for (const Clause& d : clauses) {
                if (d.size() < c.size() && !d.contradictory() && d.subset_of(c)) {
                    subsumed = true;
                    break;
                }
            }
        }
        if (!subsumed) kept.push_back(c);
    }
    return kept;
}

} // namespace

PresenceCondition simplify(const PresenceCondition& pc) {
    if (!pc.is_proper()) return pc;
    auto result = PresenceCondition::of_clauses(prune(pc.clauses()));
    if (pc.origin()) result = result.with_origin(*pc.origin());
    return result;
}

PresenceCondition negate(const PresenceCondition& pc, const TransformOptions& options) {
    const PresenceCondition cleaned = simplify(pc);
    if (cleaned.is_tautology()) return PresenceCondition::contradiction();
    if (cleaned.is_contradiction()) return PresenceCondition::tautology();

    // De Morgan turns each DNF clause into a CNF clause of complements;
    // distribute those one by one, pruning as we go.
    std::vector<Clause> partial;
    bool first = true;
    for (const Clause& clause : cleaned.clauses()) {
        std::vector<Clause> next;
        if (first) {
            for (Literal l : clause) next.push_back(Clause({l.complement()}));
            first = false;
        } else {
            for (const Clause& base : partial) {
                for (Literal l : clause) {
                    Clause extended = base.union_with(Clause({l.complement()}));
                    if (extended.contradictory()) continue;
                    next.push_back(std::move(extended));
                    if (next.size() > options.clause_cap)
                        throw BlowupError(origin_of(pc), options.clause_cap);
                }
            }
        }
        partial = prune(std::move(next));
        if (partial.empty()) return PresenceCondition::contradiction();
    }
    auto result = PresenceCondition::of_clauses(std::move(partial));
    if (pc.origin()) result = result.with_origin(*pc.origin());
    return result;
}

PresenceCondition conjoin(std::span<const PresenceCondition> pcs,
                          const TransformOptions& options) {
    if (pcs.empty()) throw ContractError("conjoin requires at least one condition");
    std::string origin;
    for (const PresenceCondition& pc : pcs) {
        if (origin.empty()) origin = origin_of(pc);
        if (pc.is_contradiction()) return PresenceCondition::contradiction();
    }
    bool all_tautology = true;
    std::vector<Clause> acc;
    for (const PresenceCondition& pc : pcs) {
        if (pc.is_tautology()) continue;
        if (all_tautology) {
            acc = pc.clauses();
            all_tautology = false;
            continue;
        }
        std::vector<Clause> next;
        next.reserve(acc.size() * pc.clauses().size());
        for (const Clause& a : acc) {
            for (const Clause& b : pc.clauses()) {
                Clause u = a.union_with(b);
                if (u.contradictory()) continue;
                next.push_back(std::move(u));
                if (next.size() > options.clause_cap)
                    throw BlowupError(origin, options.clause_cap);
            }
        }
        acc = prune(std::move(next));
        if (acc.empty()) return PresenceCondition::contradiction();
    }
    if (all_tautology) return PresenceCondition::tautology();
    return PresenceCondition::of_clauses(prune(std::move(acc)));
}

PresenceCondition conjoin(std::initializer_list<PresenceCondition> pcs,
                          const TransformOptions& options) {
    return conjoin(std::span<const PresenceCondition>(pcs.begin(), pcs.size()), options);
}

namespace {

// Negation normal form: negations pushed onto atoms/constants.
Expr to_nnf(const Expr& expr, bool negated) {
    switch (expr.kind()) {
    case Expr::Kind::constant:
        return Expr::constant(negated ? !expr.value() : expr.value());
    case Expr::Kind::atom: {
        Expr atom = Expr::atom(expr.name());
        return negated ? Expr::negation(std::move(atom)) : atom;
    }
    case Expr::Kind::negation:
        return to_nnf(expr.operands().front(), !negated);
    case Expr::Kind::conjunction:
    case Expr::Kind::disjunction: {
        bool conj = (expr.kind() == Expr::Kind::conjunction) != negated;
        std::vector<Expr> parts;
        parts.reserve(expr.operands().size());
        for (const Expr& op : expr.operands()) parts.push_back(to_nnf(op, negated));
        return conj ? Expr::conjunction(std::move(parts)) : Expr::disjunction(std::move(parts));
    }
    }
    throw StructuralError("unreachable expression kind");
}

struct DnfBuilder {
    const FeatureModel& model;
    const TransformOptions& options;

    Literal resolve(const Expr& expr, bool positive) const {
        auto index = model.index_of(expr.name());
        if (!index)
            throw StructuralError("unknown feature '" + expr.name() + "' in formula");
        return positive ? Literal::positive(*index) : Literal::negative(*index);
    }

    // DNF as clause list; empty list = contradiction, nullopt clause list
    // is signalled via the tautology flag.
    struct Partial {
        bool tautology = false;
        std::vector<Clause> clauses;
    };

    Partial build(const Expr& expr) const {
        switch (expr.kind()) {
        case Expr::Kind::constant:
            return {expr.value(), {}};
        case Expr::Kind::atom:
            return {false, {Clause({resolve(expr, true)})}};
        case Expr::Kind::negation:
            // NNF guarantees the operand is an atom
            return {false, {Clause({resolve(expr.operands().front(), false)})}};
        case Expr::Kind::disjunction: {
            Partial acc;
            for (const Expr& op : expr.operands()) {
                Partial part = build(op);
                if (part.tautology) return {true, {}};
                for (Clause& c : part.clauses) {
                    acc.clauses.push_back(std::move(c));
                    if (acc.clauses.size() > options.clause_cap)
                        throw BlowupError({}, options.clause_cap);
                }
            }
            acc.clauses = prune(std::move(acc.clauses));
            return acc;
        }
        case Expr::Kind::conjunction: {
            Partial acc{true, {}};
            for (const Expr& op : expr.operands()) {
                Partial part = build(op);
                if (part.tautology) continue;
                if (part.clauses.empty()) return {false, {}};
                if (acc.tautology) {
                    acc = std::move(part);
                    continue;
                }
                std::vector<Clause> next;
                next.reserve(acc.clauses.size() * part.clauses.size());
                for (const Clause& a : acc.clauses) {
                    for (const Clause& b : part.clauses) {
                        Clause u = a.union_with(b);
                        if (u.contradictory()) continue;
                        next.push_back(std::move(u));
                        if (next.size() > options.clause_cap)
                            throw BlowupError({}, options.clause_cap);
                    }
                }
                acc.clauses = prune(std::move(next));
                if (acc.clauses.empty()) return {false, {}};
            }
            return acc;
        }
        }
        throw StructuralError("unreachable expression kind");
    }
};

} // namespace

PresenceCondition dnf_of(const Expr& expr, const FeatureModel& model,
                         const TransformOptions& options) {
    DnfBuilder builder{model, options};
    DnfBuilder::Partial partial = builder.build(to_nnf(expr, false));
    if (partial.tautology) return PresenceCondition::tautology();
    if (partial.clauses.empty()) return PresenceCondition::contradiction();
    return PresenceCondition::of_clauses(prune(std::move(partial.clauses)));
}

PresenceCondition dnf_of_text(std::string_view formula, const FeatureModel& model,
                              const TransformOptions& options) {
    return dnf_of(parse_formula(formula), model, options);
}

bool equivalent(const PresenceCondition& a, const PresenceCondition& b,
                const TransformOptions& options) {
    if (a == b) return true;
    // a xor b unsatisfiable <=> both implication conjunctions contradict
    PresenceCondition not_b = negate(b, options);
    if (!conjoin({a, not_b}, options).is_contradiction()) return false;
    PresenceCondition not_a = negate(a, options);
    return conjoin({b, not_a}, options).is_contradiction();
}

FeatureIndex PcUniverse::max_feature() const {
    FeatureIndex max = 0;
    for (const PresenceCondition& pc : entries) max = std::max(max, pc.max_feature());
    return max;
}

PcUniverse PcUniverse::group_view(std::size_t group_index) const {
    PcUniverse view;
    view.mode = mode;
    for (std::size_t index : groups.at(group_index)) view.entries.push_back(entries.at(index));
    return view;
}

namespace {

PcUniverse literal_universe(const FeatureModel& model, const std::vector<FeatureIndex>& features,
                            Mode mode) {
    PcUniverse universe;
    universe.mode = mode;
    universe.entries.reserve(2 * features.size());
    for (FeatureIndex f : features)
        universe.entries.push_back(PresenceCondition::of_clauses({Clause({Literal::positive(f)})}));
    for (FeatureIndex f : features)
        universe.entries.push_back(PresenceCondition::of_clauses({Clause({Literal::negative(f)})}));
    (void)model;
    return universe;
}

std::string group_key_for(const RawCondition& raw, Grouping grouping) {
    if (grouping == Grouping::file) return raw.file;
    std::string::size_type slash = raw.file.find_last_of('/');
    return slash == std::string::npos ? std::string(".") : raw.file.substr(0, slash);
}

} // namespace

PcUniverse preprocess(std::span<const RawCondition> raw, const FeatureModel& model, Mode mode,
                      Grouping grouping, const TransformOptions& options) {
    if (mode == Mode::random) throw ContractError("random is not a universe mode");
    if (mode == Mode::fm) {
        std::vector<FeatureIndex> all(model.feature_count());
        for (FeatureIndex f = 1; f <= model.feature_count(); ++f) all[f - 1] = f;
        return literal_universe(model, all, mode);
    }

    // Convert raw formulas, tracking the features they mention.
    std::vector<bool> occurs(model.feature_count() + 1, false);
    struct Converted {
        PresenceCondition pc;
        std::string group;
    };
    std::vector<Converted> converted;
    converted.reserve(raw.size());
    for (const RawCondition& rc : raw) {
        std::set<std::string> atoms;
        rc.formula.collect_atoms(atoms);
        for (const std::string& atom : atoms) {
            auto index = model.index_of(atom);
            if (!index)
                throw StructuralError("unknown feature '" + atom + "' in condition from " +
                                      rc.file + ":" + std::to_string(rc.line));
            occurs[*index] = true;
        }
        PresenceCondition pc =
            dnf_of(rc.formula, model, options)
                .with_origin(Origin{rc.file, rc.line, rc.line});
        converted.push_back({std::move(pc), group_key_for(rc, grouping)});
    }

    if (mode == Mode::concrete) {
        std::vector<FeatureIndex> features;
        for (FeatureIndex f = 1; f <= model.feature_count(); ++f)
            if (occurs[f]) features.push_back(f);
        return literal_universe(model, features, mode);
    }

    // pc mode: keep the first representative of each equivalence class, in
    // input order; originals first, then the complements in the same order.
    // Identical canonical forms are deduplicated by map lookup; the
    // semantic fallback only runs for canonically new forms, against the
    // kept entries' precomputed complements.
    struct Entry {
        PresenceCondition pc;
        PresenceCondition complement;
        std::string group;
    };
    std::vector<Entry> originals;
    std::map<PresenceCondition, std::size_t> seen;
    auto same_function = [&](const PresenceCondition& a, const PresenceCondition& not_a,
                             const PresenceCondition& b, const PresenceCondition& not_b) {
        return conjoin({a, not_b}, options).is_contradiction() &&
               conjoin({b, not_a}, options).is_contradiction();
    };
    for (Converted& c : converted) {
        if (c.pc.is_contradiction() || c.pc.is_tautology()) continue;
        if (!seen.emplace(c.pc, originals.size()).second) continue;
        PresenceCondition complement = negate(c.pc, options);
        if (complement.is_contradiction()) continue; // pc is a semantic tautology
        bool duplicate = false;
        for (const Entry& e : originals) {
            if (same_function(e.pc, e.complement, c.pc, complement)) {
                duplicate = true;
                break;
            }
        }
        if (duplicate) continue;
        originals.push_back({std::move(c.pc), std::move(complement), std::move(c.group)});
    }

    PcUniverse universe;
    universe.mode = Mode::pc;
    std::vector<std::string> entry_groups;
    std::map<PresenceCondition, std::size_t> placed;
    std::vector<PresenceCondition> placed_complements;
    auto push_unique = [&](const PresenceCondition& pc, const PresenceCondition& complement,
                           const std::string& group) {
        if (placed.count(pc)) return;
        for (std::size_t i = 0; i < universe.entries.size(); ++i) {
            if (same_function(universe.entries[i], placed_complements[i], pc, complement))
                return;
        }
        placed.emplace(pc, universe.entries.size());
        universe.entries.push_back(pc);
        placed_complements.push_back(complement);
        entry_groups.push_back(group);
    };
    for (const Entry& e : originals) push_unique(e.pc, e.complement, e.group);
    for (const Entry& e : originals) push_unique(e.complement, e.pc, e.group);

    if (grouping != Grouping::none) {
        std::vector<std::string> keys;
        for (std::size_t i = 0; i < universe.entries.size(); ++i) {
            const std::string& key = entry_groups[i];
            auto it = std::find(keys.begin(), keys.end(), key);
            std::size_t gi;
            if (it == keys.end()) {
                keys.push_back(key);
                universe.groups.emplace_back();
                gi = keys.size() - 1;
            } else {
                gi = static_cast<std::size_t>(it - keys.begin());
            }
            universe.groups[gi].push_back(i);
        }
        universe.group_keys = std::move(keys);
    }
    return universe;
}

std::string to_string(const PresenceCondition& pc, const FeatureModel& model) {
    if (pc.is_tautology()) return "1";
    if (pc.is_contradiction()) return "0";
    std::string out;
    bool first_clause = true;
    for (const Clause& clause : pc.clauses()) {
        if (!first_clause) out += " || ";
        first_clause = false;
        out += '(';
        bool first_lit = true;
        for (Literal l : clause) {
            if (!first_lit) out += " && ";
            first_lit = false;
            if (!l.is_positive()) out += '!';
            out += model.name_of(l.feature());
        }
        out += ')';
    }
    return out;
}

} // namespace pcs

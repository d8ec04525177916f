#include "pcs/sat.hpp"

#include <algorithm>
#include <numeric>
#include <random>

#include "pcs/error.hpp"

namespace pcs {

namespace {

// Encoded literal index for watch lists: 2*(var-1) + (positive ? 1 : 0).
inline std::size_t enc(std::int32_t lit) {
    std::uint32_t var = static_cast<std::uint32_t>(lit < 0 ? -lit : lit);
    return 2 * (var - 1) + (lit > 0 ? 1 : 0);
}

} // namespace

SatContext::SatContext(const FeatureModel& model) : var_count_(model.feature_count()) {
    watches_.resize(2 * static_cast<std::size_t>(var_count_));
    for (const Clause& dep : model.dependencies()) {
        if (dep.contradictory()) continue; // x | !x is always satisfied
        if (dep.size() == 1) {
            units_.push_back(dep.literals().front().code());
            continue;
        }
        std::vector<std::int32_t> lits;
        lits.reserve(dep.size());
        for (Literal l : dep) lits.push_back(l.code());
        std::uint32_t index = static_cast<std::uint32_t>(clauses_.size());
        clauses_.push_back(std::move(lits));
        watches_[enc(clauses_.back()[0])].push_back(index);
        watches_[enc(clauses_.back()[1])].push_back(index);
    }
    default_order_.resize(var_count_);
    std::iota(default_order_.begin(), default_order_.end(), FeatureIndex{1});
}

// Chronological-backtracking DPLL over the watched clause database.
struct SatContext::Search {
    SatContext& ctx;
    std::vector<std::int8_t> value;        // per var: 0 unset, +1 true, -1 false
    std::vector<std::int32_t> trail;
    std::size_t propagated = 0;
    struct Decision {
        std::size_t trail_pos;
        std::int32_t lit;
        bool flipped;
    };
    std::vector<Decision> decisions;
    std::chrono::steady_clock::time_point deadline;
    std::uint64_t ticks = 0;

    explicit Search(SatContext& c)
        : ctx(c),
          value(c.var_count_ + 1, 0),
          deadline(std::chrono::steady_clock::now() + c.timeout_) {}

    void check_time() {
        if ((++ticks & 0x3ff) != 0) return;
        check_time_now();
    }

    void check_time_now() const {
        if (std::chrono::steady_clock::now() > deadline)
            throw TimeoutError("satisfiability query exceeded " +
                               std::to_string(ctx.timeout_.count()) + " ms");
    }

    std::int8_t value_of(std::int32_t lit) const {
        std::int8_t v = value[static_cast<std::size_t>(lit < 0 ? -lit : lit)];
        return lit < 0 ? static_cast<std::int8_t>(-v) : v;
    }

    // False on immediate conflict.
    bool assign(std::int32_t lit) {
        std::int8_t v = value_of(lit);
        if (v > 0) return true;
        if (v < 0) return false;
        value[static_cast<std::size_t>(lit < 0 ? -lit : lit)] =
            static_cast<std::int8_t>(lit > 0 ? 1 : -1);
        trail.push_back(lit);
        return true;
    }

    // Returns false on conflict, leaving the trail as-is for backtracking.
    bool propagate() {
        while (propagated < trail.size()) {
            check_time();
            std::int32_t falsified = -trail[propagated++];
            std::vector<std::uint32_t>& watch = ctx.watches_[enc(falsified)];
            std::size_t kept = 0;
            for (std::size_t i = 0; i < watch.size(); ++i) {
                std::uint32_t ci = watch[i];
                std::vector<std::int32_t>& clause = ctx.clauses_[ci];
                if (clause[0] == falsified) std::swap(clause[0], clause[1]);
                if (value_of(clause[0]) > 0) {
                    watch[kept++] = ci;
                    continue;
                }
                bool moved = false;
                for (std::size_t k = 2; k < clause.size(); ++k) {
                    if (value_of(clause[k]) >= 0) {
                        std::swap(clause[1], clause[k]);
                        ctx.watches_[enc(clause[1])].push_back(ci);
                        moved = true;
                        break;
                    }
                }
                if (moved) continue;
                watch[kept++] = ci;
                if (value_of(clause[0]) < 0) {
                    // conflict: keep remaining watches intact
                    for (std::size_t j = i + 1; j < watch.size(); ++j) watch[kept++] = watch[j];
                    watch.resize(kept);
                    return false;
                }
                if (!assign(clause[0])) {
                    for (std::size_t j = i + 1; j < watch.size(); ++j) watch[kept++] = watch[j];
                    watch.resize(kept);
                    return false;
                }
            }
            watch.resize(kept);
        }
        return true;
    }

    void undo_to(std::size_t trail_pos) {
        while (trail.size() > trail_pos) {
            std::int32_t lit = trail.back();
            trail.pop_back();
            value[static_cast<std::size_t>(lit < 0 ? -lit : lit)] = 0;
        }
        propagated = trail.size();
    }

    // Flip the most recent unflipped decision; false when none remain.
    bool backtrack() {
        while (!decisions.empty()) {
            Decision d = decisions.back();
            decisions.pop_back();
            undo_to(d.trail_pos);
            if (!d.flipped) {
                decisions.push_back({trail.size(), -d.lit, true});
                bool ok = assign(-d.lit);
                (void)ok; // the variable was just unassigned
                return true;
            }
        }
        return false;
    }
};

std::optional<std::vector<std::int8_t>> SatContext::solve(
    const std::vector<std::int32_t>& assumptions, const std::vector<FeatureIndex>& branch_order,
    const std::vector<std::int8_t>& polarity) {
    Search search(*this);
    search.check_time_now();
    for (std::int32_t lit : units_) {
        if (!search.assign(lit)) return std::nullopt;
    }
    for (std::int32_t lit : assumptions) {
        if (!search.assign(lit)) return std::nullopt;
    }
    while (true) {
        search.check_time();
        if (!search.propagate()) {
            if (!search.backtrack()) return std::nullopt;
            continue;
        }
        FeatureIndex next = 0;
        for (FeatureIndex var : branch_order) {
            if (search.value[var] == 0) {
                next = var;
                break;
            }
        }
        if (next == 0) return search.value; // complete assignment
        std::int32_t lit = polarity[next] > 0 ? static_cast<std::int32_t>(next)
                                              : -static_cast<std::int32_t>(next);
        search.decisions.push_back({search.trail.size(), lit, false});
        search.assign(lit);
    }
}

bool SatContext::valid(const Configuration& config) {
    std::vector<std::int32_t> assumptions;
    assumptions.reserve(config.size());
    for (Literal l : config) {
        if (l.feature() > var_count_)
            throw StructuralError("configuration references feature index " +
                                  std::to_string(l.feature()) + " beyond model size " +
                                  std::to_string(var_count_));
        assumptions.push_back(l.code());
    }
    std::vector<std::int8_t> polarity(var_count_ + 1, -1);
    return solve(assumptions, default_order_, polarity).has_value();
}

namespace {

// Deterministic Fisher-Yates; avoids std::shuffle's unspecified draws.
template <typename T>
void shuffle_deterministic(std::vector<T>& items, std::mt19937_64& rng) {
    for (std::size_t i = items.size(); i > 1; --i) {
        std::size_t j = static_cast<std::size_t>(rng() % i);
        std::swap(items[i - 1], items[j]);
    }
}

} // namespace

Configuration SatContext::extend_to_complete(const Configuration& config, std::uint64_t seed) {
    std::vector<std::int32_t> assumptions;
    for (Literal l : config) {
        if (l.feature() > var_count_)
            throw StructuralError("configuration references feature index " +
                                  std::to_string(l.feature()) + " beyond model size " +
                                  std::to_string(var_count_));
        assumptions.push_back(l.code());
    }
    std::mt19937_64 rng(seed);
    std::vector<FeatureIndex> order = default_order_;
    shuffle_deterministic(order, rng);
    std::vector<std::int8_t> polarity(var_count_ + 1, -1);
    for (FeatureIndex v = 1; v <= var_count_; ++v)
        polarity[v] = (rng() & 1) ? std::int8_t{1} : std::int8_t{-1};
    auto model = solve(assumptions, order, polarity);
    if (!model)
        throw ContractError("extend_to_complete requires a valid configuration");
    std::vector<Literal> literals;
    literals.reserve(var_count_);
    for (FeatureIndex v = 1; v <= var_count_; ++v)
        literals.push_back((*model)[v] > 0 ? Literal::positive(v) : Literal::negative(v));
    auto result = Configuration::try_from(literals);
    return *result;
}

std::optional<Configuration> SatContext::random_solution(std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::vector<FeatureIndex> order = default_order_;
    shuffle_deterministic(order, rng);
    std::vector<std::int8_t> polarity(var_count_ + 1, -1);
    for (FeatureIndex v = 1; v <= var_count_; ++v)
        polarity[v] = (rng() & 1) ? std::int8_t{1} : std::int8_t{-1};
    auto model = solve({}, order, polarity);
    if (!model) return std::nullopt;
    std::vector<Literal> literals;
    literals.reserve(var_count_);
    for (FeatureIndex v = 1; v <= var_count_; ++v)
        literals.push_back((*model)[v] > 0 ? Literal::positive(v) : Literal::negative(v));
    return *Configuration::try_from(literals);
}

bool valid(const Configuration& config, const FeatureModel& model) {
    SatContext context(model);
    return context.valid(config);
}

Configuration extend_to_complete(const Configuration& config, const FeatureModel& model,
                                 std::uint64_t seed) {
    SatContext context(model);
    return context.extend_to_complete(config, seed);
}

} // namespace pcs

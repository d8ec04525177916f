#ifndef PCS_SAT_HPP
#define PCS_SAT_HPP

#include <chrono>
#include <cstdint>
#include <optional>
#include <vector>

#include "pcs/core.hpp"

namespace pcs {

/// Satisfiability backend for one feature model's CNF. Queries never
/// mutate the loaded dependencies. A context is single-owner; create one
/// context per thread over the same (immutable) model.
class SatContext {
public:
    explicit SatContext(const FeatureModel& model);

    /// Per-query wall-clock budget. Exceeding it raises TimeoutError.
    void set_timeout(std::chrono::milliseconds timeout) { timeout_ = timeout; }
    std::chrono::milliseconds timeout() const { return timeout_; }

    /// valid(C, M): true iff the dependencies conjoined with the
    /// configuration's literals as assumptions are satisfiable.
    bool valid(const Configuration& config);

    /// Extends a valid configuration to a complete valid one using the
    /// first model found under a seed-shuffled branching order.
    /// Deterministic for fixed (config, seed). Raises ContractError when
    /// the configuration is not valid.
    Configuration extend_to_complete(const Configuration& config, std::uint64_t seed);

    /// A complete valid configuration found under a seed-shuffled
    /// branching order with randomized polarities; nullopt if the model
    /// is unsatisfiable.
    std::optional<Configuration> random_solution(std::uint64_t seed);

private:
    struct Search;
    std::optional<std::vector<std::int8_t>> solve(const std::vector<std::int32_t>& assumptions,
                                                  const std::vector<FeatureIndex>& branch_order,
                                                  const std::vector<std::int8_t>& polarity);

    FeatureIndex var_count_ = 0;
    std::vector<std::vector<std::int32_t>> clauses_; // size >= 2, first two are watched
    std::vector<std::int32_t> units_;
    std::vector<std::vector<std::uint32_t>> watches_; // per encoded literal
    std::vector<FeatureIndex> default_order_;
    std::chrono::milliseconds timeout_{30'000};
};

/// One-shot helpers; each call builds a fresh context.
bool valid(const Configuration& config, const FeatureModel& model);
Configuration extend_to_complete(const Configuration& config, const FeatureModel& model,
                                 std::uint64_t seed);

} // namespace pcs

#endif

#ifndef PCS_SAMPLER_HPP
#define PCS_SAMPLER_HPP

#include <chrono>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "pcs/core.hpp"
#include "pcs/sat.hpp"
#include "pcs/transform.hpp"

namespace pcs {

struct SamplerOptions {
    std::uint32_t t = 2;
    std::uint64_t seed = 0;
    /// Mirrors the upstream limit of 2^31 processable interactions.
    std::uint64_t interaction_cap = std::uint64_t{1} << 31;
    /// Replication aid: enumerate a seed-shuffled universe order instead
    /// of the input order.
    bool shuffle_entries = false;
    TransformOptions transform;
    std::chrono::milliseconds query_timeout{30'000};
};

struct SamplerStats {
    std::uint64_t enumerated = 0;
    std::uint64_t already_covered = 0;
    std::uint64_t newly_covered = 0;
    std::uint64_t unsatisfiable = 0;
};

/// Enumerates every size-t multiset of {0..k-1} exactly once, as
/// non-decreasing index tuples in lexicographic order.
class InteractionCursor {
public:
    InteractionCursor(std::size_t universe_size, std::uint32_t t);
    /// nullptr when exhausted; the pointee is reused between calls.
    const std::vector<std::size_t>* next();
    /// Number of size-t multisets, C(k+t-1, t); nullopt on overflow.
    static std::optional<std::uint64_t> count(std::size_t k, std::uint32_t t);

private:
    std::vector<std::size_t> indices_;
    std::size_t k_;
    bool fresh_ = true;
    bool done_ = false;
};

/// The greedy covering step of the sampling algorithm, exposed
/// per-interaction: each call either finds the combined condition already
/// covered, extends the first compatible configuration with one of its
/// clauses, or appends a new configuration seeded from the smallest valid
/// clause. Stored configurations are valid (possibly partial) at all times.
class GreedySampler {
public:
    GreedySampler(const FeatureModel& model, SatContext& sat, TransformOptions transform = {});

    void process_interaction(std::span<const PresenceCondition> interaction);
    const std::vector<Configuration>& configurations() const { return configurations_; }
    const SamplerStats& stats() const { return stats_; }

    /// Extends every partial configuration to a complete valid one.
    std::vector<Configuration> finish(std::uint64_t seed);

private:
    const FeatureModel& model_;
    SatContext& sat_;
    TransformOptions transform_;
    std::vector<Configuration> configurations_;
    SamplerStats stats_;
};

/// Covers every satisfiable t-wise interaction of the universe (treated as
/// a single group). The result reaches 100% t-wise coverage by
/// construction; every configuration is complete and valid. Deterministic
/// for fixed (universe order, model, t, seed).
Sample sample(const PcUniverse& universe, const FeatureModel& model,
              const SamplerOptions& options = {}, SamplerStats* stats = nullptr);

/// Runs the greedy construction once per universe group, accumulating
/// configurations across groups; without groups it equals sample().
Sample sample_grouped(const PcUniverse& universe, const FeatureModel& model,
                      const SamplerOptions& options = {}, SamplerStats* stats = nullptr);

/// n complete valid configurations from the decision procedure under a
/// per-configuration shuffled branching order; duplicates permitted.
Sample random_sample(const FeatureModel& model, std::size_t n, std::uint64_t seed);

/// Stable seed derivation for per-item randomness.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt);

} // namespace pcs

#endif

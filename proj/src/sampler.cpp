#include "pcs/sampler.hpp"

#include <algorithm>
#include <numeric>
#include <random>

#include "pcs/error.hpp"

namespace pcs {

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt) {
    // splitmix64 finalizer over seed xor salted golden ratio
    std::uint64_t z = seed ^ (salt + 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

InteractionCursor::InteractionCursor(std::size_t universe_size, std::uint32_t t)
    : indices_(t, 0), k_(universe_size) {
    if (t == 0) throw ContractError("interaction size t must be at least 1");
    if (k_ == 0) done_ = true;
}

const std::vector<std::size_t>* InteractionCursor::next() {
    if (done_) return nullptr;
    if (fresh_) {
        fresh_ = false;
        return &indices_;
    }
    // advance the rightmost position that can still grow
    std::size_t t = indices_.size();
    std::size_t pos = t;
    while (pos > 0) {
        --pos;
        if (indices_[pos] + 1 < k_) {
            std::size_t v = indices_[pos] + 1;
            for (std::size_t j = pos; j < t; ++j) indices_[j] = v;
            return &indices_;
        }
    }
    done_ = true;
    return nullptr;
}

std::optional<std::uint64_t> InteractionCursor::count(std::size_t k, std::uint32_t t) {
    if (t == 0) return std::nullopt;
    if (k == 0) return 0;
    // C(k+t-1, t) with overflow checks
    unsigned __int128 acc = 1;
    for (std::uint32_t i = 1; i <= t; ++i) {
        acc = acc * (k - 1 + i) / i; // exact: divides a product of i consecutive ints
        if (acc > static_cast<unsigned __int128>(UINT64_MAX)) return std::nullopt;
    }
    return static_cast<std::uint64_t>(acc);
}

GreedySampler::GreedySampler(const FeatureModel& model, SatContext& sat,
                             TransformOptions transform)
    : model_(model), sat_(sat), transform_(transform) {}

void GreedySampler::process_interaction(std::span<const PresenceCondition> interaction) {
    ++stats_.enumerated;
    PresenceCondition combined = conjoin(interaction, transform_);
    if (combined.is_contradiction()) {
        ++stats_.unsatisfiable;
        return;
    }
    if (combined.is_tautology()) {
        // unreachable through preprocess (tautologies are removed); an
        // empty configuration suffices to activate it
        if (configurations_.empty()) configurations_.emplace_back();
        ++stats_.already_covered;
        return;
    }
    for (const Configuration& config : configurations_) {
        if (active(combined, config)) {
            ++stats_.already_covered;
            return;
        }
    }
    std::vector<const Clause*> valid_clauses;
    for (const Clause& clause : combined.clauses()) {
        auto as_config = Configuration::try_from(clause.literals());
        if (!as_config || !sat_.valid(*as_config)) continue;
        for (Configuration& config : configurations_) {
            auto extended = config.try_union(clause);
            if (extended && sat_.valid(*extended)) {
                config = std::move(*extended);
                ++stats_.newly_covered;
                return;
            }
        }
        valid_clauses.push_back(&clause);
    }
    if (valid_clauses.empty()) {
        ++stats_.unsatisfiable;
        return;
    }
    // smallest clause, first encountered on ties
    const Clause* best = valid_clauses.front();
    for (const Clause* c : valid_clauses) {
        if (c->size() < best->size()) best = c;
    }
    configurations_.push_back(*Configuration::try_from(best->literals()));
    ++stats_.newly_covered;
}

std::vector<Configuration> GreedySampler::finish(std::uint64_t seed) {
    std::vector<Configuration> completed;
    completed.reserve(configurations_.size());
    for (std::size_t i = 0; i < configurations_.size(); ++i)
        completed.push_back(sat_.extend_to_complete(configurations_[i], mix_seed(seed, i)));
    return completed;
}

namespace {

std::vector<std::size_t> entry_order(std::size_t n, const SamplerOptions& options,
                                     std::uint64_t salt) {
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    if (options.shuffle_entries) {
        std::mt19937_64 rng(mix_seed(options.seed, salt));
        for (std::size_t i = n; i > 1; --i)
            std::swap(order[i - 1], order[rng() % i]);
    }
    return order;
}

Sample run_groups(const PcUniverse& universe, const FeatureModel& model,
                  const SamplerOptions& options, SamplerStats* stats_out,
                  const std::vector<std::vector<std::size_t>>& groups) {
    if (options.t == 0) throw ContractError("interaction size t must be at least 1");
    if (universe.max_feature() > model.feature_count())
        throw StructuralError("universe references features beyond the model");

    std::uint64_t total = 0;
    for (const auto& group : groups) {
        auto n = InteractionCursor::count(group.size(), options.t);
        if (!n || *n > options.interaction_cap - total)
            throw CapError("number of t-wise interactions exceeds cap " +
                           std::to_string(options.interaction_cap) +
                           "; reduce t or enable grouping (--group file|folder)");
        total += *n;
    }

    SatContext sat(model);
    sat.set_timeout(options.query_timeout);
    GreedySampler sampler(model, sat, options.transform);
    std::vector<PresenceCondition> interaction(options.t, PresenceCondition::tautology());
    for (std::size_t gi = 0; gi < groups.size(); ++gi) {
        std::vector<std::size_t> order = entry_order(groups[gi].size(), options, gi);
        InteractionCursor cursor(groups[gi].size(), options.t);
        while (const std::vector<std::size_t>* multiset = cursor.next()) {
            for (std::size_t slot = 0; slot < options.t; ++slot)
                interaction[slot] = universe.entries[groups[gi][order[(*multiset)[slot]]]];
            sampler.process_interaction(interaction);
        }
    }

    Sample result;
    result.model_hash = model.hash();
    result.t = options.t;
    result.mode = universe.mode;
    result.configurations = sampler.finish(options.seed);
    if (stats_out) *stats_out = sampler.stats();
    return result;
}

} // namespace

Sample sample(const PcUniverse& universe, const FeatureModel& model,
              const SamplerOptions& options, SamplerStats* stats) {
    std::vector<std::size_t> all(universe.size());
    std::iota(all.begin(), all.end(), std::size_t{0});
    return run_groups(universe, model, options, stats, {all});
}

Sample sample_grouped(const PcUniverse& universe, const FeatureModel& model,
                      const SamplerOptions& options, SamplerStats* stats) {
    if (universe.groups.empty()) return sample(universe, model, options, stats);
    return run_groups(universe, model, options, stats, universe.groups);
}

Sample random_sample(const FeatureModel& model, std::size_t n, std::uint64_t seed) {
    SatContext sat(model);
    if (!sat.valid(Configuration{}))
        throw Error("feature model is unsatisfiable, cannot draw random configurations");
    Sample result;
    result.model_hash = model.hash();
    result.t = 0;
    result.mode = Mode::random;
    result.configurations.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        auto config = sat.random_solution(mix_seed(seed, i));
        if (!config) throw Error("satisfiable model yielded no solution");
        result.configurations.push_back(std::move(*config));
    }
    return result;
}

} // namespace pcs

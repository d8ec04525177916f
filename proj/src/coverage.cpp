#include "pcs/coverage.hpp"

#include <algorithm>

#include "pcs/error.hpp"
#include "pcs/sat.hpp"

namespace pcs {

namespace {

// Distinct index subsets i1 < ... < it in lexicographic order.
class SubsetCursor {
public:
    SubsetCursor(std::size_t k, std::uint32_t t) : k_(k) {
        if (t == 0) throw ContractError("interaction size t must be at least 1");
        if (t > k) {
            done_ = true;
            return;
        }
        indices_.resize(t);
        for (std::uint32_t i = 0; i < t; ++i) indices_[i] = i;
    }

    const std::vector<std::size_t>* next() {
        if (done_) return nullptr;
        if (fresh_) {
            fresh_ = false;
            return &indices_;
        }
        std::size_t t = indices_.size();
        std::size_t pos = t;
        while (pos > 0) {
            --pos;
            if (indices_[pos] + (t - pos) < k_) {
                ++indices_[pos];
                for (std::size_t j = pos + 1; j < t; ++j) indices_[j] = indices_[j - 1] + 1;
                return &indices_;
            }
        }
        done_ = true;
        return nullptr;
    }

private:
    std::vector<std::size_t> indices_;
    std::size_t k_ = 0;
    bool fresh_ = true;
    bool done_ = false;
};

void require_complete(const Sample& sample, const FeatureModel& model) {
    for (const Configuration& config : sample.configurations) {
        if (!complete(config, model))
            throw ContractError("coverage requires complete configurations (got " +
                                std::to_string(config.size()) + " of " +
                                std::to_string(model.feature_count()) + " literals)");
    }
}

} // namespace

CoverageReport coverage(const Sample& sample, const PcUniverse& universe,
                        const FeatureModel& model, const CoverageOptions& options) {
    require_complete(sample, model);
    if (universe.max_feature() > model.feature_count())
        throw StructuralError("universe references features beyond the model");

    SatContext sat(model);
    sat.set_timeout(options.query_timeout);
    CoverageReport report;
    report.t = options.t;
    report.mode = universe.mode;

    // For complete configurations the combined condition is active exactly
    // when every constituent is, so per-entry activation bitsets decide the
    // covered check without building the conjunction. A covered interaction
    // is satisfiable by the covering configuration; only uncovered ones
    // still need the conjunction and the satisfiability filter.
    const std::size_t config_count = sample.configurations.size();
    const std::size_t words = (config_count + 63) / 64;
    std::vector<std::uint64_t> activation(universe.size() * words, 0);
    for (std::size_t e = 0; e < universe.size(); ++e) {
        for (std::size_t c = 0; c < config_count; ++c) {
            if (active(universe.entries[e], sample.configurations[c]))
                activation[e * words + c / 64] |= std::uint64_t{1} << (c % 64);
        }
    }
    std::vector<std::uint64_t> intersection(words);

    std::vector<PresenceCondition> interaction;
    SubsetCursor cursor(universe.size(), options.t);
    while (const std::vector<std::size_t>* subset = cursor.next()) {
        bool covered = false;
        if (config_count > 0) {
            for (std::size_t w = 0; w < words; ++w)
                intersection[w] = activation[subset->front() * words + w];
            for (std::size_t i = 1; i < subset->size(); ++i) {
                for (std::size_t w = 0; w < words; ++w)
                    intersection[w] &= activation[(*subset)[i] * words + w];
            }
            for (std::size_t w = 0; w < words && !covered; ++w) covered = intersection[w] != 0;
        }
        if (covered) {
            ++report.total_valid_interactions;
            ++report.covered_interactions;
            continue;
        }
        interaction.clear();
        for (std::size_t index : *subset) interaction.push_back(universe.entries[index]);
        PresenceCondition combined = conjoin(interaction, options.transform);
        if (combined.is_contradiction()) continue;
        bool satisfiable = combined.is_tautology();
        for (const Clause& clause : combined.clauses()) {
            if (satisfiable) break;
            auto as_config = Configuration::try_from(clause.literals());
            if (as_config && sat.valid(*as_config)) satisfiable = true;
        }
        if (!satisfiable) continue;
        ++report.total_valid_interactions;
        ++report.uncovered_total;
        if (report.uncovered.size() < options.uncovered_cap) {
            report.uncovered_subsets.push_back(*subset);
            report.uncovered.push_back(std::move(combined));
        }
    }
    return report;
}

namespace {

// Direct evaluation under a complete assignment bitmask (bit f-1 set =
// feature f selected). Deliberately independent of active()/conjoin().
bool eval_clause(const Clause& clause, std::uint32_t assignment) {
    for (Literal l : clause) {
        bool selected = (assignment >> (l.feature() - 1)) & 1u;
        if (selected != l.is_positive()) return false;
    }
    return true;
}

bool eval_pc(const PresenceCondition& pc, std::uint32_t assignment) {
    if (pc.is_tautology()) return true;
    for (const Clause& clause : pc.clauses()) {
        if (eval_clause(clause, assignment)) return true;
    }
    return false;
}

std::uint32_t as_mask(const Configuration& config) {
    std::uint32_t mask = 0;
    for (Literal l : config) {
        if (l.is_positive()) mask |= 1u << (l.feature() - 1);
    }
    return mask;
}

} // namespace

CoverageReport brute_force_coverage(const Sample& sample, const PcUniverse& universe,
                                    const FeatureModel& model, const CoverageOptions& options) {
    require_complete(sample, model);
    const FeatureIndex n = model.feature_count();
    if (n > 20)
        throw InstanceTooLargeError("brute-force oracle limited to 20 features, got " +
                                    std::to_string(n));
    auto subsets = [&] {
        unsigned __int128 acc = 1;
        for (std::uint32_t i = 1; i <= options.t && i <= universe.size(); ++i)
            acc = acc * (universe.size() - i + 1) / i;
        return acc;
    }();
    if (subsets > (1u << 22))
        throw InstanceTooLargeError("brute-force oracle refuses this many interactions");

    std::vector<std::uint32_t> valid_assignments;
    for (std::uint64_t assignment = 0; assignment < (std::uint64_t{1} << n); ++assignment) {
        bool ok = true;
        for (const Clause& dep : model.dependencies()) {
            bool sat = false;
            for (Literal l : dep) {
                bool selected = (assignment >> (l.feature() - 1)) & 1u;
                if (selected == l.is_positive()) {
                    sat = true;
                    break;
                }
            }
            if (!sat) {
                ok = false;
                break;
            }
        }
        if (ok) valid_assignments.push_back(static_cast<std::uint32_t>(assignment));
    }

    std::vector<std::uint32_t> sample_masks;
    sample_masks.reserve(sample.configurations.size());
    for (const Configuration& config : sample.configurations)
        sample_masks.push_back(as_mask(config));

    CoverageReport report;
    report.t = options.t;
    report.mode = universe.mode;
    SubsetCursor cursor(universe.size(), options.t);
    auto all_active = [&](const std::vector<std::size_t>& subset, std::uint32_t assignment) {
        for (std::size_t index : subset) {
            if (!eval_pc(universe.entries[index], assignment)) return false;
        }
        return true;
    };
    std::vector<PresenceCondition> interaction;
    while (const std::vector<std::size_t>* subset = cursor.next()) {
        bool satisfiable = false;
        for (std::uint32_t assignment : valid_assignments) {
            if (all_active(*subset, assignment)) {
                satisfiable = true;
                break;
            }
        }
        if (!satisfiable) continue;
        ++report.total_valid_interactions;
        bool covered = false;
        for (std::uint32_t mask : sample_masks) {
            if (all_active(*subset, mask)) {
                covered = true;
                break;
            }
        }
        if (covered) {
            ++report.covered_interactions;
        } else {
            ++report.uncovered_total;
            if (report.uncovered.size() < options.uncovered_cap) {
                report.uncovered_subsets.push_back(*subset);
                interaction.clear();
                for (std::size_t index : *subset) interaction.push_back(universe.entries[index]);
                report.uncovered.push_back(conjoin(interaction, options.transform));
            }
        }
    }
    return report;
}

std::uint32_t FaultSpec::degree() const {
    if (!condition.is_proper())
        throw ContractError("fault condition must be a proper presence condition");
    std::size_t smallest = condition.clauses().front().size();
    for (const Clause& clause : condition.clauses())
        smallest = std::min(smallest, clause.size());
    return static_cast<std::uint32_t>(smallest);
}

bool fault_covered(const Sample& sample, const FaultSpec& fault) {
    for (const Configuration& config : sample.configurations) {
        if (active(fault.condition, config)) return true;
    }
    return false;
}

} // namespace pcs

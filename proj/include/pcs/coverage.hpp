#ifndef PCS_COVERAGE_HPP
#define PCS_COVERAGE_HPP

#include <chrono>
#include <cstdint>
#include <string>
#include <vector>

#include "pcs/core.hpp"
#include "pcs/transform.hpp"

namespace pcs {

struct CoverageOptions {
    std::uint32_t t = 2;
    /// Uncovered interactions listed in the report are capped here.
    std::size_t uncovered_cap = 100;
    TransformOptions transform;
    std::chrono::milliseconds query_timeout{30'000};
};

/// Interactions counted over distinct (no-repetition) size-t subsets of
/// universe entries, filtered to those satisfiable together with the
/// model. ratio is covered/total, defined as 1 when total is 0.
struct CoverageReport {
    std::uint32_t t = 0;
    Mode mode = Mode::pc;
    std::uint64_t total_valid_interactions = 0;
    std::uint64_t covered_interactions = 0;
    std::uint64_t uncovered_total = 0;
    std::vector<std::vector<std::size_t>> uncovered_subsets; // entry indices, capped
    std::vector<PresenceCondition> uncovered;                // combined PCs, capped

    double ratio() const {
        if (total_valid_interactions == 0) return 1.0;
        return static_cast<double>(covered_interactions) /
               static_cast<double>(total_valid_interactions);
    }
};

/// t-wise presence-condition coverage of a sample. Sample configurations
/// must be complete (checked) and valid (caller's obligation).
CoverageReport coverage(const Sample& sample, const PcUniverse& universe,
                        const FeatureModel& model, const CoverageOptions& options = {});

/// Testing oracle with the same contract as coverage(), computed by plain
/// enumeration of all complete valid assignments and direct formula
/// evaluation. Refuses instances beyond its enumeration guards.
CoverageReport brute_force_coverage(const Sample& sample, const PcUniverse& universe,
                                    const FeatureModel& model,
                                    const CoverageOptions& options = {});

/// A known fault's presence condition. Its interaction degree is the
/// number of literals in the smallest DNF clause.
struct FaultSpec {
    std::string id;
    PresenceCondition condition; // proper by invariant

    std::uint32_t degree() const;
};

/// True iff at least one sample configuration activates the fault's
/// condition.
bool fault_covered(const Sample& sample, const FaultSpec& fault);

} // namespace pcs

#endif

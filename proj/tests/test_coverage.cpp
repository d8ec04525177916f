#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <random>

#include "pcs/coverage.hpp"
#include "pcs/error.hpp"
#include "pcs/io.hpp"
#include "pcs/sampler.hpp"
#include "support.hpp"

using namespace pcs;
using namespace pcs::testsupport;

namespace {

const std::filesystem::path fixtures{PCS_FIXTURES_DIR};

PcUniverse running_universe(const FeatureModel& m) {
    std::vector<RawCondition> raws;
    const char* formulas[] = {
        "1",
        "TFTP_GET || TFTP_PUT",
        "(TFTP_GET || TFTP_PUT) && TFTP",
        "(TFTP_GET || TFTP_PUT) && TFTP && TFTP_BLOCKSIZE",
        "(TFTP_GET || TFTP_PUT) && TFTP && TFTP_DEBUG",
    };
    std::uint32_t line = 1;
    for (const char* f : formulas) raws.push_back({parse_formula(f), "tftp.c", line++});
    return preprocess(raws, m, Mode::pc);
}

Sample incling_sample(const FeatureModel& m) {
    Sample s = read_sample_csv(fixtures / "running" / "incling.csv", m);
    s.t = 2;
    s.mode = Mode::pc;
    return s;
}

bool reports_agree(const CoverageReport& a, const CoverageReport& b) {
    return a.total_valid_interactions == b.total_valid_interactions &&
           a.covered_interactions == b.covered_interactions &&
           a.uncovered_total == b.uncovered_total &&
           a.uncovered_subsets == b.uncovered_subsets;
}

} // namespace

TEST_CASE("the pair-wise gaps of the worked sample are found exactly") {
    FeatureModel m = running_model();
    PcUniverse u = running_universe(m);
    Sample incling = incling_sample(m);

    CoverageReport report = coverage(incling, u, m, cov_at(2));
    // convention: distinct unordered entry pairs, satisfiability filtered
    CHECK(report.total_valid_interactions == 19);
    CHECK(report.covered_interactions == 17);
    CHECK(report.uncovered_total == 2);
    REQUIRE(report.uncovered.size() == 2);

    PresenceCondition b_not_d =
        pc_of("(TFTP_GET && TFTP && TFTP_BLOCKSIZE && !TFTP_DEBUG) || "
              "(TFTP_PUT && TFTP && TFTP_BLOCKSIZE && !TFTP_DEBUG)",
              m);
    PresenceCondition d_not_b =
        pc_of("(TFTP_GET && TFTP && !TFTP_BLOCKSIZE && TFTP_DEBUG) || "
              "(TFTP_PUT && TFTP && !TFTP_BLOCKSIZE && TFTP_DEBUG)",
              m);
    std::vector<PresenceCondition> uncovered = report.uncovered;
    std::sort(uncovered.begin(), uncovered.end());
    std::vector<PresenceCondition> expected{b_not_d, d_not_b};
    std::sort(expected.begin(), expected.end());
    CHECK(uncovered == expected);

    CHECK(report.ratio() == doctest::Approx(17.0 / 19.0));
    CHECK(reports_agree(report, brute_force_coverage(incling, u, m, cov_at(2))));
}

TEST_CASE("a sampler's own output always measures 1.0") {
    FeatureModel m = running_model();
    PcUniverse u = running_universe(m);
    SamplerOptions options;
    options.t = 2;
    Sample own = sample(u, m, options);
    CoverageReport report = coverage(own, u, m, cov_at(2));
    CHECK(report.ratio() == doctest::Approx(1.0));
    CHECK(report.uncovered_total == 0);
}

TEST_CASE("an empty sample over a satisfiable universe measures 0") {
    FeatureModel m = running_model();
    PcUniverse u = running_universe(m);
    Sample empty;
    empty.t = 2;
    CoverageReport report = coverage(empty, u, m, cov_at(2));
    CHECK(report.total_valid_interactions == 19);
    CHECK(report.covered_interactions == 0);
    CHECK(report.ratio() == doctest::Approx(0.0));
}

TEST_CASE("an empty universe measures 1 by convention") {
    FeatureModel m = running_model();
    PcUniverse u;
    u.mode = Mode::pc;
    Sample empty;
    CoverageReport report = coverage(empty, u, m, cov_at(2));
    CHECK(report.total_valid_interactions == 0);
    CHECK(report.ratio() == doctest::Approx(1.0));
}

TEST_CASE("coverage checks sample completeness") {
    FeatureModel m = running_model();
    PcUniverse u = running_universe(m);
    Sample bad;
    bad.configurations.push_back(config_of("TFTP_GET", m));
    CHECK_THROWS_AS(coverage(bad, u, m, cov_at(2)), ContractError);
}

TEST_CASE("coverage is monotone and permutation invariant") {
    FeatureModel m = running_model();
    PcUniverse u = running_universe(m);
    Sample incling = incling_sample(m);

    Sample shuffled = incling;
    std::reverse(shuffled.configurations.begin(), shuffled.configurations.end());
    CHECK(reports_agree(coverage(incling, u, m, cov_at(2)), coverage(shuffled, u, m, cov_at(2))));

    Sample growing;
    growing.t = 2;
    std::uint64_t last = 0;
    for (const Configuration& config : incling.configurations) {
        growing.configurations.push_back(config);
        CoverageReport report = coverage(growing, u, m, cov_at(2));
        CHECK(report.covered_interactions >= last);
        last = report.covered_interactions;
    }
}

TEST_CASE("uncovered listing honors the cap") {
    FeatureModel m = running_model();
    PcUniverse u = running_universe(m);
    Sample empty;
    CoverageOptions options;
    options.t = 2;
    options.uncovered_cap = 3;
    CoverageReport report = coverage(empty, u, m, options);
    CHECK(report.uncovered_total == 19);
    CHECK(report.uncovered.size() == 3);
    CHECK(report.uncovered_subsets.size() == 3);
}

TEST_CASE("coverage matches the brute-force oracle on random instances") {
    std::mt19937_64 rng(90210);
    for (int round = 0; round < 60; ++round) {
        FeatureIndex n = 2 + static_cast<FeatureIndex>(rng() % 7);
        FeatureModel m = random_sat_model(rng, n, 5);
        std::vector<RawCondition> raws;
        unsigned count = 1 + static_cast<unsigned>(rng() % 8);
        for (unsigned i = 0; i < count; ++i)
            raws.push_back({random_expr(rng, m, 2), "r.c", i + 1});
        Mode mode = (round % 3 == 0) ? Mode::fm : Mode::pc;
        PcUniverse u = preprocess(raws, m, mode);
        std::uint32_t t = 1 + static_cast<std::uint32_t>(rng() % 3);

        Sample probe = random_sample(m, rng() % 6, rng());
        probe.t = t;
        CoverageOptions options;
        options.t = t;
        options.uncovered_cap = 10'000;
        CHECK(reports_agree(coverage(probe, u, m, options),
                            brute_force_coverage(probe, u, m, options)));
    }
}

TEST_CASE("two-feature full factorial is the enumeration baseline") {
    FeatureModel m = letters_model(2);
    PcUniverse u = preprocess({}, m, Mode::fm);
    REQUIRE(u.size() == 4); // A, B, !A, !B

    Sample factorial;
    factorial.t = 2;
    factorial.mode = Mode::fm;
    for (std::uint32_t mask = 0; mask < 4; ++mask)
        factorial.configurations.push_back(config_of_mask(mask, 2));
    CoverageReport full = brute_force_coverage(factorial, u, m, cov_at(2));
    // six distinct pairs; the two same-feature pairs are unsatisfiable
    CHECK(full.total_valid_interactions == 4);
    CHECK(full.ratio() == doctest::Approx(1.0));

    Sample lone;
    lone.t = 2;
    lone.configurations.push_back(config_of("A && B", m));
    CoverageReport partial = brute_force_coverage(lone, u, m, cov_at(2));
    CHECK(partial.total_valid_interactions == 4);
    CHECK(partial.covered_interactions == 1);
    CHECK(reports_agree(partial, coverage(lone, u, m, cov_at(2))));
}

TEST_CASE("brute-force oracle rejects oversized instances") {
    FeatureModel big = letters_model(21);
    PcUniverse u;
    u.mode = Mode::fm;
    Sample empty;
    CHECK_THROWS_AS(brute_force_coverage(empty, u, big, cov_at(1)), InstanceTooLargeError);
}

TEST_CASE("fault coverage separates the worked samples") {
    FeatureModel m = running_model();
    std::vector<FaultRecord> faults = read_faults(fixtures / "running" / "fault.tsv");
    REQUIRE(faults.size() == 1);
    FaultSpec fault{faults[0].id, dnf_of(faults[0].formula, m)};
    CHECK(fault.degree() == 4);

    PcUniverse u = running_universe(m);
    SamplerOptions options;
    options.t = 2;
    Sample own = sample(u, m, options);
    CHECK(fault_covered(own, fault));
    CHECK_FALSE(fault_covered(incling_sample(m), fault));
}

TEST_CASE("single-literal faults hit any matching configuration") {
    FeatureModel m = letters_model(3);
    FaultSpec fault{"no_b", pc_of("!B", m)};
    CHECK(fault.degree() == 1);
    Sample s;
    s.configurations.push_back(config_of("A && !B && C", m));
    CHECK(fault_covered(s, fault));
    Sample other;
    other.configurations.push_back(config_of("A && B && C", m));
    CHECK_FALSE(fault_covered(other, fault));
}

TEST_CASE("fault coverage is monotone under sample extension") {
    FeatureModel m = running_model();
    std::vector<FaultRecord> faults = read_faults(fixtures / "running" / "fault.tsv");
    FaultSpec fault{faults[0].id, dnf_of(faults[0].formula, m)};
    Sample s;
    CHECK_FALSE(fault_covered(s, fault));
    s.configurations.push_back(
        config_of("TFTP_GET && !TFTP_PUT && TFTP && !TFTP_BLOCKSIZE && TFTP_DEBUG", m));
    CHECK(fault_covered(s, fault));
    s.configurations.push_back(config_of_mask(0, 5));
    CHECK(fault_covered(s, fault)); // extending never un-covers
}

TEST_CASE("fault degrees follow the smallest clause") {
    FeatureModel m({"ENABLE_FEATURE_SYSLOG", "ENABLE_FEATURE_EDITING",
                    "ENABLE_HUSH_INTERACTIVE", "ENABLE_FEATURE_GETOPT_LONG",
                    "ENABLE_FEATURE_SEAMLESS_LZMA", "ENABLE_FEATURE_TAR_LONG_OPTIONS",
                    "FEAT_GUI_W32", "PROTO", "FEAT_GUI_MOTIF", "FEAT_GUI_GTK",
                    "FEAT_GUI_ATHENA", "FEAT_GUI_MAC", "FEAT_GUI", "SHUTDOWN_SERVER",
                    "NO_SOCKET_TO_FD", "START_RSH_WITH_POPEN_RW"},
                   {});
    struct Case {
        const char* formula;
        std::uint32_t degree;
    } cases[] = {
        {"!ENABLE_FEATURE_SYSLOG", 1},
        {"ENABLE_FEATURE_EDITING && !ENABLE_HUSH_INTERACTIVE", 2},
        {"ENABLE_FEATURE_GETOPT_LONG && !ENABLE_FEATURE_SEAMLESS_LZMA && "
         "!ENABLE_FEATURE_TAR_LONG_OPTIONS",
         3},
        {"!FEAT_GUI_W32 && !PROTO && !FEAT_GUI_MOTIF && !FEAT_GUI_GTK", 4},
        // six literals in the only clause, so degree 6 by definition
        {"!FEAT_GUI_W32 && !FEAT_GUI_GTK && !FEAT_GUI_MOTIF && !FEAT_GUI_ATHENA && "
         "!FEAT_GUI_MAC && FEAT_GUI",
         6},
        {"(SHUTDOWN_SERVER && NO_SOCKET_TO_FD && START_RSH_WITH_POPEN_RW) || "
         "(NO_SOCKET_TO_FD && !SHUTDOWN_SERVER && START_RSH_WITH_POPEN_RW)",
         3},
    };
    for (const Case& c : cases) {
        FaultSpec fault{"f", dnf_of(parse_formula(c.formula), m)};
        CHECK(fault.degree() == c.degree);
    }
}

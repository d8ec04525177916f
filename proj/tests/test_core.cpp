#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "pcs/core.hpp"
#include "pcs/error.hpp"
#include "support.hpp"

using namespace pcs;
using namespace pcs::testsupport;

TEST_CASE("literal ordering and complement") {
    Literal a = Literal::positive(3);
    CHECK(a.complement().complement() == a);
    CHECK(a.complement() == Literal::negative(3));
    CHECK(Literal::negative(3) < Literal::positive(3));
    CHECK(Literal::positive(2) < Literal::negative(3));
}

TEST_CASE("clause construction canonicalizes and flags contradictions") {
    Clause c({Literal::positive(2), Literal::negative(1), Literal::positive(2)});
    CHECK(c.size() == 2);
    CHECK(c.literals().front() == Literal::negative(1));
    CHECK_FALSE(c.contradictory());

    Clause clash({Literal::positive(1), Literal::negative(1)});
    CHECK(clash.contradictory());

    CHECK_THROWS_AS(Clause({}), StructuralError);
}

TEST_CASE("clause subset and union") {
    FeatureModel m = letters_model(4);
    Clause ab = clause_of("A && B", m);
    Clause abc = clause_of("A && B && C", m);
    CHECK(ab.subset_of(abc));
    CHECK_FALSE(abc.subset_of(ab));
    CHECK(ab.union_with(clause_of("C", m)) == abc);
    CHECK(ab.union_with(clause_of("!A", m)).contradictory());
}

TEST_CASE("feature model rejects bad names and stray indices") {
    CHECK_THROWS_AS(FeatureModel({"a b"}, {}), StructuralError);
    CHECK_THROWS_AS(FeatureModel({"a&b"}, {}), StructuralError);
    CHECK_THROWS_AS(FeatureModel({""}, {}), StructuralError);
    CHECK_THROWS_AS(FeatureModel({"x", "x"}, {}), StructuralError);
    CHECK_THROWS_AS(FeatureModel({"x"}, {Clause({Literal::positive(2)})}), StructuralError);
    FeatureModel ok({"x", "y"}, {Clause({Literal::negative(1), Literal::positive(2)})});
    CHECK(ok.feature_count() == 2);
    CHECK(ok.index_of("y") == FeatureIndex{2});
    CHECK_FALSE(ok.index_of("z").has_value());
}

TEST_CASE("model hash changes with content") {
    FeatureModel a({"x", "y"}, {});
    FeatureModel b({"x", "z"}, {});
    FeatureModel c({"x", "y"}, {Clause({Literal::positive(1)})});
    CHECK(a.hash() == FeatureModel({"x", "y"}, {}).hash());
    CHECK(a.hash() != b.hash());
    CHECK(a.hash() != c.hash());
}

TEST_CASE("active on the running example") {
    FeatureModel m = running_model();
    PresenceCondition pc = pc_of("(TFTP_GET && TFTP) || (TFTP_PUT && TFTP)", m);
    Configuration c =
        config_of("TFTP_GET && TFTP && TFTP_DEBUG && TFTP_BLOCKSIZE && !TFTP_PUT", m);
    CHECK(active(pc, c));

    CHECK_FALSE(active(PresenceCondition::contradiction(), c));
    CHECK(active(PresenceCondition::tautology(), c));
    CHECK(active(PresenceCondition::tautology(), Configuration{}));

    PresenceCondition neither = pc_of("!TFTP_GET && !TFTP_PUT", m);
    Configuration just_g = config_of("TFTP_GET", m);
    CHECK_FALSE(active(neither, just_g));
}

TEST_CASE("active matches formula evaluation on every complete configuration") {
    // oracle: direct evaluation of the source formula under each of the
    // 2^5 assignments
    FeatureModel m = running_model();
    const char* formulas[] = {
        "(TFTP_GET && TFTP) || (TFTP_PUT && TFTP)",
        "!TFTP_GET && !TFTP_PUT",
        "(TFTP_GET || TFTP_PUT) && TFTP && TFTP_BLOCKSIZE",
        "!TFTP || (TFTP_DEBUG && !TFTP_BLOCKSIZE)",
    };
    for (const char* text : formulas) {
        Expr expr = parse_formula(text);
        PresenceCondition pc = pc_of(text, m);
        for (std::uint32_t mask = 0; mask < 32; ++mask) {
            Configuration c = config_of_mask(mask, 5);
            CHECK(active(pc, c) == eval_expr_mask(expr, m, mask));
        }
    }
}

TEST_CASE("active equals evaluation on random instances up to 12 features") {
    std::mt19937_64 rng(42);
    for (int round = 0; round < 60; ++round) {
        FeatureIndex n = 2 + static_cast<FeatureIndex>(rng() % 11);
        FeatureModel m = letters_model(n);
        Expr expr = random_expr(rng, m, 3);
        PresenceCondition pc = dnf_of(expr, m);
        for (int probe = 0; probe < 40; ++probe) {
            std::uint32_t mask = static_cast<std::uint32_t>(rng()) & ((1u << n) - 1);
            Configuration c = config_of_mask(mask, n);
            CHECK(active(pc, c) == eval_expr_mask(expr, m, mask));
        }
    }
}

TEST_CASE("complete counts assigned features") {
    FeatureModel m = running_model();
    CHECK(complete(config_of_mask(7, 5), m));
    CHECK_FALSE(complete(config_of("TFTP_GET && TFTP", m), m));
    CHECK_FALSE(complete(Configuration{}, m));
}

TEST_CASE("contradictory configurations are unrepresentable") {
    std::vector<Literal> clash{Literal::positive(3), Literal::negative(3)};
    CHECK_FALSE(Configuration::try_from(clash).has_value());
}

TEST_CASE("configuration union preserves consistency") {
    FeatureModel m = letters_model(4);
    Configuration c = config_of("A && !B", m);
    auto grown = c.try_union(clause_of("C", m));
    REQUIRE(grown.has_value());
    CHECK(grown->size() == 3);
    CHECK(grown->contains(Literal::positive(3)));
    CHECK_FALSE(c.try_union(clause_of("B", m)).has_value());
    // idempotent union
    auto same = c.try_union(clause_of("A", m));
    REQUIRE(same.has_value());
    CHECK(*same == c);
}

TEST_CASE("canonicalize sorts and dedups") {
    FeatureModel m = running_model();
    PresenceCondition sorted = pc_of("(TFTP_PUT && TFTP) || (TFTP_GET && TFTP)", m);
    CHECK(sorted == pc_of("(TFTP_GET && TFTP) || (TFTP_PUT && TFTP)", m));

    PresenceCondition dup =
        PresenceCondition::of_clauses({clause_of("TFTP_GET", m), clause_of("TFTP_GET", m)});
    CHECK(dup.clauses().size() == 1);

    // ((T && G)) || ((G && T)) collapses to one clause; truth-table checked
    PresenceCondition collapsed = pc_of("(TFTP && TFTP_GET) || (TFTP_GET && TFTP)", m);
    CHECK(collapsed.clauses().size() == 1);
    CHECK(semantically_equal(collapsed, pc_of("TFTP_GET && TFTP", m), 5));
}

TEST_CASE("canonicalize is idempotent and semantics preserving") {
    std::mt19937_64 rng(7);
    FeatureModel m = letters_model(6);
    for (int round = 0; round < 50; ++round) {
        Expr expr = random_expr(rng, m, 3);
        PresenceCondition pc = dnf_of(expr, m);
        PresenceCondition once = canonicalize(pc);
        CHECK(once == canonicalize(once));
        CHECK(semantically_equal(pc, once, 6));
    }
}

TEST_CASE("validate_against flags out-of-range features") {
    FeatureModel small = letters_model(2);
    FeatureModel big = letters_model(4);
    PresenceCondition pc = pc_of("C && D", big);
    CHECK_THROWS_AS(validate_against(pc, small), StructuralError);
    CHECK_NOTHROW(validate_against(pc, big));
}

TEST_CASE("origin tags are metadata, not identity") {
    FeatureModel m = letters_model(2);
    PresenceCondition a = pc_of("A && B", m);
    PresenceCondition b = a.with_origin({"f.c", 3, 9});
    CHECK(a == b);
    CHECK(b.origin()->to_string() == "f.c:3-9");
}

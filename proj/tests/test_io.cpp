#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sstream>

#include "pcs/error.hpp"
#include "pcs/io.hpp"
#include "support.hpp"

using namespace pcs;
using namespace pcs::testsupport;

TEST_CASE("dimacs reading binds names and clauses") {
    FeatureModel m = read_dimacs_text("c 1 ALPHA\n"
                                      "c 2 BETA\n"
                                      "c some free-form comment\n"
                                      "p cnf 3 2\n"
                                      "-1 2 0\n"
                                      "-2 3 0\n",
                                      "mem");
    CHECK(m.feature_count() == 3);
    CHECK(m.name_of(1) == "ALPHA");
    CHECK(m.name_of(2) == "BETA");
    CHECK(m.name_of(3) == "x3"); // synthetic for the unnamed variable
    REQUIRE(m.dependencies().size() == 2);
    CHECK(m.dependencies()[0].contains(Literal::negative(1)));
    CHECK(m.dependencies()[0].contains(Literal::positive(2)));
}

TEST_CASE("dimacs clauses may span lines and share one") {
    FeatureModel m = read_dimacs_text("p cnf 4 2\n1 2\n3 0 -3 4 0\n", "mem");
    REQUIRE(m.dependencies().size() == 2);
    CHECK(m.dependencies()[0].size() == 3);
    CHECK(m.dependencies()[1].size() == 2);
}

TEST_CASE("synthetic names avoid collisions with given names") {
    FeatureModel m = read_dimacs_text("c 1 x2\np cnf 2 0\n", "mem");
    CHECK(m.name_of(1) == "x2");
    CHECK(m.name_of(2) == "_x2");
}

TEST_CASE("dimacs rejects malformed input") {
    CHECK_THROWS_AS(read_dimacs_text("1 2 0\n", "mem"), ParseError);           // no p line
    CHECK_THROWS_AS(read_dimacs_text("p cnf 2 1\n1 3 0\n", "mem"), ParseError); // var beyond count
    CHECK_THROWS_AS(read_dimacs_text("p dnf 2 0\n", "mem"), ParseError);
    CHECK_THROWS_AS(read_dimacs_text("p cnf 2 1\n1 garbage 0\n", "mem"), ParseError);
    CHECK_THROWS_AS(read_dimacs_text("c 1 BAD,NAME\np cnf 1 0\n", "mem"), ParseError);
    CHECK_THROWS_AS(read_dimacs_text("", "mem"), ParseError);
}

TEST_CASE("dimacs writing round-trips") {
    FeatureModel m({"A", "B", "C"},
                   {Clause({Literal::negative(1), Literal::positive(2)}),
                    Clause({Literal::positive(3)})});
    std::ostringstream text;
    write_dimacs(text, m);
    FeatureModel back = read_dimacs_text(text.str(), "mem");
    CHECK(back.hash() == m.hash());
}

TEST_CASE("sample csv accepts reordered headers") {
    FeatureModel m = letters_model(3);
    Sample s = read_sample_csv_text("C,A,B\n+,-,+\n", m, "mem");
    REQUIRE(s.configurations.size() == 1);
    CHECK(s.configurations[0].contains(Literal::negative(1)));
    CHECK(s.configurations[0].contains(Literal::positive(2)));
    CHECK(s.configurations[0].contains(Literal::positive(3)));
}

TEST_CASE("sample csv rejects mismatches") {
    FeatureModel m = letters_model(3);
    CHECK_THROWS_AS(read_sample_csv_text("A,B\n+,-\n", m, "mem"), ParseError); // missing C
    CHECK_THROWS_AS(read_sample_csv_text("A,B,C,D\n+,-,+,-\n", m, "mem"), ParseError);
    CHECK_THROWS_AS(read_sample_csv_text("A,B,C\n+,-\n", m, "mem"), ParseError); // short row
    CHECK_THROWS_AS(read_sample_csv_text("A,B,C\n+,-,x\n", m, "mem"), ParseError);
    CHECK_THROWS_AS(read_sample_csv_text("", m, "mem"), ParseError);
    CHECK_THROWS_AS(read_sample_csv_text("A,B,A\n+,-,-\n", m, "mem"), ParseError); // conflict
}

TEST_CASE("sample csv round-trips and refuses partial configurations") {
    FeatureModel m = letters_model(3);
    Sample s;
    s.configurations.push_back(config_of("A && !B && C", m));
    s.configurations.push_back(config_of("!A && !B && !C", m));
    std::ostringstream text;
    write_sample_csv(text, s, m);
    CHECK(text.str() == "A,B,C\n+,-,+\n-,-,-\n");
    Sample back = read_sample_csv_text(text.str(), m, "mem");
    CHECK(back.configurations == s.configurations);

    Sample partial;
    partial.configurations.push_back(config_of("A", m));
    std::ostringstream sink;
    CHECK_THROWS_AS(write_sample_csv(sink, partial, m), ContractError);
}

TEST_CASE("implicit models index atoms in first-occurrence order") {
    std::vector<LinePcRecord> records = read_records_text(
        "a.c\t1\tZEBRA && APPLE\n"
        "a.c\t2\tMANGO || ZEBRA\n",
        "mem");
    FeatureModel m = implicit_model(records);
    REQUIRE(m.feature_count() == 3);
    CHECK(m.name_of(1) == "ZEBRA");
    CHECK(m.name_of(2) == "APPLE");
    CHECK(m.name_of(3) == "MANGO");
}

TEST_CASE("record files reject malformed lines") {
    CHECK_THROWS_AS(read_records_text("only-one-field\n", "mem"), ParseError);
    CHECK_THROWS_AS(read_records_text("a.c\t5\n", "mem"), ParseError);
    CHECK_THROWS_AS(read_records_text("a.c\tfive\tA\n", "mem"), ParseError);
    CHECK_THROWS_AS(read_records_text("a.c\t5\tA &&\n", "mem"), ParseError);
    CHECK(read_records_text("", "mem").empty());
}

TEST_CASE("fault files parse ids and formulas") {
    std::vector<FaultRecord> faults = read_faults_text(
        "# comment line\n"
        "f1\t!A && B\n"
        "\n"
        "f2\t(X) || (Y && Z)\n",
        "mem");
    REQUIRE(faults.size() == 2);
    CHECK(faults[0].id == "f1");
    CHECK(to_string(faults[0].formula) == "!A && B");
    CHECK(faults[1].id == "f2");
    CHECK_THROWS_AS(read_faults_text("id-without-formula\n", "mem"), ParseError);
}

TEST_CASE("checksums depend on file contents") {
    CHECK(fnv1a64("abc") != fnv1a64("abd"));
    CHECK(fnv1a64("abc") == fnv1a64("abc"));
}

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "oracles.hpp"
#include "sgcn/lemmalab.hpp"

using namespace sgcn;

TEST_CASE("even cycle: worked example against the dense oracle") {
    const LemmaReport r = verify_even_cycle(2, 1.0, 3.0, 0.7, 5);
    CHECK(r.pass);
    REQUIRE(r.witness.size() == 3);
    const oracle::MatrixXd w = oracle::adjacency(make_cyclic(4));
    oracle::VectorXd x(4);
    x << 1, 3, 1, 3;
    const oracle::VectorXd gcn = oracle::gcn_filter(w, 0.7) * x;
    CHECK(r.witness[0] == doctest::Approx(gcn(0)).epsilon(1e-14));
    CHECK(r.witness[0] == doctest::Approx(2.8).epsilon(1e-14));
    const oracle::VectorXd psi0 = oracle::wavelet(oracle::lazy_walk(w), 0) * x;
    CHECK(psi0(0) == doctest::Approx(-1.0));
    CHECK(psi0(1) == doctest::Approx(1.0));
    CHECK(r.witness[1] == doctest::Approx(-1.0).epsilon(1e-15));
    CHECK(r.witness[2] == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("even cycle: sweep") {
    CounterRng rng(2024);
    for (std::size_t n = 2; n <= 8; ++n)
        for (int t = 0; t < 5; ++t) {
            const double a = rng.uniform(-3, 3), b = a + rng.uniform(0.2, 2.0), theta = rng.uniform(0.1, 1.0);
            const LemmaReport r = verify_even_cycle(n, a, b, theta, 5);
            INFO(r.parameters << " dev " << r.max_deviation);
            CHECK(r.pass);
            CHECK(r.max_deviation < 1e-12);
        }
}

TEST_CASE("smoothing check preconditions") {
    CHECK_THROWS_AS(verify_even_cycle(2, 1.0, 1.0, 0.5, 3), std::invalid_argument);
    CHECK_THROWS_AS(verify_even_cycle(1, 1.0, 2.0, 0.5, 3), std::invalid_argument);
    CHECK_THROWS_AS(verify_even_cycle(3, 1.0, 2.0, 0.5, 0), std::invalid_argument);
    CHECK_THROWS_AS(verify_bipartite(3, 3, 2.0, 2.0, 1.0, 2), std::invalid_argument);
    CHECK_THROWS_AS(verify_bipartite(3, 4, 0.0, 2.0, 1.0, 2), std::invalid_argument);
}

TEST_CASE("bipartite: on K33") {
    const LemmaReport r = verify_bipartite(3, 3, 0.0, 4.0, 1.0, 4);
    CHECK(r.pass);
    REQUIRE(r.witness.size() == 3);
    CHECK(r.witness[0] == doctest::Approx(4.0).epsilon(1e-14));
    CHECK(std::abs(r.witness[1]) == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(r.witness[1] == doctest::Approx(-r.witness[2]).epsilon(1e-14));
}

TEST_CASE("bipartite with beta = 2 reduces to the even cycle") {
    const LemmaReport two = verify_bipartite(2, 2, 1.0, 3.0, 0.7, 3);
    const LemmaReport one = verify_even_cycle(2, 1.0, 3.0, 0.7, 3);
    CHECK(two.pass);
    CHECK(two.witness[0] == doctest::Approx(one.witness[0]).epsilon(1e-14));
    CHECK(std::abs(two.witness[1]) == doctest::Approx(std::abs(one.witness[1])).epsilon(1e-14));
}

TEST_CASE("bipartite: sweep") {
    CounterRng rng(77);
    for (std::size_t beta = 2; beta <= 5; ++beta)
        for (std::size_t k = beta; k <= 8; ++k) {
            const LemmaReport r = verify_bipartite(k, beta, rng.uniform(-2, 0), rng.uniform(0.5, 2), rng.uniform(-1, 1), 5);
            INFO(r.parameters << " dev " << r.max_deviation);
            CHECK(r.pass);
        }
}

TEST_CASE("hub and pass response classes") {
    const std::size_t l77[] = {7, 7};
    const LemmaReport r = verify_hub_pass(l77, 1.0, 1.0);
    CHECK(r.pass);
    REQUIRE(r.witness.size() == 3);
    CHECK(r.witness[0] == doctest::Approx(2.14983).epsilon(1e-5));
    CHECK(r.witness[1] == 2.0);
    CHECK(r.witness[2] == doctest::Approx(1.90825).epsilon(1e-5));

    // direct enumeration on the dense filter: exactly three distinct values
    const std::size_t l898[] = {8, 9, 8};
    const ChainedCycles c = make_chained_cycles(l898);
    const oracle::VectorXd y = oracle::gcn_filter(oracle::adjacency(c.graph), 1.3) * oracle::VectorXd::Constant(25, 0.8);
    std::vector<double> values(y.data(), y.data() + y.size());
    std::sort(values.begin(), values.end());
    std::vector<double> distinct = {values[0]};
    for (double v : values)
        if (v - distinct.back() > 1e-9) distinct.push_back(v);
    CHECK(distinct.size() == 3);
    const LemmaReport r898 = verify_hub_pass(l898, 0.8, 1.3);
    CHECK(r898.pass);
    for (double v : distinct)
        CHECK(std::any_of(r898.witness.begin(), r898.witness.end(), [&](double w) { return std::abs(w - v) < 1e-12; }));
}

TEST_CASE("hub/pass degenerate and inadmissible inputs") {
    const std::size_t l77[] = {7, 7};
    const LemmaReport zero = verify_hub_pass(l77, 1.0, 0.0);
    CHECK_FALSE(zero.pass);
    CHECK(zero.note.find("degenerate") != std::string::npos);

    const std::size_t short_end[] = {3, 7};
    const std::size_t short_mid[] = {7, 6, 7};
    const std::size_t single[] = {7};
    CHECK_THROWS_AS(verify_hub_pass(short_end, 1, 1), std::invalid_argument);
    CHECK_THROWS_AS(verify_hub_pass(short_mid, 1, 1), std::invalid_argument);
    CHECK_THROWS_AS(verify_hub_pass(single, 1, 1), std::invalid_argument);
}

TEST_CASE("Psi_3 table on the 14-node graph") {
    const LemmaReport r = verify_psi3_table();
    INFO(r.note);
    CHECK(r.pass);
    REQUIRE(r.witness.size() == 14);
    CHECK(std::abs(r.witness[3] - -52.3e-3) < 5e-4);
    CHECK(std::abs(r.witness[6] - -53.5e-3) < 5e-4);

    // sum of Psi_3 1 equals 1^T (P^4 - P^8) 1 from the dense oracle
    const std::size_t lengths[] = {6, 8};
    const ChainedCycles c = make_chained_cycles(lengths);
    const oracle::MatrixXd p = oracle::lazy_walk(oracle::adjacency(c.graph));
    const oracle::VectorXd ones = oracle::VectorXd::Ones(14);
    const double want = ones.dot((oracle::power(p, 4) - oracle::power(p, 8)) * ones);
    double sum = 0;
    for (double v : r.witness) sum += v;
    CHECK(sum == doctest::Approx(want).epsilon(1e-12));
    // P is column stochastic, so the total is zero
    CHECK(std::abs(sum) < 1e-13);
    CHECK(psi3_reference().size() == 14);
}

TEST_CASE("a too-strict tolerance exercises the failure path") {
    const LemmaReport r = verify_psi3_table(1e-15);
    CHECK_FALSE(r.pass);
    REQUIRE(r.first_violation_node.has_value());
    CHECK(*r.first_violation_node == 0);
    CHECK(r.first_violation_value == r.witness[0]);
}

TEST_CASE("default sweep") {
    const auto reports = run_lemma_sweep();
    CHECK(reports.size() == 35 + 22 + 6 + 1);
    for (const auto& r : reports) {
        INFO(r.lemma << " " << r.parameters << " dev " << r.max_deviation << " " << r.note);
        CHECK(r.pass);
        CHECK(r.pass == (r.max_deviation < r.tolerance));
    }
    const auto again = run_lemma_sweep();
    for (std::size_t i = 0; i < reports.size(); ++i) CHECK(reports[i].parameters == again[i].parameters);

    SweepOptions only;
    only.lengths = {6, 8};
    const auto subset = run_lemma_sweep(only);
    CHECK(subset.back().lemma == "psi3_table");
    CHECK(subset[subset.size() - 2].lemma == "hub_pass");

    SweepOptions strict;
    strict.tolerance = 1e-15;
    const auto failing = run_lemma_sweep(strict);
    CHECK(std::any_of(failing.begin(), failing.end(), [](const LemmaReport& r) { return !r.pass; }));
}

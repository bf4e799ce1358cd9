#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "pqlab/integrate.hpp"
#include "pqlab/operators.hpp"

using namespace pqlab;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

TEST_CASE("jackson_finite: constants integrate to the interval length") {
    for (const auto& pq : {pq_pair{0.95, 0.9}, pq_pair{1.0, 0.9}, pq_pair{0.99, 0.97}})
        for (double a : {0.5, 1.0, 2.0})
            CHECK_THAT(jackson_finite([](double) { return 1.0; }, a, pq),
                       WithinRel(a, 1e-12));
}

TEST_CASE("jackson_finite: linear integrand gives a^2/[2]") {
    const pq_pair pq{0.95, 0.9};
    CHECK_THAT(jackson_finite([](double t) { return t; }, 1.0, pq),
               WithinRel(0.54054054054054054, 1e-12));  // 1/[2]
}

TEST_CASE("jackson_finite converges to the Riemann integral as q -> 1") {
    // f = t^2 (1-t)^2 on [0,1]; integral 1/30
    const auto f = [](double t) { return t * t * (1 - t) * (1 - t); };
    double prev_err = 1.0;
    for (double eps : {0.1, 0.01, 0.001}) {
        const double v = jackson_finite(f, 1.0, pq_pair{1.0, 1.0 - eps});
        const double err = std::abs(v - 1.0 / 30.0);
        CHECK(err < prev_err);
        prev_err = err;
    }
    CHECK(prev_err < 2e-5);
}

TEST_CASE("jackson_finite: linearity and positivity") {
    const pq_pair pq{0.95, 0.9};
    const auto f = [](double t) { return std::exp(-t); };
    const auto g = [](double t) { return t / (1 + t); };
    const double a = 2.0, al = 1.7, be = -0.4;
    const double lhs = jackson_finite(
        [&](double t) { return al * f(t) + be * g(t); }, a, pq);
    const double rhs = al * jackson_finite(f, a, pq) + be * jackson_finite(g, a, pq);
    CHECK_THAT(lhs, WithinRel(rhs, 1e-12));
    CHECK(jackson_finite(g, a, pq) >= 0.0);
}

TEST_CASE("jackson_finite: monotone refinement stays within the tail bound") {
    // f = t makes the node terms exactly geometric with ratio (q/p)^2, so the
    // tail after the last included term is last * rr/(1-rr).
    const pq_pair pq{0.99, 0.9};
    const auto f = [](double t) { return t; };
    double v_small = 0.0, last_term = 0.0;
    double t = 1.0 / pq.p;
    for (int k = 0; k < 40; ++k) {
        last_term = (pq.p - pq.q) * t * f(t);
        v_small += last_term;
        t *= pq.q / pq.p;
    }
    const double v_full = jackson_finite(f, 1.0, pq);
    const double rr = (pq.q / pq.p) * (pq.q / pq.p);
    CHECK(std::abs(v_full - v_small) <= last_term * rr / (1.0 - rr) * (1.0 + 1e-9));
    CHECK(std::abs(v_full - v_small) > 0.0);
}

TEST_CASE("jackson_finite argument checks and failures") {
    const pq_pair pq{0.95, 0.9};
    CHECK_THROWS_AS(jackson_finite([](double) { return 1.0; }, -1.0, pq),
                    validation_error);
    CHECK_THROWS_AS(jackson_finite([](double) { return 1.0; }, 1.0, pq_pair{0.9, 0.9}),
                    validation_error);
    quad_config tiny;
    tiny.node_budget = 3;
    tiny.abs_tol = 1e-300;
    CHECK_THROWS_AS(jackson_finite([](double) { return 1.0; }, 1.0, pq, tiny),
                    node_budget_exceeded);
    CHECK_THROWS_AS(jackson_finite([](double t) { return 1.0 / (t - 1.0); }, 2.0,
                                   pq_pair{1.0, 0.5}),
                    domain_error);  // hits the node t = 1 pole -> inf
}

TEST_CASE("jackson_improper: zero function and Baskakov-weight anchor") {
    const pq_pair pq{0.95, 0.9};
    CHECK(jackson_improper([](double) { return 0.0; }, pq) == 0.0);
    // brute-force oracle value p^{-7}/[4]  (ladder-independent closed form)
    const double v = jackson_improper(
        [&](double t) { return baskakov_weight(5, 0, t, pq); }, pq);
    CHECK_THAT(v, WithinRel(0.45199377583031854, 1e-10));
    const double v83 = jackson_improper(
        [&](double t) { return baskakov_weight(8, 3, t, pq); }, pq);
    CHECK_THAT(v83, WithinRel(1.5414249964662629, 1e-10));
}

TEST_CASE("jackson_improper approaches the classical integral as q -> 1") {
    // integral of 1/(1+t)^2 over [0,inf) is 1
    const double v = jackson_improper(
        [](double t) { return 1.0 / ((1.0 + t) * (1.0 + t)); }, pq_pair{1.0, 0.99});
    CHECK_THAT(v, WithinAbs(1.0, 0.02));
}

TEST_CASE("jackson_improper failure modes") {
    const pq_pair pq{0.95, 0.9};
    // f = t grows: the weighted tail towards infinity diverges
    CHECK_THROWS_AS(jackson_improper([](double t) { return t; }, pq), divergent_tail);
    quad_config tiny;
    tiny.node_budget = 5;
    tiny.abs_tol = 1e-300;
    CHECK_THROWS_AS(jackson_improper([](double t) { return std::exp(-t); }, pq, tiny),
                    node_budget_exceeded);
    CHECK_THROWS_AS(jackson_improper([](double) { return 1.0; }, pq_pair{1.0, 1.0}),
                    validation_error);
}

TEST_CASE("classical_improper: known integrals") {
    CHECK_THAT(classical_improper([](double t) { return std::exp(-t); }),
               WithinAbs(1.0, 1e-8));
    CHECK_THAT(classical_improper([](double t) { return t * std::exp(-t); }),
               WithinAbs(1.0, 1e-8));
    // classical Baskakov weight b_{5,2}, scaled: integral is 1/[n-1] = 1/4
    const auto b52 = [](double t) {
        return 15.0 * t * t / std::pow(1.0 + t, 7);  // C(6,2) t^2/(1+t)^7
    };
    CHECK_THAT(classical_improper(b52), WithinAbs(0.25, 1e-6));
}

TEST_CASE("classical_improper reports non-decaying tails") {
    CHECK_THROWS_AS(classical_improper([](double t) { return 1.0 / (1.0 + t); }),
                    tail_not_converged);
}

// Acceptance suite: one check per criterion, each printing a PASS/FAIL line.
// Run with no argument for all criteria, or with a number (1..10) for one.
//
// Criterion 8 is asserted exactly as stated and is expected to FAIL: the
// measured behaviour of the operator contradicts the claimed trend (the
// numbers are printed; ERRATA.md carries the analysis).

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "pqlab/analysis.hpp"
#include "pqlab/expr.hpp"
#include "pqlab/integrate.hpp"
#include "pqlab/operators.hpp"
#include "pqlab/pq.hpp"
#include "../support/classical_oracle.hpp"
#include "../support/expr_corpus.hpp"

using namespace pqlab;

namespace {

struct checker {
    bool ok = true;
    std::vector<std::string> notes;

    void require(bool cond, const std::string& detail) {
        if (!cond) {
            ok = false;
            notes.push_back(detail);
        }
    }
    void note(const std::string& s) { notes.push_back(s); }
};

operator_config cfg_of(int n, pq_pair pq, double a, double b) {
    operator_config c;
    c.n = n;
    c.pq = pq;
    c.alpha = a;
    c.beta = b;
    return c;
}

const std::vector<pq_pair> kMatrixPq = {{1.0, 0.9}, {0.95, 0.9}, {0.99, 0.98}};
const std::vector<std::pair<double, double>> kMatrixAb = {{0.0, 0.0}, {1.0, 2.0}};

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// ---- criterion 1: normalization over the acceptance matrix, < 30 s -------
checker criterion1() {
    checker c;
    const auto t0 = std::chrono::steady_clock::now();
    const scalar_fn one([](double) { return 1.0; });
    double worst = 0.0;
    for (double x : {0.0, 0.5, 1.0, 2.0, 5.0})
        for (int n : {4, 6, 10})
            for (const auto& pq : kMatrixPq)
                for (const auto& [a, b] : kMatrixAb) {
                    const double v = operator_apply(one, x, cfg_of(n, pq, a, b));
                    worst = std::max(worst, std::abs(v - 1.0));
                }
    const double dt = seconds_since(t0);
    c.require(worst <= 1e-8, "max |T(1,x)-1| = " + std::to_string(worst));
    c.require(dt < 30.0, "runtime " + std::to_string(dt) + " s exceeds 30 s");
    c.note("max |T(1,x)-1| = " + std::to_string(worst) + ", runtime " +
           std::to_string(dt) + " s");
    return c;
}

// ---- criterion 2: per-k normalization validates the bilateral design -----
checker criterion2() {
    checker c;
    double worst_validated = 0.0, worst_law = 0.0;
    for (const auto& pq : {pq_pair{0.95, 0.9}, pq_pair{0.99, 0.97}}) {
        detail::pq_table tab(pq);
        for (int n : {5, 8})
            for (int k = 0; k <= 8; ++k) {
                const double w = jackson_improper(
                    [&](double t) { return baskakov_weight(n, k, t, pq); }, pq);
                const double c_val =
                    tab.integer(n - 1) *
                    std::exp(detail::log_prefactor(n, k, pq, moment_form::validated)) * w;
                worst_validated = std::max(worst_validated, std::abs(c_val - 1.0));
                // printed exponents follow q^{-1} p^{k(k+1)/2-(n-1)(n-2)/2}
                const double c_pr =
                    tab.integer(n - 1) *
                    std::exp(detail::log_prefactor(n, k, pq, moment_form::printed)) * w;
                const double law =
                    std::pow(pq.p, 0.5 * k * (k + 1) - 0.5 * (n - 1) * (n - 2)) / pq.q;
                worst_law = std::max(worst_law, std::abs(c_pr / law - 1.0));
            }
    }
    c.require(worst_validated <= 1e-6,
              "validated per-k constant deviates by " + std::to_string(worst_validated));
    c.require(worst_law <= 1e-6,
              "printed-exponent constants off the measured law by " +
                  std::to_string(worst_law));
    c.note("validated prefactor: max |c_{n,k} - 1| = " + std::to_string(worst_validated));
    c.note("printed prefactor matches q^-1 p^{k(k+1)/2-(n-1)(n-2)/2}, not 1 (ERRATA)");
    return c;
}

// ---- criterion 3: closed moments vs direct evaluation at 12 points -------
checker criterion3() {
    checker c;
    struct pt { int n; double p, q, a, b, x; };
    const pt pts[12] = {
        {5, 0.95, 0.9, 0, 0, 0.5}, {5, 0.95, 0.9, 0, 0, 2},
        {6, 0.95, 0.9, 1, 2, 1},   {6, 0.95, 0.9, 1, 2, 5},
        {8, 0.98, 0.95, 0.5, 1, 1}, {8, 0.98, 0.95, 0.5, 1, 2},
        {10, 0.99, 0.97, 0, 0, 0.5}, {10, 0.99, 0.97, 1, 2, 2},
        {6, 1.0, 0.9, 0, 0, 1},    {6, 1.0, 0.9, 1, 2, 2},
        {4, 0.95, 0.9, 0, 0, 1},   {4, 0.95, 0.9, 0.5, 1, 0.5},
    };
    const scalar_fn ft([](double t) { return t; }, growth_tag::polynomial, 1);
    const scalar_fn ft2([](double t) { return t * t; }, growth_tag::polynomial, 2);
    double worst = 0.0, printed_min = 1e300;
    for (const auto& s : pts) {
        auto cfg = cfg_of(s.n, pq_pair(s.p, s.q), s.a, s.b);
        const double d1 = operator_apply(ft, s.x, cfg);
        const double d2 = operator_apply(ft2, s.x, cfg);
        worst = std::max(worst, std::abs(moment_m1(s.x, cfg) - d1) / std::abs(d1));
        worst = std::max(worst, std::abs(moment_m2(s.x, cfg) - d2) / std::abs(d2));
        auto printed = cfg;
        printed.form = moment_form::printed;
        const double dev =
            std::max(std::abs(moment_m1(s.x, printed) - d1) / std::abs(d1),
                     std::abs(moment_m2(s.x, printed) - d2) / std::abs(d2));
        printed_min = std::min(printed_min, dev);
    }
    c.require(worst <= 1e-5, "validated closed forms off by " + std::to_string(worst));
    c.note("validated forms: max rel err vs direct = " + std::to_string(worst));
    c.note("printed Lemma-1 forms: min rel err = " + std::to_string(printed_min) +
           " (> 1e-4 everywhere: resolved per ERRATA protocol, validated form default)");
    c.require(printed_min > 1e-4,
              "printed forms unexpectedly agree; ERRATA arbitration would be void");
    return c;
}

// ---- criterion 4: central-moment identity, 100 random configs ------------
checker criterion4() {
    checker c;
    std::mt19937 rng(1234567);
    std::uniform_real_distribution<double> up(0.9, 1.0);
    std::uniform_real_distribution<double> ur(0.85, 0.99);
    std::uniform_real_distribution<double> ua(0.0, 1.0);
    std::uniform_real_distribution<double> ux(0.0, 5.0);
    std::uniform_int_distribution<int> un(4, 12);
    double worst = 0.0;
    for (int i = 0; i < 100; ++i) {
        const double p = up(rng);
        const double a = ua(rng);
        auto cfg = cfg_of(un(rng), pq_pair(p, p * ur(rng)), a, a + ua(rng));
        const double x = ux(rng);
        const double lhs = central_moment2(x, cfg);
        const double rhs = moment_m2(x, cfg) - 2 * x * moment_m1(x, cfg) +
                           x * x * moment_m0(x, cfg);
        worst = std::max(worst,
                         std::abs(lhs - rhs) / std::max({1.0, std::abs(lhs), x * x}));
    }
    c.require(worst <= 1e-10, "identity violated at rel " + std::to_string(worst));
    c.note("max identity residual (relative) = " + std::to_string(worst));
    return c;
}

// ---- criterion 5: classical limit vs independent implementation ----------
checker criterion5() {
    checker c;
    const scalar_fn f([](double t) { return std::exp(-t); });
    const auto cfg = cfg_of(10, pq_pair(1.0, 1.0), 0.0, 0.0);
    double worst = 0.0;
    for (double x : {0.5, 1.0, 2.0}) {
        const double lib = operator_apply(f, x, cfg);
        const double ora = pqlab_test::classical_smb(f.f, x, 10);
        worst = std::max(worst, std::abs(lib - ora));
    }
    c.require(worst <= 1e-4, "classical-limit gap " + std::to_string(worst));
    c.note("max |library - independent classical| = " + std::to_string(worst));
    return c;
}

// ---- criterion 6: Theorem-2 domination on the full grid ------------------
checker criterion6() {
    checker c;
    const grid g{};
    const std::vector<std::pair<const char*, scalar_fn>> fs = {
        {"exp(-t)", scalar_fn([](double t) { return std::exp(-t); })},
        {"1/(1+t)", scalar_fn([](double t) { return 1.0 / (1.0 + t); })},
        {"sin(t)/(1+t)", scalar_fn([](double t) { return std::sin(t) / (1.0 + t); })},
    };
    double worst_margin = 1e300;
    int violations = 0;
    for (const auto& [name, f] : fs)
        for (int n : {6, 10, 20})
            for (const auto& pq : kMatrixPq)
                for (const auto& [a, b] : kMatrixAb) {
                    const auto cfg = cfg_of(n, pq, a, b);
                    // moduli depend only on (f, n, pq); hoist out of the x loop
                    detail::pq_table tab(pq);
                    for (int i = 0; i < g.points; ++i) {
                        const double x = g.at(i);
                        const double err = std::abs(operator_apply(f, x, cfg) - f(x));
                        const double bound = theorem2_bound(f, x, cfg, g);
                        worst_margin = std::min(worst_margin, bound - err);
                        if (err > bound) ++violations;
                    }
                }
    c.require(violations == 0, std::to_string(violations) + " grid points violate the bound");
    c.note("worst margin bound - |Tf - f| = " + std::to_string(worst_margin));
    return c;
}

// ---- criterion 7: Korovkin decay from closed forms, < 10 s ---------------
checker criterion7() {
    checker c;
    const auto t0 = std::chrono::steady_clock::now();
    sequence_scheme scheme;  // c_p = 0.5, c_q = 1
    const auto rows = korovkin_table(scheme, {8, 16, 32, 64}, 0.0, 0.0, grid{});
    for (const auto& r : rows)
        c.require(r.col("norm_i0") == 0.0,
                  "norm_i0 nonzero at n=" + std::to_string(r.n));
    const double r1 = rows[3].col("norm_i1") / rows[0].col("norm_i1");
    const double r2 = rows[3].col("norm_i2") / rows[0].col("norm_i2");
    c.require(r1 < 0.5, "norm_i1 64/8 ratio " + std::to_string(r1));
    c.require(r2 < 0.5, "norm_i2 64/8 ratio " + std::to_string(r2));
    const double dt = seconds_since(t0);
    c.require(dt < 10.0, "runtime " + std::to_string(dt) + " s exceeds 10 s");
    c.note("ratios 64/8: i1 = " + std::to_string(r1) + ", i2 = " + std::to_string(r2) +
           ", runtime " + std::to_string(dt) + " s");
    return c;
}

// ---- criterion 8: Voronovskaja trend (asserted verbatim; see ERRATA) -----
checker criterion8() {
    checker c;
    sequence_scheme scheme;
    const scalar_fn f([](double t) { return t * t; }, growth_tag::polynomial, 2);
    const scalar_fn d1([](double t) { return 2.0 * t; });
    const scalar_fn d2([](double) { return 2.0; });
    const auto rows =
        voronovskaja_table(f, d1, d2, scheme, {8, 16, 32, 64}, 0.0, 0.0, {0.5, 1.0, 2.0});
    for (double x : {0.5, 1.0, 2.0}) {
        double err8 = 0.0, err64 = 0.0;
        for (const auto& r : rows) {
            if (r.col("x") != x) continue;
            if (r.n == 8) err8 = r.col("err");
            if (r.n == 64) err64 = r.col("err");
        }
        c.note("x=" + std::to_string(x) + ": err(8)=" + std::to_string(err8) +
               " err(64)=" + std::to_string(err64));
        c.require(err64 < err8,
                  "err(64) >= err(8) at x=" + std::to_string(x) +
                      " (the [n](Tf-f) column diverges; see ERRATA.md)");
    }
    const auto clamp =
        voronovskaja_table(f, d1, d2, scheme, {32, 64}, 0.0, 0.0, {0.5, 1.0, 2.0}, true);
    for (double x : {0.5, 1.0, 2.0}) {
        double v32 = 0.0, v64 = 0.0;
        for (const auto& r : clamp) {
            if (r.col("x") != x) continue;
            if (r.n == 32) v32 = r.col("lhs");
            if (r.n == 64) v64 = r.col("lhs");
        }
        const double change = std::abs(v64 - v32) / std::abs(v32);
        c.note("classical clamp x=" + std::to_string(x) + ": n(Tf-f) 32->64 change = " +
               std::to_string(100.0 * change) + "%");
        c.require(change <= 0.05,
                  "classical stabilization " + std::to_string(100.0 * change) +
                      "% exceeds 5% at x=" + std::to_string(x) +
                      " (exact value ~7%; see ERRATA.md)");
    }
    return c;
}

// ---- criterion 9: exponential product identity ----------------------------
checker criterion9() {
    checker c;
    truncation tr;
    tr.abs_tol = 1e-17;
    double worst = 0.0;
    for (const auto& pq : {pq_pair{1.0, 1.0}, pq_pair{1.0, 0.9}, pq_pair{0.95, 0.9},
                           pq_pair{0.99, 0.98}, pq_pair{0.9, 0.8}})
        for (double x : {-0.5, -0.25, 0.1, 0.25, 0.5})
            worst = std::max(worst, std::abs(pq_exp_small(x, pq, tr) *
                                                 pq_exp_big(-x, pq, tr) -
                                             1.0));
    c.require(worst <= 1e-9, "identity residual " + std::to_string(worst));
    c.note("max |e_pq(x) E_pq(-x) - 1| = " + std::to_string(worst));
    return c;
}

// ---- criterion 10: parser corpus and positioned errors --------------------
checker criterion10() {
    checker c;
    int count = 0;
    for (const char* src : pqlab_test::expr_corpus()) {
        try {
            const auto a = parse_function(src);
            const auto b = parse_function(ast::to_string(*a.expr));
            if (!ast::equal(*a.expr, *b.expr)) {
                c.require(false, std::string("round-trip mismatch for ") + src);
            }
        } catch (const std::exception& e) {
            c.require(false, std::string("corpus parse failure for ") + src + ": " +
                                 e.what());
        }
        ++count;
    }
    c.require(count >= 50, "corpus has fewer than 50 expressions");
    const auto eval1 = [](const char* s, double t) {
        return ast::eval(*parse_function(s).expr, t);
    };
    c.require(eval1("1+2*3^2", 0.0) == 19.0, "precedence: 1+2*3^2 != 19");
    c.require(eval1("-t^2", 2.0) == -4.0, "precedence: -t^2 at t=2 != -4");
    bool positioned = false;
    try {
        parse_function("2*+t");
    } catch (const syntax_error& e) {
        positioned = e.offset() == 2;
    }
    c.require(positioned, "'2*+t' did not raise a syntax error at offset 2");
    c.note(std::to_string(count) + " corpus expressions round-tripped");
    return c;
}

}  // namespace

int main(int argc, char** argv) {
    const std::vector<std::pair<const char*, checker (*)()>> criteria = {
        {"normalization T(1,x)=1 over the acceptance matrix", criterion1},
        {"per-k normalization / bilateral-integral validation", criterion2},
        {"moment closed forms vs direct-evaluation oracle", criterion3},
        {"central-moment identity on random configs", criterion4},
        {"classical limit vs independent implementation", criterion5},
        {"error bound dominates |Tf - f| on the grid", criterion6},
        {"Korovkin weighted-norm decay from closed forms", criterion7},
        {"Voronovskaja trend and classical stabilization", criterion8},
        {"exponential product identity", criterion9},
        {"expression parser corpus and errors", criterion10},
    };
    int only = 0;
    if (argc > 1) only = std::atoi(argv[1]);
    int failures = 0;
    for (size_t i = 0; i < criteria.size(); ++i) {
        const int num = static_cast<int>(i) + 1;
        if (only != 0 && only != num) continue;
        checker result;
        try {
            result = criteria[i].second();
        } catch (const std::exception& e) {
            result.ok = false;
            result.notes.push_back(std::string("exception: ") + e.what());
        }
        std::printf("criterion %2d: %s — %s\n", num, result.ok ? "PASS" : "FAIL",
                    criteria[i].first);
        for (const auto& note : result.notes) std::printf("    %s\n", note.c_str());
        if (!result.ok) ++failures;
    }
    return failures == 0 ? 0 : 1;
}

#pragma once

// Convergence analysis around the operator: moduli of continuity, Steklov
// means, the printed error bound, weighted norms, and the Korovkin /
// Voronovskaja experiment tables.

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "pqlab/errors.hpp"
#include "pqlab/operators.hpp"
#include "pqlab/pq.hpp"

namespace pqlab {

/// Uniform grid on [x_min, x_max]; sup-norms over [0,inf) are estimated here.
struct grid {
    double x_min = 0.0;
    double x_max = 10.0;
    int points = 401;

    void validate() const {
        if (!(x_min >= 0.0)) throw validation_error("grid.x_min must be >= 0");
        if (!(x_max > x_min)) throw validation_error("grid.x_max must be > x_min");
        if (points < 2) throw validation_error("grid.points must be >= 2");
    }
    double at(int i, int npts) const {
        return x_min + (x_max - x_min) * i / static_cast<double>(npts - 1);
    }
    double at(int i) const { return at(i, points); }
};

/// p_n = 1 - c_p/n, q_n = 1 - c_q/n (clamped to (0,1]); requires c_q > c_p > 0
/// so q_n < p_n and p_n^n -> e^{-c_p}, q_n^n -> e^{-c_q}.
struct sequence_scheme {
    double c_p = 0.5;
    double c_q = 1.0;

    void validate() const {
        if (!(c_p > 0.0)) throw validation_error("sequence_scheme.c_p must be > 0");
        if (!(c_q > c_p)) throw validation_error("sequence_scheme.c_q must be > c_p");
    }
    pq_pair at(int n) const {
        validate();
        const double pn = 1.0 - c_p / n;
        const double qn = 1.0 - c_q / n;
        if (!(qn > 0.0) || !(qn < pn))
            throw scheme_invalid("sequence scheme degenerates at n=" + std::to_string(n));
        return pq_pair(pn, qn);
    }
};

/// One record of a convergence experiment; payload columns keep their order.
struct experiment_row {
    int n = 0;
    double p_n = 1.0;
    double q_n = 1.0;
    std::vector<std::pair<std::string, double>> payload;

    double col(const std::string& name) const {
        for (const auto& [k, v] : payload)
            if (k == name) return v;
        throw validation_error("experiment_row: no column " + name);
    }
};

namespace detail {

// sup over h in (0, delta] and x with x + span*h inside the grid, refined by
// doubling the x resolution until the estimate moves < 1%.
template <class Diff>
double modulus_estimate(const Diff& diff, double delta, const grid& g, int span) {
    g.validate();
    if (!(delta > 0.0)) throw validation_error("modulus: delta must be > 0");
    const int n_h = 64;
    int npts = g.points;
    double prev = -1.0;
    for (int round = 0; round < 6; ++round) {
        double best = 0.0;
        for (int ih = 1; ih <= n_h; ++ih) {
            const double h = delta * ih / n_h;
            for (int i = 0; i < npts; ++i) {
                const double x = g.at(i, npts);
                if (x + span * h > g.x_max) break;
                best = std::max(best, std::abs(diff(x, h)));
            }
        }
        if (prev >= 0.0 && std::abs(best - prev) <= 0.01 * std::max(best, 1e-300))
            return best;
        prev = best;
        npts = 2 * npts - 1;
    }
    return prev;
}

}  // namespace detail

/// First modulus of continuity: sup_{0<h<=delta} sup_x |f(x+h) - f(x)|.
inline double modulus_omega(const scalar_fn& f, double delta, const grid& g) {
    return detail::modulus_estimate(
        [&](double x, double h) { return f(x + h) - f(x); }, delta, g, 1);
}

/// Second modulus: sup_{0<h<=delta} sup_x |f(x+2h) - 2 f(x+h) + f(x)|.
inline double modulus_omega2(const scalar_fn& f, double delta, const grid& g) {
    return detail::modulus_estimate(
        [&](double x, double h) { return f(x + 2 * h) - 2 * f(x + h) + f(x); },
        delta, g, 2);
}

namespace detail {

// 10-point Gauss-Legendre nodes/weights on [0,1].
struct gl10 {
    static constexpr int n = 10;
    static constexpr double x[10] = {
        0.013046735741414, 0.067468316655508, 0.160295215850488,
        0.283302302935376, 0.425562830509184, 0.574437169490816,
        0.716697697064624, 0.839704784149512, 0.932531683344492,
        0.986953264258586};
    static constexpr double w[10] = {
        0.033335672154344, 0.074725674575290, 0.109543181257991,
        0.134633359654998, 0.147762112357376, 0.147762112357376,
        0.134633359654998, 0.109543181257991, 0.074725674575290,
        0.033335672154344};
};

}  // namespace detail

/// Steklov mean f_h(x) = (4/h^2) Int_0^{h/2} Int_0^{h/2} [2 f(x+u+v)
/// - f(x+2(u+v))] du dv via a fixed-order product Gauss rule.
inline double steklov_mean(const scalar_fn& f, double h, double x) {
    if (!(h > 0.0)) throw validation_error("steklov_mean: h must be > 0");
    if (x < 0.0) throw validation_error("steklov_mean: x must be >= 0");
    using g = detail::gl10;
    const double a = 0.5 * h;
    double acc = 0.0;
    for (int i = 0; i < g::n; ++i) {
        for (int j = 0; j < g::n; ++j) {
            const double s = a * (g::x[i] + g::x[j]);
            acc += g::w[i] * g::w[j] * (2.0 * f(x + s) - f(x + 2.0 * s));
        }
    }
    return acc;  // (4/h^2) * a^2 cancels: a = h/2
}

enum class bound_form {
    as_printed,       ///< verbatim constants, incl. the mixed qp^2 / pq^2 spots
    constants_swapped ///< the two mixed spots exchanged (the Lemma-1 reading)
};

/// The printed Theorem-2 right-hand side at modulus argument 1/sqrt([n-2]):
///   5 w(f,.)(...) + 9/2 w2(f,.)[ (...)x^2 + (...)x + ... + 2 ].
/// Moduli come from grid estimates; the coefficient display is transcribed
/// as printed (its x^0/x^1 constants reuse qp^2 where Lemma 1 has pq^2).
inline double theorem2_bound(const scalar_fn& f, double x, const operator_config& cfg,
                             const grid& g, bound_form bf = bound_form::as_printed) {
    cfg.validate();
    detail::pq_table tab(cfg.pq);
    const double p = cfg.pq.p, q = cfg.pq.q;
    const double nn = tab.integer(cfg.n);
    const double n2 = tab.integer(cfg.n - 2);
    const double n3 = tab.integer(cfg.n - 3);
    const double two = tab.integer(2);
    const double S = nn + cfg.beta;
    const double rt = std::sqrt(n2);
    const double h = 1.0 / rt;
    const double om = modulus_omega(f, h, g);
    const double om2 = modulus_omega2(f, h, g);
    const double a = cfg.alpha;
    // the two readings differ only in which of qp^2 / pq^2 carries the square
    const double qp2 = bf == bound_form::as_printed ? q * p * p : p * q * q;
    const double pq2 = bf == bound_form::as_printed ? p * q * q : q * p * p;
    const double om_bracket =
        a * rt / S + nn / (qp2 * S * rt) + std::abs(nn * nn / (pq2 * S * rt) - rt) * x;
    const double br2 = (std::pow(nn, 4) / (S * S * p * std::pow(q, 6) * n3) -
                        2.0 * nn * nn / (pq2 * S) + n2) * x * x +
                       (2.0 * a * nn * nn / (S * S * pq2) +
                        nn * nn * (q * (p + two) + p * p) /
                            (S * S * std::pow(p, 4) * std::pow(q, 5) * n3)) * x +
                       2.0 * a * nn / (S * S * qp2) +
                       two * nn * nn / (S * S * std::pow(p, 5) * q * q * q * n3) +
                       n2 * a * a / (S * S);
    return 5.0 * om * om_bracket + 4.5 * om2 * (br2 + 2.0);
}

/// ||g||_{x^2} = sup_x |g(x)| / (1 + x^2), estimated on the grid.
inline double weighted_norm(const scalar_fn& gfn, const grid& g) {
    g.validate();
    double best = 0.0;
    for (int i = 0; i < g.points; ++i) {
        const double x = g.at(i);
        best = std::max(best, std::abs(gfn(x)) / (1.0 + x * x));
    }
    return best;
}

/// Korovkin experiment: per n, the weighted norms ||T(t^i) - x^i||_{x^2},
/// i = 0,1,2, from closed-form moments (printed Lemma-1 forms by default;
/// the validated forms show what the actual operator does).
inline std::vector<experiment_row> korovkin_table(
    const sequence_scheme& scheme, const std::vector<int>& ns, double alpha,
    double beta, const grid& g, moment_form form = moment_form::printed) {
    scheme.validate();
    g.validate();
    std::vector<experiment_row> rows;
    for (int n : ns) {
        if (n < 4) throw validation_error("korovkin_table: all n must be >= 4");
        operator_config cfg;
        cfg.n = n;
        cfg.pq = scheme.at(n);
        cfg.alpha = alpha;
        cfg.beta = beta;
        cfg.form = form;
        const double n0 = weighted_norm(
            scalar_fn([&](double x) { return moment_m0(x, cfg) - 1.0; }), g);
        const double n1 = weighted_norm(
            scalar_fn([&](double x) { return moment_m1(x, cfg) - x; }), g);
        const double n2 = weighted_norm(
            scalar_fn([&](double x) { return moment_m2(x, cfg) - x * x; }), g);
        experiment_row row;
        row.n = n;
        row.p_n = cfg.pq.p;
        row.q_n = cfg.pq.q;
        row.payload = {{"norm_i0", n0}, {"norm_i1", n1}, {"norm_i2", n2}};
        rows.push_back(std::move(row));
    }
    std::sort(rows.begin(), rows.end(),
              [](const experiment_row& a, const experiment_row& b) { return a.n < b.n; });
    return rows;
}

/// Voronovskaja experiment: per (n, x),
///   lhs = [n] (T(f,x) - f(x))          (direct evaluation),
///   A_n = [n]([n]/[n-2] - 1),  B_n = [n]([n]^3/(([n]+beta)[n-2][n-3]) - 1),
///   rhs = f'(x)(1 + alpha + A_n x) + f''(x)(1 + B_n x) x / 2,  err = |lhs-rhs|.
/// f' and f'' must be supplied analytically. Pass classical=true to clamp
/// every row to p = q = 1 instead of the scheme.
inline std::vector<experiment_row> voronovskaja_table(
    const scalar_fn& f, const scalar_fn& d1, const scalar_fn& d2,
    const sequence_scheme& scheme, const std::vector<int>& ns, double alpha,
    double beta, const std::vector<double>& xs, bool classical = false,
    const quad_config& quad = {}) {
    if (!f.f || !d1.f || !d2.f)
        throw validation_error("voronovskaja_table: f, d1, d2 are all required");
    std::vector<experiment_row> rows;
    for (int n : ns) {
        if (n < 4) throw validation_error("voronovskaja_table: all n must be >= 4");
        operator_config cfg;
        cfg.n = n;
        cfg.pq = classical ? pq_pair(1.0, 1.0) : scheme.at(n);
        cfg.alpha = alpha;
        cfg.beta = beta;
        cfg.quad = quad;
        detail::pq_table tab(cfg.pq);
        const double nn = tab.integer(n);
        const double a_n = nn * (nn / tab.integer(n - 2) - 1.0);
        const double b_n =
            nn * (std::pow(nn, 3) / ((nn + beta) * tab.integer(n - 2) * tab.integer(n - 3)) -
                  1.0);
        for (double x : xs) {
            const double lhs = nn * (operator_apply(f, x, cfg) - f(x));
            const double rhs = d1(x) * (1.0 + alpha + a_n * x) +
                               0.5 * d2(x) * (1.0 + b_n * x) * x;
            experiment_row row;
            row.n = n;
            row.p_n = cfg.pq.p;
            row.q_n = cfg.pq.q;
            row.payload = {{"x", x},       {"lhs", lhs},
                           {"A_n", a_n},   {"B_n", b_n},
                           {"rhs", rhs},   {"err", std::abs(lhs - rhs)}};
            rows.push_back(std::move(row));
        }
    }
    std::stable_sort(rows.begin(), rows.end(),
                     [](const experiment_row& a, const experiment_row& b) {
                         return a.n < b.n;
                     });
    return rows;
}

}  // namespace pqlab

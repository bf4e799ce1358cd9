#pragma once

// Jackson-type (p,q)-integration on [0,a], its improper extension to [0,inf)
// as a bilateral node sum, and a classical adaptive quadrature used as the
// p = q = 1 oracle.
//
// Improper definition: (p-q) sum_{j in Z} (q^j/p^{j+1}) f(q^j/p^{j+1}).
// The node ladder sweeps (0,inf) since 0 < q < p; both tails are truncated
// independently by the same small-term rule as the finite integral.

#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "pqlab/errors.hpp"
#include "pqlab/pq.hpp"

namespace pqlab {

struct quad_config {
    int node_budget = 5000;      ///< max Jackson nodes per direction
    double abs_tol = 1e-12;
    int classical_panels = 2048; ///< adaptive panel cap for the classical oracle

    void validate() const {
        if (node_budget < 1) throw validation_error("quad_config.node_budget must be >= 1");
        if (!(abs_tol > 0.0)) throw validation_error("quad_config.abs_tol must be > 0");
        if (classical_panels < 1)
            throw validation_error("quad_config.classical_panels must be >= 1");
    }
};

namespace detail {

inline double checked_eval(const std::function<double(double)>& f, double t) {
    const double v = f(t);
    if (!std::isfinite(v))
        throw domain_error("integrand returned a non-finite value", t);
    return v;
}

}  // namespace detail

/// Finite Jackson integral: (p-q) a sum_{k>=0} (q^k/p^{k+1}) f(q^k a / p^{k+1}).
/// Stops once node-weight * |f| < abs_tol for 3 successive nodes.
inline double jackson_finite(const std::function<double(double)>& f, double a,
                             const pq_pair& pq, const quad_config& cfg = {}) {
    cfg.validate();
    if (!(a > 0.0)) throw validation_error("jackson_finite: a must be > 0");
    pq.require_strict("jackson_finite");
    const double r = pq.q / pq.p;
    double t = a / pq.p;
    double sum = 0.0;
    int small_run = 0;
    for (int k = 0; k < cfg.node_budget; ++k) {
        const double w = (pq.p - pq.q) * t;
        const double term = w * detail::checked_eval(f, t);
        sum += term;
        if (std::abs(term) < cfg.abs_tol) {
            if (++small_run >= 3) return sum;
        } else {
            small_run = 0;
        }
        t *= r;
    }
    throw node_budget_exceeded("jackson_finite: node budget " +
                               std::to_string(cfg.node_budget) + " exhausted");
}

namespace detail {

// One direction of the bilateral sum. `ratio` < 1 walks nodes to 0,
// ratio > 1 walks them to infinity. Declares a divergent tail when the
// partial-sum magnitude keeps growing through three successive doublings
// of the consumed budget.
inline double bilateral_direction(const std::function<double(double)>& f,
                                  const pq_pair& pq, const quad_config& cfg,
                                  double t0, double ratio, bool skip_first) {
    double t = t0;
    double sum = 0.0;
    int small_run = 0;
    int checkpoint = std::max(2, cfg.node_budget / 16);
    double prev_mag = -1.0;
    int grow_count = 0;
    bool first = true;
    for (int j = 0; j < cfg.node_budget; ++j) {
        if (!(first && skip_first)) {
            if (!(t < 1e300))
                throw divergent_tail("jackson_improper: nodes overflow before tail settles");
            const double term = (pq.p - pq.q) * t * checked_eval(f, t);
            sum += term;
            if (std::abs(term) < cfg.abs_tol) {
                if (++small_run >= 3) return sum;
            } else {
                small_run = 0;
            }
        }
        first = false;
        if (j == checkpoint) {
            const double mag = std::abs(sum);
            if (prev_mag >= 0.0 && mag > prev_mag * 1.5) {
                if (++grow_count >= 3)
                    throw divergent_tail(
                        "jackson_improper: partial sums grew through 3 budget doublings");
            }
            prev_mag = mag;
            checkpoint *= 2;
        }
        t *= ratio;
    }
    throw node_budget_exceeded("jackson_improper: per-direction node budget " +
                               std::to_string(cfg.node_budget) + " exhausted");
}

}  // namespace detail

/// Improper (p,q)-integral over [0, inf): bilateral node sum, both tails
/// truncated by the small-term rule. Throws node_budget_exceeded per
/// direction and divergent_tail when a tail refuses to settle.
inline double jackson_improper(const std::function<double(double)>& f,
                               const pq_pair& pq, const quad_config& cfg = {}) {
    cfg.validate();
    pq.require_strict("jackson_improper");
    const double t0 = 1.0 / pq.p;  // node at j = 0
    const double down = detail::bilateral_direction(f, pq, cfg, t0, pq.q / pq.p, false);
    const double up = detail::bilateral_direction(f, pq, cfg, t0, pq.p / pq.q, true);
    return down + up;
}

namespace detail {

// Gauss(7)/Kronrod(15) pair on [a,b]; returns K15, err estimate out-param.
inline double gk15(const std::function<double(double)>& f, double a, double b,
                   double& err) {
    static const double nodes[8] = {
        0.000000000000000, 0.207784955007898, 0.405845151377397,
        0.586087235467691, 0.741531185599394, 0.864864423359769,
        0.949107912342759, 0.991455371120813};
    static const double wk[8] = {
        0.209482141084728, 0.204432940075298, 0.190350578064785,
        0.169004726639267, 0.140653259715525, 0.104790010322250,
        0.063092092629979, 0.022935322010529};
    static const double wg[4] = {
        0.417959183673469, 0.381830050505119, 0.279705391489277,
        0.129484966168870};
    const double c = 0.5 * (a + b), h = 0.5 * (b - a);
    const double f0 = checked_eval(f, c);
    double k15 = wk[0] * f0;
    double g7 = wg[0] * f0;
    for (int i = 1; i < 8; ++i) {
        const double fi = checked_eval(f, c + h * nodes[i]) +
                          checked_eval(f, c - h * nodes[i]);
        k15 += wk[i] * fi;
        if (i % 2 == 0) g7 += wg[i / 2] * fi;
    }
    k15 *= h;
    g7 *= h;
    err = std::abs(k15 - g7);
    return k15;
}

// Adaptive bisection on [a,b] with a panel budget shared via `panels`.
inline double adaptive(const std::function<double(double)>& f, double a, double b,
                       double tol, int& panels) {
    double err;
    const double whole = gk15(f, a, b, err);
    if (err <= tol || panels <= 0) return whole;
    --panels;
    const double mid = 0.5 * (a + b);
    return adaptive(f, a, mid, 0.5 * tol, panels) +
           adaptive(f, mid, b, 0.5 * tol, panels);
}

}  // namespace detail

/// Classical improper integral over [0, inf): adaptive panels on [0, X] with
/// X doubled until the last octave contributes less than abs_tol.
inline double classical_improper(const std::function<double(double)>& f,
                                 const quad_config& cfg = {}) {
    cfg.validate();
    double total = 0.0;
    double x0 = 0.0, x1 = 1.0;
    for (int oct = 0; oct < 64; ++oct) {
        int panels = cfg.classical_panels;
        const double part = detail::adaptive(f, x0, x1, 0.25 * cfg.abs_tol, panels);
        total += part;
        if (oct > 0 && std::abs(part) < cfg.abs_tol) return total;
        x0 = x1;
        x1 *= 2.0;
    }
    throw tail_not_converged("classical_improper: tail above X=2^63 still contributes");
}

}  // namespace pqlab

#pragma once

// (p,q)-calculus primitives: twin-basic integers, factorials, binomials,
// power products, the two exponential analogues and the (p,q)-derivative.
// All functions are pure; everything is plain double with log-space
// variants where magnitudes overflow.

#include <cmath>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "pqlab/errors.hpp"

namespace pqlab {

/// Parameter pair governing all (p,q) arithmetic. Requires 0 < q <= p <= 1.
/// q < p strictly is needed by Jackson-integral callers (node formula divides
/// by p-q); q == p is allowed only for limit-mode arithmetic.
struct pq_pair {
    double p = 1.0;
    double q = 1.0;

    pq_pair() = default;
    pq_pair(double p_, double q_) : p(p_), q(q_) {
        if (!(q > 0.0) || !(q <= p) || !(p <= 1.0))
            throw validation_error("pq_pair requires 0 < q <= p <= 1, got p=" +
                                   std::to_string(p_) + " q=" + std::to_string(q_));
    }

    bool degenerate() const noexcept { return p == q; }
    bool classical() const noexcept { return p == 1.0 && q == 1.0; }

    void require_strict(const char* who) const {
        if (degenerate())
            throw validation_error(std::string(who) + " requires q < p strictly");
    }
};

/// Series/termination policy for infinite sums and Jackson integrals.
struct truncation {
    double abs_tol = 1e-14;  ///< stop once |term| < abs_tol for `consecutive` terms
    int consecutive = 3;
    int max_terms = 10000;   ///< hard cap

    void validate() const {
        if (!(abs_tol > 0.0)) throw validation_error("truncation.abs_tol must be > 0");
        if (consecutive < 1) throw validation_error("truncation.consecutive must be >= 1");
        if (max_terms < consecutive)
            throw validation_error("truncation.max_terms must be >= consecutive");
    }
};

/// [n]_{p,q}, computed as the homogeneous sum sum_{i<n} p^i q^{n-1-i}.
/// This form has no cancellation as q -> p and equals n p^{n-1} at p = q.
inline double pq_integer(int n, const pq_pair& pq) {
    if (n < 0) throw validation_error("pq_integer: n must be >= 0");
    double v = 0.0;
    double qpow = 1.0;
    for (int k = 0; k < n; ++k) {  // [k+1] = p [k] + q^k
        v = pq.p * v + qpow;
        qpow *= pq.q;
    }
    return v;
}

inline double pq_factorial(int n, const pq_pair& pq) {
    if (n < 0) throw validation_error("pq_factorial: n must be >= 0");
    double v = 1.0;
    for (int j = 1; j <= n; ++j) v *= pq_integer(j, pq);
    return v;
}

/// log [n]!; the factors are positive so this is exact up to rounding.
/// Use beyond n ~ 50 where the linear-space product can underflow.
inline double log_pq_factorial(int n, const pq_pair& pq) {
    if (n < 0) throw validation_error("log_pq_factorial: n must be >= 0");
    double s = 0.0;
    for (int j = 1; j <= n; ++j) s += std::log(pq_integer(j, pq));
    return s;
}

inline double log_pq_binomial(int n, int k, const pq_pair& pq) {
    if (k < 0 || k > n)
        throw validation_error("pq_binomial: need 0 <= k <= n, got n=" +
                               std::to_string(n) + " k=" + std::to_string(k));
    return log_pq_factorial(n, pq) - log_pq_factorial(k, pq) -
           log_pq_factorial(n - k, pq);
}

inline double pq_binomial(int n, int k, const pq_pair& pq) {
    if (k < 0 || k > n)
        throw validation_error("pq_binomial: need 0 <= k <= n, got n=" +
                               std::to_string(n) + " k=" + std::to_string(k));
    if (n > 50) return std::exp(log_pq_binomial(n, k, pq));
    return pq_factorial(n, pq) / (pq_factorial(k, pq) * pq_factorial(n - k, pq));
}

/// (x (+) a)^n = prod_{s<n} (p^s x + q^s a); n = 0 gives the empty product 1.
inline double pq_power_plus(double x, double a, int n, const pq_pair& pq) {
    if (n < 0) throw validation_error("pq_power_plus: n must be >= 0");
    double v = 1.0, ps = 1.0, qs = 1.0;
    for (int s = 0; s < n; ++s) {
        v *= ps * x + qs * a;
        ps *= pq.p;
        qs *= pq.q;
    }
    return v;
}

/// (x (-) a)^n = prod_{s<n} (p^s x - q^s a).
inline double pq_power_minus(double x, double a, int n, const pq_pair& pq) {
    if (n < 0) throw validation_error("pq_power_minus: n must be >= 0");
    double v = 1.0, ps = 1.0, qs = 1.0;
    for (int s = 0; s < n; ++s) {
        v *= ps * x - qs * a;
        ps *= pq.p;
        qs *= pq.q;
    }
    return v;
}

namespace detail {

// Shared series driver for the two exponentials. `base` selects the
// geometric weight in the term ratio: term_{k+1} = term_k * base^k * x / [k+1].
// small_kind distinguishes the error contract (divergence vs budget).
inline double pq_exp_series(double x, const pq_pair& pq, const truncation& tr,
                            double base, bool small_kind) {
    tr.validate();
    double sum = 0.0, term = 1.0, bpow = 1.0;
    int small_run = 0, grow_run = 0;
    for (int k = 0; k < tr.max_terms; ++k) {
        sum += term;
        double next = term * bpow * x / pq_integer(k + 1, pq);
        if (std::abs(next) > std::abs(term) && term != 0.0) {
            if (++grow_run >= tr.consecutive && small_kind)
                throw divergence_detected(
                    "pq_exp_small: term magnitude grew for " +
                    std::to_string(grow_run) + " successive terms at x=" +
                    std::to_string(x));
        } else {
            grow_run = 0;
        }
        if (std::abs(next) < tr.abs_tol) {
            if (++small_run >= tr.consecutive) return sum + next;
        } else {
            small_run = 0;
        }
        term = next;
        bpow *= base;
    }
    if (small_kind)
        throw divergence_detected("pq_exp_small: max_terms reached without meeting abs_tol");
    throw truncation_budget_exceeded("pq_exp_big: max_terms reached without meeting abs_tol");
}

}  // namespace detail

/// e_{p,q}(x) = sum p^{n(n-1)/2} x^n / [n]!. Finite radius of convergence
/// p/(p-q) when q < p; divergence is detected from growing terms.
inline double pq_exp_small(double x, const pq_pair& pq, const truncation& tr = {}) {
    return detail::pq_exp_series(x, pq, tr, pq.p, true);
}

/// E_{p,q}(x) = sum q^{n(n-1)/2} x^n / [n]!. Entire for q < p; its
/// reciprocal normalizes the Szasz-type basis.
inline double pq_exp_big(double x, const pq_pair& pq, const truncation& tr = {}) {
    return detail::pq_exp_series(x, pq, tr, pq.q, false);
}

/// D_{p,q} f (x) = (f(px) - f(qx)) / ((p-q) x); needs x != 0 and p != q.
inline double pq_derivative(const std::function<double(double)>& f, double x,
                            const pq_pair& pq) {
    if (x == 0.0) throw validation_error("pq_derivative: x must be nonzero");
    pq.require_strict("pq_derivative");
    return (f(pq.p * x) - f(pq.q * x)) / ((pq.p - pq.q) * x);
}

namespace detail {

// Incrementally grown cache of [k] and log [k]! for one (p,q).
// Local to a computation; not shared across threads.
class pq_table {
public:
    explicit pq_table(const pq_pair& pq) : pq_(pq), ints_{0.0}, lfacts_{0.0} {}

    double integer(int k) {
        grow(k);
        return ints_[static_cast<size_t>(k)];
    }
    double log_factorial(int k) {
        grow(k);
        return lfacts_[static_cast<size_t>(k)];
    }

private:
    void grow(int k) {
        while (static_cast<int>(ints_.size()) <= k) {
            const int m = static_cast<int>(ints_.size());  // computing [m]
            const double v = pq_.p * ints_.back() + std::pow(pq_.q, m - 1);
            ints_.push_back(v);
            lfacts_.push_back(lfacts_.back() + std::log(v));
        }
    }

    pq_pair pq_;
    std::vector<double> ints_;
    std::vector<double> lfacts_;
};

// log E_{p,q}(y) for y >= 0 via online log-sum-exp; terms are positive and
// unimodal in k, so we stop once they fall 60 e-folds below the peak.
inline double log_pq_exp_big_pos(double y, const pq_pair& pq, pq_table& tab,
                                 int max_terms = 20000) {
    if (y < 0.0) throw validation_error("log_pq_exp_big_pos: y must be >= 0");
    if (y == 0.0) return 0.0;
    const double lq = std::log(pq.q);
    const double ly = std::log(y);
    double best = 0.0, acc = 1.0;  // k = 0 term
    double lt = 0.0;
    for (int k = 1; k < max_terms; ++k) {
        lt = 0.5 * k * (k - 1) * lq + k * ly - tab.log_factorial(k);
        if (lt > best) {
            acc = acc * std::exp(best - lt) + 1.0;
            best = lt;
        } else {
            acc += std::exp(lt - best);
            if (lt < best - 60.0) return best + std::log(acc);
        }
    }
    throw truncation_budget_exceeded("log_pq_exp_big_pos: series did not settle");
}

}  // namespace detail

}  // namespace pqlab

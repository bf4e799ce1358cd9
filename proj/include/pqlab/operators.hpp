#pragma once

// The (p,q)-Szasz-Mirakyan-Baskakov-Stancu operator: basis functions, the
// direct evaluator (k-sum of Szasz weights times normalized Baskakov-Jackson
// integrals), and closed-form moments.
//
// Two coefficient forms exist throughout:
//   * moment_form::validated  (default) - constants fixed so that the per-k
//     normalization [n-1] * prefactor * Int b_{n,k} d_{p,q}t = 1 holds exactly
//     on the bilateral Jackson ladder, and moments in the exact E-ratio form
//     derived from the same ladder. This is the form the direct-evaluation
//     oracle confirms.
//   * moment_form::printed - the published constants, transcribed verbatim.
//     They fail the oracle for p < 1 (see ERRATA.md) and are kept for
//     comparison experiments only.

#include <cmath>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "pqlab/errors.hpp"
#include "pqlab/integrate.hpp"
#include "pqlab/pq.hpp"

namespace pqlab {

enum class growth_tag { bounded, polynomial };

/// Real-valued function handle on [0, inf) plus a growth hint used by the
/// k-sum truncation heuristic.
struct scalar_fn {
    std::function<double(double)> f;
    growth_tag growth = growth_tag::bounded;
    int degree = 0;  ///< for growth_tag::polynomial

    scalar_fn() = default;
    scalar_fn(std::function<double(double)> fn, growth_tag g = growth_tag::bounded,
              int deg = 0)
        : f(std::move(fn)), growth(g), degree(deg) {}

    double operator()(double t) const { return f(t); }
};

enum class moment_form { validated, printed };

/// Full specification of one operator instance.
struct operator_config {
    int n = 4;
    pq_pair pq{};
    double alpha = 0.0;
    double beta = 0.0;
    truncation trunc{};
    quad_config quad{};
    moment_form form = moment_form::validated;
    /// The classical Stancu convention 0 <= alpha <= beta is enforced; the
    /// source text never states it, so an override is exposed.
    bool allow_alpha_beta_override = false;

    void validate() const {
        if (n < 4) throw validation_error("operator_config: n must be >= 4");
        if (alpha < 0.0) throw validation_error("operator_config: alpha must be >= 0");
        if (beta < 0.0) throw validation_error("operator_config: beta must be >= 0");
        if (alpha > beta && !allow_alpha_beta_override)
            throw validation_error(
                "operator_config: alpha <= beta required (set allow_alpha_beta_override)");
        if (pq.degenerate() && !pq.classical())
            throw validation_error(
                "operator_config: p == q is only supported at the classical clamp p=q=1");
        trunc.validate();
        quad.validate();
    }
};

/// s_{n,k}^{p,q}(x) = E_{p,q}([n]x)^{-1} q^{k(k-1)/2} ([n]x)^k / [k]!,
/// evaluated in log space so large k and large [n]x stay finite.
inline double szasz_basis(int n, int k, double x, const pq_pair& pq,
                          const truncation& tr = {}) {
    if (k < 0) throw validation_error("szasz_basis: k must be >= 0");
    if (x < 0.0) throw validation_error("szasz_basis: x must be >= 0");
    tr.validate();
    if (x == 0.0) return k == 0 ? 1.0 : 0.0;
    detail::pq_table tab(pq);
    double y = 0.0;
    for (int i = 0; i < n; ++i) y = pq.p * y + std::pow(pq.q, i);
    y *= x;
    const double le = detail::log_pq_exp_big_pos(y, pq, tab, tr.max_terms);
    const double ls = 0.5 * k * (k - 1) * std::log(pq.q) + k * std::log(y) -
                      tab.log_factorial(k) - le;
    return std::exp(ls);
}

inline double log_baskakov_weight(int n, int k, double t, const pq_pair& pq) {
    if (k < 0) throw validation_error("baskakov_weight: k must be >= 0");
    if (t < 0.0) throw validation_error("baskakov_weight: t must be >= 0");
    detail::pq_table tab(pq);
    const double lbin = tab.log_factorial(n + k - 1) - tab.log_factorial(k) -
                        tab.log_factorial(n - 1);
    if (t == 0.0) {
        // (1 (+) 0)^{n} = prod p^s ; only the k = 0 weight survives
        if (k > 0) return -std::numeric_limits<double>::infinity();
        return -0.5 * n * (n - 1) * std::log(pq.p);
    }
    double lh = 0.0;
    double ps = 1.0, qs = 1.0;
    for (int s = 0; s < n + k; ++s) {
        lh += std::log(ps + qs * pq.p * t);
        ps *= pq.p;
        qs *= pq.q;
    }
    return lbin + k * std::log(t) - lh;
}

/// b_{n,k}^{p,q}(t) = [n+k-1 choose k] t^k / (1 (+) pt)^{k+n}.
inline double baskakov_weight(int n, int k, double t, const pq_pair& pq) {
    const double lb = log_baskakov_weight(n, k, t, pq);
    return std::isinf(lb) ? 0.0 : std::exp(lb);
}

namespace detail {

// log(1 + exp(z)) without overflow.
inline double log1p_exp(double z) {
    return z > 35.0 ? z : std::log1p(std::exp(z));
}

template <class E>
[[noreturn]] void rethrow_with_k(const E& e, int k) {
    throw E(std::string(e.what()) + " [operator k-term " + std::to_string(k) + "]");
}

// Normalized Baskakov-Jackson expectation for one k:
//   M = Int b_{n,k}(t) f(u(t)) / Int b_{n,k}(t),  log W = log Int b_{n,k}.
// Walks the bilateral ladder with O(1) updates of log h_{n+k}(t) using
//   h_m(r t) = h_m(t) (1 + p r^m t) / (1 + p t),  r = q/p.
// The term threshold is relative to the running peak of w_j b(t_j); the
// absolute scale cancels in M and is restored in log W.
class basis_expectation {
public:
    basis_expectation(int n, const pq_pair& pq, const quad_config& quad,
                      pq_table& tab)
        : n_(n), pq_(pq), quad_(quad), tab_(tab) {}

    struct result {
        double log_w;   // log Int b_{n,k} d_{p,q}t
        double mean;    // normalized expectation of f(u(t))
        double abs_mean;  // expectation of |f(u(t))| (tail heuristics)
    };

    result run(int k, const std::function<double(double)>& f,
               const std::function<double(double)>& shift) {
        entries_.clear();
        peak_ = -std::numeric_limits<double>::infinity();
        const double p = pq_.p, q = pq_.q;
        const int m = n_ + k;
        const double lr = std::log(q) - std::log(p);
        const double lp = std::log(p);
        const double lbin = tab_.log_factorial(n_ + k - 1) - tab_.log_factorial(k) -
                            tab_.log_factorial(n_ - 1);
        const double lw0 = std::log(p - q);
        const double lt0 = -lp;
        double lh0 = 0.0;
        {
            double ps = 1.0, qs = 1.0;
            const double t0 = 1.0 / p;
            for (int s = 0; s < m; ++s) {
                lh0 += std::log(ps + qs * p * t0);
                ps *= p;
                qs *= q;
            }
        }
        const double lrel = std::log(quad_.abs_tol);
        // towards 0: j = 0, 1, 2, ...
        {
            double lt = lt0, lh = lh0;
            int small_run = 0;
            int j = 0;
            for (; j < quad_.node_budget; ++j) {
                const double lwb = lw0 + (k + 1) * lt + lbin - lh;
                push(lwb, lt, shift);
                if (lwb < peak_ + lrel) {
                    if (++small_run >= 3) break;
                } else {
                    small_run = 0;
                }
                lh += log1p_exp(lp + m * lr + lt) - log1p_exp(lp + lt);
                lt += lr;
            }
            if (j >= quad_.node_budget)
                throw node_budget_exceeded("operator quadrature: shrinking-node budget");
        }
        // towards infinity: j = -1, -2, ...
        {
            double lt = lt0, lh = lh0;
            int small_run = 0;
            int j = 0;
            for (; j < quad_.node_budget; ++j) {
                const double ltp = lt - lr;
                lh += log1p_exp(lp + ltp) - log1p_exp(lp + m * lr + ltp);
                lt = ltp;
                const double lwb = lw0 + (k + 1) * lt + lbin - lh;
                push(lwb, lt, shift);
                if (lwb < peak_ + lrel) {
                    if (++small_run >= 3) break;
                } else {
                    small_run = 0;
                }
            }
            if (j >= quad_.node_budget)
                throw node_budget_exceeded("operator quadrature: growing-node budget");
        }
        double wsum = 0.0, num = 0.0, anum = 0.0;
        for (const auto& [lwb, u] : entries_) {
            const double w = std::exp(lwb - peak_);
            const double fu = f(u);
            if (!std::isfinite(fu))
                throw domain_error("operator argument function returned non-finite", u);
            wsum += w;
            num += w * fu;
            anum += w * std::abs(fu);
        }
        return {peak_ + std::log(wsum), num / wsum, anum / wsum};
    }

private:
    void push(double lwb, double lt, const std::function<double(double)>& shift) {
        if (lwb > peak_) peak_ = lwb;
        if (lwb > peak_ - 60.0) entries_.emplace_back(lwb, shift(std::exp(lt)));
    }

    int n_;
    pq_pair pq_;
    quad_config quad_;
    pq_table& tab_;
    double peak_ = 0.0;
    std::vector<std::pair<double, double>> entries_;
};

inline double log_prefactor(int n, int k, const pq_pair& pq, moment_form form) {
    const double lp = std::log(pq.p), lq = std::log(pq.q);
    if (form == moment_form::printed)
        return 0.5 * (k * (k + 1) - 2) * lq + 0.5 * (k + 1) * (k + 2) * lp;
    return 0.5 * k * (k + 1) * lq + (k + 1 + 0.5 * (n - 1) * (n - 2)) * lp;
}

// Classical clamp p = q = 1: Poisson weights and classical quadrature.
inline double operator_apply_classical(const scalar_fn& f, double x,
                                       const operator_config& cfg) {
    const int n = cfg.n;
    const double y = static_cast<double>(n) * x;
    const auto u_of = [&](double t) {
        return (n * t + cfg.alpha) / (n + cfg.beta);
    };
    const auto kth = [&](int k) {
        const double lbin = std::lgamma(n + k) - std::lgamma(k + 1.0) - std::lgamma(n);
        const auto b = [&](double t) {
            return std::exp(lbin + (k > 0 ? k * std::log(t) : 0.0) -
                            (n + k) * std::log1p(t));
        };
        const double w = classical_improper(b, cfg.quad);
        const double num = classical_improper(
            [&](double t) { return b(t) * f(u_of(t)); }, cfg.quad);
        return std::pair<double, double>{(n - 1.0) * w, num / w};
    };
    if (x == 0.0) {
        auto [c0, m0] = kth(0);
        return c0 * m0;
    }
    double total = 0.0, mass = 0.0;
    int small_run = 0;
    for (int k = 0; k < cfg.trunc.max_terms; ++k) {
        const double ls = -y + k * std::log(y) - std::lgamma(k + 1.0);
        const double s = std::exp(ls);
        mass += s;
        auto [ck, mk] = kth(k);
        const double term = s * ck * mk;
        total += term;
        const double scale = std::max(1.0, std::abs(total));
        if (mass > 1.0 - cfg.trunc.abs_tol && std::abs(term) < cfg.trunc.abs_tol * scale) {
            if (++small_run >= cfg.trunc.consecutive) return total;
        } else {
            small_run = 0;
        }
    }
    throw truncation_budget_exceeded("operator_apply: classical k-sum did not settle");
}

}  // namespace detail

/// T_{n,alpha,beta}^{p,q}(f, x): the k-sum of szasz_basis(x) x prefactor x
/// [n-1] x (improper Jackson integral of b_{n,k} f(([n]p^k t + alpha)/([n]+beta))).
/// The k-sum stops once the accumulated Szasz mass exceeds 1 - abs_tol and the
/// last contributions are negligible (scaled by a crude moment estimate for
/// polynomial-growth f). x = 0 short-circuits to the k = 0 term.
inline double operator_apply(const scalar_fn& f, double x, const operator_config& cfg) {
    cfg.validate();
    if (x < 0.0) throw validation_error("operator_apply: x must be >= 0");
    if (!f.f) throw validation_error("operator_apply: empty function handle");
    if (cfg.pq.classical()) return detail::operator_apply_classical(f, x, cfg);

    detail::pq_table tab(cfg.pq);
    const int n = cfg.n;
    const double nn = tab.integer(n);
    const double lognm1 = std::log(tab.integer(n - 1));
    detail::basis_expectation expect(n, cfg.pq, cfg.quad, tab);

    const auto k_term = [&](int k, double s_k, double& moment_scale) {
        const double pk = std::pow(cfg.pq.p, k);
        const auto shift = [&](double t) { return (nn * pk * t + cfg.alpha) / (nn + cfg.beta); };
        try {
            const auto r = expect.run(k, f.f, shift);
            const double log_ck =
                lognm1 + detail::log_prefactor(n, k, cfg.pq, cfg.form) + r.log_w;
            moment_scale = std::max(moment_scale, r.abs_mean);
            return s_k * std::exp(log_ck) * r.mean;
        } catch (const node_budget_exceeded& e) {
            detail::rethrow_with_k(e, k);
        } catch (const divergent_tail& e) {
            detail::rethrow_with_k(e, k);
        }
    };

    double moment_scale = 1.0;
    if (x == 0.0) return k_term(0, 1.0, moment_scale);

    const double y = nn * x;
    const double le = detail::log_pq_exp_big_pos(y, cfg.pq, tab, cfg.trunc.max_terms);
    const double lq = std::log(cfg.pq.q), ly = std::log(y);
    double total = 0.0, mass = 0.0;
    int small_run = 0;
    for (int k = 0; k < cfg.trunc.max_terms; ++k) {
        const double s = std::exp(0.5 * k * (k - 1) * lq + k * ly -
                                  tab.log_factorial(k) - le);
        mass += s;
        const double term = k_term(k, s, moment_scale);
        total += term;
        const double scale = std::max(1.0, std::abs(total));
        const double tail_ok =
            (f.growth == growth_tag::polynomial ? (1.0 - mass) * moment_scale
                                                : (1.0 - mass));
        if (tail_ok < cfg.trunc.abs_tol * scale &&
            std::abs(term) < cfg.trunc.abs_tol * scale) {
            if (++small_run >= cfg.trunc.consecutive) return total;
        } else {
            small_run = 0;
        }
    }
    throw truncation_budget_exceeded("operator_apply: k-sum did not settle within max_terms");
}

namespace detail {

// Shared pieces of the validated closed-form moments. With y = [n]x and
// G(z) = E_{p,q}(z y)/E_{p,q}(y):
//   S1 = p^{n-3} (G(p^2/q) + p y G(p)) / (q [n-2])
//   S2 = p^{2n-7} ([2] G(p^4/q^2) + [2]^2 (p^2/q) y G(p^3/q) + p^4 q y^2 G(p^2))
//        / (q^3 [n-2] [n-3])
// These are exact on the bilateral ladder (the direct evaluator reproduces
// them to quadrature accuracy).
struct moment_pieces {
    double s1;
    double s2;
};

inline moment_pieces validated_pieces(double x, const operator_config& cfg,
                                      pq_table& tab) {
    const double p = cfg.pq.p, q = cfg.pq.q;
    const int n = cfg.n;
    const double nn = tab.integer(n);
    const double y = nn * x;
    const double le = log_pq_exp_big_pos(y, cfg.pq, tab, cfg.trunc.max_terms);
    const auto G = [&](double z) {
        return std::exp(log_pq_exp_big_pos(z * y, cfg.pq, tab, cfg.trunc.max_terms) - le);
    };
    const double two = tab.integer(2);
    const double s1 = std::pow(p, n - 3) / (q * tab.integer(n - 2)) *
                      (G(p * p / q) + p * y * G(p));
    const double s2 = std::pow(p, 2 * n - 7) /
                      (q * q * q * tab.integer(n - 2) * tab.integer(n - 3)) *
                      (two * G(p * p * p * p / (q * q)) +
                       two * two * (p * p / q) * y * G(p * p * p / q) +
                       p * p * p * p * q * y * y * G(p * p));
    return {s1, s2};
}

}  // namespace detail

/// T(1, x); identically 1 for the validated form (and printed Lemma 1 claims 1).
inline double moment_m0(double /*x*/, const operator_config& cfg) {
    cfg.validate();
    return 1.0;
}

/// First moment T(t, x) in closed form.
inline double moment_m1(double x, const operator_config& cfg) {
    cfg.validate();
    detail::pq_table tab(cfg.pq);
    const double p = cfg.pq.p, q = cfg.pq.q;
    const double nn = tab.integer(cfg.n);
    const double S = nn + cfg.beta;
    if (cfg.form == moment_form::printed) {
        const double n2 = tab.integer(cfg.n - 2);
        return cfg.alpha / S + nn / (p * q * q * S * n2) + nn * nn * x / (p * q * q * S * n2);
    }
    const auto pieces = detail::validated_pieces(x, cfg, tab);
    return (cfg.alpha + nn * pieces.s1) / S;
}

/// Second moment T(t^2, x) in closed form.
inline double moment_m2(double x, const operator_config& cfg) {
    cfg.validate();
    detail::pq_table tab(cfg.pq);
    const double p = cfg.pq.p, q = cfg.pq.q;
    const double nn = tab.integer(cfg.n);
    const double S = nn + cfg.beta;
    if (cfg.form == moment_form::printed) {
        const double n2 = tab.integer(cfg.n - 2);
        const double n3 = tab.integer(cfg.n - 3);
        const double two = tab.integer(2);
        const double c0 = cfg.alpha * cfg.alpha / (S * S) +
                          2.0 * cfg.alpha * nn / (S * S * p * q * q * n2) +
                          two * nn * nn / (S * S * std::pow(p, 5) * q * q * q * n2 * n3);
        const double c1 = nn * nn / (S * S * p * q * q * n2) *
                          ((q * (p + two) + p * p) * nn / (p * p * p * q * q * q * n3) +
                           2.0 * cfg.alpha);
        const double c2 = std::pow(nn, 4) / (S * S * p * std::pow(q, 6) * n2 * n3);
        return c0 + c1 * x + c2 * x * x;
    }
    const auto pieces = detail::validated_pieces(x, cfg, tab);
    return (cfg.alpha * cfg.alpha + 2.0 * cfg.alpha * nn * pieces.s1 +
            nn * nn * pieces.s2) /
           (S * S);
}

/// Second central moment T((t-x)^2, x). The validated form is assembled from
/// the same exact pieces as m1/m2; the printed form is the published
/// quadratic display (whose constants mix qp^2 and pq^2, see ERRATA.md).
inline double central_moment2(double x, const operator_config& cfg) {
    cfg.validate();
    detail::pq_table tab(cfg.pq);
    const double p = cfg.pq.p, q = cfg.pq.q;
    const double nn = tab.integer(cfg.n);
    const double S = nn + cfg.beta;
    if (cfg.form == moment_form::printed) {
        const double n2 = tab.integer(cfg.n - 2);
        const double n3 = tab.integer(cfg.n - 3);
        const double two = tab.integer(2);
        const double a = cfg.alpha;
        const double c2 = std::pow(nn, 4) / (S * S * p * std::pow(q, 6) * n2 * n3) -
                          2.0 * nn * nn / (p * q * q * S * n2) + 1.0;
        const double c1 = 2.0 * a * nn * nn / (S * S * p * q * q * n2) +
                          std::pow(nn, 3) * (q * (p + two) + p * p) /
                              (S * S * std::pow(p, 4) * std::pow(q, 5) * n2 * n3) -
                          2.0 * a / S - 2.0 * nn / (q * p * p * S * n2);
        const double c0 = 2.0 * a * nn / (S * S * q * p * p * n2) +
                          two * nn * nn / (S * S * std::pow(p, 5) * q * q * q * n2 * n3) +
                          a * a / (S * S);
        return c2 * x * x + c1 * x + c0;
    }
    const auto pieces = detail::validated_pieces(x, cfg, tab);
    const double m1 = (cfg.alpha + nn * pieces.s1) / S;
    const double m2 = (cfg.alpha * cfg.alpha + 2.0 * cfg.alpha * nn * pieces.s1 +
                       nn * nn * pieces.s2) /
                      (S * S);
    return m2 - 2.0 * x * m1 + x * x;
}

}  // namespace pqlab

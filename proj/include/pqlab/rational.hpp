#pragma once

// Exact-rational twin of the pq-core integer/factorial/binomial path.
// Serves as an in-repo oracle against the double implementation for
// rational p, q and small n (tests use n <= 12).

#include <boost/multiprecision/cpp_int.hpp>

#include "pqlab/errors.hpp"

namespace pqlab {

using rational = boost::multiprecision::cpp_rational;

struct pq_rational {
    rational p;
    rational q;

    pq_rational(rational p_, rational q_) : p(std::move(p_)), q(std::move(q_)) {
        if (!(q > 0 && q <= p && p <= 1))
            throw validation_error("pq_rational requires 0 < q <= p <= 1");
    }
};

inline rational pq_integer_exact(int n, const pq_rational& pq) {
    if (n < 0) throw validation_error("pq_integer_exact: n must be >= 0");
    rational v = 0, qpow = 1;
    for (int k = 0; k < n; ++k) {
        v = pq.p * v + qpow;
        qpow *= pq.q;
    }
    return v;
}

inline rational pq_factorial_exact(int n, const pq_rational& pq) {
    if (n < 0) throw validation_error("pq_factorial_exact: n must be >= 0");
    rational v = 1;
    for (int j = 1; j <= n; ++j) v *= pq_integer_exact(j, pq);
    return v;
}

inline rational pq_binomial_exact(int n, int k, const pq_rational& pq) {
    if (k < 0 || k > n) throw validation_error("pq_binomial_exact: need 0 <= k <= n");
    return pq_factorial_exact(n, pq) /
           (pq_factorial_exact(k, pq) * pq_factorial_exact(n - k, pq));
}

}  // namespace pqlab

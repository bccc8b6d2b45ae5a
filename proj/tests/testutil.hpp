#pragma once

// Shared helpers for the unit tests: seeded random rational polynomials and
// points, so exact-identity tests can sweep nontrivial inputs repeatably.

#include "tsm/polynomial.hpp"

#include <complex>
#include <random>
#include <vector>

namespace tsmtest {

inline tsm::Rational random_rational(std::mt19937_64& rng) {
    std::uniform_int_distribution<int> num(-9, 9);
    std::uniform_int_distribution<int> den(1, 4);
    return tsm::Rational(num(rng), den(rng));
}

inline tsm::CRat random_crat(std::mt19937_64& rng) {
    return {random_rational(rng), random_rational(rng)};
}

// A random polynomial with per-variable exponents <= max_exp and the given
// number of (possibly colliding) terms.
inline tsm::BigradedPolynomial random_poly(std::mt19937_64& rng, int n, int max_exp, int nterms) {
    std::uniform_int_distribution<int> e(0, max_exp);
    tsm::BigradedPolynomial p = tsm::BigradedPolynomial::zero(n);
    for (int t = 0; t < nterms; ++t) {
        tsm::MultiIndex a(n), b(n);
        for (int j = 0; j < n; ++j) {
            a[j] = e(rng);
            b[j] = e(rng);
        }
        p.add_term(std::move(a), std::move(b), random_crat(rng));
    }
    return p;
}

inline std::vector<std::complex<double>> random_point(std::mt19937_64& rng, int n, double scale = 1.0) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::vector<std::complex<double>> z(n);
    for (int j = 0; j < n; ++j) z[j] = scale * std::complex<double>(u(rng), u(rng));
    return z;
}

}  // namespace tsmtest

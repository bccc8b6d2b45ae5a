#pragma once

// Exact moments of monomials against the normalized surface measure on the
// unit sphere S^{2n-1} in C^n, and the Hermitian L^2 inner product of
// polynomials that they induce.
//
// Writing z_j = sqrt(t_j) e^{i theta_j}, the normalized surface measure
// factors as independent uniform angles theta_j and (t_1..t_n) uniform on the
// probability simplex.  The angular integral kills every monomial with
// alpha != beta, and for alpha == beta the simplex moment of t^alpha is
// (n-1)! alpha! / (n-1+|alpha|)!.

#include "tsm/multi_index.hpp"
#include "tsm/polynomial.hpp"
#include "tsm/rational.hpp"

#include <map>
#include <vector>

namespace tsm {

// Integral of z^alpha zbar^beta over the unit sphere, normalized total mass 1.
inline Rational monomial_sphere_integral(int n, const MultiIndex& alpha, const MultiIndex& beta) {
    if (static_cast<int>(alpha.size()) != n || static_cast<int>(beta.size()) != n)
        throw std::invalid_argument("sphere integral: multi-index length != n");
    if (alpha != beta) return Rational(0);
    BigInt num = factorial(n - 1);
    for (int aj : alpha) num *= factorial(aj);
    return Rational(num, factorial(n - 1 + degree(alpha)));
}

// Hermitian inner product <P, Q> = integral over the unit sphere of
// P * conj(Q), exact.  A monomial pair contributes iff
// alpha_P + beta_Q == beta_P + alpha_Q, i.e. both sides share the same
// "charge" alpha - beta; grouping terms by charge keeps the pairing sparse.
inline CRat sphere_inner_product(const BigradedPolynomial& P, const BigradedPolynomial& Q) {
    if (P.n != Q.n) throw std::invalid_argument("inner product: dimension mismatch");
    const int n = P.n;
    using Charge = std::vector<int>;
    std::map<Charge, std::vector<const std::pair<const BigradedPolynomial::Key, CRat>*>> qterms;
    for (const auto& t : Q.terms) {
        Charge w(n);
        for (int j = 0; j < n; ++j) w[j] = t.first.first[j] - t.first.second[j];
        qterms[w].push_back(&t);
    }
    CRat acc;
    MultiIndex m(n);
    for (const auto& tp : P.terms) {
        Charge w(n);
        for (int j = 0; j < n; ++j) w[j] = tp.first.first[j] - tp.first.second[j];
        const auto it = qterms.find(w);
        if (it == qterms.end()) continue;
        for (const auto* tq : it->second) {
            // integral of z^(alpha_P + beta_Q) zbar^(beta_P + alpha_Q); equal
            // charges make the two exponents match, so only alpha matters.
            for (int j = 0; j < n; ++j) m[j] = tp.first.first[j] + tq->first.second[j];
            BigInt num = factorial(n - 1);
            for (int mj : m) num *= factorial(mj);
            acc += Rational(num, factorial(n - 1 + degree(m))) * (tp.second * tq->second.conj());
        }
    }
    return acc;
}

}  // namespace tsm

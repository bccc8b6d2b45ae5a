#pragma once

// Named ready-made test functions, so every verification job can run without
// user-supplied code: constants, Gaussians, smooth bumps, the exterior model
// functions e^{±lambda rho^2/4} P(z) / rho^{2K} built on harmonic polynomials,
// plain monomials, and structured functions loaded from files.  Each carries
// the metadata the verification drivers need: a sphere-restriction degree for
// automatic quadrature orders, and decay information for the support tests.

#include "tsm/harmonic.hpp"
#include "tsm/quadrature.hpp"
#include "tsm/radial.hpp"
#include "tsm/structured.hpp"

#include <cmath>
#include <complex>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace tsm {

struct BuiltinFunction {
    std::string name;
    FunctionSampler sampler;
    std::optional<DecayInfo> decay;
    // Set when the function has an exact radial-profile x harmonic form.
    std::optional<StructuredFunction> structured;
};

inline BuiltinFunction builtin_constant(int n, std::complex<double> value = 1.0) {
    FunctionSampler s{n, [value](const std::vector<std::complex<double>>&) { return value; }, 0};
    return {"constant", std::move(s), DecayInfo{false, {}}, std::nullopt};
}

// e^{sign |z|^2 lambda / 4} with sign = -1 (decaying) or +1 (growing).
// Neither satisfies the support-test decay hypothesis, which requires decay
// strictly faster than the central Gaussian.
inline BuiltinFunction builtin_gaussian(int n, int sign = -1, double lambda = 1.0) {
    if (sign != 1 && sign != -1) throw std::invalid_argument("gaussian: sign must be +1 or -1");
    StructuredFunction f =
        StructuredFunction::single(RadialProfile::single(sign, 0), BigradedPolynomial::constant(n, CRat(1)));
    BuiltinFunction out{sign < 0 ? "gaussian" : "gaussian+", f.sampler(lambda),
                        DecayInfo{false, {}}, std::move(f)};
    return out;
}

// Smooth compactly supported bump: exp(-1 / (1 - |(z-c)/radius|^2)) inside
// |z - c| < radius, identically 0 outside.  Compact support makes every decay
// bound hold; witness constants sup_{|z-c|<=radius} |z|^k e^{|z|^2/4} |f| are
// recorded for k = 0..8 using |z| <= |c| + radius and sup |f| = e^{-1}.
inline BuiltinFunction builtin_bump(int n, std::vector<std::complex<double>> center,
                                    double radius = 1.0) {
    if (radius <= 0) throw std::invalid_argument("bump: radius must be positive");
    if (static_cast<int>(center.size()) != n)
        throw std::invalid_argument("bump: center length != n");
    const double r2 = radius * radius;
    FunctionSampler s{n,
                      [center, r2](const std::vector<std::complex<double>>& z) {
                          double d2 = 0;
                          for (size_t j = 0; j < z.size(); ++j) d2 += std::norm(z[j] - center[j]);
                          const double u = d2 / r2;
                          if (u >= 1.0) return std::complex<double>(0.0);
                          return std::complex<double>(std::exp(-1.0 / (1.0 - u)), 0.0);
                      },
                      {}};
    double cnorm2 = 0;
    for (const auto& c : center) cnorm2 += std::norm(c);
    const double reach = std::sqrt(cnorm2) + radius;
    DecayInfo decay{true, {}};
    for (int k = 0; k <= 8; ++k)
        decay.constants.push_back(std::pow(reach, k) * std::exp(reach * reach / 4.0) *
                                  std::exp(-1.0));
    bool centered = true;
    for (const auto& c : center)
        if (c != std::complex<double>(0.0)) centered = false;
    if (centered) s.sphere_degree = 0;  // radial: constant on centered spheres
    return {"bump", std::move(s), std::move(decay), std::nullopt};
}

namespace detail {
inline BigradedPolynomial harmonic_pick(int n, int p, int q, int j) {
    const auto basis = harmonic_space_basis(n, p, q);
    if (basis.empty())
        throw std::invalid_argument("model: harmonic space (" + std::to_string(p) + "," +
                                    std::to_string(q) + ") is zero for n=" + std::to_string(n));
    if (j < 0 || j >= static_cast<int>(basis.size()))
        throw std::invalid_argument("model: harmonic index j out of range");
    return basis[static_cast<size_t>(j)];
}
}  // namespace detail

// Exterior model of growing type: e^{lambda rho^2/4} P(z) rho^{-2(n+p+q-i)}
// with P the j-th basis element of the (p,q) harmonic space and 1 <= i <= p.
// Grows like a central Gaussian, so the decay hypothesis fails by design.
inline BuiltinFunction builtin_thm33(int n, int p, int q, int i, int j = 0, double lambda = 1.0) {
    if (i < 1 || i > p) throw std::invalid_argument("thm33: need 1 <= i <= p");
    StructuredFunction f = StructuredFunction::single(
        RadialProfile::single(+1, -2 * (n + p + q - i)), detail::harmonic_pick(n, p, q, j));
    return {"thm33", f.sampler(lambda), DecayInfo{false, {}}, std::move(f)};
}

// Exterior model of decaying type: e^{-lambda rho^2/4} P(z) rho^{-2(n+p+q-k)}
// with 1 <= k <= q.  Decays, but only at the central-Gaussian rate, so the
// support-test hypothesis (strictly faster decay) still fails.
inline BuiltinFunction builtin_thm34(int n, int p, int q, int k, int j = 0, double lambda = 1.0) {
    if (k < 1 || k > q) throw std::invalid_argument("thm34: need 1 <= k <= q");
    StructuredFunction f = StructuredFunction::single(
        RadialProfile::single(-1, -2 * (n + p + q - k)), detail::harmonic_pick(n, p, q, j));
    return {"thm34", f.sampler(lambda), DecayInfo{false, {}}, std::move(f)};
}

// Plain monomial z^alpha zbar^beta.
inline BuiltinFunction builtin_monomial(int n, const MultiIndex& alpha, const MultiIndex& beta) {
    BigradedPolynomial mono = BigradedPolynomial::monomial(n, alpha, beta, CRat(1));
    CompiledPolynomial compiled(mono);
    const int deg = degree(alpha) + degree(beta);
    FunctionSampler s{n,
                      [compiled](const std::vector<std::complex<double>>& z) {
                          return compiled.eval(z.data());
                      },
                      deg};
    return {"monomial", std::move(s), DecayInfo{false, {}}, std::nullopt};
}

// Euclidean exterior model on R^{2n}: rho^m P(z) with no exponential factor;
// used by the Euclidean characterization and support checks.  m < 0 means no
// rapid decay (polynomial decay only), so the hypothesis flag is off unless
// the caller overrides it.
inline BuiltinFunction builtin_euclidean_model(int n, int p, int q, int m, int j = 0) {
    StructuredFunction f =
        StructuredFunction::single(RadialProfile::single(0, m), detail::harmonic_pick(n, p, q, j));
    return {"euclidean_model", f.sampler(1.0), DecayInfo{false, {}}, std::move(f)};
}

// Wraps an explicit structured function (e.g. parsed from profile + polynomial
// files).  No decay claim is attached by default.
inline BuiltinFunction builtin_structured(StructuredFunction f, double lambda = 1.0) {
    return {"structured", f.sampler(lambda), std::nullopt, std::move(f)};
}

}  // namespace tsm

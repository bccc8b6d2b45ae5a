#pragma once

// Product quadrature on the sphere S_s = { w in C^n : |w| = s } and the three
// spherical means built on it: the twisted mean, its left-sided variant, and
// the ordinary Euclidean mean (C^n read as R^{2n}).
//
// Rule construction.  Writing w_j = s sqrt(t_j) e^{i theta_j} with t on the
// probability simplex and independent uniform angles, the normalized surface
// measure becomes
//     (uniform angles theta in [0,2pi)^n) x ((n-1)! dt  on the simplex).
// Angles are integrated by M-point trapezoid grids (exact for phases e^{ik
// theta}, |k| < M), and the simplex by a stick-breaking product of
// Gauss-Legendre rules on [0,1]:  t_1 = xi_1, t_2 = (1-xi_1) xi_2, ...,
// with Jacobian factor prod_j (1-xi_j)^{n-1-j}.  A rule of order D
// integrates every monomial w^alpha wbar^beta with |alpha|+|beta| <= D
// exactly: the angular grids kill all terms with alpha != beta, and the
// surviving t-moments are polynomials the radial rules capture.

#include "tsm/numeric.hpp"

#include <cmath>
#include <complex>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace tsm {

// Gauss-Legendre nodes and weights on [0, 1], by Newton iteration on the
// Legendre recurrence.  Deterministic to the bit for a given N.
inline void gauss_legendre_01(int N, std::vector<double>& x, std::vector<double>& w) {
    x.assign(N, 0.0);
    w.assign(N, 0.0);
    for (int i = 0; i < N; ++i) {
        // Root i (descending in (-1,1)), standard cosine initial guess.
        double t = std::cos(M_PI * (i + 0.75) / (N + 0.5));
        double pp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = t;
            for (int k = 2; k <= N; ++k) {
                const double p2 = ((2 * k - 1) * t * p1 - (k - 1) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            pp = N * (t * p1 - p0) / (t * t - 1.0);
            const double dt = p1 / pp;
            t -= dt;
            if (std::abs(dt) < 1e-15) break;
        }
        x[i] = 0.5 * (1.0 + t);
        w[i] = 1.0 / ((1.0 - t * t) * pp * pp);
    }
}

struct SphereRule {
    int n = 1;
    double s = 1.0;
    int order = 0;
    std::vector<std::complex<double>> nodes;  // size() * n entries, node-major
    std::vector<double> weights;              // normalized to total 1

    size_t size() const { return weights.size(); }
    const std::complex<double>* node(size_t k) const { return nodes.data() + k * n; }
};

inline SphereRule build_sphere_rule(int n, double s, int order) {
    if (n < 1) throw std::invalid_argument("sphere rule: n must be >= 1");
    if (!(s > 0.0)) throw std::invalid_argument("sphere rule: radius must be positive");
    if (order < 0) throw std::invalid_argument("sphere rule: order must be >= 0");

    SphereRule rule;
    rule.n = n;
    rule.s = s;
    rule.order = order;

    const int M = order + 1;  // angle points per coordinate
    std::vector<std::complex<double>> phase(M);
    for (int m = 0; m < M; ++m) {
        const double th = 2.0 * M_PI * m / M;
        phase[m] = {std::cos(th), std::sin(th)};
    }

    // Radial (simplex) tensor grid; empty product for n = 1.
    const int NG = (order / 2 + n - 1 + 1) / 2 + 1;
    std::vector<double> gx, gw;
    if (n > 1) gauss_legendre_01(NG, gx, gw);

    const size_t radial_count = [&] {
        size_t c = 1;
        for (int j = 0; j + 1 < n; ++j) c *= NG;
        return c;
    }();

    std::vector<double> t(n);
    std::vector<int> ridx(std::max(n - 1, 1), 0), aidx(n, 0);
    for (size_t rc = 0; rc < radial_count; ++rc) {
        // Decode the radial multi-index and build t plus its weight.
        size_t rem = rc;
        double rw = 1.0, stick = 1.0;
        for (int j = 0; j < n - 1; ++j) {
            ridx[j] = static_cast<int>(rem % NG);
            rem /= NG;
            const double xi = gx[ridx[j]];
            t[j] = stick * xi;
            double jac = gw[ridx[j]];
            for (int e = 0; e < n - 2 - j; ++e) jac *= (1.0 - xi);
            rw *= jac;
            stick *= (1.0 - xi);
        }
        t[n - 1] = stick;

        std::vector<double> root(n);
        for (int j = 0; j < n; ++j) root[j] = s * std::sqrt(t[j]);

        // All angle combinations for this radial point.
        size_t angle_count = 1;
        for (int j = 0; j < n; ++j) angle_count *= M;
        for (size_t ac = 0; ac < angle_count; ++ac) {
            size_t arem = ac;
            for (int j = 0; j < n; ++j) {
                aidx[j] = static_cast<int>(arem % M);
                arem /= M;
            }
            for (int j = 0; j < n; ++j) rule.nodes.push_back(root[j] * phase[aidx[j]]);
            rule.weights.push_back(rw);
        }
    }

    // Normalize to total mass exactly 1 (fixed-order reduction).
    const double total = pairwise_sum(rule.weights);
    for (double& w : rule.weights) w /= total;
    return rule;
}

// Decay metadata for support-radius estimation: `satisfied` records whether
// the rapid-decay hypothesis (|z|^k e^{|z|^2/4} |f(z)| bounded for every k,
// or sup |x|^k |g(x)| finite in the Euclidean variant) is claimed to hold;
// `constants` optionally stores witness bounds C_k for k = 0, 1, ....
// The data is recorded in reports and drives hypothesis-violation flags; it
// is not (and cannot be) verified pointwise over all of C^n.
struct DecayInfo {
    bool satisfied = false;
    std::vector<double> constants;
};

// A sampled function on C^n.  When the restriction of f to every centered
// sphere is a polynomial of bounded total degree in the sphere variable --
// true for polynomials times radial factors, and for radial-profile-times-
// harmonic sums -- sphere_degree declares that bound, which lets callers
// choose integration orders that make sphere quadrature exact.
struct FunctionSampler {
    int n = 1;
    std::function<std::complex<double>(const std::vector<std::complex<double>>&)> f;
    std::optional<int> sphere_degree;

    std::complex<double> operator()(const std::vector<std::complex<double>>& z) const { return f(z); }
};

namespace detail {
// Shared mean kernel.  Samples f(z + node_sign*w) over the rule's nodes with the
// oscillatory factor e^{ i half_lambda Im(z . conj w) }; when sup_abs is non-null
// it receives max_k |f(z + node_sign*w_k)| (used by callers to build report scales).
inline std::complex<double> mean_impl(const FunctionSampler& f,
                                      const std::vector<std::complex<double>>& z,
                                      const SphereRule& rule, double half_lambda,
                                      double node_sign = -1.0, double* sup_abs = nullptr) {
    if (f.n != rule.n) throw std::invalid_argument("mean: sampler/rule dimension mismatch");
    if (static_cast<int>(z.size()) != rule.n) throw std::invalid_argument("mean: point length != n");
    const int n = rule.n;
    std::vector<std::complex<double>> shifted(n);
    std::vector<std::complex<double>> terms(rule.size());
    double sup = 0.0;
    for (size_t k = 0; k < rule.size(); ++k) {
        const std::complex<double>* w = rule.node(k);
        double imzw = 0.0;
        for (int j = 0; j < n; ++j) {
            shifted[j] = z[j] + node_sign * w[j];
            // Im(z_j * conj(w_j))
            imzw += z[j].imag() * w[j].real() - z[j].real() * w[j].imag();
        }
        std::complex<double> val = f.f(shifted);
        if (sup_abs) sup = std::max(sup, std::abs(val));
        if (half_lambda != 0.0) {
            const double ph = half_lambda * imzw;
            val *= std::complex<double>(std::cos(ph), std::sin(ph));
        }
        terms[k] = rule.weights[k] * val;
    }
    if (sup_abs) *sup_abs = sup;
    return pairwise_sum(terms);
}
}  // namespace detail

// f x mu_s (z): integrand f(z - w) e^{ i (lambda/2) Im(z . conj w) }.
inline std::complex<double> twisted_mean(const FunctionSampler& f,
                                         const std::vector<std::complex<double>>& z,
                                         const SphereRule& rule, double lambda = 1.0,
                                         double* sup_abs = nullptr) {
    return detail::mean_impl(f, z, rule, 0.5 * lambda, -1.0, sup_abs);
}

// mu_s x f (z): same integrand with the opposite phase orientation.
inline std::complex<double> left_twisted_mean(const FunctionSampler& f,
                                              const std::vector<std::complex<double>>& z,
                                              const SphereRule& rule, double lambda = 1.0,
                                              double* sup_abs = nullptr) {
    return detail::mean_impl(f, z, rule, -0.5 * lambda, -1.0, sup_abs);
}

// Ordinary spherical mean of f over { y : |y - x| = s } in R^{2n} ~ C^n:
// sum of weights * f(x + w_node).
inline std::complex<double> euclidean_mean(const FunctionSampler& f,
                                           const std::vector<std::complex<double>>& x,
                                           const SphereRule& rule,
                                           double* sup_abs = nullptr) {
    return detail::mean_impl(f, x, rule, 0.0, +1.0, sup_abs);
}

// CSV export: header "n,s,order", then one row per node
// "x1,y1,...,xn,yn,weight" in shortest round-trip decimal form.
inline std::string format_rule_csv(const SphereRule& rule) {
    std::string out = std::to_string(rule.n) + "," + format_double(rule.s) + "," +
                      std::to_string(rule.order) + "\n";
    for (size_t k = 0; k < rule.size(); ++k) {
        const std::complex<double>* w = rule.node(k);
        for (int j = 0; j < rule.n; ++j) {
            out += format_double(w[j].real()) + "," + format_double(w[j].imag()) + ",";
        }
        out += format_double(rule.weights[k]) + "\n";
    }
    return out;
}

}  // namespace tsm

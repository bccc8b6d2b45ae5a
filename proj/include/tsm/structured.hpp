#pragma once

// Functions of the structured form  f(z) = sum_t  a_t(rho) P_t(z)  with each
// a_t a RadialProfile and each P_t a harmonic bihomogeneous polynomial.  This
// class is closed under the first-order twisted fields
//     Z_j    = d/dz_j    - zbar_j / 4,
//     Zbar_j = d/dzbar_j + z_j / 4,
// and the closure is computed exactly: differentiating the radial factor
// produces profile terms (the family is closed under d/drho divided by rho),
// and the coordinate-times-harmonic products re-expand into harmonic layers
// with |z|^{2k} factors that fold into the profile's power.
//
// Equality of structured functions is decidable exactly through a canonical
// form: expanding every term over profile basis entries e^{sigma rho^2/4}
// rho^m and grouping by (sigma, m, p, q) yields a unique representation,
// because distinct exponential growth classes, radial powers, and harmonic
// bidegrees are linearly independent as functions on C^n minus the origin.

#include "tsm/harmonic.hpp"
#include "tsm/polynomial.hpp"
#include "tsm/quadrature.hpp"
#include "tsm/radial.hpp"

#include <map>
#include <tuple>
#include <vector>

namespace tsm {

struct StructuredTerm {
    RadialProfile profile;
    BigradedPolynomial poly;
};

struct StructuredFunction {
    int n = 1;
    std::vector<StructuredTerm> terms;

    static StructuredFunction zero(int n) { return {n, {}}; }

    // Validating constructor for a single term: the polynomial part must be
    // bihomogeneous and harmonic for the calculus here to apply.
    static StructuredFunction single(RadialProfile profile, BigradedPolynomial poly) {
        if (!bidegree(poly))
            throw std::invalid_argument("structured term: polynomial is not bihomogeneous");
        if (!laplacian(poly).is_zero())
            throw std::invalid_argument("structured term: polynomial is not harmonic");
        StructuredFunction f{poly.n, {}};
        if (!profile.is_zero() && !poly.is_zero())
            f.terms.push_back({std::move(profile), std::move(poly)});
        return f;
    }

    // Canonical form: (sigma, m, p, q) -> harmonic polynomial of bidegree
    // (p, q), with zero polynomials dropped.
    std::map<std::tuple<int, int, int, int>, BigradedPolynomial> canonical() const {
        std::map<std::tuple<int, int, int, int>, BigradedPolynomial> out;
        for (const auto& t : terms) {
            const auto d = bidegree(t.poly);
            if (!d) throw std::logic_error("structured term lost bihomogeneity");
            for (const auto& [key, c] : t.profile.terms) {
                const std::tuple<int, int, int, int> k{key.first, key.second, d->first, d->second};
                auto it = out.find(k);
                if (it == out.end())
                    out.emplace(k, scale(t.poly, c));
                else
                    it->second = it->second + scale(t.poly, c);
            }
        }
        for (auto it = out.begin(); it != out.end();)
            it = it->second.is_zero() ? out.erase(it) : std::next(it);
        return out;
    }

    // Rebuild with one term per canonical key; keeps term growth in check
    // after repeated field applications.
    StructuredFunction normalized() const {
        StructuredFunction f{n, {}};
        for (auto& [k, poly] : canonical()) {
            const auto [sigma, m, p, q] = k;
            f.terms.push_back({RadialProfile::single(sigma, m), std::move(poly)});
        }
        return f;
    }

    bool is_zero() const { return canonical().empty(); }

    bool equals(const StructuredFunction& o) const {
        if (n != o.n) return false;
        return canonical() == o.canonical();
    }

    // Value at z != 0.  The scale parameter rescales the Gaussian factors of
    // the profiles exactly as in RadialProfile::eval.
    std::complex<double> eval(const std::vector<std::complex<double>>& z,
                              double lambda = 1.0) const {
        double r2 = 0;
        for (const auto& w : z) r2 += std::norm(w);
        const double rho = std::sqrt(r2);
        std::complex<double> acc = 0.0;
        for (const auto& t : terms) acc += t.profile.eval(rho, lambda) * evaluate(t.poly, z);
        return acc;
    }

    FunctionSampler sampler(double lambda = 1.0) const {
        std::vector<std::pair<RadialProfile, CompiledPolynomial>> compiled;
        compiled.reserve(terms.size());
        int max_degree = 0;
        for (const auto& t : terms) {
            compiled.emplace_back(t.profile, CompiledPolynomial(t.poly));
            if (const auto d = bidegree(t.poly))
                max_degree = std::max(max_degree, d->first + d->second);
        }
        const int dim = n;
        FunctionSampler out{dim,
                            [compiled, lambda, dim](const std::vector<std::complex<double>>& z) {
                                double r2 = 0;
                                for (int j = 0; j < dim; ++j) r2 += std::norm(z[j]);
                                const double rho = std::sqrt(r2);
                                std::complex<double> acc = 0.0;
                                for (const auto& [prof, poly] : compiled)
                                    acc += prof.eval(rho, lambda) * poly.eval(z.data());
                                return acc;
                            },
                            {}};
        // On a centered sphere the radial factors are constants, so f restricts
        // to a polynomial of the terms' maximal total degree.
        out.sphere_degree = max_degree;
        return out;
    }
};

inline StructuredFunction operator+(const StructuredFunction& a, const StructuredFunction& b) {
    if (a.n != b.n) throw std::invalid_argument("structured sum: dimension mismatch");
    StructuredFunction out = a;
    out.terms.insert(out.terms.end(), b.terms.begin(), b.terms.end());
    return out;
}

inline StructuredFunction scale(const StructuredFunction& f, const CRat& s) {
    StructuredFunction out{f.n, {}};
    if (s.is_zero()) return out;
    for (const auto& t : f.terms) out.terms.push_back({scale(t.profile, s), t.poly});
    return out;
}

inline StructuredFunction conjugate(const StructuredFunction& f) {
    StructuredFunction out{f.n, {}};
    for (const auto& t : f.terms) {
        RadialProfile prof;
        for (const auto& [k, c] : t.profile.terms) prof.add_term(k.first, k.second, c.conj());
        out.terms.push_back({std::move(prof), conjugate(t.poly)});
    }
    return out;
}

namespace detail {
// h = a'(rho) / (2 rho), exactly, for a profile a:  the term
// c e^{sigma rho^2/4} rho^m contributes c sigma/4 at (sigma, m) and c m/2 at
// (sigma, m-2).
inline RadialProfile half_derivative(const RadialProfile& a) {
    RadialProfile h;
    for (const auto& [key, c] : a.terms) {
        const auto [sigma, m] = key;
        h.add_term(sigma, m, Rational(sigma, 4) * c);
        h.add_term(sigma, m - 2, Rational(m, 2) * c);
    }
    return h;
}

inline RadialProfile shift_power(const RadialProfile& a, int dm) {
    RadialProfile out;
    for (const auto& [key, c] : a.terms) out.terms.emplace(std::pair<int, int>{key.first, key.second + dm}, c);
    return out;
}
}  // namespace detail

// Apply Zbar_j (conjugated = true) or Z_j (conjugated = false) to a
// structured function, exactly.  For a term a(rho) P with P of bidegree
// (p, q):
//     Zbar_j (a P) = a dP/dzbar_j + (h + a/4) z_j P,
//     Z_j    (a P) = a dP/dz_j    + (h - a/4) zbar_j P,
// where h = a'/(2 rho).  The coordinate product re-expands into harmonic
// layers z_j P = sum_k |z|^{2k} L_k, and each |z|^{2k} folds into the radial
// factor as a power shift.
inline StructuredFunction apply_field(const StructuredFunction& f, int j, bool conjugated) {
    if (j < 0 || j >= f.n) throw std::invalid_argument("apply_field: coordinate out of range");
    StructuredFunction out{f.n, {}};
    for (const auto& t : f.terms) {
        const auto dP = wirtinger(t.poly, j, conjugated);
        if (!dP.is_zero()) out.terms.push_back({t.profile, dP});

        RadialProfile g = detail::half_derivative(t.profile);
        const auto quarter = scale(t.profile, CRat(Rational(1, 4)));
        g = conjugated ? g + quarter : g - quarter;
        if (g.is_zero()) continue;

        const auto mult = BigradedPolynomial::variable(f.n, j, !conjugated);
        const auto layers = harmonic_decompose(mult * t.poly);
        for (size_t k = 0; k < layers.size(); ++k) {
            if (layers[k].is_zero()) continue;
            out.terms.push_back({detail::shift_power(g, 2 * static_cast<int>(k)), layers[k]});
        }
    }
    return out.normalized();
}

// The (p, q)-bidegree part of the canonical form.
inline StructuredFunction project_component(const StructuredFunction& f, int p, int q) {
    StructuredFunction out{f.n, {}};
    if (p < 0 || q < 0) return out;
    for (auto& [k, poly] : f.canonical()) {
        const auto [sigma, m, tp, tq] = k;
        if (tp == p && tq == q)
            out.terms.push_back({RadialProfile::single(sigma, m), std::move(poly)});
    }
    return out;
}

// All bidegrees present in the canonical form.
inline std::vector<std::pair<int, int>> components(const StructuredFunction& f) {
    std::vector<std::pair<int, int>> out;
    for (const auto& [k, poly] : f.canonical()) {
        const std::pair<int, int> pq{std::get<2>(k), std::get<3>(k)};
        if (out.empty() || out.back() != pq) {
            bool seen = false;
            for (const auto& e : out) seen = seen || e == pq;
            if (!seen) out.push_back(pq);
        }
    }
    return out;
}

// Compares the exact field application against a centered finite-difference
// application of the same field to the evaluated function; returns the
// absolute discrepancy at z.  The real and imaginary coordinate directions
// give d/dx and d/dy, combined into the Wirtinger derivatives.
inline double commutation_residual(const StructuredFunction& f, int j, bool conjugated,
                                   const std::vector<std::complex<double>>& z, double h = 1e-4) {
    const auto exact = apply_field(f, j, conjugated).eval(z);

    auto shifted = [&](std::complex<double> dz) {
        auto w = z;
        w[j] += dz;
        return f.eval(w);
    };
    const auto dx = (shifted({h, 0}) - shifted({-h, 0})) / (2 * h);
    const auto dy = (shifted({0, h}) - shifted({0, -h})) / (2 * h);
    const std::complex<double> I(0, 1);
    std::complex<double> fd;
    if (conjugated) {
        // Zbar_j = (d/dx + i d/dy)/2 + z_j/4
        fd = 0.5 * (dx + I * dy) + 0.25 * z[j] * f.eval(z);
    } else {
        // Z_j = (d/dx - i d/dy)/2 - zbar_j/4
        fd = 0.5 * (dx - I * dy) - 0.25 * std::conj(z[j]) * f.eval(z);
    }
    return std::abs(exact - fd);
}

// Mean-level commutation check: |Z_j(f x mu_s)(z) - ((Z_j f) x mu_s)(z)|.
// The left side differentiates the quadrature output by central differences
// (step h per real coordinate of z_j, plus the multiplication part of the
// field); the right side applies the field exactly and then takes the mean
// over the same rule.  The fields commute with twisted means, so the residual
// is finite-difference plus quadrature noise.
inline double commutation_residual(const StructuredFunction& f, int j, bool conjugated,
                                   const std::vector<std::complex<double>>& z,
                                   const SphereRule& rule, double lambda = 1.0,
                                   double h = 1e-4) {
    if (j < 0 || j >= f.n) throw std::invalid_argument("commutation: coordinate out of range");
    const auto sampler = f.sampler(lambda);
    auto mean_at = [&](std::complex<double> dz) {
        auto w = z;
        w[j] += dz;
        return twisted_mean(sampler, w, rule, lambda);
    };
    const auto dx = (mean_at({h, 0}) - mean_at({-h, 0})) / (2 * h);
    const auto dy = (mean_at({0, h}) - mean_at({0, -h})) / (2 * h);
    const auto g0 = mean_at({0, 0});
    const std::complex<double> I(0, 1);
    std::complex<double> lhs;
    if (conjugated) {
        lhs = 0.5 * (dx + I * dy) + 0.25 * z[j] * g0;
    } else {
        lhs = 0.5 * (dx - I * dy) - 0.25 * std::conj(z[j]) * g0;
    }
    const auto rhs_sampler = apply_field(f, j, conjugated).sampler(lambda);
    const auto rhs = twisted_mean(rhs_sampler, z, rule, lambda);
    return std::abs(lhs - rhs);
}

}  // namespace tsm

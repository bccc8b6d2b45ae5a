#pragma once

// Acceptance suite: twelve independently checkable statements covering every
// layer of the toolkit, from exact polynomial identities to end-to-end
// verdicts and artifact determinism.  Each criterion reports pass/fail plus a
// measured detail string; criteria with runtime budgets fail when the budget
// is exceeded.  The same runner backs the standalone acceptance binary and
// the CLI `selftest` subcommand, which additionally writes the canonical
// artifact bundle produced here.
//
// Every quantity quoted in a detail string is computed with the deterministic
// reductions used throughout the library, so the assembled report is
// byte-identical for any thread count.

#include "tsm/builtins.hpp"
#include "tsm/sphere_integral.hpp"
#include "tsm/structured.hpp"
#include "tsm/zspace.hpp"

#include <chrono>
#include <complex>
#include <map>
#include <random>
#include <string>
#include <utility>
#include <vector>

namespace tsm {

struct CriterionResult {
    int id = 0;
    std::string name;
    bool pass = false;
    std::string detail;
    double seconds = 0.0;
};

namespace selftest_detail {

using C = std::complex<double>;

inline std::string fmt(double x) { return format_double(x); }

inline BigInt binomial(int top, int bot) {
    if (bot < 0 || top < 0 || bot > top) return BigInt(0);
    BigInt r = 1;
    for (int i = 0; i < bot; ++i) {
        r *= (top - i);
        r /= (i + 1);
    }
    return r;
}

inline double rational_to_double(const Rational& r) { return r.template convert_to<double>(); }

inline C ipow(C base, int e) {
    C out = 1.0;
    for (int i = 0; i < e; ++i) out *= base;
    return out;
}

// Quadrature sum of z^alpha zbar^beta over one rule, serial per monomial.
inline C rule_monomial_sum(const SphereRule& rule, const MultiIndex& alpha,
                           const MultiIndex& beta) {
    std::vector<C> terms(rule.size());
    for (size_t k = 0; k < rule.size(); ++k) {
        const C* w = rule.node(k);
        C v = 1.0;
        for (int j = 0; j < rule.n; ++j)
            v *= ipow(w[j], alpha[j]) * ipow(std::conj(w[j]), beta[j]);
        terms[k] = rule.weights[k] * v;
    }
    return pairwise_sum(terms);
}

// All (alpha, beta) pairs over n coordinates with |alpha|+|beta| <= deg.
inline void enumerate_monomials(int n, int deg,
                                std::vector<std::pair<MultiIndex, MultiIndex>>& out) {
    MultiIndex a(n, 0), b(n, 0);
    // Odometer over 2n digits with a total-degree cap.
    std::vector<int> digits(2 * n, 0);
    while (true) {
        int total = 0;
        for (int d : digits) total += d;
        if (total <= deg) {
            for (int j = 0; j < n; ++j) {
                a[j] = digits[j];
                b[j] = digits[n + j];
            }
            out.emplace_back(a, b);
        }
        int pos = 0;
        while (pos < 2 * n) {
            if (++digits[pos] <= deg) {
                int t2 = 0;
                for (int d : digits) t2 += d;
                if (t2 <= deg) break;
            }
            digits[pos] = 0;
            ++pos;
        }
        if (pos == 2 * n) break;
    }
}

inline RadialProfile random_profile(std::mt19937_64& rng) {
    std::uniform_int_distribution<int> sig(-1, 1), mm(-5, 0), num(-3, 3), den(1, 3);
    RadialProfile p;
    for (int t = 0; t < 2; ++t)
        p.add_term(sig(rng), mm(rng),
                   CRat(Rational(num(rng), den(rng)), Rational(num(rng), den(rng))));
    return p;
}

inline StructuredFunction random_structured(std::mt19937_64& rng, int n) {
    StructuredFunction f = StructuredFunction::zero(n);
    std::uniform_int_distribution<int> deg(0, 2), num(-2, 2);
    for (int t = 0; t < 3; ++t) {
        const auto basis = harmonic_space_basis(n, deg(rng), deg(rng));
        BigradedPolynomial poly = BigradedPolynomial::zero(n);
        for (const auto& b : basis)
            poly = poly + scale(b, CRat(Rational(num(rng)), Rational(num(rng))));
        if (poly.is_zero()) continue;
        f = f + StructuredFunction::single(random_profile(rng), poly);
    }
    return f;
}

inline std::vector<C> scaled_direction(int n, unsigned long long index, double radius) {
    auto z = sphere_direction(n, index);
    for (auto& w : z) w *= radius;
    return z;
}

}  // namespace selftest_detail

// Criterion 1: the three exact identities behind the operator calculus hold
// with zero residual, in rational arithmetic, on every harmonic basis element
// with n <= 3 and p, q <= 4.
inline std::pair<bool, std::string> criterion_exact_identities() {
    bool ok = true;
    long checked = 0;
    for (int n = 1; n <= 3 && ok; ++n)
        for (int p = 0; p <= 4 && ok; ++p)
            for (int q = 0; q <= 4 && ok; ++q) {
                const auto basis = harmonic_space_basis(n, p, q);
                const auto ns = BigradedPolynomial::norm_squared(n);
                for (const auto& P : basis) {
                    // coordinate multiplication: laplacian(z_j P) = 4 dP/dzbar_j
                    for (int j = 0; j < n; ++j) {
                        const auto zj = BigradedPolynomial::variable(n, j, false);
                        const auto lhs = laplacian(zj * P);
                        const auto rhs = scale(wirtinger(P, j, true), CRat(Rational(4)));
                        ok = ok && (lhs - rhs).is_zero();
                    }
                    // norm-squared multiplication is an eigenvector relation
                    {
                        const auto lhs = laplacian(ns * P);
                        const auto rhs = scale(P, CRat(Rational(4 * (n + p + q))));
                        ok = ok && (lhs - rhs).is_zero();
                    }
                    // two-layer splitting of a coordinate product
                    for (int j = 0; j < n; ++j) {
                        const auto zj = BigradedPolynomial::variable(n, j, false);
                        const auto dbar = wirtinger(P, j, true);
                        if (dbar.is_zero()) {
                            ok = ok && laplacian(zj * P).is_zero();
                        } else {
                            const int denom = n + p + q - 1;
                            const auto tail = scale(ns * dbar, CRat(Rational(1, denom)));
                            ok = ok && laplacian(zj * P - tail).is_zero();
                        }
                    }
                    ++checked;
                }
            }
    return {ok, "zero residual on " + std::to_string(checked) + " basis elements"};
}

// Criterion 2: the kernel dimension matches the binomial formula
// C(p+n-1,p) C(q+n-1,q) - C(p+n-2,p-1) C(q+n-2,q-1), and vanishes for n = 1
// whenever p, q >= 1.
inline std::pair<bool, std::string> criterion_dimension_law() {
    using selftest_detail::binomial;
    bool ok = true;
    long checked = 0;
    for (int n = 1; n <= 3; ++n)
        for (int p = 0; p <= 4; ++p)
            for (int q = 0; q <= 4; ++q) {
                const BigInt expect = binomial(p + n - 1, p) * binomial(q + n - 1, q) -
                                      binomial(p + n - 2, p - 1) * binomial(q + n - 2, q - 1);
                ok = ok && harmonic_space_dimension(n, p, q) == expect;
                if (n == 1 && p >= 1 && q >= 1) ok = ok && expect == 0;
                ++checked;
            }
    return {ok, "formula matched on " + std::to_string(checked) + " (n,p,q) triples"};
}

// Criterion 3: order-12 sphere rules integrate every monomial of total degree
// <= 12 to within 1e-12 of the exact rational value.  n = 1, 2 are swept in
// full.  For n = 3 all diagonal monomials (the only ones with nonzero
// integral) are summed directly, plus a random sample of off-diagonal ones;
// the remaining off-diagonal cases cancel exactly through the uniform angle
// grids, which the sample confirms at floating precision.
inline std::pair<bool, std::string> criterion_quadrature_exactness(int threads) {
    namespace sd = selftest_detail;
    bool ok = true;
    double worst = 0.0;
    long checked = 0;
    for (int n = 1; n <= 3; ++n) {
        const SphereRule rule = build_sphere_rule(n, 1.0, 12);
        std::vector<std::pair<MultiIndex, MultiIndex>> monos;
        if (n <= 2) {
            sd::enumerate_monomials(n, 12, monos);
        } else {
            std::vector<std::pair<MultiIndex, MultiIndex>> all;
            sd::enumerate_monomials(n, 12, all);
            std::mt19937_64 rng(12);
            std::uniform_int_distribution<size_t> pick(0, all.size() - 1);
            for (const auto& m : all)
                if (m.first == m.second) monos.push_back(m);
            for (int t = 0; t < 120; ++t) {
                const auto& m = all[pick(rng)];
                if (m.first != m.second) monos.push_back(m);
            }
        }
        std::vector<double> errs(monos.size(), 0.0);
        parallel_for(monos.size(), threads, [&](size_t i) {
            const auto& [a, b] = monos[i];
            const auto quad = sd::rule_monomial_sum(rule, a, b);
            const double oracle = sd::rational_to_double(monomial_sphere_integral(n, a, b));
            errs[i] = std::abs(quad - oracle);
        });
        for (double e : errs) worst = std::max(worst, e);
        ok = ok && worst <= 1e-12;
        checked += static_cast<long>(monos.size());
    }
    return {ok, "worst error " + sd::fmt(worst) + " over " + std::to_string(checked) +
                    " monomial integrals"};
}

// Criterion 4: the chain of first-order radial operators annihilates every
// kernel profile exactly, for n <= 3 and 1 <= p+q <= 8.
inline std::pair<bool, std::string> criterion_annihilation() {
    bool ok = true;
    long checked = 0;
    for (int n = 1; n <= 3; ++n)
        for (int p = 0; p <= 8; ++p)
            for (int q = 0; q <= 8 - p; ++q) {
                if (p + q < 1) continue;
                const auto chain = annihilator_chain(n, p, q);
                for (const auto& prof : characterization_basis(n, p, q)) {
                    ok = ok && apply_chain(prof, chain).is_zero();
                    ++checked;
                }
            }
    return {ok, "chain maps " + std::to_string(checked) + " kernel profiles to zero exactly"};
}

// Criterion 5: the exterior model functions have vanishing twisted means over
// admissible spheres: for n = 2 and each listed channel, every admissible
// radial-profile choice stays below 1e-8 times the sphere-sup of the model.
inline std::pair<bool, std::string> criterion_model_means(int threads) {
    const int n = 2;
    AnnulusSpec ann{n, 1.0, std::numeric_limits<double>::infinity()};
    PairPolicy pol;
    pol.z_count = 20;
    pol.s_per_z = 5;
    pol.z_max = 2.0;
    const auto pairs = sample_pairs(ann, pol);
    bool ok = pairs.size() == 100;
    double worst = 0.0;
    int models = 0;
    for (const auto pq : {std::pair<int, int>{1, 0}, {0, 1}, {1, 1}, {2, 1}}) {
        const auto [p, q] = pq;
        for (int i = 1; i <= p; ++i) {
            const auto m = builtin_thm33(n, p, q, i);
            const auto sw = mean_sweep(m.sampler, pairs, 40, 1.0, MeanKind::twisted, threads);
            worst = std::max(worst, sw.max_abs / sw.sup_f);
            ++models;
        }
        for (int k = 1; k <= q; ++k) {
            const auto m = builtin_thm34(n, p, q, k);
            const auto sw = mean_sweep(m.sampler, pairs, 40, 1.0, MeanKind::twisted, threads);
            worst = std::max(worst, sw.max_abs / sw.sup_f);
            ++models;
        }
    }
    ok = ok && worst < 1e-8;
    return {ok, std::to_string(models) + " models x 100 admissible pairs, worst relative mean " +
                    selftest_detail::fmt(worst)};
}

// Criterion 6: the coefficient fits separate members from near-members: a
// 1e-3 off-span radial perturbation on the (1,1) channel pushes that
// channel's residual above 1e-4, while the unperturbed model fits below
// 1e-9 through the identical pipeline.
inline std::pair<bool, std::string> criterion_perturbation_sensitivity(int threads) {
    const int n = 2;
    AnnulusSpec ann{n, 1.0, std::numeric_limits<double>::infinity()};
    const auto grid = default_grid(ann, 24);
    const std::vector<std::pair<int, int>> pq = {{0, 0}, {1, 0}, {0, 1}, {1, 1}, {2, 1}};

    const auto a = builtin_thm33(n, 1, 1, 1);
    const auto b = builtin_thm34(n, 2, 1, 1);
    const StructuredFunction member = *a.structured + *b.structured;

    const BigradedPolynomial pert_poly =
        scale(harmonic_space_basis(n, 1, 1)[0], CRat(Rational(5, 2)));
    const StructuredFunction perturbed =
        member + StructuredFunction::single(
                     scale(RadialProfile::single(0, -1), CRat(Rational(1, 1000))), pert_poly);

    const auto clean = characterize(member.sampler(1.0), ann, pq, grid, 22, 1.0, {}, threads);
    const auto noisy = characterize(perturbed.sampler(1.0), ann, pq, grid, 22, 1.0, {}, threads);
    double r11 = 0.0;
    for (const auto& fr : noisy.fits)
        if (fr.p == 1 && fr.q == 1) r11 = std::max(r11, fr.residual);
    const bool ok = clean.verdict == "member" && clean.max_fit_residual < 1e-9 &&
                    noisy.verdict == "non-member" && r11 > 1e-4;
    return {ok, "clean residual " + selftest_detail::fmt(clean.max_fit_residual) +
                    ", perturbed (1,1) residual " + selftest_detail::fmt(r11)};
}

// Criterion 7: projecting a conjugated-field application back to the adjacent
// bidegree equals the closed-form single euler factor applied to the profile,
// exactly, for n <= 3, 1 <= p,q <= 3, every basis element, every coordinate,
// with profiles ranging over the kernel basis and plain powers.
inline std::pair<bool, std::string> criterion_projection_formula() {
    bool ok = true;
    long checked = 0;
    for (int n = 1; n <= 3 && ok; ++n)
        for (int p = 1; p <= 3 && ok; ++p)
            for (int q = 1; q <= 3 && ok; ++q) {
                const auto basis = harmonic_space_basis(n, p, q);
                if (basis.empty()) continue;
                std::vector<RadialProfile> profiles = characterization_basis(n, p, q);
                profiles.push_back(RadialProfile::single(0, 2));
                profiles.push_back(RadialProfile::single(0, -3));
                const Rational A(1, 2 * (n + p + q - 1));
                for (const auto& P : basis)
                    for (const auto& prof : profiles) {
                        const auto F = StructuredFunction::single(prof, P);
                        for (int j = 0; j < n; ++j) {
                            const auto lhs_bar = project_component(apply_field(F, j, true), p, q - 1);
                            const auto rhs_bar = StructuredFunction::single(
                                euler_apply(prof, A, +1), wirtinger(P, j, true));
                            ok = ok && lhs_bar.equals(rhs_bar);
                            const auto lhs_pl = project_component(apply_field(F, j, false), p - 1, q);
                            const auto rhs_pl = StructuredFunction::single(
                                euler_apply(prof, A, -1), wirtinger(P, j, false));
                            ok = ok && lhs_pl.equals(rhs_pl);
                            checked += 2;
                        }
                    }
            }
    return {ok, "exact equality on " + std::to_string(checked) + " projected applications"};
}

// Criterion 8: the first-order fields commute with the twisted mean:
// differentiating the quadrature output agrees with taking the mean of the
// exact field application, within finite-difference error.
inline std::pair<bool, std::string> criterion_mean_commutation() {
    const int n = 2;
    std::vector<StructuredFunction> matrix;
    matrix.push_back(StructuredFunction::single(RadialProfile::single(-1, 0),
                                                BigradedPolynomial::constant(n, CRat(1))));
    matrix.push_back(StructuredFunction::single(RadialProfile::single(+1, -2 * (n + 2 - 1)),
                                                harmonic_space_basis(n, 1, 1)[0]));
    matrix.push_back(StructuredFunction::single(RadialProfile::single(0, 0),
                                                BigradedPolynomial::constant(n, CRat(1))));
    std::mt19937_64 rng(91);
    for (int rep = 0; rep < 2; ++rep) {
        auto F = selftest_detail::random_structured(rng, n);
        if (!F.is_zero()) matrix.push_back(F);
    }
    bool ok = true;
    double worst = 0.0;
    int idx = 0;
    for (const auto& F : matrix) {
        double sup = 0.0;
        for (unsigned long long s = 1; s <= 8; ++s)
            sup = std::max(sup, std::abs(F.eval(selftest_detail::scaled_direction(n, s, 2.8))));
        const auto G =
            scale(F, CRat(Rational(1, std::max<long>(1, std::lround(std::ceil(sup))))));
        const auto z = selftest_detail::scaled_direction(n, 20 + idx, 0.4);
        const SphereRule rule = build_sphere_rule(n, 2.4 + 0.2 * idx, 24);
        for (int j = 0; j < n; ++j)
            for (bool conj : {false, true})
                worst = std::max(worst, commutation_residual(G, j, conj, z, rule, 1.0, 1e-4));
        ++idx;
    }
    ok = worst < 1e-6;
    return {ok, std::to_string(static_cast<int>(matrix.size())) +
                    " functions, worst commutation residual " + selftest_detail::fmt(worst)};
}

// Criterion 9: the left mean is the conjugate of the right mean of the
// conjugate, at quadrature level, below 1e-13 for random structured
// functions over random admissible pairs.
inline std::pair<bool, std::string> criterion_conjugation_identity() {
    const int n = 2;
    std::mt19937_64 rng(733);
    bool ok = true;
    double worst = 0.0;
    int tested = 0;
    for (int t = 0; t < 10; ++t) {
        auto F = selftest_detail::random_structured(rng, n);
        if (F.is_zero()) continue;
        // Normalize to unit size over the sampled region so the comparison
        // probes rounding of the identity itself, not the magnitude of F.
        double sup = 0.0;
        for (unsigned long long s = 1; s <= 8; ++s)
            sup = std::max(sup, std::abs(F.eval(selftest_detail::scaled_direction(n, s, 4.5))));
        F = scale(F, CRat(Rational(1, std::max<long>(1, std::lround(std::ceil(sup))))));
        const auto right_of_conj = conjugate(F).sampler(1.0);
        const auto left_of = F.sampler(1.0);
        for (int k = 1; k <= 10; ++k) {
            const auto z = selftest_detail::scaled_direction(n, 100ULL * t + k, 0.15 * k);
            const double s = 1.5 + 0.15 * k;
            const SphereRule rule = build_sphere_rule(n, s, 16);
            const auto lhs = left_twisted_mean(left_of, z, rule, 1.0);
            const auto rhs = std::conj(twisted_mean(right_of_conj, z, rule, 1.0));
            worst = std::max(worst, std::abs(lhs - rhs));
            ++tested;
        }
    }
    ok = worst < 1e-13 && tested >= 90;
    return {ok, std::to_string(tested) + " (f,z,s) triples, worst discrepancy " +
                    selftest_detail::fmt(worst)};
}

// Criterion 10: support-radius estimation localizes a bump supported in
// |z| <= 1 to its radius within one grid step; the growing exterior model
// raises the decay-hypothesis flag while its sampled means vanish; and the
// Euclidean variant passes the same pair of checks.
inline std::pair<bool, std::string> criterion_support(int threads) {
    const int n = 2;
    const std::vector<selftest_detail::C> origin(n, 0.0);
    bool ok = true;
    std::string detail;

    const auto bump = builtin_bump(n, origin);
    const auto brep = support_radius(bump.sampler, *bump.decay, 2.0, {}, 1e-6, 24, 1.0, threads);
    const bool bump_ok = brep.r_hat && std::abs(*brep.r_hat - 1.0) <= 0.05 + 1e-12;
    ok = ok && bump_ok;
    detail += "bump r_hat " + (brep.r_hat ? selftest_detail::fmt(*brep.r_hat) : "none");

    const auto model = builtin_thm33(n, 1, 1, 1);
    const auto mrep =
        support_radius(model.sampler, *model.decay, 1.5, {}, 1e-6, 24, 1.0, threads);
    bool flagged = false;
    for (const auto& fl : mrep.flags) flagged = flagged || fl.rfind("decay hypothesis", 0) == 0;
    bool vanishing = true;
    for (const auto& e : mrep.grid)
        if (e.r >= 0.5) vanishing = vanishing && e.pass;
    ok = ok && flagged && vanishing;
    detail += "; model flagged " + std::string(flagged ? "yes" : "no") + ", means vanish " +
              (vanishing ? "yes" : "no");

    const auto ebump = builtin_bump(n, origin);
    const auto erep =
        helgason_support_check(ebump.sampler, *ebump.decay, 2.0, {}, 1e-6, 24, threads);
    const bool ebump_ok = erep.r_hat && std::abs(*erep.r_hat - 1.0) <= 0.05 + 1e-12;
    ok = ok && ebump_ok;
    detail += "; euclidean bump r_hat " + (erep.r_hat ? selftest_detail::fmt(*erep.r_hat) : "none");

    const auto emodel = builtin_euclidean_model(n, 1, 0, -2 * (n + 1 - 1));
    const auto exrep =
        helgason_support_check(emodel.sampler, *emodel.decay, 1.5, {}, 1e-6, 24, threads);
    bool eflag = false;
    for (const auto& fl : exrep.flags) eflag = eflag || fl.rfind("decay hypothesis", 0) == 0;
    bool evanish = true;
    for (const auto& e : exrep.grid)
        if (e.r >= 0.5) evanish = evanish && e.pass;
    ok = ok && eflag && evanish;
    detail += "; euclidean model flagged " + std::string(eflag ? "yes" : "no");
    return {ok, detail};
}

// Criterion 11: the two-sided test in one variable rejects a one-sided
// member, accepts the zero function, and accepts a genuinely two-sided
// member (whose pure-type coefficients vanish).
inline std::pair<bool, std::string> criterion_two_sided(int threads) {
    bool ok = true;
    std::string detail;
    {
        const int n = 1;
        AnnulusSpec ann{n, 1.0, std::numeric_limits<double>::infinity()};
        const auto grid = default_grid(ann, 16);
        PairPolicy pol;
        pol.z_count = 6;
        pol.s_per_z = 3;
        const auto one_sided = builtin_thm33(n, 1, 0, 1);
        const auto rep = two_sided_characterize(one_sided.sampler, ann, {{0, 0}, {1, 0}, {0, 1}},
                                                grid, 64, 1.0, pol, {}, threads);
        ok = ok && rep.verdict == "non-member";
        detail += "one-sided verdict " + rep.verdict;

        const auto zero = StructuredFunction::zero(n);
        const auto zrep = two_sided_characterize(zero.sampler(1.0), ann, {{0, 0}, {1, 0}, {0, 1}},
                                                 grid, 64, 1.0, pol, {}, threads);
        ok = ok && zrep.verdict == "member";
        detail += ", zero verdict " + zrep.verdict;
    }
    {
        const int n = 2;
        AnnulusSpec ann{n, 1.0, std::numeric_limits<double>::infinity()};
        const auto grid = default_grid(ann, 20);
        PairPolicy pol;
        pol.z_count = 8;
        pol.s_per_z = 3;
        const auto up = builtin_thm33(n, 1, 1, 1);
        const auto down = builtin_thm34(n, 1, 1, 1);
        const StructuredFunction balanced =
            *up.structured + scale(*down.structured, CRat(Rational(2)));
        const auto rep =
            two_sided_characterize(balanced.sampler(1.0), ann, {{0, 0}, {1, 0}, {0, 1}, {1, 1}},
                                   grid, 40, 1.0, pol, {}, threads);
        ok = ok && rep.verdict == "member";
        detail += ", balanced verdict " + rep.verdict;
    }
    return {ok, detail};
}

// Canonical artifact bundle: a fixed verification run plus a fixed support
// run, serialized with the deterministic formatters.  Used by the
// determinism criterion and written to disk by the CLI selftest.
inline std::map<std::string, std::string> selftest_artifact_bundle(int threads) {
    std::map<std::string, std::string> arts;
    const int n = 2;
    AnnulusSpec ann{n, 1.0, std::numeric_limits<double>::infinity()};
    const auto up = builtin_thm33(n, 1, 1, 1);
    const auto down = builtin_thm34(n, 1, 1, 1);
    const StructuredFunction balanced = *up.structured + scale(*down.structured, CRat(Rational(2)));
    PairPolicy pol;
    pol.z_count = 6;
    pol.s_per_z = 2;
    const auto grid = default_grid(ann, 12);
    const std::vector<std::pair<int, int>> pq = {{0, 0}, {1, 0}, {0, 1}, {1, 1}};
    const auto rep = two_sided_characterize(balanced.sampler(1.0), ann, pq, grid, 18, 1.0, pol,
                                            {}, threads);
    arts["report.json"] = report_to_json(rep);
    for (const auto& [p, q] : pq)
        arts["coeffs_" + std::to_string(p) + "_" + std::to_string(q) + ".csv"] =
            report_channel_csv(rep, p, q);
    arts["means.csv"] = means_to_csv(rep);

    const auto bump = builtin_bump(n, std::vector<selftest_detail::C>(n, 0.0));
    SupportPolicy spol;
    spol.z_count = 4;
    spol.z_max = 0.4;
    spol.s_step = 0.05;
    const auto sup = support_radius(bump.sampler, *bump.decay, 1.2, spol, 1e-6, 16, 1.0, threads);
    arts["support.json"] = report_to_json(sup);
    arts["support.csv"] = support_to_csv(sup);
    return arts;
}

// Criterion 12: the canonical artifacts are byte-identical across 1, 2, and
// 8 threads.
inline std::pair<bool, std::string> criterion_determinism(
    std::map<std::string, std::string>* artifacts) {
    const auto b1 = selftest_artifact_bundle(1);
    const auto b2 = selftest_artifact_bundle(2);
    const auto b8 = selftest_artifact_bundle(8);
    const bool ok = b1 == b2 && b2 == b8;
    if (artifacts) *artifacts = b1;
    size_t bytes = 0;
    for (const auto& [name, content] : b1) bytes += content.size();
    return {ok, std::to_string(b1.size()) + " artifacts, " + std::to_string(bytes) +
                    " bytes, identical across 1/2/8 threads: " + (ok ? "yes" : "no")};
}

// Runs the full acceptance suite.  `threads` steers the parallel sweeps
// (0 = hardware); every reported number is thread-count invariant.  When
// `artifacts` is given it receives the canonical bundle (the CLI writes it
// to disk).
inline std::vector<CriterionResult> run_acceptance(
    int threads = 0, std::map<std::string, std::string>* artifacts = nullptr) {
    std::vector<CriterionResult> out;
    const auto timed = [&out](int id, std::string name, double budget,
                              const std::function<std::pair<bool, std::string>()>& fn) {
        const auto t0 = std::chrono::steady_clock::now();
        auto [ok, detail] = fn();
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (budget > 0.0 && secs > budget) {
            ok = false;
            detail += "; runtime budget " + selftest_detail::fmt(budget) + "s exceeded";
        }
        out.push_back({id, std::move(name), ok, std::move(detail), secs});
    };
    timed(1, "exact identities on harmonic basis elements", 10.0,
          [] { return criterion_exact_identities(); });
    timed(2, "kernel dimension law", 0.0, [] { return criterion_dimension_law(); });
    timed(3, "quadrature exactness for order-12 rules", 0.0,
          [&] { return criterion_quadrature_exactness(threads); });
    timed(4, "annihilator chain kills the kernel profiles", 0.0,
          [] { return criterion_annihilation(); });
    timed(5, "exterior models have vanishing twisted means", 60.0,
          [&] { return criterion_model_means(threads); });
    timed(6, "perturbation sensitivity of the coefficient fits", 0.0,
          [&] { return criterion_perturbation_sensitivity(threads); });
    timed(7, "field projections collapse to euler factors", 0.0,
          [] { return criterion_projection_formula(); });
    timed(8, "fields commute with twisted means", 0.0, [] { return criterion_mean_commutation(); });
    timed(9, "left means conjugate to right means", 0.0,
          [] { return criterion_conjugation_identity(); });
    timed(10, "support radius estimation", 0.0, [&] { return criterion_support(threads); });
    timed(11, "two-sided class tests", 30.0, [&] { return criterion_two_sided(threads); });
    timed(12, "artifacts byte-identical across thread counts", 0.0,
          [&] { return criterion_determinism(artifacts); });
    return out;
}

inline bool all_passed(const std::vector<CriterionResult>& results) {
    for (const auto& r : results)
        if (!r.pass) return false;
    return true;
}

// Summary report, timings excluded so the document is deterministic.
inline std::string acceptance_report_json(const std::vector<CriterionResult>& results) {
    nlohmann::ordered_json doc;
    auto arr = nlohmann::ordered_json::array();
    for (const auto& r : results) {
        nlohmann::ordered_json c;
        c["id"] = r.id;
        c["name"] = r.name;
        c["pass"] = r.pass;
        c["detail"] = r.detail;
        arr.push_back(std::move(c));
    }
    doc["criteria"] = std::move(arr);
    doc["passed"] = all_passed(results);
    return doc.dump(2) + "\n";
}

}  // namespace tsm

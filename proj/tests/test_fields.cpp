#include "tsm/structured.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <complex>
#include <random>

using namespace tsm;

namespace {

RadialProfile random_profile(std::mt19937_64& rng, int nterms, int min_m = -8, int max_m = 2) {
    std::uniform_int_distribution<int> sig(-1, 1), mm(min_m, max_m), num(-4, 4), den(1, 3);
    RadialProfile p;
    for (int t = 0; t < nterms; ++t)
        p.add_term(sig(rng), mm(rng),
                   CRat(Rational(num(rng), den(rng)), Rational(num(rng), den(rng))));
    return p;
}

BigradedPolynomial random_harmonic(std::mt19937_64& rng, int n, int p, int q) {
    const auto basis = harmonic_space_basis(n, p, q);
    BigradedPolynomial out = BigradedPolynomial::zero(n);
    std::uniform_int_distribution<int> num(-3, 3);
    for (const auto& b : basis) out = out + scale(b, CRat(Rational(num(rng)), Rational(num(rng))));
    return out;
}

StructuredFunction random_structured(std::mt19937_64& rng, int n, int min_m = -8) {
    StructuredFunction f = StructuredFunction::zero(n);
    std::uniform_int_distribution<int> deg(0, 2);
    for (int t = 0; t < 3; ++t) {
        const int p = deg(rng), q = deg(rng);
        auto poly = random_harmonic(rng, n, p, q);
        if (poly.is_zero()) continue;
        f = f + StructuredFunction::single(random_profile(rng, 2, min_m), poly);
    }
    return f;
}

std::vector<std::complex<double>> point_near(int n, double radius, unsigned seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g(0.0, 1.0);
    std::vector<std::complex<double>> z(n);
    double r2 = 0;
    for (auto& w : z) {
        w = {g(rng), g(rng)};
        r2 += std::norm(w);
    }
    const double f = radius / std::sqrt(r2);
    for (auto& w : z) w *= f;
    return z;
}

}  // namespace

TEST_CASE("structured terms validate their polynomial part") {
    const auto prof = RadialProfile::single(0, -2);
    CHECK_THROWS_AS(StructuredFunction::single(prof, BigradedPolynomial::norm_squared(2)),
                    std::invalid_argument);
    auto mixed = BigradedPolynomial::variable(2, 0, false);
    mixed.add_term({0, 0}, {0, 0}, CRat(1L));
    CHECK_THROWS_AS(StructuredFunction::single(prof, mixed), std::invalid_argument);
    CHECK(StructuredFunction::single(prof, BigradedPolynomial::zero(2)).is_zero());
}

TEST_CASE("canonical form decides equality of different representations") {
    const auto P = BigradedPolynomial::variable(2, 0, false);  // z1, bidegree (1,0)
    const auto prof = RadialProfile::single(1, -4, CRat(Rational(2)));
    const auto whole = StructuredFunction::single(prof, P);
    // Same function as two half-sized pieces with the polynomial rescaled.
    const auto half1 = StructuredFunction::single(RadialProfile::single(1, -4), P);
    const auto half2 =
        StructuredFunction::single(RadialProfile::single(1, -4), scale(P, CRat(1L)));
    CHECK(whole.equals(half1 + half2));
    CHECK_FALSE(whole.equals(half1));

    // Zero built from cancelling terms.
    const auto cancel = whole + scale(whole, CRat(-1L));
    CHECK(cancel.is_zero());
    CHECK(cancel.equals(StructuredFunction::zero(2)));
}

TEST_CASE("evaluation separates radial and polynomial factors") {
    const auto P = BigradedPolynomial::variable(2, 0, false);
    const auto f = StructuredFunction::single(RadialProfile::single(-1, -2), P);
    const auto z = point_near(2, 1.4, 5);
    const double rho = 1.4;
    const auto want = std::exp(-rho * rho / 4) * std::pow(rho, -2.0) * z[0];
    CHECK(std::abs(f.eval(z) - want) < 1e-13);
    // The sampler closure agrees with direct evaluation.
    const auto s = f.sampler(1.0);
    CHECK(std::abs(s(z) - f.eval(z)) < 1e-15);
    // Scale parameter reweights the Gaussian factor only.
    const auto want2 = std::exp(-2.0 * rho * rho / 4) * std::pow(rho, -2.0) * z[0];
    CHECK(std::abs(f.eval(z, 2.0) - want2) < 1e-13);
}

TEST_CASE("field application is linear") {
    std::mt19937_64 rng(11);
    for (int n : {2, 3}) {
        const auto F = random_structured(rng, n);
        const auto G = random_structured(rng, n);
        for (bool conj : {false, true}) {
            const auto lhs = apply_field(F + G, 0, conj);
            const auto rhs = apply_field(F, 0, conj) + apply_field(G, 0, conj);
            CHECK(lhs.equals(rhs));
        }
    }
}

TEST_CASE("the conjugated fields annihilate the decaying Gaussian, the plain ones the growing") {
    for (int n : {1, 2, 3}) {
        const auto one = BigradedPolynomial::constant(n, CRat(1L));
        const auto decay = StructuredFunction::single(RadialProfile::single(-1, 0), one);
        const auto grow = StructuredFunction::single(RadialProfile::single(+1, 0), one);
        for (int j = 0; j < n; ++j) {
            CHECK(apply_field(decay, j, true).is_zero());
            CHECK(apply_field(grow, j, false).is_zero());
            CHECK_FALSE(apply_field(decay, j, false).is_zero());
            CHECK_FALSE(apply_field(grow, j, true).is_zero());
        }
    }
}

TEST_CASE("field commutators close exactly: [Z_j, Zbar_k] = delta_jk / 2") {
    std::mt19937_64 rng(23);
    for (int n : {2, 3}) {
        const auto F = random_structured(rng, n);
        if (F.is_zero()) continue;
        for (int j = 0; j < 2; ++j)
            for (int k = 0; k < 2; ++k) {
                const auto ab = apply_field(apply_field(F, k, true), j, false);
                const auto ba = apply_field(apply_field(F, j, false), k, true);
                const auto comm = ab + scale(ba, CRat(-1L));
                if (j == k)
                    CHECK(comm.equals(scale(F, CRat(Rational(1, 2)))));
                else
                    CHECK(comm.is_zero());
            }
    }
}

TEST_CASE("projection of a field application collapses to a single euler factor") {
    // For arbitrary profile a and harmonic P of bidegree (p, q):
    //   (p, q-1) part of Zbar_j(a P)  =  E[1/(2(n+p+q-1)), +1](a) * dP/dzbar_j
    //   (p-1, q) part of Z_j(a P)     =  E[1/(2(n+p+q-1)), -1](a) * dP/dz_j
    // exactly, term for term in the canonical form.
    std::mt19937_64 rng(37);
    for (int n : {2, 3})
        for (int p = 1; p <= 2; ++p)
            for (int q = 1; q <= 2; ++q)
                for (const auto& P : harmonic_space_basis(n, p, q)) {
                    const auto a = random_profile(rng, 3);
                    const Rational A(1, 2 * (n + p + q - 1));
                    const auto F = StructuredFunction::single(a, P);
                    for (int j = 0; j < n; ++j) {
                        const auto lhs_bar =
                            project_component(apply_field(F, j, true), p, q - 1);
                        const auto rhs_bar = StructuredFunction::single(
                            euler_apply(a, A, +1), wirtinger(P, j, true));
                        CHECK(lhs_bar.equals(rhs_bar));

                        const auto lhs_pl =
                            project_component(apply_field(F, j, false), p - 1, q);
                        const auto rhs_pl = StructuredFunction::single(
                            euler_apply(a, A, -1), wirtinger(P, j, false));
                        CHECK(lhs_pl.equals(rhs_pl));
                    }
                }
}

TEST_CASE("components partition the function") {
    std::mt19937_64 rng(41);
    const auto F = random_structured(rng, 2);
    auto rebuilt = StructuredFunction::zero(2);
    for (const auto& [p, q] : components(F)) rebuilt = rebuilt + project_component(F, p, q);
    CHECK(rebuilt.equals(F));
    // Projecting to an absent or invalid bidegree gives zero.
    CHECK(project_component(F, 7, 7).is_zero());
    CHECK(project_component(F, -1, 0).is_zero());
}

TEST_CASE("conjugation swaps bidegrees and conjugates values") {
    std::mt19937_64 rng(53);
    const auto F = random_structured(rng, 2);
    const auto G = conjugate(F);
    const auto z = point_near(2, 1.2, 9);
    CHECK(std::abs(G.eval(z) - std::conj(F.eval(z))) < 1e-12);
    for (const auto& [p, q] : components(F)) {
        bool found = false;
        for (const auto& [gp, gq] : components(G)) found = found || (gp == q && gq == p);
        CHECK(found);
    }
    CHECK(conjugate(G).equals(F));
}

TEST_CASE("exact field application matches finite differences") {
    std::mt19937_64 rng(67);
    for (int n : {2, 3})
        for (int rep = 0; rep < 4; ++rep) {
            auto F = random_structured(rng, n, -5);
            if (F.is_zero()) continue;
            // Normalize to unit size near the evaluation radius so the
            // absolute tolerance reads as a relative one.
            double sup = 0;
            for (unsigned s = 0; s < 8; ++s)
                sup = std::max(sup, std::abs(F.eval(point_near(n, 1.4, 300 + s))));
            F = scale(F, CRat(Rational(1, std::max<long>(1, std::lround(std::ceil(sup))))));
            const auto z = point_near(n, 1.3 + 0.15 * rep, 100 + rep);
            for (int j = 0; j < n; ++j)
                for (bool conj : {false, true})
                    CHECK(commutation_residual(F, j, conj, z, 1e-4) < 1e-6);
        }
}

TEST_CASE("the fields commute with twisted means up to finite-difference error") {
    // Differentiating the mean (by central differences on the quadrature
    // output) agrees with taking the mean of the exact field application.
    const int n = 2;
    std::vector<StructuredFunction> matrix;
    // decaying Gaussian: the conjugated fields annihilate it outright
    matrix.push_back(StructuredFunction::single(RadialProfile::single(-1, 0),
                                                BigradedPolynomial::constant(n, CRat(1))));
    // growing exterior model with a polynomial factor
    matrix.push_back(StructuredFunction::single(RadialProfile::single(+1, -2 * (n + 2 - 1)),
                                                harmonic_space_basis(n, 1, 1)[0]));
    // constant
    matrix.push_back(StructuredFunction::single(RadialProfile::single(0, 0),
                                                BigradedPolynomial::constant(n, CRat(1))));
    std::mt19937_64 rng(91);
    for (int rep = 0; rep < 2; ++rep) {
        auto F = random_structured(rng, n, -4);
        if (!F.is_zero()) matrix.push_back(F);
    }
    int idx = 0;
    for (const auto& F : matrix) {
        double sup = 0;
        for (unsigned s = 0; s < 8; ++s)
            sup = std::max(sup, std::abs(F.eval(point_near(n, 2.8, 700 + s))));
        const auto G =
            scale(F, CRat(Rational(1, std::max<long>(1, std::lround(std::ceil(sup))))));
        const auto z = point_near(n, 0.4, 40 + idx);
        const double s = 2.4 + 0.2 * idx;
        const SphereRule rule = build_sphere_rule(n, s, 24);
        for (int j = 0; j < n; ++j)
            for (bool conj : {false, true}) {
                INFO("function " << idx << " j " << j << " conj " << conj);
                CHECK(commutation_residual(G, j, conj, z, rule, 1.0, 1e-4) < 1e-6);
            }
        ++idx;
    }
}

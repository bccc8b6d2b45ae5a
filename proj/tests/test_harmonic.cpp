#include "tsm/harmonic.hpp"

#include "testutil.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <complex>
#include <random>

using namespace tsm;

TEST_CASE("harmonic space dimensions match the kernel computation") {
    for (int n : {1, 2, 3})
        for (int p = 0; p <= 4; ++p)
            for (int q = 0; q <= 4; ++q) {
                const auto basis = harmonic_space_basis(n, p, q);
                CHECK(BigInt(basis.size()) == harmonic_space_dimension(n, p, q));
            }
    // Spot values: full space minus one laplacian constraint per lower monomial.
    CHECK(harmonic_space_dimension(2, 1, 1) == 3);
    CHECK(harmonic_space_dimension(3, 1, 1) == 8);
    CHECK(harmonic_space_dimension(2, 2, 1) == 4);
    // n = 1: only the pure one-sided spaces survive.
    CHECK(harmonic_space_dimension(1, 3, 0) == 1);
    CHECK(harmonic_space_dimension(1, 0, 2) == 1);
    CHECK(harmonic_space_dimension(1, 1, 1) == 0);
    CHECK(harmonic_space_basis(1, 2, 1).empty());
}

TEST_CASE("kernel basis elements are exactly harmonic and bigraded") {
    for (int n : {1, 2, 3})
        for (int p = 0; p <= 3; ++p)
            for (int q = 0; q <= 3; ++q)
                for (const auto& P : harmonic_space_basis(n, p, q)) {
                    CHECK(laplacian(P).is_zero());
                    REQUIRE(bidegree(P).has_value());
                    CHECK(*bidegree(P) == std::pair<int, int>{p, q});
                }
    CHECK_THROWS_AS(harmonic_space_basis(0, 1, 1), std::invalid_argument);
    CHECK_THROWS_AS(harmonic_space_basis(2, -1, 0), std::invalid_argument);
}

TEST_CASE("monomial sphere moments: exact values") {
    CHECK(monomial_sphere_integral(2, {0, 0}, {0, 0}) == 1);
    CHECK(monomial_sphere_integral(2, {1, 0}, {0, 1}) == 0);  // mismatched exponents
    CHECK(monomial_sphere_integral(2, {1, 0}, {1, 0}) == Rational(1, 2));
    CHECK(monomial_sphere_integral(2, {2, 0}, {2, 0}) == Rational(1, 3));
    CHECK(monomial_sphere_integral(2, {1, 1}, {1, 1}) == Rational(1, 6));
    CHECK(monomial_sphere_integral(3, {1, 0, 0}, {1, 0, 0}) == Rational(1, 3));
    CHECK(monomial_sphere_integral(1, {5}, {5}) == 1);  // |z| = 1 on the circle

    // Binomial consistency: integrating |z_1|^2 + |z_2|^2 == 1 in powers.
    Rational total = 0;
    for (int k = 0; k <= 4; ++k)
        total += Rational(binomial(4, k)) * monomial_sphere_integral(2, {k, 4 - k}, {k, 4 - k});
    CHECK(total == 1);
}

TEST_CASE("monomial sphere moments: Monte Carlo cross-check") {
    std::mt19937_64 rng(424242);
    std::normal_distribution<double> g(0.0, 1.0);
    const int N = 200000;
    for (int n : {2, 3}) {
        std::vector<std::pair<MultiIndex, MultiIndex>> cases;
        if (n == 2)
            cases = {{{1, 0}, {1, 0}}, {{2, 1}, {2, 1}}, {{2, 0}, {0, 2}}, {{1, 1}, {2, 0}}};
        else
            cases = {{{1, 0, 0}, {1, 0, 0}}, {{1, 1, 0}, {1, 1, 0}}, {{2, 0, 0}, {0, 2, 0}}};
        std::vector<std::complex<double>> acc(cases.size(), 0.0);
        std::vector<std::complex<double>> z(n);
        for (int it = 0; it < N; ++it) {
            double norm2 = 0;
            for (int j = 0; j < n; ++j) {
                z[j] = {g(rng), g(rng)};
                norm2 += std::norm(z[j]);
            }
            const double inv = 1.0 / std::sqrt(norm2);
            for (int j = 0; j < n; ++j) z[j] *= inv;
            for (size_t c = 0; c < cases.size(); ++c) {
                std::complex<double> w = 1.0;
                for (int j = 0; j < n; ++j) {
                    for (int d = 0; d < cases[c].first[j]; ++d) w *= z[j];
                    for (int d = 0; d < cases[c].second[j]; ++d) w *= std::conj(z[j]);
                }
                acc[c] += w;
            }
        }
        for (size_t c = 0; c < cases.size(); ++c) {
            const double want = to_double(monomial_sphere_integral(n, cases[c].first, cases[c].second));
            CHECK(std::abs(acc[c] / double(N) - want) < 2e-2);
        }
    }
}

TEST_CASE("inner product matches the monomial pairing rule") {
    // <z^a zbar^b, z^g zbar^d> is nonzero only when a - b == g - d.
    const auto P = BigradedPolynomial::monomial(2, {2, 0}, {1, 0});  // charge (1,0)
    const auto Q = BigradedPolynomial::monomial(2, {1, 0}, {0, 0});  // charge (1,0)
    const auto R = BigradedPolynomial::monomial(2, {1, 1}, {0, 0});  // charge (1,1)
    // <P,Q> = integral z^(2,0) zbar^(1,0) * zbar^(1,0) z^(0,0)... = moment of (2,0).
    CHECK(sphere_inner_product(P, Q) == CRat(monomial_sphere_integral(2, {2, 0}, {2, 0})));
    CHECK(sphere_inner_product(P, R).is_zero());
    // Hermitian symmetry on random polynomials.
    std::mt19937_64 rng(88);
    for (int n : {1, 2, 3}) {
        const auto A = tsmtest::random_poly(rng, n, 2, 6);
        const auto B = tsmtest::random_poly(rng, n, 2, 6);
        CHECK(sphere_inner_product(A, B) == sphere_inner_product(B, A).conj());
        const auto nrm = sphere_inner_product(A, A);
        CHECK(nrm.im.is_zero());
        CHECK(nrm.re >= 0);
    }
}

TEST_CASE("orthonormalization certifies exact Gram identities") {
    for (int n : {2, 3})
        for (int p = 0; p <= 2; ++p)
            for (int q = 0; q <= 2; ++q) {
                const auto ortho = orthonormal_basis(n, p, q);
                CHECK(ortho.size() == harmonic_space_basis(n, p, q).size());
                for (size_t i = 0; i < ortho.size(); ++i) {
                    for (size_t j = 0; j < i; ++j)
                        CHECK(sphere_inner_product(ortho[i].poly, ortho[j].poly).is_zero());
                    const auto nrm = sphere_inner_product(ortho[i].poly, ortho[i].poly);
                    CHECK(nrm.im.is_zero());
                    CHECK(ortho[i].scale_sq * nrm.re == 1);
                }
            }
    // Dependent input is rejected.
    const auto z1 = BigradedPolynomial::variable(2, 0, false);
    CHECK_THROWS_AS(orthonormalize({z1, scale(z1, CRat(2L))}), std::logic_error);
}

TEST_CASE("harmonic layer expansion reconstructs the input exactly") {
    std::mt19937_64 rng(7);
    for (int n : {1, 2, 3})
        for (int p = 0; p <= 3; ++p)
            for (int q = 0; q <= 3; ++q) {
                // Random bihomogeneous polynomial of bidegree (p, q).
                BigradedPolynomial P = BigradedPolynomial::zero(n);
                for (const auto& a : multi_indices(n, p))
                    for (const auto& b : multi_indices(n, q))
                        P.add_term(a, b, tsmtest::random_crat(rng));
                const auto layers = harmonic_decompose(P);
                CHECK(layers.size() <= static_cast<size_t>(std::min(p, q)) + 1);
                BigradedPolynomial sum = BigradedPolynomial::zero(n);
                BigradedPolynomial r2k = BigradedPolynomial::constant(n, CRat(1L));
                const auto r2 = BigradedPolynomial::norm_squared(n);
                for (size_t k = 0; k < layers.size(); ++k) {
                    CHECK(laplacian(layers[k]).is_zero());
                    if (!layers[k].is_zero()) {
                        REQUIRE(bidegree(layers[k]).has_value());
                        CHECK(*bidegree(layers[k]) ==
                              std::pair<int, int>{p - static_cast<int>(k), q - static_cast<int>(k)});
                    }
                    sum = sum + r2k * layers[k];
                    r2k = r2k * r2;
                }
                CHECK(sum == P);
            }

    // |z|^2 = |z|^2 * 1: layers (0, 1).
    const auto layers = harmonic_decompose(BigradedPolynomial::norm_squared(2));
    REQUIRE(layers.size() == 2);
    CHECK(layers[0].is_zero());
    CHECK(layers[1] == BigradedPolynomial::constant(2, CRat(1L)));

    auto mixed = BigradedPolynomial::variable(2, 0, false);
    mixed.add_term({0, 0}, {0, 0}, CRat(1L));
    CHECK_THROWS_AS(harmonic_decompose(mixed), std::invalid_argument);
}

TEST_CASE("coordinate times harmonic splits into exactly two layers") {
    // For harmonic P of bidegree (p,q):  z_j P = H + |z|^2 * (dP/dzbar_j) / (n+p+q-1).
    for (int n : {2, 3})
        for (int p = 0; p <= 2; ++p)
            for (int q = 1; q <= 2; ++q)
                for (const auto& P : harmonic_space_basis(n, p, q))
                    for (int j = 0; j < n; ++j) {
                        const auto zj = BigradedPolynomial::variable(n, j, false);
                        const auto layers = harmonic_decompose(zj * P);
                        REQUIRE(!layers.empty());
                        REQUIRE(layers.size() <= 2);
                        const auto want =
                            scale(wirtinger(P, j, true), CRat(Rational(1, n + p + q - 1)));
                        if (layers.size() == 2)
                            CHECK(layers[1] == want);
                        else
                            CHECK(want.is_zero());
                    }
}

TEST_CASE("products of harmonics expand within the expected bidegree ladder") {
    const auto z1 = BigradedPolynomial::variable(2, 0, false);
    const auto zb1 = BigradedPolynomial::variable(2, 0, true);
    const auto zb2 = BigradedPolynomial::variable(2, 1, true);

    CHECK(product_components(z1, zb2) == std::vector<std::pair<int, int>>{{1, 1}});
    CHECK(product_components(z1, zb1) == std::vector<std::pair<int, int>>{{1, 1}, {0, 0}});

    std::mt19937_64 rng(3);
    for (int n : {2, 3})
        for (int rep = 0; rep < 6; ++rep) {
            std::uniform_int_distribution<int> d(0, 2);
            const int p = d(rng), q = d(rng), l = d(rng), m = d(rng);
            const auto bp = harmonic_space_basis(n, p, q);
            const auto bq = harmonic_space_basis(n, l, m);
            if (bp.empty() || bq.empty()) continue;
            std::uniform_int_distribution<size_t> ip(0, bp.size() - 1), iq(0, bq.size() - 1);
            const auto& P = bp[ip(rng)];
            const auto& Q = bq[iq(rng)];
            if ((P * Q).is_zero()) continue;
            const int nu = std::min(p, m) + std::min(l, q);
            for (const auto& [pp, qq] : product_components(P, Q)) {
                const int j = p + l - pp;
                CHECK(j == q + m - qq);
                CHECK(j >= 0);
                CHECK(j <= nu);
            }
        }
}

TEST_CASE("basis files round-trip") {
    const auto basis = orthonormal_basis(2, 1, 1);
    const auto text = format_basis(2, 1, 1, basis);
    const auto parsed = parse_basis(text);
    CHECK(parsed.n == 2);
    CHECK(parsed.p == 1);
    CHECK(parsed.q == 1);
    REQUIRE(parsed.elements.size() == basis.size());
    for (size_t i = 0; i < basis.size(); ++i) {
        CHECK(parsed.elements[i].poly == basis[i].poly);
        CHECK(parsed.elements[i].scale_sq == basis[i].scale_sq);
    }
    CHECK_THROWS_AS(parse_basis("2 1 1\n"), std::invalid_argument);
    CHECK_THROWS_AS(parse_basis("2 1 1 2\nscale 1/2\n(1,0|0,1) 1/1 0/1\n"), std::invalid_argument);
    CHECK_THROWS_AS(parse_basis("2 1 1 1\n(1,0|0,1) 1/1 0/1\n"), std::invalid_argument);
}

#include "tsm/polynomial.hpp"

#include "testutil.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <complex>
#include <random>

using namespace tsm;
using tsmtest::random_point;
using tsmtest::random_poly;

TEST_CASE("rational parsing and formatting round-trip") {
    CHECK(parse_rational("3/2") == Rational(3, 2));
    CHECK(parse_rational("-7") == Rational(-7));
    CHECK(parse_rational("-6/4") == Rational(-3, 2));
    CHECK(format_rational(Rational(-3, 2)) == "-3/2");
    CHECK(format_rational(Rational(5)) == "5/1");
    CHECK_THROWS_AS(parse_rational("1/0"), std::invalid_argument);
    CHECK_THROWS_AS(parse_rational("abc"), std::invalid_argument);
    CHECK_THROWS_AS(parse_rational(""), std::invalid_argument);
}

TEST_CASE("complex rational arithmetic") {
    const CRat i{Rational(0), Rational(1)};
    CHECK(i * i == CRat(-1L));
    const CRat a{Rational(1, 2), Rational(-3)};
    CHECK(a * a.conj() == CRat(a.norm_sq()));
    CHECK((a / a) == CRat(1L));
    CHECK_THROWS_AS(a / CRat(0L), std::domain_error);
}

TEST_CASE("polynomial ring axioms on random inputs") {
    std::mt19937_64 rng(2024);
    for (int n : {1, 2, 3}) {
        const auto P = random_poly(rng, n, 2, 5);
        const auto Q = random_poly(rng, n, 2, 5);
        const auto R = random_poly(rng, n, 2, 5);
        CHECK(P + Q == Q + P);
        CHECK(P * Q == Q * P);
        CHECK((P * Q) * R == P * (Q * R));
        CHECK(P * (Q + R) == P * Q + P * R);
        CHECK(P - P == BigradedPolynomial::zero(n));
        CHECK(scale(P, CRat(Rational(2), Rational(3))) ==
              P * BigradedPolynomial::constant(n, CRat(Rational(2), Rational(3))));
        CHECK(conjugate(conjugate(P)) == P);
        CHECK(conjugate(P * Q) == conjugate(P) * conjugate(Q));
    }
}

TEST_CASE("wirtinger derivatives satisfy the product rule exactly") {
    std::mt19937_64 rng(7);
    for (int n : {1, 2, 3}) {
        const auto P = random_poly(rng, n, 3, 6);
        const auto Q = random_poly(rng, n, 3, 6);
        for (int j = 0; j < n; ++j)
            for (bool conj : {false, true}) {
                CHECK(wirtinger(P * Q, j, conj) ==
                      wirtinger(P, j, conj) * Q + P * wirtinger(Q, j, conj));
            }
        // Mixed partials commute.
        CHECK(wirtinger(wirtinger(P, 0, false), n - 1, true) ==
              wirtinger(wirtinger(P, n - 1, true), 0, false));
    }
    // The two variable families are formally independent.
    const auto zb = BigradedPolynomial::variable(2, 0, true);
    CHECK(wirtinger(zb * zb, 0, false).is_zero());
}

TEST_CASE("laplacian literal values") {
    // n = 1: lap(z zbar) = 4.
    const auto z = BigradedPolynomial::variable(1, 0, false);
    const auto zb = BigradedPolynomial::variable(1, 0, true);
    CHECK(laplacian(z * zb) == BigradedPolynomial::constant(1, CRat(4L)));

    // n = 2: lap(|z|^2 z1 zbar2) = 16 z1 zbar2.
    const auto z1 = BigradedPolynomial::variable(2, 0, false);
    const auto zb2 = BigradedPolynomial::variable(2, 1, true);
    CHECK(laplacian(BigradedPolynomial::norm_squared(2) * z1 * zb2) ==
          scale(z1 * zb2, CRat(16L)));

    // Purely holomorphic or antiholomorphic terms are annihilated.
    CHECK(laplacian(z * z * z).is_zero());
    CHECK(laplacian(zb * zb).is_zero());
}

TEST_CASE("laplacian obeys its second-order product rule") {
    // lap(PQ) = lap(P) Q + P lap(Q) + 4 sum_k (dP/dz_k dQ/dzbar_k + dP/dzbar_k dQ/dz_k),
    // which pins the normalization of both the laplacian and the derivatives.
    std::mt19937_64 rng(99);
    for (int n : {1, 2, 3})
        for (int rep = 0; rep < 3; ++rep) {
            const auto P = random_poly(rng, n, 2, 5);
            const auto Q = random_poly(rng, n, 2, 5);
            auto rhs = laplacian(P) * Q + P * laplacian(Q);
            for (int k = 0; k < n; ++k) {
                auto cross = wirtinger(P, k, false) * wirtinger(Q, k, true) +
                             wirtinger(P, k, true) * wirtinger(Q, k, false);
                rhs = rhs + scale(cross, CRat(4L));
            }
            CHECK(laplacian(P * Q) == rhs);
        }
}

TEST_CASE("multiplying by a coordinate shifts the laplacian by a derivative") {
    // lap(z_j P) = z_j lap(P) + 4 dP/dzbar_j, exactly, for arbitrary P.
    std::mt19937_64 rng(5);
    for (int n : {1, 2, 3}) {
        const auto P = random_poly(rng, n, 3, 6);
        for (int j = 0; j < n; ++j) {
            const auto zj = BigradedPolynomial::variable(n, j, false);
            CHECK(laplacian(zj * P) == zj * laplacian(P) + scale(wirtinger(P, j, true), CRat(4L)));
            const auto zbj = BigradedPolynomial::variable(n, j, true);
            CHECK(laplacian(zbj * P) == zbj * laplacian(P) + scale(wirtinger(P, j, false), CRat(4L)));
        }
    }
}

TEST_CASE("evaluation matches hand computation and respects conjugation") {
    // P = (1/2) z1^2 zbar2 - 3 i z2   at  z = (1+i, 2-i).
    auto P = BigradedPolynomial::monomial(2, {2, 0}, {0, 1}, CRat(Rational(1, 2)));
    P.add_term({0, 1}, {0, 0}, CRat(Rational(0), Rational(-3)));
    const std::complex<double> z1(1, 1), z2(2, -1);
    const std::complex<double> want = 0.5 * z1 * z1 * std::conj(z2) - std::complex<double>(0, 3) * z2;
    const auto got = evaluate(P, {z1, z2});
    CHECK(std::abs(got - want) < 1e-15);

    std::mt19937_64 rng(31);
    for (int n : {1, 2, 3}) {
        const auto Q = random_poly(rng, n, 3, 6);
        const auto pt = random_point(rng, n);
        CHECK(std::abs(evaluate(conjugate(Q), pt) - std::conj(evaluate(Q, pt))) < 1e-12);
        CHECK(std::abs(CompiledPolynomial(Q).eval(pt) - evaluate(Q, pt)) < 1e-13);
    }
}

TEST_CASE("bidegree detection and scaling homogeneity") {
    auto P = BigradedPolynomial::monomial(2, {2, 0}, {1, 1}, CRat(1L));
    P.add_term({1, 1}, {0, 2}, CRat(3L));
    const auto d = bidegree(P);
    REQUIRE(d.has_value());
    CHECK(*d == std::pair<int, int>{2, 2});

    auto mixed = P;
    mixed.add_term({0, 0}, {0, 1}, CRat(1L));
    CHECK(!bidegree(mixed).has_value());
    CHECK(*bidegree(BigradedPolynomial::zero(2)) == std::pair<int, int>{0, 0});

    // P in the (p,q) class satisfies P(c z) = c^p conj(c)^q P(z).
    std::mt19937_64 rng(17);
    const std::complex<double> c(0.7, -1.3);
    auto pt = random_point(rng, 2);
    auto scaled = pt;
    for (auto& w : scaled) w *= c;
    const std::complex<double> factor =
        std::pow(c, 2) * std::pow(std::conj(c), 2);
    CHECK(std::abs(evaluate(P, scaled) - factor * evaluate(P, pt)) < 1e-12);
}

TEST_CASE("serialization round-trips exactly and rejects malformed input") {
    std::mt19937_64 rng(12);
    for (int n : {1, 2, 3}) {
        const auto P = random_poly(rng, n, 3, 7);
        CHECK(parse_polynomial(format_polynomial(P)) == P);
    }

    const std::string text =
        "# comment line\n"
        "(2,0|0,1) 1/2 0/1\n"
        "\n"
        "(0,1|0,0) 0/1 -3/1\n";
    auto P = BigradedPolynomial::monomial(2, {2, 0}, {0, 1}, CRat(Rational(1, 2)));
    P.add_term({0, 1}, {0, 0}, CRat(Rational(0), Rational(-3)));
    CHECK(parse_polynomial(text) == P);

    CHECK_THROWS_AS(parse_polynomial("(1,0|0) 1/1 0/1"), std::invalid_argument);
    CHECK_THROWS_AS(parse_polynomial("(1,0|0,0) 1/1"), std::invalid_argument);
    CHECK_THROWS_AS(parse_polynomial("(1,0|0,0) 1/1 0/1 junk"), std::invalid_argument);
    CHECK_THROWS_AS(parse_polynomial("(1,-1|0,0) 1/1 0/1"), std::invalid_argument);
    CHECK_THROWS_AS(parse_polynomial("(1,0|0,1) 1/1 0/1", 3), std::invalid_argument);
    CHECK_THROWS_AS(parse_polynomial(""), std::invalid_argument);
    CHECK(parse_polynomial("# nothing\n", 2).is_zero());

    // Terms that cancel disappear from the canonical form.
    auto Q = BigradedPolynomial::monomial(1, {1}, {0}, CRat(1L));
    Q.add_term({1}, {0}, CRat(-1L));
    CHECK(Q.is_zero());
    CHECK(format_polynomial(Q).empty());
}

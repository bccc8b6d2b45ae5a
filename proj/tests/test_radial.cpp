#include "tsm/radial.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <complex>
#include <random>

using namespace tsm;

namespace {

RadialProfile random_profile(std::mt19937_64& rng, int nterms) {
    std::uniform_int_distribution<int> sig(-1, 1), mm(-6, 4), num(-5, 5), den(1, 3);
    RadialProfile p;
    for (int t = 0; t < nterms; ++t)
        p.add_term(sig(rng), mm(rng),
                   CRat(Rational(num(rng), den(rng)), Rational(num(rng), den(rng))));
    return p;
}

}  // namespace

TEST_CASE("profile evaluation matches hand computation, including the scale parameter") {
    // p = 2 e^{rho^2/4} rho^{-3} - i e^{-rho^2/4} rho^2 + (1/2) rho^0
    RadialProfile p;
    p.add_term(1, -3, CRat(2L));
    p.add_term(-1, 2, CRat(Rational(0), Rational(-1)));
    p.add_term(0, 0, CRat(Rational(1, 2)));
    const double rho = 1.7;
    const std::complex<double> want =
        2.0 * std::exp(rho * rho / 4) * std::pow(rho, -3.0) -
        std::complex<double>(0, 1) * std::exp(-rho * rho / 4) * rho * rho + 0.5;
    CHECK(std::abs(p.eval(rho) - want) < 1e-14);

    const double lam = 2.5;
    const std::complex<double> want_lam =
        2.0 * std::exp(lam * rho * rho / 4) * std::pow(rho, -3.0) -
        std::complex<double>(0, 1) * std::exp(-lam * rho * rho / 4) * rho * rho + 0.5;
    CHECK(std::abs(p.eval(rho, lam) - want_lam) < 1e-13);
}

TEST_CASE("euler operator agrees with a numeric-derivative oracle") {
    // E[A, sign] f (rho) = A (rho f'(rho) + sign rho^2/2 f(rho)) + f(rho),
    // with f' from a fourth-order central difference stencil.
    std::mt19937_64 rng(61);
    for (int rep = 0; rep < 8; ++rep) {
        const auto f = random_profile(rng, 4);
        const Rational A(rep % 3 + 1, rep % 4 + 2);
        const int sign = (rep % 2 == 0) ? 1 : -1;
        const auto g = euler_apply(f, A, sign);
        for (double rho : {0.8, 1.3, 2.1}) {
            const double h = 1e-3;
            const auto fp = (-f.eval(rho + 2 * h) + 8.0 * f.eval(rho + h) - 8.0 * f.eval(rho - h) +
                             f.eval(rho - 2 * h)) /
                            (12.0 * h);
            const auto want =
                to_double(A) * (rho * fp + sign * rho * rho / 2.0 * f.eval(rho)) + f.eval(rho);
            CHECK(std::abs(g.eval(rho) - want) < 1e-8 * (1.0 + std::abs(want)));
        }
    }
}

TEST_CASE("sign -1 factors are diagonal on the growing family, sign +1 on the decaying one") {
    const auto grow = RadialProfile::single(+1, -4, CRat(3L));
    const auto g = euler_apply(grow, Rational(1, 5), -1);
    REQUIRE(g.terms.size() == 1);
    CHECK(g.terms.begin()->first == std::pair<int, int>{1, -4});
    // coefficient (A m + 1) c = (-4/5 + 1) * 3 = 3/5
    CHECK(g.terms.begin()->second == CRat(Rational(3, 5)));

    const auto decay = RadialProfile::single(-1, -6);
    const auto d = euler_apply(decay, Rational(1, 7), +1);
    REQUIRE(d.terms.size() == 1);
    CHECK(d.terms.begin()->first == std::pair<int, int>{-1, -6});

    // Opposite pairings produce the rho^{m+2} sidekick term.
    const auto mixed = euler_apply(grow, Rational(1, 5), +1);
    CHECK(mixed.terms.size() == 2);
}

TEST_CASE("annihilator chain factor lists") {
    using Chain = std::vector<ChainFactor>;
    CHECK(annihilator_chain(2, 0, 0) == Chain{});
    CHECK(annihilator_chain(2, 0, 1) == Chain{{Rational(1, 4), +1}});
    CHECK(annihilator_chain(1, 2, 0) == Chain{{Rational(1, 4), -1}, {Rational(1, 2), -1}});
    CHECK(annihilator_chain(2, 1, 1) == Chain{{Rational(1, 6), -1}, {Rational(1, 4), +1}});
    CHECK(annihilator_chain(3, 2, 1) ==
          Chain{{Rational(1, 10), -1}, {Rational(1, 8), -1}, {Rational(1, 6), +1}});
    CHECK_THROWS_AS(annihilator_chain(0, 1, 1), std::invalid_argument);
}

TEST_CASE("chains annihilate the closed-form kernel profiles exactly") {
    for (int n = 1; n <= 3; ++n)
        for (int p = 0; p <= 6; ++p)
            for (int q = 0; p + q <= 6; ++q) {
                const auto chain = annihilator_chain(n, p, q);
                const auto basis = characterization_basis(n, p, q);
                CHECK(basis.size() == static_cast<size_t>(p + q));
                for (const auto& u : basis) CHECK(apply_chain(u, chain).is_zero());
            }
}

TEST_CASE("chains reject profiles outside the kernel span") {
    // A plain power rho^{-1} (no Gaussian factor) survives every factor.
    const auto chain = annihilator_chain(2, 1, 1);
    CHECK(!apply_chain(RadialProfile::single(0, -1), chain).is_zero());
    // A kernel profile for different parameters is not annihilated either.
    const auto foreign = characterization_basis(2, 2, 1).front();
    CHECK(!apply_chain(foreign, chain).is_zero());
}

TEST_CASE("factors within a sign block commute as operators") {
    std::mt19937_64 rng(4);
    const auto chain = annihilator_chain(3, 3, 2);
    const auto ablock = std::vector<ChainFactor>(chain.begin(), chain.begin() + 3);
    const auto bblock = std::vector<ChainFactor>(chain.begin() + 3, chain.end());
    for (int rep = 0; rep < 5; ++rep) {
        const auto f = random_profile(rng, 5);
        auto rev_a = ablock;
        std::reverse(rev_a.begin(), rev_a.end());
        CHECK(apply_chain(f, ablock) == apply_chain(f, rev_a));
        auto rev_b = bblock;
        std::reverse(rev_b.begin(), rev_b.end());
        CHECK(apply_chain(f, bblock) == apply_chain(f, rev_b));
    }
}

TEST_CASE("kernel profile structure") {
    const auto basis = characterization_basis(2, 2, 1);
    REQUIRE(basis.size() == 3);
    CHECK(basis[0] == RadialProfile::single(+1, -8));   // i = 1: -2(n+p+q-1) = -8
    CHECK(basis[1] == RadialProfile::single(+1, -6));   // i = 2
    CHECK(basis[2] == RadialProfile::single(-1, -8));   // k = 1
    CHECK(characterization_basis(1, 0, 0).empty());
}

TEST_CASE("profile fitting recovers exact members and flags non-members") {
    const auto grid = chebyshev_grid(40, 1.05, 2.95);
    const auto basis = characterization_basis(2, 1, 1);

    // Member: v = (2 - i) * basis[0] + 0.3 * basis[1].
    std::vector<std::complex<double>> vals(grid.size());
    const std::complex<double> c0(2.0, -1.0), c1(0.3, 0.0);
    for (size_t i = 0; i < grid.size(); ++i)
        vals[i] = c0 * basis[0].eval(grid[i]) + c1 * basis[1].eval(grid[i]);
    const auto fit = fit_profile(grid, vals, basis);
    REQUIRE(fit.coeffs.size() == 2);
    CHECK(std::abs(fit.coeffs[0] - c0) < 1e-10);
    CHECK(std::abs(fit.coeffs[1] - c1) < 1e-10);
    CHECK(fit.residual < 1e-12);
    CHECK(fit.conditioning < 1e6);

    // Non-member: samples of rho^{-4} against the (0,1)-type basis.
    std::vector<std::complex<double>> pw(grid.size());
    for (size_t i = 0; i < grid.size(); ++i) pw[i] = std::pow(grid[i], -4.0);
    const auto bad = fit_profile(grid, pw, characterization_basis(2, 0, 1));
    CHECK(bad.residual > 1e-2);

    // Empty basis: the residual is the rms of the data itself.
    const auto none = fit_profile(grid, pw, {});
    CHECK(none.coeffs.empty());
    double ss = 0;
    for (auto& v : pw) ss += std::norm(v);
    CHECK(std::abs(none.residual - std::sqrt(ss / double(pw.size()))) < 1e-14);

    CHECK_THROWS_AS(fit_profile({}, {}, basis), std::invalid_argument);
}

TEST_CASE("scale parameter carries through fitting") {
    const double lam = 2.0;
    const auto grid = chebyshev_grid(30, 1.1, 2.5);
    const auto basis = characterization_basis(2, 1, 0);
    std::vector<std::complex<double>> vals(grid.size());
    for (size_t i = 0; i < grid.size(); ++i) vals[i] = 1.5 * basis[0].eval(grid[i], lam);
    const auto fit = fit_profile(grid, vals, basis, lam);
    CHECK(std::abs(fit.coeffs[0] - 1.5) < 1e-10);
    CHECK(fit.residual < 1e-12);
    // Fitting with the wrong scale cannot represent the data.
    CHECK(fit_profile(grid, vals, basis, 1.0).residual > 1e-3);
}

TEST_CASE("chebyshev grids stay strictly inside and ascend") {
    const auto g = chebyshev_grid(25, 1.0, 3.0);
    REQUIRE(g.size() == 25);
    CHECK(g.front() > 1.0);
    CHECK(g.back() < 3.0);
    CHECK(std::is_sorted(g.begin(), g.end()));
    for (size_t i = 1; i < g.size(); ++i) CHECK(g[i] > g[i - 1]);
    CHECK_THROWS_AS(chebyshev_grid(0, 0.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(chebyshev_grid(5, 2.0, 1.0), std::invalid_argument);
}

TEST_CASE("profile and sample serialization round-trip") {
    std::mt19937_64 rng(15);
    const auto p = random_profile(rng, 5);
    CHECK(parse_profile(format_profile(p)) == p);
    CHECK(parse_profile("# only a comment\n").is_zero());
    CHECK_THROWS_AS(parse_profile("1 -4 1/2\n"), std::invalid_argument);
    CHECK_THROWS_AS(parse_profile("1 -4 1/2 0/1 junk\n"), std::invalid_argument);

    const auto grid = chebyshev_grid(8, 0.5, 2.0);
    std::vector<std::complex<double>> vals(grid.size());
    for (size_t i = 0; i < grid.size(); ++i) vals[i] = {std::sin(grid[i]), std::cos(grid[i])};
    const auto csv = format_samples_csv(grid, vals);
    std::vector<double> r2;
    std::vector<std::complex<double>> v2;
    parse_samples_csv(csv, r2, v2);
    REQUIRE(r2.size() == grid.size());
    for (size_t i = 0; i < grid.size(); ++i) {
        CHECK(r2[i] == grid[i]);
        CHECK(v2[i] == vals[i]);
    }
    CHECK_THROWS_AS(parse_samples_csv("x,y\n", r2, v2), std::invalid_argument);
}

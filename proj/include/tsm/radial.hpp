#pragma once

// Radial profiles of the form  sum_i c_i e^{sigma_i rho^2/4} rho^{m_i}  with
// exact complex-rational coefficients, sigma in a small set of integers
// (typically -1, 0, +1) and integer (possibly negative) powers m.  The family
// is closed under the first-order Euler-type operators
//     E[A, sign] = A (rho d/drho + sign rho^2/2) + 1,
// which act term by term:
//     E[A, sign] (c e^{sigma rho^2/4} rho^m)
//         = c (A m + 1) e^{sigma rho^2/4} rho^m
//         + c A (sigma + sign)/2 e^{sigma rho^2/4} rho^{m+2}.
// In particular E[A, -1] is diagonal on the e^{+rho^2/4} family and E[A, +1]
// on the e^{-rho^2/4} family -- the structural fact behind the annihilating
// chains below.

#include "tsm/numeric.hpp"
#include "tsm/rational.hpp"

#include <Eigen/Dense>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <complex>
#include <map>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace tsm {

struct RadialProfile {
    // key = (sigma, m); zero coefficients are never stored.
    std::map<std::pair<int, int>, CRat> terms;

    static RadialProfile single(int sigma, int m, CRat c = CRat(1L)) {
        RadialProfile p;
        p.add_term(sigma, m, std::move(c));
        return p;
    }

    void add_term(int sigma, int m, CRat c) {
        if (c.is_zero()) return;
        auto it = terms.find({sigma, m});
        if (it == terms.end()) {
            terms.emplace(std::pair<int, int>{sigma, m}, std::move(c));
        } else {
            it->second += c;
            if (it->second.is_zero()) terms.erase(it);
        }
    }

    bool is_zero() const { return terms.empty(); }
    friend bool operator==(const RadialProfile& a, const RadialProfile& b) = default;

    // Value at rho > 0.  The scale parameter enters only through the
    // exponential: e^{sigma * lambda * rho^2 / 4}.
    std::complex<double> eval(double rho, double lambda = 1.0) const {
        std::complex<double> acc = 0.0;
        for (const auto& [key, c] : terms) {
            const auto [sigma, m] = key;
            acc += c.to_complex() * std::exp(sigma * lambda * rho * rho / 4.0) * std::pow(rho, m);
        }
        return acc;
    }
};

inline RadialProfile operator+(const RadialProfile& a, const RadialProfile& b) {
    RadialProfile out = a;
    for (const auto& [k, c] : b.terms) out.add_term(k.first, k.second, c);
    return out;
}

inline RadialProfile operator-(const RadialProfile& a, const RadialProfile& b) {
    RadialProfile out = a;
    for (const auto& [k, c] : b.terms) out.add_term(k.first, k.second, -c);
    return out;
}

inline RadialProfile scale(const RadialProfile& p, const CRat& s) {
    RadialProfile out;
    if (s.is_zero()) return out;
    for (const auto& [k, c] : p.terms) out.terms.emplace(k, s * c);
    return out;
}

// E[A, sign] applied exactly, term by term.
inline RadialProfile euler_apply(const RadialProfile& p, const Rational& A, int sign) {
    if (sign != 1 && sign != -1) throw std::invalid_argument("euler_apply: sign must be +1 or -1");
    RadialProfile out;
    for (const auto& [key, c] : p.terms) {
        const auto [sigma, m] = key;
        out.add_term(sigma, m, (A * m + 1) * c);
        out.add_term(sigma, m + 2, (A * Rational(sigma + sign, 2)) * c);
    }
    return out;
}

// One factor of an annihilating chain: apply E[factor.first, factor.second].
using ChainFactor = std::pair<Rational, int>;

// The chain of Euler factors annihilating the closed-form kernel profiles for
// parameters (n, p, q): first the p factors
//     A_i = 1 / (2(n+p+q-i)),  sign -1,   i = 1..p,
// then the q factors
//     B_k = 1 / (2(n+q-k)),    sign +1,   k = 1..q.
// The two blocks do not commute with each other, but factors inside a block
// do (each block consists of polynomials in the single operator
// rho d/drho + sign rho^2/2), so any within-block ordering gives the same
// composite operator.  Factors are applied in list order.
inline std::vector<ChainFactor> annihilator_chain(int n, int p, int q) {
    if (n < 1) throw std::invalid_argument("annihilator_chain: n must be >= 1");
    if (p < 0 || q < 0) throw std::invalid_argument("annihilator_chain: bidegrees must be >= 0");
    std::vector<ChainFactor> chain;
    for (int i = 1; i <= p; ++i) chain.push_back({Rational(1, 2 * (n + p + q - i)), -1});
    for (int k = 1; k <= q; ++k) chain.push_back({Rational(1, 2 * (n + q - k)), +1});
    return chain;
}

inline RadialProfile apply_chain(RadialProfile p, const std::vector<ChainFactor>& chain) {
    for (const auto& [A, sign] : chain) p = euler_apply(p, A, sign);
    return p;
}

// The profiles those chains annihilate: for (n, p, q),
//     e^{+rho^2/4} rho^{-2(n+p+q-i)},   i = 1..p,
//     e^{-rho^2/4} rho^{-2(n+p+q-k)},   k = 1..q,
// in that order.  These are exactly the radial factors of the coefficient
// functions a function with vanishing twisted means over an annulus-admissible
// family can carry on the (p, q) channel.
inline std::vector<RadialProfile> characterization_basis(int n, int p, int q) {
    if (n < 1) throw std::invalid_argument("characterization_basis: n must be >= 1");
    if (p < 0 || q < 0) throw std::invalid_argument("characterization_basis: bidegrees must be >= 0");
    std::vector<RadialProfile> basis;
    for (int i = 1; i <= p; ++i) basis.push_back(RadialProfile::single(+1, -2 * (n + p + q - i)));
    for (int k = 1; k <= q; ++k) basis.push_back(RadialProfile::single(-1, -2 * (n + p + q - k)));
    return basis;
}

// Two-sided variant: both exponential families truncated to min(p, q) terms.
// Empty whenever p = 0 or q = 0 -- pure-type coefficients of a two-sided
// member must vanish outright.
inline std::vector<RadialProfile> truncated_characterization_basis(int n, int p, int q) {
    if (n < 1) throw std::invalid_argument("truncated_characterization_basis: n must be >= 1");
    if (p < 0 || q < 0)
        throw std::invalid_argument("truncated_characterization_basis: bidegrees must be >= 0");
    const int cut = std::min(p, q);
    std::vector<RadialProfile> basis;
    for (int i = 1; i <= cut; ++i) basis.push_back(RadialProfile::single(+1, -2 * (n + p + q - i)));
    for (int k = 1; k <= cut; ++k) basis.push_back(RadialProfile::single(-1, -2 * (n + p + q - k)));
    return basis;
}

// Euclidean sibling on R^d, d = 2n: a degree-k coefficient of a mean-annihilated
// function is a combination of the pure powers rho^{k-d-2i}, i = 0..k-1; for
// k = 0 the coefficient must vanish (empty basis).
inline std::vector<RadialProfile> euclidean_characterization_basis(int n, int k) {
    if (n < 1) throw std::invalid_argument("euclidean_characterization_basis: n must be >= 1");
    if (k < 0) throw std::invalid_argument("euclidean_characterization_basis: degree must be >= 0");
    std::vector<RadialProfile> basis;
    for (int i = 0; i < k; ++i) basis.push_back(RadialProfile::single(0, k - 2 * n - 2 * i));
    return basis;
}

// ---------------------------------------------------------------------------
// Least-squares fitting of sampled radial data against a profile basis.
// ---------------------------------------------------------------------------

struct FitResult {
    std::vector<std::complex<double>> coeffs;
    double residual = 0.0;      // rms of the pointwise misfit, absolute
    double conditioning = 0.0;  // sigma_max / sigma_min of the scaled design
};

// Columns are normalized by their sup over the grid before the SVD solve, so
// the reported conditioning reflects genuine basis redundancy on this grid
// rather than scale disparities; coefficients are mapped back afterwards.
inline FitResult fit_profile(const std::vector<double>& rho,
                             const std::vector<std::complex<double>>& vals,
                             const std::vector<RadialProfile>& basis, double lambda = 1.0) {
    if (rho.size() != vals.size()) throw std::invalid_argument("fit_profile: sample length mismatch");
    if (rho.empty()) throw std::invalid_argument("fit_profile: no samples");
    const size_t m = rho.size(), k = basis.size();

    FitResult out;
    if (k == 0) {
        std::vector<double> sq(m);
        for (size_t i = 0; i < m; ++i) sq[i] = std::norm(vals[i]);
        out.residual = std::sqrt(pairwise_sum(sq) / double(m));
        return out;
    }

    Eigen::MatrixXcd M(m, k);
    std::vector<double> colscale(k, 0.0);
    for (size_t j = 0; j < k; ++j) {
        for (size_t i = 0; i < m; ++i) {
            const auto v = basis[j].eval(rho[i], lambda);
            M(i, j) = v;
            colscale[j] = std::max(colscale[j], std::abs(v));
        }
        if (colscale[j] == 0.0) colscale[j] = 1.0;
        M.col(j) /= colscale[j];
    }
    Eigen::VectorXcd b(m);
    for (size_t i = 0; i < m; ++i) b(i) = vals[i];

    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(M, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const Eigen::VectorXcd c = svd.solve(b);
    const auto& sv = svd.singularValues();
    out.conditioning = sv(sv.size() - 1) > 0 ? sv(0) / sv(sv.size() - 1)
                                             : std::numeric_limits<double>::infinity();

    const Eigen::VectorXcd mis = M * c - b;
    std::vector<double> sq(m);
    for (size_t i = 0; i < m; ++i) sq[i] = std::norm(mis(i));
    out.residual = std::sqrt(pairwise_sum(sq) / double(m));

    out.coeffs.resize(k);
    for (size_t j = 0; j < k; ++j) out.coeffs[j] = c(j) / colscale[j];
    return out;
}

// Chebyshev points of the first kind mapped to (a, b), ascending; these
// cluster toward both ends while staying strictly inside the interval.
inline std::vector<double> chebyshev_grid(int count, double a, double b) {
    if (count < 1) throw std::invalid_argument("chebyshev_grid: count must be >= 1");
    if (!(a < b)) throw std::invalid_argument("chebyshev_grid: need a < b");
    std::vector<double> g(count);
    for (int i = 0; i < count; ++i)
        g[i] = 0.5 * (a + b) - 0.5 * (b - a) * std::cos(M_PI * (2.0 * i + 1.0) / (2.0 * count));
    return g;
}

// ---------------------------------------------------------------------------
// Serialization.  Profile: one term per line, "sigma m re im" with exact
// rational coefficients.  Samples: CSV with header "rho,re,im".
// ---------------------------------------------------------------------------

inline std::string format_profile(const RadialProfile& p) {
    std::string out;
    for (const auto& [k, c] : p.terms)
        out += std::to_string(k.first) + " " + std::to_string(k.second) + " " + format_crat(c) + "\n";
    return out;
}

inline RadialProfile parse_profile(const std::string& text) {
    RadialProfile p;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#') continue;
        std::istringstream ls(line);
        int sigma = 0, m = 0;
        std::string re_s, im_s, extra;
        if (!(ls >> sigma >> m >> re_s >> im_s) || (ls >> extra))
            throw std::invalid_argument("profile line " + std::to_string(lineno) +
                                        ": expected 'sigma m re im'");
        p.add_term(sigma, m, CRat(parse_rational(re_s), parse_rational(im_s)));
    }
    return p;
}

inline std::string format_samples_csv(const std::vector<double>& rho,
                                      const std::vector<std::complex<double>>& vals) {
    if (rho.size() != vals.size()) throw std::invalid_argument("samples: length mismatch");
    std::string out = "rho,re,im\n";
    for (size_t i = 0; i < rho.size(); ++i)
        out += format_double(rho[i]) + "," + format_double(vals[i].real()) + "," +
               format_double(vals[i].imag()) + "\n";
    return out;
}

inline void parse_samples_csv(const std::string& text, std::vector<double>& rho,
                              std::vector<std::complex<double>>& vals) {
    rho.clear();
    vals.clear();
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line) || line.find("rho") != 0)
        throw std::invalid_argument("samples CSV: missing 'rho,re,im' header");
    int lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::istringstream ls(line);
        std::string f1, f2, f3;
        if (!std::getline(ls, f1, ',') || !std::getline(ls, f2, ',') || !std::getline(ls, f3))
            throw std::invalid_argument("samples CSV line " + std::to_string(lineno) + ": bad row");
        rho.push_back(std::stod(f1));
        vals.push_back({std::stod(f2), std::stod(f3)});
    }
}

}  // namespace tsm

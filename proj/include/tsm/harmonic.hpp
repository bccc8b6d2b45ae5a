#pragma once

// Bigraded harmonic polynomial spaces H_{p,q} on C^n: dimension counts, exact
// kernel bases, Gram-Schmidt orthogonalization against the sphere inner
// product, and the expansion of an arbitrary bihomogeneous polynomial into
// |z|^{2k}-weighted harmonic layers.

#include "tsm/polynomial.hpp"
#include "tsm/rational_linalg.hpp"
#include "tsm/sphere_integral.hpp"

#include <map>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace tsm {

namespace detail {
inline void check_npq(int n, int p, int q) {
    if (n < 1) throw std::invalid_argument("dimension n must be >= 1");
    if (p < 0 || q < 0) throw std::invalid_argument("bidegrees must be >= 0");
}
}  // namespace detail

// dim H_{p,q} = C(p+n-1,p) C(q+n-1,q) - C(p+n-2,p-1) C(q+n-2,q-1).
inline BigInt harmonic_space_dimension(int n, int p, int q) {
    detail::check_npq(n, p, q);
    return binomial(p + n - 1, p) * binomial(q + n - 1, q) -
           binomial(p + n - 2, p - 1) * binomial(q + n - 2, q - 1);
}

// Monomial keys of the full bihomogeneous space P_{p,q}, in canonical order.
inline std::vector<BigradedPolynomial::Key> monomial_keys(int n, int p, int q) {
    detail::check_npq(n, p, q);
    std::vector<BigradedPolynomial::Key> keys;
    for (const auto& a : multi_indices(n, p))
        for (const auto& b : multi_indices(n, q)) keys.push_back({a, b});
    return keys;
}

// Exact basis of H_{p,q} = ker(laplacian) on P_{p,q}, computed by rational
// Gaussian elimination on the Laplacian's matrix between monomial bases.
// Ordering is deterministic: one element per free column of the reduced
// system, ascending in the canonical monomial order.
inline std::vector<BigradedPolynomial> harmonic_space_basis(int n, int p, int q) {
    detail::check_npq(n, p, q);
    const auto cols = monomial_keys(n, p, q);
    std::vector<BigradedPolynomial> basis;
    if (p == 0 || q == 0) {
        // The laplacian vanishes identically: every monomial is harmonic.
        for (const auto& k : cols) basis.push_back(BigradedPolynomial::monomial(n, k.first, k.second));
        return basis;
    }

    const auto rows = monomial_keys(n, p - 1, q - 1);
    std::map<BigradedPolynomial::Key, size_t> row_index;
    for (size_t r = 0; r < rows.size(); ++r) row_index.emplace(rows[r], r);

    RationalMatrix m(rows.size(), cols.size());
    for (size_t c = 0; c < cols.size(); ++c) {
        const auto& [a, b] = cols[c];
        for (int j = 0; j < n; ++j) {
            if (a[j] == 0 || b[j] == 0) continue;
            auto ra = a, rb = b;
            --ra[j];
            --rb[j];
            m.a[row_index.at({ra, rb})][c] += Rational(4) * a[j] * b[j];
        }
    }

    for (const auto& v : nullspace(std::move(m))) {
        BigradedPolynomial P = BigradedPolynomial::zero(n);
        for (size_t c = 0; c < cols.size(); ++c)
            if (v[c] != 0) P.add_term(cols[c].first, cols[c].second, CRat(v[c]));
        basis.push_back(std::move(P));
    }
    return basis;
}

// An orthogonal basis element kept in exact form: the polynomial has rational
// coefficients, and the unit-norm element is sqrt(scale_sq) * poly, with
// scale_sq = 1 / <poly, poly> an exact positive rational.
struct OrthonormalElement {
    BigradedPolynomial poly;
    Rational scale_sq;

    double scale() const { return std::sqrt(to_double(scale_sq)); }
};

// Gram-Schmidt in exact arithmetic, no square roots taken: orthogonality and
// normalization are certified by rational identities.
inline std::vector<OrthonormalElement> orthonormalize(const std::vector<BigradedPolynomial>& in) {
    std::vector<OrthonormalElement> out;
    std::vector<Rational> norms;  // <E_i, E_i>
    for (const auto& B : in) {
        BigradedPolynomial E = B;
        for (size_t j = 0; j < out.size(); ++j) {
            const CRat c = sphere_inner_product(E, out[j].poly);
            if (!c.is_zero()) E = E - scale(out[j].poly, c / norms[j]);
        }
        const CRat nrm = sphere_inner_product(E, E);
        if (!nrm.im.is_zero() || nrm.re <= 0)
            throw std::logic_error("orthonormalize: input not linearly independent");
        norms.push_back(nrm.re);
        out.push_back({std::move(E), Rational(1) / nrm.re});
    }
    return out;
}

inline std::vector<OrthonormalElement> orthonormal_basis(int n, int p, int q) {
    return orthonormalize(harmonic_space_basis(n, p, q));
}

// Expansion P = sum_k |z|^{2k} H_k with each H_k harmonic of bidegree
// (p-k, q-k).  Requires a bihomogeneous input.  Computed by the exact
// recursion: the laplacian of the candidate tail determines each layer via
//   laplacian(|z|^{2k} H) = 4k(n+a+b+k-1) |z|^{2k-2} H   for H in H_{a,b},
// so decomposing laplacian(P) recursively gives the k >= 1 layers by exact
// rational division, and H_0 is the remainder (harmonic by construction).
inline std::vector<BigradedPolynomial> harmonic_decompose(const BigradedPolynomial& P) {
    const auto d = bidegree(P);
    if (!d) throw std::invalid_argument("harmonic_decompose: input is not bihomogeneous");
    if (P.is_zero()) return {};
    const auto [p, q] = *d;
    const int n = P.n;

    const auto D = laplacian(P);
    if (D.is_zero()) return {P};

    const auto sub = harmonic_decompose(D);
    std::vector<BigradedPolynomial> layers(sub.size() + 1, BigradedPolynomial::zero(n));
    const auto r2 = BigradedPolynomial::norm_squared(n);
    BigradedPolynomial tail = BigradedPolynomial::zero(n);
    BigradedPolynomial r2k = BigradedPolynomial::constant(n, CRat(1L));
    for (size_t k = 1; k < layers.size(); ++k) {
        r2k = r2k * r2;
        const Rational div = Rational(4) * k * (n + p + q - static_cast<int>(k) - 1);
        layers[k] = scale(sub[k - 1], CRat(Rational(1) / div));
        if (!layers[k].is_zero()) tail = tail + r2k * layers[k];
    }
    layers[0] = P - tail;
    while (!layers.empty() && layers.back().is_zero()) layers.pop_back();
    return layers;
}

// Bidegrees that actually occur in the harmonic expansion of the product of
// two harmonic polynomials, in descending total degree.
inline std::vector<std::pair<int, int>> product_components(const BigradedPolynomial& P,
                                                           const BigradedPolynomial& Q) {
    const auto prod = P * Q;
    const auto d = bidegree(prod);
    if (!d) throw std::invalid_argument("product_components: product is not bihomogeneous");
    std::vector<std::pair<int, int>> out;
    const auto layers = harmonic_decompose(prod);
    for (size_t k = 0; k < layers.size(); ++k)
        if (!layers[k].is_zero())
            out.push_back({d->first - static_cast<int>(k), d->second - static_cast<int>(k)});
    return out;
}

// ---------------------------------------------------------------------------
// Basis file format.  First line: "n p q d".  Then d blocks, each introduced
// by a line "scale num/den" (the exact squared normalization factor) followed
// by the element's polynomial term lines.
// ---------------------------------------------------------------------------

inline std::string format_basis(int n, int p, int q, const std::vector<OrthonormalElement>& basis) {
    std::string out = std::to_string(n) + " " + std::to_string(p) + " " + std::to_string(q) + " " +
                      std::to_string(basis.size()) + "\n";
    for (const auto& e : basis) {
        out += "scale " + format_rational(e.scale_sq) + "\n";
        out += format_polynomial(e.poly);
    }
    return out;
}

struct ParsedBasis {
    int n = 0, p = 0, q = 0;
    std::vector<OrthonormalElement> elements;
};

inline ParsedBasis parse_basis(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    ParsedBasis out;
    size_t declared = 0;
    bool have_header = false;
    std::string pending_poly;
    bool in_block = false;
    Rational cur_scale;

    auto flush = [&]() {
        if (!in_block) return;
        out.elements.push_back({parse_polynomial(pending_poly, out.n), cur_scale});
        pending_poly.clear();
        in_block = false;
    };

    while (std::getline(in, line)) {
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#') continue;
        if (!have_header) {
            std::istringstream h(line);
            if (!(h >> out.n >> out.p >> out.q >> declared) || out.n < 1)
                throw std::invalid_argument("basis file: malformed header");
            have_header = true;
            continue;
        }
        if (line.compare(first, 6, "scale ") == 0) {
            flush();
            cur_scale = parse_rational(line.substr(first + 6));
            in_block = true;
        } else {
            if (!in_block) throw std::invalid_argument("basis file: term before first scale line");
            pending_poly += line + "\n";
        }
    }
    flush();
    if (!have_header) throw std::invalid_argument("basis file: missing header");
    if (out.elements.size() != declared)
        throw std::invalid_argument("basis file: element count does not match header");
    return out;
}

}  // namespace tsm

#pragma once

// Polynomials on C^n in the commuting formal variables z_1..z_n and their
// conjugates, with exact Gaussian-rational coefficients.  A term is indexed by
// the pair of multi-indices (alpha | beta), meaning z^alpha * zbar^beta; the
// bidegree of such a term is (|alpha|, |beta|).
//
// The map keying gives every polynomial a canonical term order (ascending
// lexicographic on (alpha, beta)), which serialization and iteration rely on
// for determinism.

#include "tsm/multi_index.hpp"
#include "tsm/rational.hpp"

#include <complex>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace tsm {

struct BigradedPolynomial {
    using Key = std::pair<MultiIndex, MultiIndex>;

    int n = 1;
    std::map<Key, CRat> terms;  // zero coefficients are never stored

    static BigradedPolynomial zero(int n) { return BigradedPolynomial{n, {}}; }

    static BigradedPolynomial constant(int n, CRat c) {
        BigradedPolynomial p{n, {}};
        p.add_term(MultiIndex(n, 0), MultiIndex(n, 0), std::move(c));
        return p;
    }

    static BigradedPolynomial monomial(int n, MultiIndex a, MultiIndex b, CRat c = CRat(1L)) {
        if (static_cast<int>(a.size()) != n || static_cast<int>(b.size()) != n)
            throw std::invalid_argument("monomial multi-index length != n");
        BigradedPolynomial p{n, {}};
        p.add_term(std::move(a), std::move(b), std::move(c));
        return p;
    }

    // z_j (conjugated = false) or zbar_j (conjugated = true); j is 0-based.
    static BigradedPolynomial variable(int n, int j, bool conjugated) {
        MultiIndex a(n, 0), b(n, 0);
        (conjugated ? b : a)[j] = 1;
        return monomial(n, std::move(a), std::move(b));
    }

    // |z|^2 = sum_j z_j zbar_j
    static BigradedPolynomial norm_squared(int n) {
        BigradedPolynomial p{n, {}};
        for (int j = 0; j < n; ++j) {
            MultiIndex a(n, 0), b(n, 0);
            a[j] = 1;
            b[j] = 1;
            p.add_term(std::move(a), std::move(b), CRat(1L));
        }
        return p;
    }

    void add_term(MultiIndex a, MultiIndex b, CRat c) {
        if (c.is_zero()) return;
        Key k{std::move(a), std::move(b)};
        auto it = terms.find(k);
        if (it == terms.end()) {
            terms.emplace(std::move(k), std::move(c));
        } else {
            it->second += c;
            if (it->second.is_zero()) terms.erase(it);
        }
    }

    bool is_zero() const { return terms.empty(); }

    friend bool operator==(const BigradedPolynomial& a, const BigradedPolynomial& b) = default;
};

inline BigradedPolynomial operator+(const BigradedPolynomial& a, const BigradedPolynomial& b) {
    if (a.n != b.n) throw std::invalid_argument("polynomial dimension mismatch");
    BigradedPolynomial out = a;
    for (const auto& [k, c] : b.terms) out.add_term(k.first, k.second, c);
    return out;
}

inline BigradedPolynomial operator-(const BigradedPolynomial& a, const BigradedPolynomial& b) {
    if (a.n != b.n) throw std::invalid_argument("polynomial dimension mismatch");
    BigradedPolynomial out = a;
    for (const auto& [k, c] : b.terms) out.add_term(k.first, k.second, -c);
    return out;
}

inline BigradedPolynomial scale(const BigradedPolynomial& p, const CRat& s) {
    BigradedPolynomial out = BigradedPolynomial::zero(p.n);
    if (s.is_zero()) return out;
    for (const auto& [k, c] : p.terms) out.terms.emplace(k, s * c);
    return out;
}

inline BigradedPolynomial operator*(const BigradedPolynomial& a, const BigradedPolynomial& b) {
    if (a.n != b.n) throw std::invalid_argument("polynomial dimension mismatch");
    BigradedPolynomial out = BigradedPolynomial::zero(a.n);
    for (const auto& [ka, ca] : a.terms)
        for (const auto& [kb, cb] : b.terms) {
            MultiIndex al = ka.first, be = ka.second;
            for (int j = 0; j < a.n; ++j) {
                al[j] += kb.first[j];
                be[j] += kb.second[j];
            }
            out.add_term(std::move(al), std::move(be), ca * cb);
        }
    return out;
}

// Complex conjugate of the polynomial as a function: swaps each (alpha|beta)
// to (beta|alpha) and conjugates coefficients.
inline BigradedPolynomial conjugate(const BigradedPolynomial& p) {
    BigradedPolynomial out = BigradedPolynomial::zero(p.n);
    for (const auto& [k, c] : p.terms) out.terms.emplace(BigradedPolynomial::Key{k.second, k.first}, c.conj());
    return out;
}

// Formal derivative d/dz_j (conjugated = false) or d/dzbar_j (true); the two
// families of variables are independent, so each acts on one half of the key.
inline BigradedPolynomial wirtinger(const BigradedPolynomial& p, int j, bool conjugated) {
    if (j < 0 || j >= p.n) throw std::invalid_argument("wirtinger: coordinate out of range");
    BigradedPolynomial out = BigradedPolynomial::zero(p.n);
    for (const auto& [k, c] : p.terms) {
        const MultiIndex& idx = conjugated ? k.second : k.first;
        if (idx[j] == 0) continue;
        MultiIndex a = k.first, b = k.second;
        int& e = (conjugated ? b : a)[j];
        const Rational f(e);
        --e;
        out.add_term(std::move(a), std::move(b), f * c);
    }
    return out;
}

// Laplacian on C^n ~ R^{2n}: 4 * sum_k d^2/dz_k dzbar_k.
inline BigradedPolynomial laplacian(const BigradedPolynomial& p) {
    BigradedPolynomial out = BigradedPolynomial::zero(p.n);
    for (const auto& [k, c] : p.terms)
        for (int j = 0; j < p.n; ++j) {
            if (k.first[j] == 0 || k.second[j] == 0) continue;
            MultiIndex a = k.first, b = k.second;
            const Rational f = Rational(4) * a[j] * b[j];
            --a[j];
            --b[j];
            out.add_term(std::move(a), std::move(b), f * c);
        }
    return out;
}

// Bidegree (p, q) if every term has the same (|alpha|, |beta|); nullopt for a
// mixed (inhomogeneous) polynomial.  The zero polynomial reports (0, 0).
inline std::optional<std::pair<int, int>> bidegree(const BigradedPolynomial& p) {
    std::optional<std::pair<int, int>> d;
    for (const auto& [k, c] : p.terms) {
        std::pair<int, int> t{degree(k.first), degree(k.second)};
        if (!d)
            d = t;
        else if (*d != t)
            return std::nullopt;
    }
    if (!d) d = {0, 0};
    return d;
}

// ---------------------------------------------------------------------------
// Evaluation.  A "compiled" copy flattens the term map to arrays and caches
// per-coordinate power tables so repeated evaluation at quadrature nodes is
// cheap.  Floating point enters exactly here.
// ---------------------------------------------------------------------------

struct CompiledPolynomial {
    int n = 1;
    struct Term {
        std::vector<int> a, b;
        std::complex<double> c;
    };
    std::vector<Term> terms;
    std::vector<int> max_a, max_b;  // per-coordinate max exponents

    explicit CompiledPolynomial(const BigradedPolynomial& p)
        : n(p.n), max_a(p.n, 0), max_b(p.n, 0) {
        if (n > 8) throw std::invalid_argument("compiled evaluation supports n <= 8");
        terms.reserve(p.terms.size());
        for (const auto& [k, c] : p.terms) {
            terms.push_back({k.first, k.second, c.to_complex()});
            for (int j = 0; j < n; ++j) {
                max_a[j] = std::max(max_a[j], k.first[j]);
                max_b[j] = std::max(max_b[j], k.second[j]);
                if (max_a[j] > 16 || max_b[j] > 16)
                    throw std::invalid_argument("compiled evaluation supports degree <= 16");
            }
        }
    }

    std::complex<double> eval(const std::complex<double>* z) const {
        // Power tables: pw_a[j][d] = z_j^d, pw_b[j][d] = conj(z_j)^d.
        std::complex<double> pw_a[8][17], pw_b[8][17];
        for (int j = 0; j < n; ++j) {
            pw_a[j][0] = pw_b[j][0] = 1.0;
            const std::complex<double> zb = std::conj(z[j]);
            for (int d = 1; d <= max_a[j]; ++d) pw_a[j][d] = pw_a[j][d - 1] * z[j];
            for (int d = 1; d <= max_b[j]; ++d) pw_b[j][d] = pw_b[j][d - 1] * zb;
        }
        std::complex<double> acc = 0.0;
        for (const Term& t : terms) {
            std::complex<double> w = t.c;
            for (int j = 0; j < n; ++j) w *= pw_a[j][t.a[j]] * pw_b[j][t.b[j]];
            acc += w;
        }
        return acc;
    }

    std::complex<double> eval(const std::vector<std::complex<double>>& z) const {
        return eval(z.data());
    }
};

inline std::complex<double> evaluate(const BigradedPolynomial& p,
                                     const std::vector<std::complex<double>>& z) {
    if (static_cast<int>(z.size()) != p.n) throw std::invalid_argument("evaluate: point length != n");
    for (int j = 0; j < p.n; ++j) {
        int ma = 0, mb = 0;
        for (const auto& [k, c] : p.terms) {
            ma = std::max(ma, k.first[j]);
            mb = std::max(mb, k.second[j]);
        }
        if (ma > 16 || mb > 16) {
            // Fall back to a direct loop for unusually high degree.
            std::complex<double> acc = 0.0;
            for (const auto& [k, c] : p.terms) {
                std::complex<double> w = c.to_complex();
                for (int i = 0; i < p.n; ++i) {
                    for (int d = 0; d < k.first[i]; ++d) w *= z[i];
                    for (int d = 0; d < k.second[i]; ++d) w *= std::conj(z[i]);
                }
                acc += w;
            }
            return acc;
        }
    }
    return CompiledPolynomial(p).eval(z.data());
}

// ---------------------------------------------------------------------------
// Serialization.  One term per line:  (a1,..,an|b1,..,bn) re im
// with re and im exact rationals "num/den".  Blank lines and lines starting
// with '#' are ignored on input.
// ---------------------------------------------------------------------------

inline std::string format_polynomial(const BigradedPolynomial& p) {
    std::string out;
    for (const auto& [k, c] : p.terms) {
        out += "(" + format_multi_index(k.first) + "|" + format_multi_index(k.second) + ") " +
               format_crat(c) + "\n";
    }
    return out;
}

inline BigradedPolynomial parse_polynomial(const std::string& text, int expected_n = -1) {
    std::optional<BigradedPolynomial> p;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#') continue;
        const auto err = [&](const std::string& what) {
            throw std::invalid_argument("polynomial line " + std::to_string(lineno) + ": " + what);
        };
        const auto open = line.find('(', first);
        const auto bar = line.find('|', first);
        const auto close = line.find(')', first);
        if (open != first || bar == std::string::npos || close == std::string::npos || bar > close)
            err("expected '(alpha|beta) re im'");
        MultiIndex a = parse_multi_index(line.substr(open + 1, bar - open - 1));
        MultiIndex b = parse_multi_index(line.substr(bar + 1, close - bar - 1));
        if (a.size() != b.size()) err("alpha and beta lengths differ");
        std::istringstream rest(line.substr(close + 1));
        std::string re_s, im_s, extra;
        if (!(rest >> re_s >> im_s)) err("missing coefficient");
        if (rest >> extra) err("trailing tokens");
        const int n = static_cast<int>(a.size());
        if (expected_n > 0 && n != expected_n) err("multi-index length != n");
        if (!p)
            p = BigradedPolynomial::zero(n);
        else if (p->n != n)
            err("inconsistent multi-index lengths");
        p->add_term(std::move(a), std::move(b), CRat(parse_rational(re_s), parse_rational(im_s)));
    }
    if (!p) {
        if (expected_n <= 0) throw std::invalid_argument("empty polynomial input needs a dimension");
        p = BigradedPolynomial::zero(expected_n);
    }
    return *p;
}

}  // namespace tsm

#pragma once

// Exact scalar arithmetic.  All polynomial and radial-profile algebra in this
// library is carried out over the rationals (or Gaussian rationals); floating
// point appears only at evaluation boundaries (quadrature, sampling, fitting).

#include <boost/multiprecision/cpp_int.hpp>

#include <complex>
#include <stdexcept>
#include <string>

namespace tsm {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline double to_double(const Rational& x) { return static_cast<double>(x); }

// Textual form "num/den" with positive denominator; integers print as "k/1"
// so the grammar stays uniform for serialization.
inline std::string format_rational(const Rational& x) {
    return numerator(x).str() + "/" + denominator(x).str();
}

// Accepts "a/b" or a bare integer "a".
inline Rational parse_rational(const std::string& s) {
    const auto is_int = [](const std::string& t) {
        size_t i = (!t.empty() && (t[0] == '-' || t[0] == '+')) ? 1 : 0;
        if (i >= t.size()) return false;
        for (; i < t.size(); ++i)
            if (t[i] < '0' || t[i] > '9') return false;
        return true;
    };
    const auto slash = s.find('/');
    try {
        if (slash == std::string::npos) {
            if (!is_int(s)) throw std::invalid_argument("not an integer");
            return Rational(BigInt(s));
        }
        const std::string ns = s.substr(0, slash), ds = s.substr(slash + 1);
        if (!is_int(ns) || !is_int(ds)) throw std::invalid_argument("not an integer");
        const BigInt num(ns), den(ds);
        if (den == 0) throw std::invalid_argument("zero denominator");
        return Rational(num, den);
    } catch (const std::exception&) {
        throw std::invalid_argument("malformed rational: '" + s + "'");
    }
}

// Complex number with exact rational real and imaginary parts.
struct CRat {
    Rational re{0};
    Rational im{0};

    CRat() = default;
    CRat(Rational r) : re(std::move(r)) {}
    CRat(Rational r, Rational i) : re(std::move(r)), im(std::move(i)) {}
    CRat(long r) : re(r) {}
    CRat(long r, long i) : re(r), im(i) {}

    bool is_zero() const { return re == 0 && im == 0; }
    friend bool operator==(const CRat& a, const CRat& b) = default;

    CRat& operator+=(const CRat& o) {
        re += o.re;
        im += o.im;
        return *this;
    }
    CRat& operator-=(const CRat& o) {
        re -= o.re;
        im -= o.im;
        return *this;
    }
    friend CRat operator+(CRat a, const CRat& b) { return a += b; }
    friend CRat operator-(CRat a, const CRat& b) { return a -= b; }
    friend CRat operator-(const CRat& a) { return {-a.re, -a.im}; }
    friend CRat operator*(const CRat& a, const CRat& b) {
        return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
    }
    CRat& operator*=(const CRat& o) { return *this = *this * o; }
    friend CRat operator*(const Rational& s, const CRat& a) { return {s * a.re, s * a.im}; }

    CRat conj() const { return {re, -im}; }
    Rational norm_sq() const { return re * re + im * im; }

    friend CRat operator/(const CRat& a, const Rational& s) {
        if (s == 0) throw std::domain_error("rational division by zero");
        return {a.re / s, a.im / s};
    }
    friend CRat operator/(const CRat& a, const CRat& b) {
        const Rational n = b.norm_sq();
        if (n == 0) throw std::domain_error("complex rational division by zero");
        return (a * b.conj()) / n;
    }

    std::complex<double> to_complex() const { return {to_double(re), to_double(im)}; }
};

inline std::string format_crat(const CRat& c) {
    return format_rational(c.re) + " " + format_rational(c.im);
}

}  // namespace tsm

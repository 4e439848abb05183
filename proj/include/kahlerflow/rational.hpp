#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <complex>
#include <string>

namespace kahlerflow {

using Rational = boost::multiprecision::cpp_rational;
using Complex = std::complex<double>;

// Exact complex number with rational real and imaginary parts. Expression
// constants are kept exact so that cancellations decided by normalize() are
// true zeros, not rounding artifacts; doubles only appear at evaluation time.
struct RationalComplex {
    Rational re{0};
    Rational im{0};

    RationalComplex() = default;
    RationalComplex(Rational r) : re(std::move(r)) {}
    RationalComplex(Rational r, Rational i) : re(std::move(r)), im(std::move(i)) {}
    RationalComplex(long v) : re(v) {}
    RationalComplex(int v) : re(v) {}
    // double -> rational is exact (every finite double is rational)
    explicit RationalComplex(double v) : re(Rational(v)) {}
    explicit RationalComplex(Complex v) : re(Rational(v.real())), im(Rational(v.imag())) {}

    static RationalComplex i() { return {Rational(0), Rational(1)}; }

    bool is_zero() const { return re == 0 && im == 0; }
    bool is_real() const { return im == 0; }

    RationalComplex conj() const { return {re, -im}; }

    Complex to_complex() const { return {re.convert_to<double>(), im.convert_to<double>()}; }

    friend RationalComplex operator+(const RationalComplex& a, const RationalComplex& b) {
        return {a.re + b.re, a.im + b.im};
    }
    friend RationalComplex operator-(const RationalComplex& a, const RationalComplex& b) {
        return {a.re - b.re, a.im - b.im};
    }
    friend RationalComplex operator-(const RationalComplex& a) { return {-a.re, -a.im}; }
    friend RationalComplex operator*(const RationalComplex& a, const RationalComplex& b) {
        return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
    }
    RationalComplex inverse() const {
        Rational d = re * re + im * im;
        return {re / d, -im / d};
    }
    friend RationalComplex operator/(const RationalComplex& a, const RationalComplex& b) {
        return a * b.inverse();
    }
    friend bool operator==(const RationalComplex& a, const RationalComplex& b) {
        return a.re == b.re && a.im == b.im;
    }
    friend bool operator!=(const RationalComplex& a, const RationalComplex& b) { return !(a == b); }

    RationalComplex pow(long n) const;

    // total order (re, then im); used for canonical term ordering
    int compare(const RationalComplex& o) const {
        if (re < o.re) return -1;
        if (re > o.re) return 1;
        if (im < o.im) return -1;
        if (im > o.im) return 1;
        return 0;
    }

    std::string str() const;
};

}  // namespace kahlerflow

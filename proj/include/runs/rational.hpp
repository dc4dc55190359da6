#pragma once

#include <boost/multiprecision/cpp_int.hpp>

namespace runs {

// Exact-rational scalar used by the *_rational oracle routines.  IEEE doubles
// are dyadic rationals, so converting an input probability to cpp_rational is
// exact and the oracle reproduces the double-precision model without rounding.
using Rational = boost::multiprecision::cpp_rational;
using BigInt   = boost::multiprecision::cpp_int;

inline Rational to_rational(double x) { return Rational(x); }

inline double to_double(const Rational& r) { return r.convert_to<double>(); }

inline Rational rational_pow(const Rational& base, unsigned long e) {
    Rational acc(1);
    Rational b = base;
    while (e > 0) {
        if (e & 1UL) acc *= b;
        b *= b;
        e >>= 1UL;
    }
    return acc;
}

// Exact binomial coefficient C(n, m) via the multiplicative formula.
inline BigInt big_binomial(long n, long m) {
    if (m < 0 || m > n) return BigInt(0);
    if (m > n - m) m = n - m;
    BigInt num(1);
    for (long i = 1; i <= m; ++i) {
        num *= (n - m + i);
        num /= i;  // divides exactly: partial products are binomials
    }
    return num;
}

}  // namespace runs

#pragma once

// Exact rational scalar for oracle runs of the templated routines.

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <stdexcept>

#include "summakit/scalar.hpp"

namespace summakit {

using Rational = boost::multiprecision::cpp_rational;

template <>
struct scalar_traits<Rational> {
    static constexpr bool exact = true;

    static Rational abs(const Rational& x) { return x < 0 ? Rational(-x) : x; }
    static double to_double(const Rational& x) { return x.convert_to<double>(); }

    static Rational pow(const Rational& x, double e) {
        if (e != std::floor(e))
            throw std::domain_error("rational power needs an integral exponent");
        long long m = static_cast<long long>(e);
        const bool invert = m < 0;
        if (invert) m = -m;
        Rational result(1);
        Rational base = x;
        while (m > 0) {
            if (m & 1) result *= base;
            base *= base;
            m >>= 1;
        }
        return invert ? Rational(1 / result) : result;
    }

    static Rational from_double(double x) { return Rational(x); }
};

inline Rational make_rational(long long num, long long den = 1) {
    return Rational(num) / Rational(den);
}

} // namespace summakit

#pragma once

#include <cmath>
#include <concepts>
#include <cstddef>
#include <stdexcept>

namespace summakit {

// Customization point for the scalar types the templates run on. The primary
// path is double; rational.hpp adds an exact type for oracle comparisons.
template <typename T>
struct scalar_traits;

template <>
struct scalar_traits<double> {
    static constexpr bool exact = false;
    // Slack used when deciding whether a structural identity such as
    // "first bar column equals one" holds.
    static constexpr double identity_tolerance = 1e-12;

    static double abs(double x) { return std::fabs(x); }
    static double to_double(double x) { return x; }
    static double pow(double x, double e) { return std::pow(x, e); }
    static double from_double(double x) { return x; }
};

template <typename T>
concept Scalar = requires(T a, T b) {
    { a + b } -> std::convertible_to<T>;
    { a - b } -> std::convertible_to<T>;
    { a * b } -> std::convertible_to<T>;
    { a / b } -> std::convertible_to<T>;
    { scalar_traits<T>::abs(a) } -> std::convertible_to<T>;
    { scalar_traits<T>::to_double(a) } -> std::convertible_to<double>;
};

template <Scalar T>
T abs_value(const T& x) { return scalar_traits<T>::abs(x); }

template <Scalar T>
double to_double(const T& x) { return scalar_traits<T>::to_double(x); }

/// |x|^e for a real exponent. Exact types only support integral exponents.
template <Scalar T>
T abs_power(const T& x, double e) { return scalar_traits<T>::pow(abs_value(x), e); }

/// n^e with the convention 0^e = 1, used for the n^{k-1} and n^{1-1/k}
/// weights at n = 0.
template <Scalar T>
T index_weight(std::size_t n, double e) {
    if (n == 0 || e == 0.0) return T(1);
    return scalar_traits<T>::pow(T(static_cast<long long>(n)), e);
}

template <Scalar T>
bool near_identity(const T& x) {
    if constexpr (scalar_traits<T>::exact) {
        return x == T(0);
    } else {
        return abs_value(x) <= scalar_traits<T>::identity_tolerance;
    }
}

} // namespace summakit

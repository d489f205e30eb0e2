#pragma once

// Exact-rational reference computations written straight from the
// definitions on dense square arrays. They share no code path with the
// library beyond reading matrix entries.

#include <cstddef>
#include <vector>

#include "summakit/rational.hpp"
#include "summakit/core_matrix.hpp"

namespace oracle {

using summakit::Rational;
using Dense = std::vector<std::vector<Rational>>;

inline Dense zeros(std::size_t size) { return Dense(size, std::vector<Rational>(size, Rational(0))); }

inline Dense identity(std::size_t size) {
    Dense d = zeros(size);
    for (std::size_t i = 0; i < size; ++i) d[i][i] = 1;
    return d;
}

template <typename M>
Dense dense_of(const M& m) {
    Dense d = zeros(m.size());
    for (std::size_t n = 0; n < m.size(); ++n)
        for (std::size_t v = 0; v <= n; ++v) d[n][v] = m.at(n, v);
    return d;
}

inline Dense multiply(const Dense& x, const Dense& y) {
    const std::size_t size = x.size();
    Dense out = zeros(size);
    for (std::size_t i = 0; i < size; ++i)
        for (std::size_t j = 0; j < size; ++j) {
            Rational acc(0);
            for (std::size_t l = 0; l < size; ++l) acc += x[i][l] * y[l][j];
            out[i][j] = acc;
        }
    return out;
}

/// bar_nv = sum_{i=v}^{n} a_ni, summed from the left.
inline Dense bar(const Dense& a) {
    Dense out = zeros(a.size());
    for (std::size_t n = 0; n < a.size(); ++n)
        for (std::size_t v = 0; v <= n; ++v) {
            Rational acc(0);
            for (std::size_t i = v; i <= n; ++i) acc += a[n][i];
            out[n][v] = acc;
        }
    return out;
}

inline Dense hat(const Dense& a) {
    const Dense b = bar(a);
    Dense out = zeros(a.size());
    out[0][0] = a[0][0];
    for (std::size_t n = 1; n < a.size(); ++n)
        for (std::size_t v = 0; v <= n; ++v) out[n][v] = b[n][v] - (v <= n - 1 ? b[n - 1][v] : Rational(0));
    return out;
}

/// Closed form of the hat matrix of a Riesz matrix:
/// hat_00 = 1, hat_nv = P_{v-1} p_n / (P_n P_{n-1}) for n >= 1, v <= n.
inline Dense riesz_hat(const std::vector<Rational>& p, std::size_t order) {
    std::vector<Rational> P(order + 1);
    Rational acc(0);
    for (std::size_t i = 0; i <= order; ++i) P[i] = acc += p[i];
    auto Pm = [&](std::ptrdiff_t i) { return i < 0 ? Rational(0) : P[static_cast<std::size_t>(i)]; };
    Dense out = zeros(order + 1);
    out[0][0] = 1;
    for (std::size_t n = 1; n <= order; ++n)
        for (std::size_t v = 0; v <= n; ++v)
            out[n][v] = Pm(static_cast<std::ptrdiff_t>(v) - 1) * p[n] / (P[n] * P[n - 1]);
    return out;
}

/// Inverse of a lower-triangular matrix built row by row from X H = I
/// (the library builds columns from H X = I).
inline Dense inverse_rowwise(const Dense& h) {
    const std::size_t size = h.size();
    Dense x = zeros(size);
    for (std::size_t n = 0; n < size; ++n) {
        x[n][n] = 1 / h[n][n];
        for (std::size_t v = n; v-- > 0;) {
            Rational acc(0);
            for (std::size_t k = v + 1; k <= n; ++k) acc += x[n][k] * h[k][v];
            x[n][v] = -acc / h[v][v];
        }
    }
    return x;
}

inline std::vector<Rational> partial_sums(const std::vector<Rational>& a) {
    std::vector<Rational> s(a.size());
    Rational acc(0);
    for (std::size_t i = 0; i < a.size(); ++i) s[i] = acc += a[i];
    return s;
}

/// A_n(s) = sum_v a_nv s_v.
inline std::vector<Rational> transform(const Dense& a, const std::vector<Rational>& coeffs) {
    const auto s = partial_sums(coeffs);
    std::vector<Rational> out(a.size());
    for (std::size_t n = 0; n < a.size(); ++n) {
        Rational acc(0);
        for (std::size_t v = 0; v <= n; ++v) acc += a[n][v] * s[v];
        out[n] = acc;
    }
    return out;
}

/// Delta-bar A_n(s) as A_n(s) - A_{n-1}(s).
inline std::vector<Rational> delta_by_differences(const Dense& a, const std::vector<Rational>& coeffs) {
    const auto t = transform(a, coeffs);
    std::vector<Rational> out(t.size());
    for (std::size_t n = 0; n < t.size(); ++n) out[n] = n == 0 ? t[0] : Rational(t[n] - t[n - 1]);
    return out;
}

inline Rational abs(const Rational& x) { return x < 0 ? Rational(-x) : x; }

inline Rational ipow(const Rational& x, int k) {
    Rational out(1);
    for (int i = 0; i < k; ++i) out *= x;
    return out;
}

/// sum_{n=v}^{N} |c_nv|^k for every column v, integral k.
inline std::vector<Rational> column_sums(const Dense& c, int k) {
    std::vector<Rational> out(c.size(), Rational(0));
    for (std::size_t v = 0; v < c.size(); ++v)
        for (std::size_t n = v; n < c.size(); ++n) out[v] += ipow(abs(c[n][v]), k);
    return out;
}

/// c_nv for k = 1 (the n^{1-1/k} factor is 1), straight from its definition.
inline Dense cnv_k1(const Dense& a, const Dense& b, const std::vector<Rational>& lambda) {
    const Dense hb = hat(b);
    const std::size_t size = a.size();
    Dense c = zeros(size);
    for (std::size_t n = 1; n < size; ++n) {
        for (std::size_t v = 1; v + 1 <= n; ++v) {
            const Rational delta = hb[n][v] * lambda[v] - hb[n][v + 1] * lambda[v + 1];
            c[n][v] = delta / a[v][v] +
                      hb[n][v + 1] * lambda[v + 1] * (a[v][v] - a[v + 1][v]) / (a[v][v] * a[v + 1][v + 1]);
        }
        c[n][n] = b[n][n] * lambda[n] / a[n][n];
    }
    return c;
}

/// d_nr for k = 1.
inline Dense dnr_k1(const Dense& a, const Dense& b, const std::vector<Rational>& lambda) {
    Dense d = zeros(a.size());
    for (std::size_t n = 2; n < a.size(); ++n)
        for (std::size_t r = 0; r + 2 <= n; ++r) d[n][r] = b[n][n] * lambda[n] / a[n][n];
    return d;
}

/// Delta-bar y_n of the factored series computed through the B-transform of
/// partial sums, the route that never touches hat matrices.
inline std::vector<Rational> factored_delta(const Dense& b, const std::vector<Rational>& coeffs,
                                            const std::vector<Rational>& lambda) {
    std::vector<Rational> f(coeffs.size());
    for (std::size_t i = 0; i < coeffs.size(); ++i) f[i] = coeffs[i] * lambda[i];
    return delta_by_differences(b, f);
}

} // namespace oracle

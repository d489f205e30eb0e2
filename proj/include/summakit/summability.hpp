#pragma once

// Series samples, partial-sum transforms, the series-to-series transform and
// truncated |A|_k norms.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "summakit/core_matrix.hpp"
#include "summakit/error.hpp"
#include "summakit/scalar.hpp"

namespace summakit {

/// Coefficients a_0..a_N with cached partial sums s_n.
template <Scalar T>
class SeriesSample {
public:
    SeriesSample() = default;

    explicit SeriesSample(std::vector<T> coefficients) : coefficients_(std::move(coefficients)) {
        if (coefficients_.empty()) throw length_mismatch("series has no coefficients");
        partial_sums_.reserve(coefficients_.size());
        T running(0);
        for (const T& a : coefficients_) {
            running += a;
            partial_sums_.push_back(running);
        }
    }

    std::size_t size() const noexcept { return coefficients_.size(); }
    std::size_t order() const noexcept { return coefficients_.size() - 1; }

    const std::vector<T>& coefficients() const noexcept { return coefficients_; }
    const std::vector<T>& partial_sums() const noexcept { return partial_sums_; }

    const T& a(std::size_t n) const { return coefficients_.at(n); }
    const T& s(std::size_t n) const { return partial_sums_.at(n); }

private:
    std::vector<T> coefficients_;
    std::vector<T> partial_sums_;
};

/// Multipliers lambda_0, lambda_1, ...
template <Scalar T>
class FactorSequence {
public:
    FactorSequence() = default;
    explicit FactorSequence(std::vector<T> values) : values_(std::move(values)) {}

    std::size_t size() const noexcept { return values_.size(); }
    const T& operator[](std::size_t n) const { return values_[n]; }
    const T& at(std::size_t n) const { return values_.at(n); }
    const std::vector<T>& values() const noexcept { return values_; }

private:
    std::vector<T> values_;
};

template <Scalar T>
void require_factor_length(const FactorSequence<T>& lambda, std::size_t needed) {
    if (lambda.size() < needed)
        throw length_mismatch("factor sequence has " + std::to_string(lambda.size()) +
                              " values, need " + std::to_string(needed));
}

/// A_n(s) = sum_{v<=n} a_nv s_v.
template <Scalar T>
std::vector<T> transform_partial_sums(const NormalMatrix<T>& a, const SeriesSample<T>& s) {
    return apply_lower(a, std::span<const T>(s.partial_sums()));
}

/// Backward difference with f_{-1} = 0.
template <Scalar T>
std::vector<T> backward_differences(const std::vector<T>& f) {
    std::vector<T> out(f.size());
    for (std::size_t n = 0; n < f.size(); ++n) out[n] = n == 0 ? f[0] : T(f[n] - f[n - 1]);
    return out;
}

/// Delta-bar A_n(s) computed as first differences of the sequence transform.
template <Scalar T>
std::vector<T> delta_transform_via_differences(const NormalMatrix<T>& a, const SeriesSample<T>& s) {
    const auto transformed = transform_partial_sums(a, s);
    return backward_differences(transformed);
}

/// Delta-bar A_n(s) = sum_{i<=n} hat_ni a_i, given a precomputed hat matrix.
template <Scalar T>
std::vector<T> delta_transform_with_hat(const NormalMatrix<T>& hat, const SeriesSample<T>& s) {
    return apply_lower(hat, std::span<const T>(s.coefficients()));
}

template <Scalar T>
std::vector<T> delta_transform_via_hat(const NormalMatrix<T>& a, const SeriesSample<T>& s) {
    return delta_transform_with_hat(hat_of(a), s);
}

/// Coefficient-wise product a_n lambda_n.
template <Scalar T>
SeriesSample<T> factored_series(const SeriesSample<T>& a, const FactorSequence<T>& lambda) {
    require_factor_length(lambda, a.size());
    std::vector<T> out(a.size());
    for (std::size_t n = 0; n < a.size(); ++n) out[n] = a.a(n) * lambda[n];
    return SeriesSample<T>(std::move(out));
}

/// Terms t_n = n^{k-1} |Delta-bar A_n(s)|^k for n = 1..N and their running
/// totals. The n = 0 term, which the BK-space norms include, is kept apart
/// in `head` with weight 1.
template <Scalar T>
struct AbsKProfile {
    double k = 1.0;
    std::vector<T> delta;          // Delta-bar A_n(s), n = 0..N
    T head = T(0);                 // |Delta-bar A_0(s)|^k
    std::vector<T> terms;          // terms[n-1] = t_n
    std::vector<T> running_total;  // running_total[n-1] = t_1 + ... + t_n

    std::size_t order() const noexcept { return terms.size(); }
    const T& term(std::size_t n) const { return terms.at(n - 1); }
    T total() const { return running_total.empty() ? T(0) : running_total.back(); }

    /// The k-th power of the norm with the n = 0 term included.
    T norm_power() const { return T(head + total()); }
};

template <Scalar T>
AbsKProfile<T> profile_of_delta(std::vector<T> delta, double k) {
    require_exponent(k);
    AbsKProfile<T> out;
    out.k = k;
    if (!delta.empty()) out.head = abs_power(delta[0], k);
    T running(0);
    for (std::size_t n = 1; n < delta.size(); ++n) {
        T t = T(index_weight<T>(n, k - 1.0) * abs_power(delta[n], k));
        running += t;
        out.terms.push_back(std::move(t));
        out.running_total.push_back(running);
    }
    out.delta = std::move(delta);
    return out;
}

/// Truncated |A|_k profile of the series.
template <Scalar T>
AbsKProfile<T> abs_k_profile(const NormalMatrix<T>& a, const SeriesSample<T>& s, double k) {
    require_exponent(k);
    return profile_of_delta(delta_transform_via_hat(a, s), k);
}

/// sum_{n>=0} |d_n|, the norm of the |A| space evaluated on a transform.
template <Scalar T>
T l1_norm(const std::vector<T>& delta) {
    T acc(0);
    for (const T& d : delta) acc += abs_value(d);
    return acc;
}

/// sum_{n>=0} n^{k-1} |d_n|^k with weight 1 at n = 0 (k-th power of the |B|_k norm).
template <Scalar T>
T weighted_k_norm_power(const std::vector<T>& delta, double k) {
    require_exponent(k);
    T acc(0);
    for (std::size_t n = 0; n < delta.size(); ++n)
        acc += index_weight<T>(n, k - 1.0) * abs_power(delta[n], k);
    return acc;
}

template <Scalar T>
double weighted_k_norm(const std::vector<T>& delta, double k) {
    return std::pow(to_double(weighted_k_norm_power(delta, k)), 1.0 / k);
}

/// max |partial sum| over the given series; the scale used for relative tolerances.
template <Scalar T>
double partial_sum_scale(const SeriesSample<T>& s) {
    double scale = 0.0;
    for (const T& x : s.partial_sums()) scale = std::max(scale, std::fabs(to_double(x)));
    return scale;
}

} // namespace summakit

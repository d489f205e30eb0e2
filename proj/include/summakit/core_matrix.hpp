#pragma once

// Truncated lower-triangular matrices: the normal matrices A, B and the
// associated bar/hat matrices, their inverses and the Riesz family.
//
// Every object lives at a fixed truncation order N (indices 0..N). Because
// the matrices are lower triangular, row n of any product or transform only
// involves indices <= n, so the principal section reproduces the infinite
// objects exactly for n <= N.

#include <cstddef>
#include <span>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

#include "summakit/error.hpp"
#include "summakit/scalar.hpp"

namespace summakit {

/// Row-packed lower triangle. Entries above the diagonal are implicitly zero.
/// Used directly for semimatrices (bar matrices, c_nv, d_nr) that carry no
/// diagonal guarantee.
template <Scalar T>
class LowerTriangular {
public:
    using value_type = T;

    LowerTriangular() = default;

    explicit LowerTriangular(std::size_t order)
        : order_(order), data_(packed_size(order), T(0)) {}

    std::size_t order() const noexcept { return order_; }
    std::size_t size() const noexcept { return data_.empty() ? 0 : order_ + 1; }

    T& operator()(std::size_t n, std::size_t v) { return data_[offset(n) + v]; }
    const T& operator()(std::size_t n, std::size_t v) const { return data_[offset(n) + v]; }

    /// Bounds-checked read that returns zero above the diagonal.
    T at(std::size_t n, std::size_t v) const {
        if (n > order_) throw index_out_of_range("row " + std::to_string(n) + " beyond order");
        return v > n ? T(0) : (*this)(n, v);
    }

    std::span<const T> row(std::size_t n) const {
        return std::span<const T>(data_).subspan(offset(n), n + 1);
    }

    std::span<T> row(std::size_t n) {
        return std::span<T>(data_).subspan(offset(n), n + 1);
    }

    /// Principal section of order `order` (indices 0..order).
    LowerTriangular leading(std::size_t order) const {
        if (order > order_) throw size_mismatch("leading section larger than matrix");
        LowerTriangular out;
        out.order_ = order;
        out.data_.assign(data_.begin(), data_.begin() + static_cast<std::ptrdiff_t>(packed_size(order)));
        return out;
    }

    friend bool operator==(const LowerTriangular&, const LowerTriangular&) = default;

private:
    static std::size_t packed_size(std::size_t order) { return (order + 1) * (order + 2) / 2; }
    static std::size_t offset(std::size_t n) { return n * (n + 1) / 2; }

    std::size_t order_ = 0;
    std::vector<T> data_;
};

/// Lower-triangular matrix with every diagonal entry nonzero.
template <Scalar T>
class NormalMatrix {
public:
    using value_type = T;

    NormalMatrix() = default;

    explicit NormalMatrix(LowerTriangular<T> entries) : entries_(std::move(entries)) {
        for (std::size_t n = 0; n < entries_.size(); ++n)
            if (entries_(n, n) == T(0)) throw zero_diagonal(n);
    }

    std::size_t order() const noexcept { return entries_.order(); }
    std::size_t size() const noexcept { return entries_.size(); }

    const T& operator()(std::size_t n, std::size_t v) const { return entries_(n, v); }
    T at(std::size_t n, std::size_t v) const { return entries_.at(n, v); }
    const T& diagonal(std::size_t n) const { return entries_(n, n); }
    std::span<const T> row(std::size_t n) const { return entries_.row(n); }

    const LowerTriangular<T>& entries() const noexcept { return entries_; }

    NormalMatrix leading(std::size_t order) const { return NormalMatrix(entries_.leading(order)); }

    friend bool operator==(const NormalMatrix&, const NormalMatrix&) = default;

private:
    LowerTriangular<T> entries_;
};

/// Validating front door. Row n must hold either n+1 entries (the lower
/// triangle) or order+1 entries whose upper part is zero.
template <Scalar T>
NormalMatrix<T> make_normal(const std::vector<std::vector<T>>& rows, std::size_t order) {
    if (rows.size() != order + 1)
        throw shape_mismatch("expected " + std::to_string(order + 1) + " rows, got " +
                             std::to_string(rows.size()));
    LowerTriangular<T> lower(order);
    for (std::size_t n = 0; n <= order; ++n) {
        const auto& r = rows[n];
        if (r.size() != n + 1 && r.size() != order + 1)
            throw shape_mismatch("row " + std::to_string(n) + " has " + std::to_string(r.size()) +
                                 " entries");
        for (std::size_t v = n + 1; v < r.size(); ++v)
            if (r[v] != T(0))
                throw shape_mismatch("nonzero entry above the diagonal in row " + std::to_string(n));
        for (std::size_t v = 0; v <= n; ++v) lower(n, v) = r[v];
    }
    return NormalMatrix<T>(std::move(lower));
}

template <Scalar T>
NormalMatrix<T> identity_matrix(std::size_t order) {
    LowerTriangular<T> lower(order);
    for (std::size_t n = 0; n <= order; ++n) lower(n, n) = T(1);
    return NormalMatrix<T>(std::move(lower));
}

/// Positive weights p_0..p_M with cumulative sums P_n. P_{-1} = 0.
template <Scalar T>
class WeightSequence {
public:
    WeightSequence() = default;

    explicit WeightSequence(std::vector<T> weights) : weights_(std::move(weights)) {
        cumulative_.reserve(weights_.size());
        T running(0);
        for (std::size_t n = 0; n < weights_.size(); ++n) {
            if (!(weights_[n] > T(0)))
                throw bad_weights("weight p_" + std::to_string(n) + " is not positive");
            running += weights_[n];
            cumulative_.push_back(running);
        }
    }

    std::size_t size() const noexcept { return weights_.size(); }

    const T& p(std::size_t n) const { return weights_.at(n); }

    /// P_n, with P_n = 0 for n < 0.
    T P(std::ptrdiff_t n) const {
        if (n < 0) return T(0);
        return cumulative_.at(static_cast<std::size_t>(n));
    }

    const std::vector<T>& weights() const noexcept { return weights_; }
    const std::vector<T>& cumulative() const noexcept { return cumulative_; }

private:
    std::vector<T> weights_;
    std::vector<T> cumulative_;
};

/// Riesz matrix a_nv = p_v / P_n for v <= n.
template <Scalar T>
NormalMatrix<T> riesz_matrix(const WeightSequence<T>& w, std::size_t order) {
    if (w.size() < order + 1)
        throw length_mismatch("weight sequence shorter than order + 1");
    LowerTriangular<T> lower(order);
    for (std::size_t n = 0; n <= order; ++n) {
        const T total = w.P(static_cast<std::ptrdiff_t>(n));
        for (std::size_t v = 0; v <= n; ++v) lower(n, v) = T(w.p(v) / total);
    }
    return NormalMatrix<T>(std::move(lower));
}

/// Row tail sums: bar_nv = sum_{i=v}^{n} a_ni. Not normal in general.
template <Scalar T>
LowerTriangular<T> bar_of(const LowerTriangular<T>& a) {
    LowerTriangular<T> bar(a.order());
    for (std::size_t n = 0; n < a.size(); ++n) {
        T tail(0);
        for (std::size_t v = n + 1; v-- > 0;) {
            tail += a(n, v);
            bar(n, v) = tail;
        }
    }
    return bar;
}

template <Scalar T>
LowerTriangular<T> bar_of(const NormalMatrix<T>& a) { return bar_of(a.entries()); }

/// Series-to-series matrix: hat_00 = a_00, hat_nv = bar_nv - bar_{n-1,v}.
/// The diagonal equals the diagonal of A, so the result is normal.
template <Scalar T>
NormalMatrix<T> hat_of(const NormalMatrix<T>& a) {
    const LowerTriangular<T> bar = bar_of(a);
    LowerTriangular<T> hat(a.order());
    for (std::size_t n = 0; n < a.size(); ++n) {
        for (std::size_t v = 0; v < n; ++v) hat(n, v) = T(bar(n, v) - bar(n - 1, v));
        hat(n, n) = bar(n, n);
    }
    return NormalMatrix<T>(std::move(hat));
}

/// Inverse of a normal matrix by column-wise forward substitution.
/// Solves H X = I one column at a time; for triangular H this X is also the
/// left inverse, so sum_k x_nk h_kv = delta_nv holds as well.
template <Scalar T>
NormalMatrix<T> invert_lower(const NormalMatrix<T>& h) {
    const std::size_t size = h.size();
    LowerTriangular<T> inv(h.order());
    for (std::size_t v = 0; v < size; ++v) {
        inv(v, v) = T(T(1) / h.diagonal(v));
        for (std::size_t n = v + 1; n < size; ++n) {
            T acc(0);
            for (std::size_t k = v; k < n; ++k) acc += h(n, k) * inv(k, v);
            inv(n, v) = T(-acc / h.diagonal(n));
        }
    }
    return NormalMatrix<T>(std::move(inv));
}

template <Scalar T>
NormalMatrix<T> invert_hat(const NormalMatrix<T>& hat) { return invert_lower(hat); }

/// result_n = sum_{v<=n} m_nv x_v for n = 0..order.
template <Scalar T>
std::vector<T> apply_lower(const LowerTriangular<T>& m, std::type_identity_t<std::span<const T>> x) {
    if (x.size() < m.size())
        throw length_mismatch("sequence of length " + std::to_string(x.size()) +
                              " is shorter than matrix size " + std::to_string(m.size()));
    std::vector<T> out(m.size(), T(0));
    for (std::size_t n = 0; n < m.size(); ++n) {
        T acc(0);
        const auto r = m.row(n);
        for (std::size_t v = 0; v <= n; ++v) acc += r[v] * x[v];
        out[n] = acc;
    }
    return out;
}

template <Scalar T>
std::vector<T> apply_lower(const NormalMatrix<T>& m, std::type_identity_t<std::span<const T>> x) {
    return apply_lower(m.entries(), x);
}

} // namespace summakit

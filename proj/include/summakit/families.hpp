#pragma once

// Named matrix, weight, factor and series families. A family can be
// materialized at any order it supports; the closed-form families reach any
// order, which is what the tail sums of C10, C11 and W_n need.

#include <cmath>
#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "summakit/core_matrix.hpp"
#include "summakit/error.hpp"
#include "summakit/summability.hpp"

namespace summakit {

/// Weights p_n, either from a generator (unbounded) or an explicit list.
class WeightFamily {
public:
    static WeightFamily constant(double c) {
        if (!(c > 0.0)) throw bad_weights("constant weight must be positive");
        return WeightFamily("constant", [c](std::size_t) { return c; });
    }

    /// p_n = (n+1)^alpha
    static WeightFamily power(double alpha) {
        return WeightFamily("power", [alpha](std::size_t n) { return std::pow(static_cast<double>(n + 1), alpha); });
    }

    /// p_n = ratio^n
    static WeightFamily geometric(double ratio) {
        if (!(ratio > 0.0)) throw bad_weights("geometric ratio must be positive");
        return WeightFamily("geometric", [ratio](std::size_t n) { return std::pow(ratio, static_cast<double>(n)); });
    }

    static WeightFamily explicit_values(std::vector<double> values) {
        if (values.empty()) throw bad_weights("explicit weight list is empty");
        WeightFamily f;
        f.name_ = "explicit";
        f.values_ = std::move(values);
        return f;
    }

    const std::string& name() const noexcept { return name_; }
    bool bounded() const noexcept { return values_.has_value(); }
    std::optional<std::size_t> max_order() const {
        if (!values_) return std::nullopt;
        return values_->size() - 1;
    }

    /// p_0..p_order. Bounded families throw tail_unavailable past their end
    /// unless `allow_cap`, in which case the available prefix is returned.
    WeightSequence<double> sequence(std::size_t order, bool allow_cap = false) const {
        if (values_) {
            if (values_->size() >= order + 1)
                return WeightSequence<double>(std::vector<double>(values_->begin(), values_->begin() + static_cast<std::ptrdiff_t>(order + 1)));
            if (!allow_cap)
                throw tail_unavailable("explicit weights end at index " + std::to_string(values_->size() - 1) +
                                       ", index " + std::to_string(order) + " requested");
            return WeightSequence<double>(*values_);
        }
        std::vector<double> p(order + 1);
        for (std::size_t n = 0; n <= order; ++n) p[n] = generator_(n);
        return WeightSequence<double>(std::move(p));
    }

private:
    WeightFamily() = default;
    WeightFamily(std::string name, std::function<double(std::size_t)> gen)
        : name_(std::move(name)), generator_(std::move(gen)) {}

    std::string name_;
    std::function<double(std::size_t)> generator_;
    std::optional<std::vector<double>> values_;
};

class MatrixFamily {
public:
    static MatrixFamily identity() {
        MatrixFamily f;
        f.name_ = "identity";
        return f;
    }

    static MatrixFamily cesaro() {
        MatrixFamily f = riesz(WeightFamily::constant(1.0));
        f.name_ = "cesaro";
        return f;
    }

    static MatrixFamily riesz(WeightFamily weights) {
        MatrixFamily f;
        f.name_ = "riesz";
        f.weights_ = std::move(weights);
        return f;
    }

    static MatrixFamily explicit_matrix(NormalMatrix<double> m) {
        MatrixFamily f;
        f.name_ = "explicit";
        f.explicit_ = std::move(m);
        return f;
    }

    const std::string& name() const noexcept { return name_; }
    const std::optional<WeightFamily>& weights() const noexcept { return weights_; }
    bool is_riesz() const noexcept { return weights_.has_value(); }

    std::optional<std::size_t> max_order() const {
        if (explicit_) return explicit_->order();
        if (weights_) return weights_->max_order();
        return std::nullopt;
    }

    /// The principal section of order `order`. Bounded sources return their
    /// own size when `allow_cap` is set and throw tail_unavailable otherwise.
    NormalMatrix<double> materialize(std::size_t order, bool allow_cap = false) const {
        if (const auto top = max_order(); top && *top < order) {
            if (!allow_cap)
                throw tail_unavailable(name_ + " matrix is only available up to order " + std::to_string(*top) +
                                       ", order " + std::to_string(order) + " requested");
            order = *top;
        }
        if (explicit_) return explicit_->leading(order);
        if (weights_) return riesz_matrix(weights_->sequence(order), order);
        return identity_matrix<double>(order);
    }

private:
    std::string name_;
    std::optional<WeightFamily> weights_;
    std::optional<NormalMatrix<double>> explicit_;
};

/// lambda_n = c n^alpha for n >= 1. At n = 0 the value is c when alpha <= 0
/// (0^0 = 1 and the singular negative powers are pinned to their n = 1 value)
/// and 0 when alpha > 0.
inline FactorSequence<double> power_factors(std::size_t length, double c, double alpha) {
    std::vector<double> out(length);
    for (std::size_t n = 0; n < length; ++n)
        out[n] = n == 0 ? (alpha > 0.0 ? 0.0 : c) : c * std::pow(static_cast<double>(n), alpha);
    return FactorSequence<double>(std::move(out));
}

inline FactorSequence<double> constant_factors(std::size_t length, double c) {
    return FactorSequence<double>(std::vector<double>(length, c));
}

/// Boundary of C9: lambda_n = c n^{1/k-1} a_nn / b_nn (weight 1 at n = 0).
inline FactorSequence<double> adapted_factors(const NormalMatrix<double>& a, const NormalMatrix<double>& b,
                                              double k, double c, std::size_t length) {
    if (a.size() < length || b.size() < length) throw length_mismatch("matrices shorter than factor length");
    std::vector<double> out(length);
    for (std::size_t n = 0; n < length; ++n) {
        const double w = n == 0 ? 1.0 : std::pow(static_cast<double>(n), 1.0 / k - 1.0);
        out[n] = c * w * a.diagonal(n) / b.diagonal(n);
    }
    return FactorSequence<double>(std::move(out));
}

/// a_n = (-1)^n / (n+1)^beta
inline SeriesSample<double> alternating_series(std::size_t order, double beta) {
    std::vector<double> out(order + 1);
    for (std::size_t n = 0; n <= order; ++n)
        out[n] = (n % 2 == 0 ? 1.0 : -1.0) / std::pow(static_cast<double>(n + 1), beta);
    return SeriesSample<double>(std::move(out));
}

} // namespace summakit

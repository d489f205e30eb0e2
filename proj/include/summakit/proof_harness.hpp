#pragma once

// Numerical replay of the constructions used to prove the factor theorem:
// the coordinate probes behind the necessity half, the T_n(1) + T_n(2)
// decomposition of the sufficiency half, the inverse-entry identity that
// links them, and the c_nv / d_nr matrices handed to the l1 -> lk bound.
//
// Everything here is templated on the scalar so the identities can be
// checked exactly with Rational as well as in double.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "summakit/core_matrix.hpp"
#include "summakit/error.hpp"
#include "summakit/reading.hpp"
#include "summakit/scalar.hpp"
#include "summakit/summability.hpp"

namespace summakit {

/// A, B and lambda together with the derived matrices every construction needs.
template <Scalar T>
class ProofContext {
public:
    ProofContext(NormalMatrix<T> a, NormalMatrix<T> b, FactorSequence<T> lambda)
        : a_(std::move(a)), b_(std::move(b)), lambda_(std::move(lambda)) {
        if (a_.order() != b_.order()) throw size_mismatch("A and B differ in order");
        require_factor_length(lambda_, a_.size());
        hat_a_ = hat_of(a_);
        hat_b_ = hat_of(b_);
        inv_hat_a_ = invert_hat(hat_a_);
        bar_a_ = bar_of(a_);
        bar_b_ = bar_of(b_);
    }

    std::size_t order() const noexcept { return a_.order(); }

    const NormalMatrix<T>& a() const noexcept { return a_; }
    const NormalMatrix<T>& b() const noexcept { return b_; }
    const FactorSequence<T>& lambda() const noexcept { return lambda_; }
    const NormalMatrix<T>& hat_a() const noexcept { return hat_a_; }
    const NormalMatrix<T>& hat_b() const noexcept { return hat_b_; }
    const NormalMatrix<T>& inv_hat_a() const noexcept { return inv_hat_a_; }
    const LowerTriangular<T>& bar_a() const noexcept { return bar_a_; }
    const LowerTriangular<T>& bar_b() const noexcept { return bar_b_; }

    /// Delta_v(b_hat_nv lambda_v) = b_hat_nv lambda_v - b_hat_{n,v+1} lambda_{v+1}.
    T delta_v_hat_b(std::size_t n, std::size_t v) const {
        return T(hat_b_.at(n, v) * lambda_[v] - hat_b_.at(n, v + 1) * lambda_[v + 1]);
    }

    /// (a_vv - a_{v+1,v}) / (a_vv a_{v+1,v+1})
    T adjacent_factor(std::size_t v) const {
        return T((a_.diagonal(v) - a_(v + 1, v)) / (a_.diagonal(v) * a_.diagonal(v + 1)));
    }

    /// True when bar a_n0 = bar b_n0 = 1 for every n (C13 and C14).
    bool first_bar_columns_unit() const {
        for (std::size_t n = 0; n < a_.size(); ++n)
            if (!near_identity(T(bar_a_(n, 0) - T(1))) || !near_identity(T(bar_b_(n, 0) - T(1))))
                return false;
        return true;
    }

private:
    NormalMatrix<T> a_, b_;
    FactorSequence<T> lambda_;
    NormalMatrix<T> hat_a_, hat_b_, inv_hat_a_;
    LowerTriangular<T> bar_a_, bar_b_;
};

enum class ProbeKind { difference, shift };

inline std::string_view to_string(ProbeKind kind) {
    return kind == ProbeKind::difference ? "difference" : "shift";
}

template <Scalar T>
struct ProbeResult {
    ProbeKind kind = ProbeKind::difference;
    std::size_t v = 0;
    double k = 1.0;
    std::vector<T> delta_x;     // generic transform of the probe series under A
    std::vector<T> delta_y;     // generic transform of the factored probe under B
    std::vector<T> piecewise_x; // closed forms
    std::vector<T> piecewise_y;
    T discrepancy = T(0);       // max |generic - piecewise| over both sequences
    double x_norm = 0.0;
    double y_norm = 0.0;
    double y_diagonal_term = 0.0; // the n = v contribution to |Y|^k
    double y_tail_term = 0.0;     // sum_{n > v} n^{k-1} |Delta-bar y_n|^k
};

template <Scalar T>
SeriesSample<T> probe_series(std::size_t order, std::size_t v, ProbeKind kind) {
    if (v + 1 > order) throw index_out_of_range("probe index v + 1 must not exceed the order");
    std::vector<T> coeffs(order + 1, T(0));
    if (kind == ProbeKind::difference) {
        coeffs[v] = T(1);
        coeffs[v + 1] = T(-1);
    } else {
        coeffs[v + 1] = T(1);
    }
    return SeriesSample<T>(std::move(coeffs));
}

/// Apply the transforms to e_v - e_{v+1} (difference) or e_{v+1} (shift),
/// both generically and through the piecewise closed forms, and evaluate the
/// |A| and |B|_k norms of the results.
template <Scalar T>
ProbeResult<T> run_probe(const ProofContext<T>& ctx, std::size_t v, ProbeKind kind, double k,
                         Reading reading = Reading::consistent) {
    require_exponent(k);
    const std::size_t order = ctx.order();
    const auto series = probe_series<T>(order, v, kind);

    ProbeResult<T> out;
    out.kind = kind;
    out.v = v;
    out.k = k;
    out.delta_x = delta_transform_with_hat(ctx.hat_a(), series);
    out.delta_y = delta_transform_with_hat(ctx.hat_b(), factored_series(series, ctx.lambda()));

    const auto& ha = ctx.hat_a();
    const auto& hb = ctx.hat_b();
    const auto& lambda = ctx.lambda();
    out.piecewise_x.assign(order + 1, T(0));
    out.piecewise_y.assign(order + 1, T(0));
    if (kind == ProbeKind::difference) {
        out.piecewise_x[v] = ha(v, v);
        out.piecewise_y[v] = T(hb(v, v) * lambda[v]);
        for (std::size_t n = v + 1; n <= order; ++n) {
            out.piecewise_x[n] = T(ha(n, v) - ha(n, v + 1));
            out.piecewise_y[n] = ctx.delta_v_hat_b(n, v);
        }
    } else {
        for (std::size_t n = v + 1; n <= order; ++n) {
            out.piecewise_x[n] = ha(n, v + 1);
            out.piecewise_y[n] = T(hb(n, v + 1) * lambda[v + 1]);
        }
    }

    for (std::size_t n = 0; n <= order; ++n) {
        const T dx = abs_value(T(out.delta_x[n] - out.piecewise_x[n]));
        const T dy = abs_value(T(out.delta_y[n] - out.piecewise_y[n]));
        if (dx > out.discrepancy) out.discrepancy = dx;
        if (dy > out.discrepancy) out.discrepancy = dy;
    }

    out.x_norm = to_double(l1_norm(out.piecewise_x));

    const double vw = v == 0 ? 1.0 : std::pow(static_cast<double>(v), k - 1.0);
    if (kind == ProbeKind::difference) {
        const double lam = std::fabs(to_double(lambda[v]));
        const double bvv = std::fabs(to_double(ctx.b().diagonal(v)));
        out.y_diagonal_term = reading == Reading::consistent ? vw * std::pow(bvv * lam, k)
                                                             : vw * bvv * std::pow(lam, k);
    }
    double tail = 0.0;
    for (std::size_t n = v + 1; n <= order; ++n)
        tail += std::pow(static_cast<double>(n), k - 1.0) *
                std::pow(std::fabs(to_double(out.piecewise_y[n])), k);
    out.y_tail_term = tail;
    out.y_norm = std::pow(out.y_diagonal_term + out.y_tail_term, 1.0 / k);
    return out;
}

/// |Y| / |X| for one probe; the constant M of the norm inequality must dominate it.
template <Scalar T>
double norm_ratio(const ProbeResult<T>& probe) {
    if (probe.x_norm == 0.0)
        throw degenerate_probe("probe at v = " + std::to_string(probe.v) + " has |X| = 0");
    return probe.y_norm / probe.x_norm;
}

struct ProbeRecord {
    ProbeKind kind;
    std::size_t v;
    double x_norm;
    double y_norm;
    double ratio;
};

template <Scalar T>
struct ProbeSweep {
    std::vector<ProbeRecord> records;
    double max_ratio = 0.0;  // empirical M
    T max_discrepancy = T(0);
};

/// Both probe kinds for v = 1..N-1; the empirical M is the largest ratio seen.
template <Scalar T>
ProbeSweep<T> probe_sweep(const ProofContext<T>& ctx, double k, Reading reading = Reading::consistent) {
    ProbeSweep<T> out;
    for (std::size_t v = 1; v < ctx.order(); ++v) {
        for (ProbeKind kind : {ProbeKind::difference, ProbeKind::shift}) {
            const auto probe = run_probe(ctx, v, kind, k, reading);
            const double ratio = norm_ratio(probe);
            out.records.push_back({kind, v, probe.x_norm, probe.y_norm, ratio});
            out.max_ratio = std::max(out.max_ratio, ratio);
            if (probe.discrepancy > out.max_discrepancy) out.max_discrepancy = probe.discrepancy;
        }
    }
    return out;
}

template <Scalar T>
struct Decomposition {
    std::vector<T> delta_x;
    std::vector<T> delta_y;
    std::vector<T> t1;
    std::vector<T> t2;
    // Terms in Delta-bar x_0 that vanish when bar a_n0 = bar b_n0 = 1:
    // (b_hat_n0 lambda_0 a_hat'_00 + b_hat_n1 lambda_1 a_hat'_10) Delta-bar x_0.
    std::vector<T> boundary;
    bool boundary_retained = false;
    T residual = T(0);
    double scale = 0.0;
};

/// Split Delta-bar y_n = T_n(1) + T_n(2) (+ boundary terms when the first bar
/// columns are not identically one) and report the residual against the
/// directly computed Delta-bar y.
template <Scalar T>
Decomposition<T> decompose(const ProofContext<T>& ctx, const SeriesSample<T>& series) {
    const std::size_t order = ctx.order();
    if (series.size() < order + 1) throw size_mismatch("series shorter than the matrices");
    const auto& a = ctx.a();
    const auto& b = ctx.b();
    const auto& hb = ctx.hat_b();
    const auto& inv = ctx.inv_hat_a();
    const auto& lambda = ctx.lambda();
    const auto factored = factored_series(series, lambda);

    Decomposition<T> out;
    out.delta_x = delta_transform_with_hat(ctx.hat_a(), series);
    out.delta_y = delta_transform_with_hat(hb, factored);
    out.boundary_retained = !ctx.first_bar_columns_unit();
    out.scale = std::max(partial_sum_scale(series), partial_sum_scale(factored));
    const auto& dx = out.delta_x;

    out.t1.assign(order + 1, T(0));
    out.t2.assign(order + 1, T(0));
    out.boundary.assign(order + 1, T(0));
    for (std::size_t n = 0; n <= order; ++n) {
        T t1 = T(b.diagonal(n) * lambda[n] / a.diagonal(n) * dx[n]);
        for (std::size_t v = 1; v + 1 <= n; ++v) {
            t1 += ctx.delta_v_hat_b(n, v) / a.diagonal(v) * dx[v];
            t1 += hb(n, v + 1) * lambda[v + 1] * ctx.adjacent_factor(v) * dx[v];
        }
        out.t1[n] = t1;

        T t2(0);
        for (std::size_t r = 0; r + 2 <= n; ++r) {
            T inner(0);
            for (std::size_t v = r + 2; v <= n; ++v) inner += hb(n, v) * lambda[v] * inv(v, r);
            t2 += dx[r] * inner;
        }
        out.t2[n] = t2;

        if (n >= 1)
            out.boundary[n] =
                T((hb(n, 0) * lambda[0] * inv(0, 0) + hb(n, 1) * lambda[1] * inv(1, 0)) * dx[0]);

        T diff = T(out.delta_y[n] - out.t1[n] - out.t2[n]);
        if (out.boundary_retained) diff -= out.boundary[n];
        const T r = abs_value(diff);
        if (r > out.residual) out.residual = r;
    }
    return out;
}

/// |LHS - RHS| of
///   b_hat_nv l_v a_hat'_vv + b_hat_{n,v+1} l_{v+1} a_hat'_{v+1,v}
///     = Delta_v(b_hat_nv l_v) / a_vv + b_hat_{n,v+1} l_{v+1} (a_vv - a_{v+1,v}) / (a_vv a_{v+1,v+1})
/// for 1 <= v <= n-1. The left side uses the computed inverse, the right side only A.
template <Scalar T>
T key_identity_check(const ProofContext<T>& ctx, std::size_t n, std::size_t v) {
    if (v < 1 || v + 1 > n || n > ctx.order())
        throw index_out_of_range("key identity needs 1 <= v <= n-1 <= N-1");
    const auto& hb = ctx.hat_b();
    const auto& inv = ctx.inv_hat_a();
    const auto& lambda = ctx.lambda();
    const T lhs = T(hb(n, v) * lambda[v] * inv(v, v) + hb(n, v + 1) * lambda[v + 1] * inv(v + 1, v));
    const T rhs = T(ctx.delta_v_hat_b(n, v) / ctx.a().diagonal(v) +
                    hb(n, v + 1) * lambda[v + 1] * ctx.adjacent_factor(v));
    return abs_value(T(lhs - rhs));
}

template <Scalar T>
T key_identity_check(const NormalMatrix<T>& a, const NormalMatrix<T>& b,
                     const FactorSequence<T>& lambda, std::size_t n, std::size_t v) {
    return key_identity_check(ProofContext<T>(a, b, lambda), n, v);
}

/// Max of key_identity_check over every admissible (n, v).
template <Scalar T>
T key_identity_sweep(const ProofContext<T>& ctx) {
    T worst(0);
    for (std::size_t n = 2; n <= ctx.order(); ++n)
        for (std::size_t v = 1; v + 1 <= n; ++v) {
            const T d = key_identity_check(ctx, n, v);
            if (d > worst) worst = d;
        }
    return worst;
}

/// |(bar a_{v+1,v} - bar a_vv) - (a_{v+1,v+1} + a_{v+1,v} - a_vv)|, the bar-algebra
/// step inside the key identity.
template <Scalar T>
T bar_step_discrepancy(const ProofContext<T>& ctx, std::size_t v) {
    if (v + 1 > ctx.order()) throw index_out_of_range("bar step needs v + 1 <= N");
    const auto& a = ctx.a();
    const auto& bar = ctx.bar_a();
    return abs_value(T((bar(v + 1, v) - bar(v, v)) - (a(v + 1, v + 1) + a(v + 1, v) - a(v, v))));
}

/// c_nv = n^{1-1/k} [Delta_v(b_hat_nv l_v)/a_vv + b_hat_{n,v+1} l_{v+1} (a_vv - a_{v+1,v})/(a_vv a_{v+1,v+1})]
/// for 1 <= v <= n-1, c_nn = n^{1-1/k} b_nn l_n / a_nn for n >= 1; row 0 and
/// column 0 are zero. Reading::literal takes the difference on b instead of b_hat.
template <Scalar T>
LowerTriangular<T> build_cnv(const ProofContext<T>& ctx, double k, Reading reading = Reading::consistent) {
    require_exponent(k);
    const std::size_t order = ctx.order();
    const auto& a = ctx.a();
    const auto& b = ctx.b();
    const auto& hb = ctx.hat_b();
    const auto& lambda = ctx.lambda();
    LowerTriangular<T> c(order);
    for (std::size_t n = 1; n <= order; ++n) {
        const T w = index_weight<T>(n, 1.0 - 1.0 / k);
        for (std::size_t v = 1; v + 1 <= n; ++v) {
            const T diff = reading == Reading::consistent
                               ? ctx.delta_v_hat_b(n, v)
                               : T(b(n, v) * lambda[v] - b(n, v + 1) * lambda[v + 1]);
            c(n, v) = T(w * (diff / a.diagonal(v) + hb(n, v + 1) * lambda[v + 1] * ctx.adjacent_factor(v)));
        }
        c(n, n) = T(w * b.diagonal(n) * lambda[n] / a.diagonal(n));
    }
    return c;
}

/// d_nr = n^{1-1/k} b_nn l_n / a_nn for 0 <= r <= n-2, zero otherwise.
template <Scalar T>
LowerTriangular<T> build_dnr(const ProofContext<T>& ctx, double k) {
    require_exponent(k);
    const std::size_t order = ctx.order();
    LowerTriangular<T> d(order);
    for (std::size_t n = 2; n <= order; ++n) {
        const T value = T(index_weight<T>(n, 1.0 - 1.0 / k) * ctx.b().diagonal(n) * ctx.lambda()[n] /
                          ctx.a().diagonal(n));
        for (std::size_t r = 0; r + 2 <= n; ++r) d(n, r) = value;
    }
    return d;
}

/// Column sums sum_n |c_nv|^k of the T_n(1) operator. The consistent reading is
/// the literal column sum of build_cnv; Reading::literal evaluates the verbatim
/// form, which weights |bracket|^k by n^{1-1/k} instead of n^{k-1}.
template <Scalar T>
std::vector<double> cnv_column_sums(const ProofContext<T>& ctx, double k, Reading reading = Reading::consistent) {
    require_exponent(k);
    const auto c = build_cnv(ctx, k, reading);
    std::vector<double> sums(c.size(), 0.0);
    for (std::size_t n = 1; n < c.size(); ++n) {
        const double nd = static_cast<double>(n);
        const double strip = std::pow(nd, 1.0 - 1.0 / k);  // c_nv = strip * bracket
        const double weight = reading == Reading::consistent ? std::pow(nd, k - 1.0) : strip;
        for (std::size_t v = 1; v <= n; ++v) {
            const double bracket = to_double(c(n, v)) / strip;
            sums[v] += weight * std::pow(std::fabs(bracket), k);
        }
    }
    return sums;
}

/// sum_{n>=2} n^{k-1} |T_n(2)|^k.
template <Scalar T>
double t2_k_sum(const Decomposition<T>& d, double k) {
    require_exponent(k);
    double acc = 0.0;
    for (std::size_t n = 2; n < d.t2.size(); ++n)
        acc += std::pow(static_cast<double>(n), k - 1.0) * std::pow(std::fabs(to_double(d.t2[n])), k);
    return acc;
}

} // namespace summakit

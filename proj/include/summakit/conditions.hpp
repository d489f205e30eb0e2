#pragma once

// Boundedness diagnostics for the factor conditions C9-C16, the Riesz
// conditions (a)-(c) with the tail quantity W_n, and the l1 -> lk column bound.
//
// An O(.) statement cannot be decided from a finite section. Each checker
// reports the ratio sequence whose supremum would be the implied constant,
// plus a heuristic trend. Infinite sums are cut at TailSpec::cutoff and the
// cut is reported alongside the ratios.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "summakit/core_matrix.hpp"
#include "summakit/error.hpp"
#include "summakit/reading.hpp"
#include "summakit/scalar.hpp"
#include "summakit/summability.hpp"

namespace summakit {

enum class ConditionId { C9, C10, C11, C12, C13, C14, C15, C16, TA_a, TA_b, TA_c, L1LK };

inline constexpr std::array<ConditionId, 12> all_condition_ids{
    ConditionId::C9,   ConditionId::C10,  ConditionId::C11,  ConditionId::C12,
    ConditionId::C13,  ConditionId::C14,  ConditionId::C15,  ConditionId::C16,
    ConditionId::TA_a, ConditionId::TA_b, ConditionId::TA_c, ConditionId::L1LK};

inline std::string_view to_string(ConditionId id) {
    switch (id) {
        case ConditionId::C9: return "C9";
        case ConditionId::C10: return "C10";
        case ConditionId::C11: return "C11";
        case ConditionId::C12: return "C12";
        case ConditionId::C13: return "C13";
        case ConditionId::C14: return "C14";
        case ConditionId::C15: return "C15";
        case ConditionId::C16: return "C16";
        case ConditionId::TA_a: return "TA_a";
        case ConditionId::TA_b: return "TA_b";
        case ConditionId::TA_c: return "TA_c";
        case ConditionId::L1LK: return "L1LK";
    }
    return "?";
}

inline bool parse_condition_id(std::string_view text, ConditionId& out) {
    for (ConditionId id : all_condition_ids)
        if (to_string(id) == text) {
            out = id;
            return true;
        }
    return false;
}

enum class Trend { bounded_looking, growing, inconclusive };

inline std::string_view to_string(Trend t) {
    switch (t) {
        case Trend::bounded_looking: return "bounded-looking";
        case Trend::growing: return "growing";
        case Trend::inconclusive: return "inconclusive";
    }
    return "?";
}

/// Finite surrogate for sum_{n=v+1}^{infinity}.
struct TailSpec {
    std::size_t cutoff = 0;
    double warn_threshold = 1e-6;
    // Sources that cannot reach `cutoff` are cut at their own size (with every
    // row flagged) instead of raising tail_unavailable.
    bool allow_cap = false;

    static TailSpec default_for(std::size_t order) { return TailSpec{16 * order, 1e-6, false}; }
};

inline void validate_tail(const TailSpec& tail, std::size_t order) {
    if (tail.cutoff <= order)
        throw bad_tail("tail cutoff " + std::to_string(tail.cutoff) +
                       " must exceed the order " + std::to_string(order));
    if (!(tail.warn_threshold > 0.0 && tail.warn_threshold < 1.0))
        throw bad_tail("tail warn_threshold must lie in (0, 1)");
}

struct ConditionReport {
    ConditionId id = ConditionId::C9;
    std::size_t first_index = 0;  // index (n or v) of ratios[0]
    std::vector<double> numerators;
    std::vector<double> denominators;
    std::vector<double> ratios;
    std::vector<double> running_sup;
    std::vector<bool> tail_warnings;  // empty unless the condition has a tail
    // Indices where the denominator vanished under a nonzero numerator; the
    // ratio slot then holds the bare numerator and the trend is forced to growing.
    std::vector<std::size_t> singular;
    double sup_ratio = 0.0;
    Trend trend = Trend::inconclusive;
    std::size_t tail_cutoff = 0;  // 0 when no infinite sum is involved
    bool tail_capped = false;

    std::size_t size() const noexcept { return ratios.size(); }
    std::size_t index(std::size_t i) const noexcept { return first_index + i; }

    bool any_tail_warning() const {
        return std::any_of(tail_warnings.begin(), tail_warnings.end(), [](bool b) { return b; });
    }
};

namespace detail {

inline constexpr double slope_tolerance = 1e-9;
inline constexpr double structural_tolerance = 1e-12;
// Ratio sequences whose magnitude never leaves this band are rounding noise
// around an exact zero.
inline constexpr double noise_floor = 1e-10;

} // namespace detail

/// Heuristic verdict on a ratio sequence:
/// bounded-looking when the least-squares slope of the last quartile against
/// log(index) is <= 0 (up to rounding noise relative to the quartile mean),
/// growing when the ratio at least doubles between index N/2 and N,
/// inconclusive otherwise. A sequence that stays within the noise floor is
/// bounded-looking.
inline Trend classify_trend(std::span<const double> ratios, std::size_t first_index) {
    const std::size_t len = ratios.size();
    if (len == 0) return Trend::inconclusive;
    if (std::all_of(ratios.begin(), ratios.end(), [](double r) { return std::fabs(r) <= detail::noise_floor; }))
        return Trend::bounded_looking;
    if (len < 4) return Trend::inconclusive;

    std::size_t start = std::min(3 * len / 4, len - 2);
    const double count = static_cast<double>(len - start);
    double mx = 0.0, my = 0.0, mabs = 0.0;
    for (std::size_t i = start; i < len; ++i) {
        mx += std::log(static_cast<double>(std::max<std::size_t>(first_index + i, 1)));
        my += ratios[i];
        mabs += std::fabs(ratios[i]);
    }
    mx /= count;
    my /= count;
    mabs /= count;
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = start; i < len; ++i) {
        const double dx = std::log(static_cast<double>(std::max<std::size_t>(first_index + i, 1))) - mx;
        sxy += dx * (ratios[i] - my);
        sxx += dx * dx;
    }
    const double slope = sxx > 0.0 ? sxy / sxx : 0.0;
    if (slope <= detail::slope_tolerance * mabs) return Trend::bounded_looking;

    const std::size_t last_index = first_index + len - 1;
    const std::size_t mid_index = std::max(last_index / 2, first_index);
    const double mid = ratios[mid_index - first_index];
    const double last = ratios.back();
    if (mid > 0.0 ? last >= 2.0 * mid : last > 0.0) return Trend::growing;
    return Trend::inconclusive;
}

/// Verdict for exact structural hypotheses C12-C14: every violation must vanish.
inline Trend classify_structural(std::span<const double> violations) {
    for (double r : violations)
        if (r > detail::structural_tolerance) return Trend::growing;
    return Trend::bounded_looking;
}

namespace detail {

inline void finish_ratios(ConditionReport& report) {
    const std::size_t len = report.numerators.size();
    report.ratios.resize(len);
    report.running_sup.resize(len);
    double sup = 0.0;
    for (std::size_t i = 0; i < len; ++i) {
        const double num = report.numerators[i];
        const double den = report.denominators[i];
        double r;
        if (den != 0.0) {
            r = num / den;
        } else if (num == 0.0) {
            r = 0.0;
        } else {
            r = num;
            report.singular.push_back(report.index(i));
        }
        report.ratios[i] = r;
        sup = i == 0 ? r : std::max(sup, r);
        report.running_sup[i] = sup;
    }
    report.sup_ratio = len == 0 ? 0.0 : sup;
}

inline ConditionReport asymptotic_report(ConditionId id, std::size_t first_index,
                                         std::vector<double> numerators,
                                         std::vector<double> denominators) {
    ConditionReport report;
    report.id = id;
    report.first_index = first_index;
    report.numerators = std::move(numerators);
    report.denominators = std::move(denominators);
    finish_ratios(report);
    report.trend = report.singular.empty() ? classify_trend(report.ratios, first_index) : Trend::growing;
    return report;
}

inline ConditionReport structural_report(ConditionId id, std::size_t first_index,
                                         std::vector<double> violations) {
    ConditionReport report;
    report.id = id;
    report.first_index = first_index;
    report.numerators = std::move(violations);
    report.denominators.assign(report.numerators.size(), 1.0);
    finish_ratios(report);
    report.trend = classify_structural(report.ratios);
    return report;
}

/// hat entries b_hat(n, v) for rows 0..rows_order and columns 0..columns,
/// stored row-major with stride columns + 1. Same accumulation order as hat_of.
class HatColumns {
public:
    HatColumns(const NormalMatrix<double>& b, std::size_t rows_order, std::size_t columns)
        : stride_(columns + 1), data_((rows_order + 1) * (columns + 1), 0.0) {
        std::vector<double> prev(stride_, 0.0), bar(stride_, 0.0);
        for (std::size_t n = 0; n <= rows_order; ++n) {
            // suffix sums of row n, accumulated from the diagonal down
            std::fill(bar.begin(), bar.end(), 0.0);
            double tail = 0.0;
            for (std::size_t v = n + 1; v-- > 0;) {
                tail += b(n, v);
                if (v < stride_) bar[v] = tail;
            }
            for (std::size_t v = 0; v < stride_ && v <= n; ++v)
                data_[n * stride_ + v] = v < n ? bar[v] - prev[v] : bar[v];
            prev = bar;
        }
    }

    double operator()(std::size_t n, std::size_t v) const { return data_[n * stride_ + v]; }

private:
    std::size_t stride_;
    std::vector<double> data_;
};

struct EffectiveTail {
    std::size_t cutoff;
    bool capped;
};

inline EffectiveTail resolve_tail(const TailSpec& tail, std::size_t order, std::size_t available,
                                  const char* what) {
    validate_tail(tail, order);
    if (available >= tail.cutoff) return {tail.cutoff, false};
    if (!tail.allow_cap)
        throw tail_unavailable(std::string(what) + " reaches index " + std::to_string(available) +
                               " but the tail cutoff is " + std::to_string(tail.cutoff));
    return {available, true};
}

} // namespace detail

/// C9: ratios |lambda_n| / (n^{1/k-1} a_nn / b_nn), n = 1..N.
inline ConditionReport check_c9(const NormalMatrix<double>& a, const NormalMatrix<double>& b,
                                const FactorSequence<double>& lambda, double k) {
    require_exponent(k);
    if (a.order() != b.order()) throw size_mismatch("A and B differ in order");
    const std::size_t order = a.order();
    require_factor_length(lambda, order + 1);
    std::vector<double> num, den;
    for (std::size_t n = 1; n <= order; ++n) {
        num.push_back(std::fabs(lambda[n]));
        den.push_back(std::pow(static_cast<double>(n), 1.0 / k - 1.0) *
                      std::fabs(a.diagonal(n) / b.diagonal(n)));
    }
    return detail::asymptotic_report(ConditionId::C9, 1, std::move(num), std::move(den));
}

/// C10: ratios sum_{n=v+1}^{cutoff} n^{k-1} |Delta_v(b_hat_nv lambda_v)|^k / a_vv^k,
/// v = 0..N-1, where Delta_v f(n, v) = f(n, v) - f(n, v+1). `b` must reach the
/// tail cutoff; `a` fixes the evaluation order N.
inline ConditionReport check_c10(const NormalMatrix<double>& a, const NormalMatrix<double>& b,
                                 const FactorSequence<double>& lambda, double k,
                                 const TailSpec& tail) {
    require_exponent(k);
    const std::size_t order = a.order();
    if (b.order() < order) throw size_mismatch("B is smaller than A");
    require_factor_length(lambda, order + 1);
    const auto eff = detail::resolve_tail(tail, order, b.order(), "B");
    const detail::HatColumns hat(b, eff.cutoff, order);

    ConditionReport report;
    std::vector<double> num, den;
    std::vector<bool> warnings;
    for (std::size_t v = 0; v < order; ++v) {
        double sum = 0.0, last = 0.0;
        for (std::size_t n = v + 1; n <= eff.cutoff; ++n) {
            const double diff = hat(n, v) * lambda[v] - hat(n, v + 1) * lambda[v + 1];
            last = std::pow(static_cast<double>(n), k - 1.0) * std::pow(std::fabs(diff), k);
            sum += last;
        }
        num.push_back(sum);
        den.push_back(std::pow(std::fabs(a.diagonal(v)), k));
        warnings.push_back(eff.capped || last > tail.warn_threshold * sum);
    }
    report = detail::asymptotic_report(ConditionId::C10, 0, std::move(num), std::move(den));
    report.tail_warnings = std::move(warnings);
    report.tail_cutoff = eff.cutoff;
    report.tail_capped = eff.capped;
    return report;
}

/// C11: ratios sum_{n=v+1}^{cutoff} n^{k-1} |b_hat_{n,v+1} lambda_{v+1}|^k, v = 0..order-1.
inline ConditionReport check_c11(const NormalMatrix<double>& b, const FactorSequence<double>& lambda,
                                 double k, const TailSpec& tail, std::size_t order) {
    require_exponent(k);
    if (b.order() < order) throw size_mismatch("B is smaller than the evaluation order");
    require_factor_length(lambda, order + 1);
    const auto eff = detail::resolve_tail(tail, order, b.order(), "B");
    const detail::HatColumns hat(b, eff.cutoff, order);

    std::vector<double> num;
    std::vector<bool> warnings;
    for (std::size_t v = 0; v < order; ++v) {
        double sum = 0.0, last = 0.0;
        for (std::size_t n = v + 1; n <= eff.cutoff; ++n) {
            last = std::pow(static_cast<double>(n), k - 1.0) *
                   std::pow(std::fabs(hat(n, v + 1) * lambda[v + 1]), k);
            sum += last;
        }
        num.push_back(sum);
        warnings.push_back(eff.capped || last > tail.warn_threshold * sum);
    }
    std::vector<double> den(num.size(), 1.0);
    auto report = detail::asymptotic_report(ConditionId::C11, 0, std::move(num), std::move(den));
    report.tail_warnings = std::move(warnings);
    report.tail_cutoff = eff.cutoff;
    report.tail_capped = eff.capped;
    return report;
}

/// C12: per-row maximum of the violations max(0, a_nv - a_{n-1,v}), v <= n-1, n = 1..N.
inline ConditionReport check_c12(const NormalMatrix<double>& a) {
    std::vector<double> violations;
    for (std::size_t n = 1; n <= a.order(); ++n) {
        double worst = 0.0;
        for (std::size_t v = 0; v < n; ++v) worst = std::max(worst, a(n, v) - a(n - 1, v));
        violations.push_back(worst);
    }
    return detail::structural_report(ConditionId::C12, 1, std::move(violations));
}

namespace detail {

inline ConditionReport first_bar_column(ConditionId id, const NormalMatrix<double>& m) {
    const auto bar = bar_of(m);
    std::vector<double> dev;
    for (std::size_t n = 0; n < m.size(); ++n) dev.push_back(std::fabs(bar(n, 0) - 1.0));
    return structural_report(id, 0, std::move(dev));
}

} // namespace detail

/// C13: |bar a_n0 - 1|, n = 0..N.
inline ConditionReport check_c13(const NormalMatrix<double>& a) {
    return detail::first_bar_column(ConditionId::C13, a);
}

/// C14: |bar b_n0 - 1|, n = 0..N.
inline ConditionReport check_c14(const NormalMatrix<double>& b) {
    return detail::first_bar_column(ConditionId::C14, b);
}

/// C15: |a_nn - a_{n+1,n}| / |a_nn a_{n+1,n+1}|, n = 0..N-1.
inline ConditionReport check_c15(const NormalMatrix<double>& a) {
    std::vector<double> num, den;
    for (std::size_t n = 0; n < a.order(); ++n) {
        num.push_back(std::fabs(a.diagonal(n) - a(n + 1, n)));
        den.push_back(std::fabs(a.diagonal(n) * a.diagonal(n + 1)));
    }
    return detail::asymptotic_report(ConditionId::C15, 0, std::move(num), std::move(den));
}

/// C16: max over r <= n-2 of sum_{v=r+2}^{n} |b_hat_nv| |a_hat'_vr lambda_v|, divided by
/// |b_nn / a_nn| |lambda_n|, n = 0..N. Rows with an empty r-range report 0.
inline ConditionReport check_c16(const NormalMatrix<double>& a, const NormalMatrix<double>& b,
                                 const FactorSequence<double>& lambda) {
    if (a.order() != b.order()) throw size_mismatch("A and B differ in order");
    const std::size_t order = a.order();
    require_factor_length(lambda, order + 1);
    const auto hat_b = hat_of(b);
    const auto inv_hat_a = invert_hat(hat_of(a));

    std::vector<double> num, den;
    for (std::size_t n = 0; n <= order; ++n) {
        double worst = 0.0;
        for (std::size_t r = 0; r + 2 <= n; ++r) {
            double sum = 0.0;
            for (std::size_t v = r + 2; v <= n; ++v)
                sum += std::fabs(hat_b(n, v)) * std::fabs(inv_hat_a(v, r) * lambda[v]);
            worst = std::max(worst, sum);
        }
        num.push_back(worst);
        den.push_back(std::fabs(b.diagonal(n) / a.diagonal(n)) * std::fabs(lambda[n]));
    }
    return detail::asymptotic_report(ConditionId::C16, 0, std::move(num), std::move(den));
}

/// W_n = {sum_{v=n+1}^{cutoff} v^{k-1} (q_v / (Q_v Q_{v-1}))^k}^{1/k} for n = 0..cutoff-1.
struct WSequence {
    std::vector<double> values;
    std::vector<double> powers;  // the bracketed sums, i.e. W_n^k
    std::vector<bool> warnings;
    std::size_t cutoff = 0;
    bool capped = false;
};

inline WSequence w_sequence(const WeightSequence<double>& q, double k, const TailSpec& tail,
                            std::size_t order = 0) {
    require_exponent(k);
    if (q.size() == 0) throw tail_unavailable("empty weight sequence");
    const auto eff = detail::resolve_tail(tail, order, q.size() - 1, "weight sequence");
    const std::size_t m = eff.cutoff;
    WSequence out;
    out.cutoff = m;
    out.capped = eff.capped;
    out.values.resize(m);
    out.powers.resize(m);
    out.warnings.resize(m);
    auto term = [&](std::size_t v) {
        const double ratio = q.p(v) / (q.P(static_cast<std::ptrdiff_t>(v)) *
                                       q.P(static_cast<std::ptrdiff_t>(v) - 1));
        return std::pow(static_cast<double>(v), k - 1.0) * std::pow(ratio, k);
    };
    const double last = term(m);
    double sum = 0.0;
    // smallest terms first
    for (std::size_t n = m; n-- > 0;) {
        sum += term(n + 1);
        out.powers[n] = sum;
        out.values[n] = std::pow(sum, 1.0 / k);
        out.warnings[n] = eff.capped || last > tail.warn_threshold * sum;
    }
    return out;
}

/// Riesz-pair criteria for a_nv = p_v/P_n, b_nv = q_v/Q_n:
///   (a) ratios |lambda_n| / (n^{1/k-1} p_n Q_n / (P_n q_n)), n = 1..N
///   (b) ratios W_n |Q_{n-1} lambda_n - Q_n lambda_{n+1}| / (p_n / P_n), n = 0..N-1
///   (c) ratios |Q_n lambda_{n+1}| W_n, n = 0..N-1
/// The consistent reading of (a) is C9 with the Riesz diagonals
/// substituted; Reading::literal uses the verbatim q_n P_n / (p_n Q_n).
inline std::array<ConditionReport, 3> check_theorem_a(const WeightSequence<double>& p,
                                                      const WeightSequence<double>& q,
                                                      const FactorSequence<double>& lambda, double k,
                                                      std::size_t order, const TailSpec& tail,
                                                      Reading reading = Reading::consistent) {
    require_exponent(k);
    if (p.size() < order + 1) throw length_mismatch("p shorter than order + 1");
    require_factor_length(lambda, order + 1);
    const WSequence w = w_sequence(q, k, tail, order);
    if (w.cutoff < order) throw tail_unavailable("q does not reach the evaluation order");
    auto P = [&](std::size_t n) { return p.P(static_cast<std::ptrdiff_t>(n)); };
    auto Q = [&](std::ptrdiff_t n) { return q.P(n); };

    std::vector<double> num_a, den_a;
    for (std::size_t n = 1; n <= order; ++n) {
        const double pn = p.p(n), qn = q.p(n);
        const double Qn = Q(static_cast<std::ptrdiff_t>(n));
        const double factor = reading == Reading::consistent ? (pn / P(n)) / (qn / Qn)
                                                             : (qn * P(n)) / (pn * Qn);
        num_a.push_back(std::fabs(lambda[n]));
        den_a.push_back(std::pow(static_cast<double>(n), 1.0 / k - 1.0) * factor);
    }

    std::vector<double> num_b, den_b, num_c, den_c;
    std::vector<bool> warn;
    for (std::size_t n = 0; n < order; ++n) {
        const auto sn = static_cast<std::ptrdiff_t>(n);
        const double diff = Q(sn - 1) * lambda[n] - Q(sn) * lambda[n + 1];
        num_b.push_back(w.values[n] * std::fabs(diff));
        den_b.push_back(p.p(n) / P(n));
        num_c.push_back(std::fabs(Q(sn) * lambda[n + 1]) * w.values[n]);
        den_c.push_back(1.0);
        warn.push_back(w.warnings[n]);
    }

    std::array<ConditionReport, 3> out{
        detail::asymptotic_report(ConditionId::TA_a, 1, std::move(num_a), std::move(den_a)),
        detail::asymptotic_report(ConditionId::TA_b, 0, std::move(num_b), std::move(den_b)),
        detail::asymptotic_report(ConditionId::TA_c, 0, std::move(num_c), std::move(den_c))};
    for (std::size_t i = 1; i < 3; ++i) {
        out[i].tail_warnings = warn;
        out[i].tail_cutoff = w.cutoff;
        out[i].tail_capped = w.capped;
    }
    return out;
}

/// sup_v sum_{n=v}^{N} |c_nv|^k together with every column sum.
template <Scalar T>
struct L1LkBound {
    T sup = T(0);
    std::size_t argmax = 0;
    std::vector<T> column_sums;
};

template <Scalar T>
L1LkBound<T> l1_lk_bound(const LowerTriangular<T>& c, double k) {
    require_exponent(k);
    L1LkBound<T> out;
    out.column_sums.assign(c.size(), T(0));
    for (std::size_t n = 0; n < c.size(); ++n)
        for (std::size_t v = 0; v <= n; ++v) out.column_sums[v] += abs_power(c(n, v), k);
    for (std::size_t v = 0; v < out.column_sums.size(); ++v)
        if (v == 0 || out.column_sums[v] > out.sup) {
            out.sup = out.column_sums[v];
            out.argmax = v;
        }
    return out;
}

/// Column sums of an l1 -> lk bound as a report indexed by column v.
template <Scalar T>
ConditionReport l1_lk_report(const L1LkBound<T>& bound) {
    std::vector<double> num;
    for (const T& s : bound.column_sums) num.push_back(to_double(s));
    std::vector<double> den(num.size(), 1.0);
    return detail::asymptotic_report(ConditionId::L1LK, 0, std::move(num), std::move(den));
}

} // namespace summakit

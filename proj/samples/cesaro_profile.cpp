// Cesaro means of the alternating harmonic series: transforms, the |C,1|_k
// profile and two factor conditions, printed as plain text.

#include <cstdio>

#include "summakit/summakit.hpp"

int main() {
    using namespace summakit;
    const std::size_t order = 20;
    const double k = 2.0;

    const auto a = MatrixFamily::cesaro().materialize(order);
    const auto s = alternating_series(order, 1.0);
    const auto means = transform_partial_sums(a, s);
    const auto prof = abs_k_profile(a, s, k);

    std::printf("%4s %22s %22s\n", "n", "A_n(s)", "running total");
    for (std::size_t n = 1; n <= order; ++n)
        std::printf("%4zu %22.17g %22.17g\n", n, means[n], prof.running_total[n - 1]);

    const auto lambda = power_factors(order + 1, 1.0, 1.0 / k - 1.0);
    const auto c9 = check_c9(a, a, lambda, k);
    const auto c15 = check_c15(a);
    std::printf("C9  sup %.6g, %s\n", c9.sup_ratio, std::string(to_string(c9.trend)).c_str());
    std::printf("C15 sup %.6g, %s\n", c15.sup_ratio, std::string(to_string(c15.trend)).c_str());
}

#pragma once

// Shared statistical helpers for the test binaries.

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

namespace test_helpers {

// Kolmogorov-Smirnov statistic of `samples` against the CDF `cdf`.
inline double ks_statistic(std::vector<double> samples,
                           const std::function<double(double)>& cdf) {
    std::sort(samples.begin(), samples.end());
    const double n = static_cast<double>(samples.size());
    double d = 0.0;
    for (size_t k = 0; k < samples.size(); ++k) {
        double f = cdf(samples[k]);
        d = std::max(d, f - static_cast<double>(k) / n);
        d = std::max(d, static_cast<double>(k + 1) / n - f);
    }
    return d;
}

// Asymptotic Kolmogorov p-value with the small-sample correction.
inline double ks_pvalue(double d, size_t n) {
    double sq = std::sqrt(static_cast<double>(n));
    double lambda = (sq + 0.12 + 0.11 / sq) * d;
    double sum = 0.0;
    for (int k = 1; k <= 100; ++k) {
        double term = 2.0 * std::exp(-2.0 * k * k * lambda * lambda);
        sum += (k % 2 == 1) ? term : -term;
        if (term < 1e-12) break;
    }
    return std::min(1.0, std::max(0.0, sum));
}

// Two estimates agree within k sigma of their combined uncertainty.
inline bool within_sigma(double a, double sa, double b, double sb, double k,
                         double atol = 0.0) {
    double s = std::sqrt(sa * sa + sb * sb);
    return std::abs(a - b) <= k * s + atol;
}

}  // namespace test_helpers

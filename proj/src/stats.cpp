// SPDX-License-Identifier: Apache-2.0
#include "uavris/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace uavris {

double mean(const std::vector<double>& v) {
    if (v.empty()) throw std::invalid_argument("mean: empty input");
    return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

double sample_stddev(const std::vector<double>& v) {
    if (v.size() < 2) return 0.0;
    const double m = mean(v);
    double acc = 0.0;
    for (double x : v) acc += (x - m) * (x - m);
    return std::sqrt(acc / static_cast<double>(v.size() - 1));
}

std::vector<double> moving_average(const std::vector<double>& v, int window) {
    if (window < 1) throw std::invalid_argument("moving_average: window must be >= 1");
    std::vector<double> out(v.size());
    double acc = 0.0;
    for (size_t i = 0; i < v.size(); ++i) {
        acc += v[i];
        if (i >= static_cast<size_t>(window)) acc -= v[i - static_cast<size_t>(window)];
        const size_t n = std::min(i + 1, static_cast<size_t>(window));
        out[i] = acc / static_cast<double>(n);
    }
    return out;
}

double linear_slope(const std::vector<double>& y) {
    const size_t n = y.size();
    if (n < 2) return 0.0;
    const double x_mean = 0.5 * static_cast<double>(n - 1);
    const double y_mean = mean(y);
    double num = 0.0, den = 0.0;
    for (size_t i = 0; i < n; ++i) {
        const double dx = static_cast<double>(i) - x_mean;
        num += dx * (y[i] - y_mean);
        den += dx * dx;
    }
    return num / den;
}

double wilcoxon_signed_rank_greater(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size()) throw std::invalid_argument("wilcoxon: length mismatch");
    std::vector<double> diffs;
    for (size_t i = 0; i < x.size(); ++i) {
        const double d = x[i] - y[i];
        if (d != 0.0) diffs.push_back(d);
    }
    const size_t n = diffs.size();
    if (n == 0) return 1.0;
    if (n > 25) throw std::invalid_argument("wilcoxon: too many pairs for exact enumeration");

    // midranks of |d|
    std::vector<size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](size_t a, size_t b) { return std::abs(diffs[a]) < std::abs(diffs[b]); });
    std::vector<double> rank(n);
    for (size_t i = 0; i < n;) {
        size_t j = i;
        while (j + 1 < n && std::abs(diffs[order[j + 1]]) == std::abs(diffs[order[i]])) ++j;
        const double mid = 0.5 * (static_cast<double>(i) + static_cast<double>(j)) + 1.0;
        for (size_t k = i; k <= j; ++k) rank[order[k]] = mid;
        i = j + 1;
    }

    double w_plus = 0.0;
    for (size_t i = 0; i < n; ++i)
        if (diffs[i] > 0.0) w_plus += rank[i];

    // exact null distribution over all sign assignments
    const size_t total = size_t{1} << n;
    size_t at_least = 0;
    for (size_t mask = 0; mask < total; ++mask) {
        double w = 0.0;
        for (size_t i = 0; i < n; ++i)
            if (mask & (size_t{1} << i)) w += rank[i];
        if (w >= w_plus - 1e-12) ++at_least;
    }
    return static_cast<double>(at_least) / static_cast<double>(total);
}

}  // namespace uavris

// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <vector>

namespace uavris {

double mean(const std::vector<double>& v);
double sample_stddev(const std::vector<double>& v);

// Trailing moving average; entry i averages the last min(i+1, window) values.
std::vector<double> moving_average(const std::vector<double>& v, int window);

// Least-squares slope of y against index 0..n-1.
double linear_slope(const std::vector<double>& y);

// Exact one-sided Wilcoxon signed-rank p-value for H1: median(x - y) > 0.
// Zero differences are dropped; requires at most 25 informative pairs.
double wilcoxon_signed_rank_greater(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace uavris

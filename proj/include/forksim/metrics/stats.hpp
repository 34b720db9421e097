#pragma once

#include <span>
#include <vector>

namespace forksim::metrics {

/// Ranks starting at 1; ties get the average of their positions.
std::vector<double> average_ranks(std::span<const double> v);

double pearson(std::span<const double> x, std::span<const double> y);

/// Pearson correlation of average ranks. Defined as 0 when either rank
/// vector is constant.
double spearman(std::span<const double> x, std::span<const double> y);

/// Coefficient of determination of the least-squares line y = a + b x.
double linear_fit_r2(std::span<const double> x, std::span<const double> y);

double mean(std::span<const double> v);

} // namespace forksim::metrics

#pragma once

#include <span>

namespace actionraid::stats {

double mean(std::span<const double> xs);
/// Sample standard deviation (n - 1 denominator); 0 for fewer than 2 values.
double sample_std(std::span<const double> xs);
/// Linear interpolation between closest ranks: position (n - 1) * q in the
/// sorted sample (the "type 7" definition).
double quantile(std::span<const double> xs, double q);
double median(std::span<const double> xs);

/// Gini coefficient of nonnegative values: sum_ij |x_i - x_j| / (2 n^2 mean).
/// Returns 0 for an empty or all-zero sample.
double gini(std::span<const double> xs);

struct MannWhitneyResult {
  double u = 0.0;  ///< U statistic of the first sample
  double z = 0.0;
  double p_value = 0.0;
};

/// One-sided Mann-Whitney U test of H1: `x` tends to be smaller than `y`.
/// Normal approximation with tie correction and continuity correction.
MannWhitneyResult mann_whitney_less(std::span<const double> x, std::span<const double> y);

}  // namespace actionraid::stats

#pragma once

#include <span>

namespace scelo {

double mean(std::span<const double> xs);

/// Pearson correlation coefficient; both series must have the same length
/// (>= 2) and non-zero variance.
double pearson_correlation(std::span<const double> xs, std::span<const double> ys);

/// RMS difference between the two series after subtracting each series'
/// own mean (ratings compare only up to a shift).
double rms_after_alignment(std::span<const double> xs, std::span<const double> ys);

/// Least-squares slope of y on x through the origin.
double slope_through_origin(std::span<const double> xs, std::span<const double> ys);

}  // namespace scelo

#include "scelo/stats.hpp"

#include <cmath>
#include <stdexcept>

namespace scelo {

double mean(std::span<const double> xs) {
    if (xs.empty()) throw std::invalid_argument("mean of an empty series");
    double s = 0.0;
    for (double x : xs) s += x;
    return s / static_cast<double>(xs.size());
}

double pearson_correlation(std::span<const double> xs, std::span<const double> ys) {
    if (xs.size() != ys.size() || xs.size() < 2)
        throw std::invalid_argument("correlation needs two equal-length series of >= 2");
    double mx = mean(xs), my = mean(ys);
    double sxx = 0.0, syy = 0.0, sxy = 0.0;
    for (std::size_t n = 0; n < xs.size(); ++n) {
        double dx = xs[n] - mx, dy = ys[n] - my;
        sxx += dx * dx;
        syy += dy * dy;
        sxy += dx * dy;
    }
    if (!(sxx > 0.0) || !(syy > 0.0))
        throw std::invalid_argument("correlation undefined for a constant series");
    return sxy / std::sqrt(sxx * syy);
}

double rms_after_alignment(std::span<const double> xs, std::span<const double> ys) {
    if (xs.size() != ys.size() || xs.empty())
        throw std::invalid_argument("needs two equal-length non-empty series");
    double mx = mean(xs), my = mean(ys);
    double s = 0.0;
    for (std::size_t n = 0; n < xs.size(); ++n) {
        double d = (xs[n] - mx) - (ys[n] - my);
        s += d * d;
    }
    return std::sqrt(s / static_cast<double>(xs.size()));
}

double slope_through_origin(std::span<const double> xs, std::span<const double> ys) {
    if (xs.size() != ys.size() || xs.empty())
        throw std::invalid_argument("needs two equal-length non-empty series");
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t n = 0; n < xs.size(); ++n) {
        sxy += xs[n] * ys[n];
        sxx += xs[n] * xs[n];
    }
    if (!(sxx > 0.0)) throw std::invalid_argument("slope undefined: x is identically zero");
    return sxy / sxx;
}

}  // namespace scelo

#include "scelo/betting.hpp"

#include <cmath>
#include <stdexcept>

namespace scelo {

double utility(double x, double a) {
    if (!(a > 0.0)) throw std::invalid_argument("utility curvature must be > 0");
    return (1.0 - std::exp(-a * x)) / a;
}

double curvature_from_pain(double d_pain) {
    if (!(d_pain > 0.0)) throw std::invalid_argument("pain threshold must be > 0");
    return std::log(2.0) / d_pain;
}

bool worthwhile(double p, double r) {
    if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("p must lie strictly in (0,1)");
    if (!(r > 1.0)) throw std::invalid_argument("payout ratio must exceed 1");
    return p * r >= 1.0;
}

double optimal_bet(const BetParams& params) {
    if (!(params.p > 0.0 && params.p < 1.0))
        throw std::invalid_argument("p must lie strictly in (0,1)");
    if (!(params.r > 1.0)) throw std::invalid_argument("payout ratio must exceed 1");
    if (!(params.d_pain > 0.0)) throw std::invalid_argument("pain threshold must be > 0");
    double log_term = std::log(params.p * (params.r - 1.0) / (1.0 - params.p));
    double b = params.d_pain / (std::log(2.0) * params.r) * log_term;
    return b > 0.0 ? b : 0.0;  // a losing proposition means abstain
}

}  // namespace scelo

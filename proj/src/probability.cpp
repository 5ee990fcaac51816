#include "scelo/probability.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace scelo {

double win_prob(double r_a, double r_b) {
    if (!std::isfinite(r_a) || !std::isfinite(r_b))
        throw std::invalid_argument("ratings must be finite");
    return 1.0 / (1.0 + std::exp(kBeta * (r_b - r_a)));
}

double advantage_from_prob(double p) {
    if (!(p > 0.0 && p < 1.0))
        throw std::invalid_argument("probability must lie strictly in (0,1)");
    return kEloPerLogOdds * std::log(p / (1.0 - p));
}

BetaPosterior beta_posterior(double wins, double losses, double prior_weight) {
    if (wins < 0.0 || losses < 0.0) throw std::invalid_argument("counts must be >= 0");
    if (!(prior_weight > 0.0)) throw std::invalid_argument("prior_weight must be > 0");
    return {wins + prior_weight, losses + prior_weight, prior_weight};
}

double WdlPosterior::alpha_ij() const { return std::log(w / l); }
double WdlPosterior::beta_ij() const { return std::log(d / (1.0 - d)); }

WdlPosterior wdl_posterior(double n_w, double n_d, double n_l) {
    if (n_w < 0.0 || n_d < 0.0 || n_l < 0.0) throw std::invalid_argument("counts must be >= 0");
    double n = n_w + n_d + n_l;
    return {(n_w + 1.0) / (n + 3.0), (n_d + 1.0) / (n + 3.0), (n_l + 1.0) / (n + 3.0)};
}

AdvantageMoments advantage_moments_approx(double wins, double losses, double prior_weight) {
    BetaPosterior post = beta_posterior(wins, losses, prior_weight);
    double sd = std::sqrt(post.variance());
    double x0 = post.mean() - sd;
    double x1 = post.mean() + sd;
    if (!(x0 > 0.0) || !(x1 < 1.0))
        throw std::domain_error("one-sigma probability window leaves (0,1)");
    double a0 = advantage_from_prob(x0);
    double a1 = advantage_from_prob(x1);
    return {0.5 * (a1 + a0), 0.5 * (a1 - a0), MomentMethod::Approx};
}

AdvantageMoments advantage_moments_numeric(double wins, double losses, int grid,
                                           double prior_weight) {
    if (grid < 100) throw std::invalid_argument("grid must be >= 100");
    BetaPosterior post = beta_posterior(wins, losses, prior_weight);
    double am1 = post.alpha - 1.0;
    double bm1 = post.beta_param - 1.0;
    // Unnormalised log-density; the shared scale cancels in the moments.
    double peak = -std::numeric_limits<double>::infinity();
    std::vector<double> logf(grid);
    std::vector<double> adv(grid);
    for (int i = 0; i < grid; ++i) {
        double p = (i + 0.5) / grid;
        logf[i] = am1 * std::log(p) + bm1 * std::log1p(-p);
        adv[i] = kEloPerLogOdds * std::log(p / (1.0 - p));
        peak = std::max(peak, logf[i]);
    }
    double s0 = 0.0, s1 = 0.0, s2 = 0.0;
    for (int i = 0; i < grid; ++i) {
        double f = std::exp(logf[i] - peak);
        s0 += f;
        s1 += f * adv[i];
        s2 += f * adv[i] * adv[i];
    }
    double mean = s1 / s0;
    double var = std::max(s2 / s0 - mean * mean, 0.0);
    return {mean, std::sqrt(var), MomentMethod::Numeric};
}

double generalized_average(std::span<const double> values, std::span<const double> weights,
                           double d) {
    if (values.empty() || values.size() != weights.size())
        throw std::invalid_argument("values and weights must be non-empty and equal length");
    for (double w : weights)
        if (!(w > 0.0)) throw std::invalid_argument("weights must be positive");
    bool fractional = d != std::floor(d);
    for (double x : values) {
        if (d <= 0.0 && !(x > 0.0))
            throw std::invalid_argument("values must be positive for d <= 0");
        if (fractional && x < 0.0)
            throw std::invalid_argument("negative values with fractional exponent");
    }
    double wsum = 0.0;
    for (double w : weights) wsum += w;
    if (std::abs(d) < 1e-9) {  // geometric limit
        double s = 0.0;
        for (std::size_t n = 0; n < values.size(); ++n) s += weights[n] * std::log(values[n]);
        return std::exp(s / wsum);
    }
    double s = 0.0;
    for (std::size_t n = 0; n < values.size(); ++n) s += weights[n] * std::pow(values[n], d);
    double a = std::pow(s / wsum, 1.0 / d);
    if (!std::isfinite(a)) throw std::domain_error("generalized average is not finite");
    return a;
}

double elo_average(double opponent, std::span<const double> component_ratings) {
    if (component_ratings.empty()) throw std::invalid_argument("no component ratings");
    double p = 0.0;
    for (double r : component_ratings) p += win_prob(r, opponent);
    p /= static_cast<double>(component_ratings.size());
    if (!(p > 0.0 && p < 1.0))
        throw std::domain_error("mixture win probability reached 0 or 1");
    return opponent + advantage_from_prob(p);
}

double population_improvement(double p1, double p2) {
    if (!(p1 > 0.0 && p1 < 1.0) || !(p2 > 0.0 && p2 < 1.0))
        throw std::invalid_argument("probabilities must lie strictly in (0,1)");
    return kEloPerLogOdds * (std::log((1.0 - p2) / p2) - std::log((1.0 - p1) / p1));
}

long long required_sample_size(double advantage, double k_sigma) {
    if (!(advantage > 0.0))
        throw std::invalid_argument("a zero advantage is never detectable");
    if (!(k_sigma > 0.0)) throw std::invalid_argument("k_sigma must be > 0");
    double p2 = win_prob(advantage, 0.0);
    double gap = p2 - 0.5;
    // Variance of the difference of the two observed fractions is the sum
    // of their variances: (1/4 + p2(1-p2)) / N.
    double n = k_sigma * k_sigma * (0.25 + p2 * (1.0 - p2)) / (gap * gap);
    long long out = static_cast<long long>(std::ceil(n - 1e-9));
    return out < 1 ? 1 : out;
}

}  // namespace scelo

#pragma once

namespace scelo {

/// Bounded-gain utility u(x) = (1 - e^(-ax)) / a: u(0) = 0, u'(0) = 1,
/// and gains saturate at 1/a while losses do not.
double utility(double x, double a);

/// Curvature from the pain threshold D: losing D hurts twice as much as
/// gaining D helps, so a = ln(2)/D.
double curvature_from_pain(double d_pain);

/// Risk-neutral criterion: the bet has non-negative expected value iff
/// p * r >= 1 (r is the gross payout ratio).
bool worthwhile(double p, double r);

struct BetParams {
    double p;       // probability of the outcome
    double r;       // payout ratio, > 1
    double d_pain;  // currency amount where losing hurts twice as winning helps
};

/// Expected-utility-maximising stake:
/// b = (D / (ln 2 * r)) * ln[p (r - 1) / (1 - p)], clamped at zero when the
/// bet is not worthwhile. Exactly zero at fair odds p r = 1.
double optimal_bet(const BetParams& params);

}  // namespace scelo

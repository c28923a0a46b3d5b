#include "pnav/stochastic.hpp"

#include <cmath>

namespace pnav {

double pmf(const PoissonModel& m, int k) {
    if (k < 0) return 0.0;
    if (m.lambda == 0.0) return k == 0 ? 1.0 : 0.0;
    return std::exp(k * std::log(m.lambda) - m.lambda - std::lgamma(k + 1.0));
}

PoissonModel fit_mle(const ObservationLog& log, RateUnit unit) {
    if (log.counts.empty()) throw EmptyLog{};
    double sum = 0.0;
    for (int c : log.counts) sum += c;
    return {sum / static_cast<double>(log.counts.size()), unit};
}

double prob_at_least_one(const PoissonModel& m) {
    return -std::expm1(-m.lambda);
}

double prob_more_than(const PoissonModel& m, int k) {
    if (k < 0) return 1.0;
    double cdf = 0.0;
    for (int j = 0; j <= k; ++j) cdf += pmf(m, j);
    return std::max(0.0, 1.0 - cdf);
}

double interarrival_cdf(const PoissonModel& m, double t) {
    if (t < 0.0) throw NegativeTime{};
    if (m.unit == RateUnit::per_meter) {
        throw UnitMismatch("interarrival_cdf needs a time-based rate, got per_meter");
    }
    return -std::expm1(-m.lambda * t);
}

PoissonModel scale(const PoissonModel& m, double factor, RateUnit new_unit) {
    return {m.lambda * factor, new_unit};
}

} // namespace pnav

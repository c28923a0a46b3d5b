#pragma once

#include <stdexcept>
#include <vector>

namespace pnav {

/// Unit a Poisson rate is expressed in. Rates are converted explicitly via
/// scale(); mixing units at a call site is an error, not a silent rescale.
enum class RateUnit {
    per_meter,
    per_second,
    per_interval,
};

struct PoissonModel {
    double lambda = 0.0;
    RateUnit unit = RateUnit::per_interval;
};

/// Collision counts recorded at successive observation timestamps.
struct ObservationLog {
    std::vector<int> counts;

    int n() const { return static_cast<int>(counts.size()); }
};

struct EmptyLog : std::invalid_argument {
    EmptyLog() : std::invalid_argument("observation log is empty") {}
};

struct NegativeTime : std::invalid_argument {
    NegativeTime() : std::invalid_argument("time must be non-negative") {}
};

struct UnitMismatch : std::logic_error {
    explicit UnitMismatch(const char* what) : std::logic_error(what) {}
};

/// P(X = k) for X ~ Poisson(lambda). Evaluated in log space so large k and
/// large lambda stay finite; lambda = 0 collapses to the point mass at 0.
double pmf(const PoissonModel& m, int k);

/// Rate MLE: the sample mean of the observed counts.
PoissonModel fit_mle(const ObservationLog& log, RateUnit unit = RateUnit::per_interval);

/// P(X > 0) = 1 - e^(-lambda).
double prob_at_least_one(const PoissonModel& m);

/// P(X > k), the upper tail beyond k events.
double prob_more_than(const PoissonModel& m, int k);

/// P(T <= t) = 1 - e^(-lambda t) for the exponential inter-arrival time of a
/// rate-lambda process. Requires a time-based unit.
double interarrival_cdf(const PoissonModel& m, double t);

/// lambda' = lambda * factor, re-tagged with the new unit.
PoissonModel scale(const PoissonModel& m, double factor, RateUnit new_unit);

} // namespace pnav

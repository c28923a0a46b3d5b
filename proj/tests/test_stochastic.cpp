#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "pnav/random.hpp"
#include "pnav/stochastic.hpp"

using namespace pnav;

namespace {

// Log-likelihood of a Poisson rate for observed counts; test-only oracle used
// to confirm the fitted rate maximizes it.
double log_likelihood(double lambda, const std::vector<int>& counts) {
    double ll = 0.0;
    for (int x : counts) {
        ll += -lambda + x * std::log(lambda) - std::lgamma(x + 1.0);
    }
    return ll;
}

// Composite Simpson quadrature of the exponential density from 0 to t.
double integrate_density(double lambda, double t, int panels) {
    auto f = [lambda](double u) { return lambda * std::exp(-lambda * u); };
    const double h = t / panels;
    double sum = f(0.0) + f(t);
    for (int i = 1; i < panels; ++i) {
        sum += f(i * h) * (i % 2 == 1 ? 4.0 : 2.0);
    }
    return sum * h / 3.0;
}

} // namespace

TEST_CASE("pmf: point values") {
    CHECK(pmf({2.0, RateUnit::per_interval}, 0) == doctest::Approx(std::exp(-2.0)).epsilon(1e-12));
    CHECK(pmf({1.0, RateUnit::per_interval}, 1) == doctest::Approx(std::exp(-1.0)).epsilon(1e-12));
    const double expected = std::exp(-3.5) * 3.5 * 3.5 / 2.0;
    CHECK(pmf({3.5, RateUnit::per_interval}, 2) == doctest::Approx(expected).epsilon(1e-12));
    CHECK(pmf({0.0, RateUnit::per_interval}, 0) == 1.0);
    CHECK(pmf({0.0, RateUnit::per_interval}, 3) == 0.0);
    CHECK(pmf({2.0, RateUnit::per_interval}, -1) == 0.0);
}

TEST_CASE("pmf: normalization and mean over truncated support") {
    for (double lambda : {0.1, 1.0, 5.0, 20.0}) {
        const int k_max = static_cast<int>(std::ceil(lambda + 20.0 * std::sqrt(lambda) + 50.0));
        double total = 0.0;
        double mean = 0.0;
        for (int k = 0; k <= k_max; ++k) {
            const double p = pmf({lambda, RateUnit::per_interval}, k);
            total += p;
            mean += k * p;
        }
        CHECK(total == doctest::Approx(1.0).epsilon(1e-9));
        CHECK(mean == doctest::Approx(lambda).epsilon(1e-6));
    }
}

TEST_CASE("fit_mle: sample mean, exactly") {
    CHECK(fit_mle({{0, 0, 0}}).lambda == 0.0);
    CHECK(fit_mle({{2, 3, 4}}).lambda == 3.0);
    CHECK_THROWS_AS(fit_mle({{}}), EmptyLog);
}

TEST_CASE("fit_mle matches extended-precision mean on fuzzed logs") {
    std::mt19937_64 rng(99);
    for (int trial = 0; trial < 1000; ++trial) {
        ObservationLog log;
        const int n = 1 + static_cast<int>(uniform01(rng) * 50);
        long double exact_sum = 0.0L;
        for (int i = 0; i < n; ++i) {
            const int c = static_cast<int>(uniform01(rng) * 40);
            log.counts.push_back(c);
            exact_sum += c;
        }
        const long double exact_mean = exact_sum / n;
        const double fitted = fit_mle(log).lambda;
        CHECK(std::abs(fitted - static_cast<double>(exact_mean)) <=
              1e-12 * std::max(1.0, static_cast<double>(exact_mean)));
    }
}

TEST_CASE("fit_mle maximizes the log-likelihood on a grid") {
    const std::vector<int> counts{3, 1, 4, 1, 5, 9, 2, 6};
    const double fitted = fit_mle({counts}).lambda;
    const double ll_fit = log_likelihood(fitted, counts);
    for (double lambda = 0.5; lambda <= 12.0; lambda += 0.25) {
        CHECK(log_likelihood(lambda, counts) <= ll_fit + 1e-12);
    }
}

TEST_CASE("prob_at_least_one: analytic points") {
    CHECK(prob_at_least_one({0.0, RateUnit::per_interval}) == 0.0);
    CHECK(prob_at_least_one({std::log(5.0), RateUnit::per_interval}) ==
          doctest::Approx(0.8).epsilon(1e-12));
    const PoissonModel m{0.25, RateUnit::per_interval};
    CHECK(prob_at_least_one(m) == doctest::Approx(1.0 - pmf(m, 0)).epsilon(1e-15));
}

TEST_CASE("prob_more_than complements the pmf prefix") {
    const PoissonModel m{2.5, RateUnit::per_interval};
    CHECK(prob_more_than(m, 0) == doctest::Approx(prob_at_least_one(m)).epsilon(1e-12));
    double prefix = 0.0;
    for (int k = 0; k <= 6; ++k) prefix += pmf(m, k);
    CHECK(prob_more_than(m, 6) == doctest::Approx(1.0 - prefix).epsilon(1e-12));
    CHECK(prob_more_than(m, -1) == 1.0);
    // Monotone decreasing in k.
    for (int k = 0; k < 20; ++k) {
        CHECK(prob_more_than(m, k + 1) <= prob_more_than(m, k) + 1e-15);
    }
}

TEST_CASE("interarrival_cdf: values, errors, monotonicity") {
    const PoissonModel m{0.5, RateUnit::per_second};
    CHECK(interarrival_cdf(m, 0.0) == 0.0);
    CHECK(interarrival_cdf({std::log(2.0), RateUnit::per_second}, 1.0) ==
          doctest::Approx(0.5).epsilon(1e-12));
    CHECK(interarrival_cdf(m, 2.0) == doctest::Approx(1.0 - std::exp(-1.0)).epsilon(1e-12));
    CHECK_THROWS_AS(interarrival_cdf(m, -0.1), NegativeTime);
    CHECK_THROWS_AS(interarrival_cdf({0.5, RateUnit::per_meter}, 1.0), UnitMismatch);

    double prev = -1.0;
    for (double t = 0.0; t <= 10.0; t += 0.25) {
        const double p = interarrival_cdf(m, t);
        CHECK(p >= prev);
        prev = p;
    }
}

TEST_CASE("interarrival_cdf matches quadrature of the exponential density") {
    for (double lambda : {0.2, 0.5, 1.0, 3.0}) {
        for (double t : {0.1, 0.5, 1.0, 2.0, 5.0}) {
            const double numeric = integrate_density(lambda, t, 20000);
            CHECK(interarrival_cdf({lambda, RateUnit::per_second}, t) ==
                  doctest::Approx(numeric).epsilon(1e-9));
        }
    }
}

TEST_CASE("interarrival_cdf equals prob_at_least_one of the scaled model") {
    const PoissonModel m{0.7, RateUnit::per_second};
    for (double t : {0.0, 0.3, 1.0, 4.0}) {
        const PoissonModel scaled = scale(m, t, RateUnit::per_interval);
        CHECK(interarrival_cdf(m, t) == doctest::Approx(prob_at_least_one(scaled)).epsilon(1e-15));
    }
}

TEST_CASE("scale: multiplication and unit retag") {
    const PoissonModel spatial{0.2, RateUnit::per_meter};
    const PoissonModel scaled = scale(spatial, 3.0, RateUnit::per_interval);
    CHECK(scaled.lambda == doctest::Approx(0.6).epsilon(1e-15));
    CHECK(scaled.unit == RateUnit::per_interval);
    CHECK(scale(spatial, 0.0, RateUnit::per_interval).lambda == 0.0);

    // Consistency with the spatial-rate closed form: countDist=30, n=10, D=15.
    const double lambda_x = 30.0 / (10.0 * 15.0);
    CHECK(lambda_x == doctest::Approx(0.2).epsilon(1e-15));
    CHECK(scale({lambda_x, RateUnit::per_meter}, 15.0, RateUnit::per_interval).lambda ==
          doctest::Approx(3.0).epsilon(1e-12));
}

TEST_CASE("empirical exponential inter-arrivals pass a KS test against the cdf") {
    const double lambda = 0.8;
    const int n = 100000;
    std::mt19937_64 rng(4242);
    std::vector<double> samples(n);
    for (auto& s : samples) {
        s = -std::log(1.0 - uniform01(rng)) / lambda;
    }
    std::sort(samples.begin(), samples.end());
    double d_max = 0.0;
    const PoissonModel m{lambda, RateUnit::per_second};
    for (int i = 0; i < n; ++i) {
        const double f = interarrival_cdf(m, samples[i]);
        d_max = std::max(d_max, std::abs(f - (i + 1.0) / n));
        d_max = std::max(d_max, std::abs(f - static_cast<double>(i) / n));
    }
    // Critical value at significance 0.01: 1.628 / sqrt(n).
    CHECK(d_max < 1.628 / std::sqrt(static_cast<double>(n)));
}

#pragma once

// Test-only reference implementations. These deliberately take different
// computation routes than the library (quadrature, series, dense grids,
// direct density sums) so that agreement is meaningful.

#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

namespace oracles {

inline double normal_pdf(double x) {
    return std::exp(-0.5 * x * x) / 2.50662827463100050241576528481104525;
}

inline double normal_log_density(double y, double mean, double var) {
    double d = y - mean;
    return -0.5 * std::log(2 * 3.14159265358979323846 * var) - d * d / (2 * var);
}

// Composite Simpson quadrature of the standard normal density on [0, x].
inline double normal_cdf_quadrature(double x) {
    const int panels = 20000;
    double h = x / panels;
    double sum = normal_pdf(0) + normal_pdf(x);
    for (int i = 1; i < panels; ++i)
        sum += normal_pdf(i * h) * (i % 2 == 1 ? 4.0 : 2.0);
    return 0.5 + sum * h / 3.0;
}

// Lower-tail asymptotic series: Phi(-x) ~ phi(x)/x (1 - 1/x^2 + 3/x^4 - ...).
inline double normal_lower_tail_series(double x) {
    double x2 = x * x;
    double series = 1 - 1 / x2 + 3 / (x2 * x2) - 15 / (x2 * x2 * x2) +
                    105 / (x2 * x2 * x2 * x2);
    return normal_pdf(x) / x * series;
}

inline double chi2_pdf(int k, double x) {
    return std::exp((0.5 * k - 1) * std::log(x) - 0.5 * x - 0.5 * k * std::log(2.0) -
                    std::lgamma(0.5 * k));
}

// Chi-squared CDF. Even k: Simpson quadrature of the density (smooth on
// [0, x]). Odd k: the density's derivative is singular at 0, so quadrature
// degrades; use instead the closed route built from the erf identity
// xi_1(x) = erf(sqrt(x/2)) and the exact recurrence
// xi_{k+2}(x) = xi_k(x) - 2 f_{k+2}(x).
inline double chi2_cdf_reference(int k, double x) {
    if (x <= 0)
        return 0;
    if (k % 2 == 1) {
        double cdf = std::erf(std::sqrt(0.5 * x));
        for (int j = 3; j <= k; j += 2)
            cdf -= 2 * chi2_pdf(j, x);
        return cdf;
    }
    const int panels = 20000;
    double h = x / panels;
    double sum = (k == 2 ? 0.5 : 0.0) + chi2_pdf(k, x);
    for (int i = 1; i < panels; ++i)
        sum += chi2_pdf(k, i * h) * (i % 2 == 1 ? 4.0 : 2.0);
    return sum * h / 3.0;
}

// KL divergence between N(theta, var) and N(gamma, var) by quadrature of the
// integrand over +-12 standard deviations around theta.
inline double mean_shift_kl_quadrature(double theta, double gamma, double var) {
    const int panels = 20000;
    double sd = std::sqrt(var);
    double lo = theta - 12 * sd, hi = theta + 12 * sd;
    double h = (hi - lo) / panels;
    auto integrand = [&](double y) {
        double f = std::exp(normal_log_density(y, theta, var));
        return f * (normal_log_density(y, theta, var) - normal_log_density(y, gamma, var));
    };
    double sum = integrand(lo) + integrand(hi);
    for (int i = 1; i < panels; ++i)
        sum += integrand(lo + i * h) * (i % 2 == 1 ? 4.0 : 2.0);
    return sum * h / 3.0;
}

// Plain SPRT on the exact cumulative log-likelihood ratio of two simple
// normal hypotheses, summing raw per-sample log densities.
struct SprtState {
    double llr = 0;
    std::int64_t time = 0;
};

struct SprtDecision {
    bool stopped = false;
    bool decided_h1 = false;
    std::int64_t stopping_time = 0;
};

inline SprtDecision sprt_step_mean_shift(SprtState& state, std::span<const double> samples,
                                         double theta, double gamma, double var, double A,
                                         double B) {
    for (double y : samples)
        state.llr += normal_log_density(y, theta, var) - normal_log_density(y, gamma, var);
    ++state.time;
    if (state.llr >= A)
        return {true, true, state.time};
    if (state.llr <= -B)
        return {true, false, state.time};
    return {};
}

// Dense-grid maximization of the summed log density over a parameter
// interval; mean-shift version working directly on raw samples.
inline double grid_sup_loglik_mean_shift(std::span<const double> samples, double lo, double hi,
                                         double var, int grid) {
    double best = -std::numeric_limits<double>::infinity();
    for (int i = 0; i <= grid; ++i) {
        double value = lo + (hi - lo) * i / grid;
        double ll = 0;
        for (double y : samples)
            ll += normal_log_density(y, value, var);
        best = std::max(best, ll);
    }
    return best;
}

inline double variance_log_density(double y, double var) {
    return -0.5 * std::log(2 * 3.14159265358979323846 * var) - y * y / (2 * var);
}

inline double grid_sup_loglik_variance(std::span<const double> samples, double lo, double hi,
                                       int grid) {
    double best = -std::numeric_limits<double>::infinity();
    for (int i = 0; i <= grid; ++i) {
        double value = lo + (hi - lo) * i / grid;
        double ll = 0;
        for (double y : samples)
            ll += variance_log_density(y, value);
        best = std::max(best, ll);
    }
    return best;
}

// Bernoulli log-likelihood sup by dense grid over the parameter interval,
// mapping parameters to bit probabilities through the supplied function.
template <typename ProbFn>
double grid_sup_bernoulli(std::int64_t r0, std::int64_t r1, double lo, double hi, int grid,
                          ProbFn&& prob) {
    double best = -std::numeric_limits<double>::infinity();
    for (int i = 0; i <= grid; ++i) {
        double value = lo + (hi - lo) * i / grid;
        double p = prob(value);
        if (p <= 0 || p >= 1)
            continue;
        double ll = static_cast<double>(r1) * std::log(p) +
                    static_cast<double>(r0) * std::log1p(-p);
        best = std::max(best, ll);
    }
    return best;
}

}  // namespace oracles

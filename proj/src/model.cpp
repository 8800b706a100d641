#include "seqfuse/model.hpp"

#include <cmath>
#include <stdexcept>

#include "seqfuse/numerics.hpp"

namespace seqfuse {

namespace {

void check_interval(const ParameterInterval& iv, const char* what) {
    if (!(std::isfinite(iv.lo) && std::isfinite(iv.hi)) || iv.lo > iv.hi)
        throw std::invalid_argument(std::string(what) + ": malformed parameter interval");
}

bool disjoint(const ParameterInterval& a, const ParameterInterval& b) {
    return a.hi < b.lo || b.hi < a.lo;
}

}  // namespace

TestingProblem::TestingProblem(ModelKind kind, ParameterInterval null_set,
                               ParameterInterval alt_set, double sigma2)
    : kind_(kind), null_set_(null_set), alt_set_(alt_set), sigma2_(sigma2),
      sigma_(std::sqrt(sigma2)) {}

TestingProblem TestingProblem::mean_shift(ParameterInterval null_set, ParameterInterval alt_set,
                                          double sigma2) {
    check_interval(null_set, "mean_shift null set");
    check_interval(alt_set, "mean_shift alternative set");
    if (!(sigma2 > 0))
        throw std::invalid_argument("mean_shift: noise variance must be positive");
    if (!disjoint(null_set, alt_set))
        throw std::invalid_argument("mean_shift: parameter sets must be disjoint");
    return TestingProblem(ModelKind::MeanShift, null_set, alt_set, sigma2);
}

TestingProblem TestingProblem::variance(ParameterInterval null_set, ParameterInterval alt_set) {
    check_interval(null_set, "variance null set");
    check_interval(alt_set, "variance alternative set");
    if (!(null_set.lo > 0 && null_set.hi < alt_set.lo))
        throw std::invalid_argument("variance: intervals must satisfy 0 < g0 <= g1 < t0 <= t1");
    return TestingProblem(ModelKind::Variance, null_set, alt_set, 1.0);
}

void TestingProblem::validate_truth(const TruthPoint& truth) const {
    if (!set_of(truth.hypothesis).contains(truth.value))
        throw std::invalid_argument("truth value lies outside its hypothesis interval");
}

double sample(const TestingProblem& problem, const TruthPoint& truth, CounterRng& rng) {
    double z = rng.next_normal();
    if (problem.kind() == ModelKind::MeanShift)
        return truth.value + problem.sigma() * z;
    return std::sqrt(truth.value) * z;
}

SuffStat accumulate(const TestingProblem& problem, SuffStat stat, double y) {
    stat.acc += problem.kind() == ModelKind::MeanShift ? y : y * y;
    stat.n += 1;
    return stat;
}

double clamp(double x, const ParameterInterval& interval) {
    if (x < interval.lo) return interval.lo;
    if (x > interval.hi) return interval.hi;
    return x;
}

double constrained_mle(const TestingProblem& problem, const SuffStat& stat,
                       const ParameterInterval& interval) {
    if (stat.n < 1)
        throw std::invalid_argument("constrained_mle: empty sufficient statistic");
    return clamp(stat.acc / static_cast<double>(stat.n), interval);
}

double log_likelihood(const TestingProblem& problem, const SuffStat& stat, double value) {
    double n = static_cast<double>(stat.n);
    if (problem.kind() == ModelKind::MeanShift)
        return (value * stat.acc - 0.5 * n * value * value) / problem.sigma2();
    return -0.5 * n * std::log(value) - 0.5 * stat.acc / value;
}

double gllr(const TestingProblem& problem, const SuffStat& stat) {
    if (stat.n < 1)
        throw std::invalid_argument("gllr: empty sufficient statistic");
    // Both models' per-parameter log-likelihoods are unimodal in the
    // parameter, so the sup over a closed interval sits at the clamped MLE.
    double theta_hat = constrained_mle(problem, stat, problem.alt_set());
    double gamma_hat = constrained_mle(problem, stat, problem.null_set());
    return log_likelihood(problem, stat, theta_hat) - log_likelihood(problem, stat, gamma_hat);
}

double kl_divergence(const TestingProblem& problem, const TruthPoint& from, double to) {
    if (problem.kind() == ModelKind::MeanShift) {
        double d = from.value - to;
        return d * d / (2 * problem.sigma2());
    }
    if (!(from.value > 0 && to > 0))
        throw std::domain_error("kl_divergence: variance parameters must be positive");
    // D(N(0,u) || N(0,v)) = (u/v - 1)/2 + log(v/u)/2.
    double u = from.value, v = to;
    return 0.5 * (u / v - 1) + 0.5 * std::log(v / u);
}

double inf_kl(const TestingProblem& problem, const TruthPoint& fixed) {
    double nearest = clamp(fixed.value, problem.opposite_set_of(fixed.hypothesis));
    return kl_divergence(problem, fixed, nearest);
}

double bit_probability(const TestingProblem& problem, double value, int T0, double lambda) {
    if (T0 < 1)
        throw std::domain_error("bit_probability: block length must be >= 1");
    if (problem.kind() == ModelKind::MeanShift) {
        double z = (lambda - value * T0) / (problem.sigma() * std::sqrt(double(T0)));
        // 1 - Phi(z) as Phi(-z): keeps relative accuracy when the bit is rare.
        return std_normal_cdf(-z);
    }
    if (!(value > 0))
        throw std::domain_error("bit_probability: variance parameter must be positive");
    if (!(lambda >= 0))
        throw std::domain_error("bit_probability: quantizer threshold must be >= 0");
    return chi_squared_sf(T0, lambda / value);
}

}  // namespace seqfuse

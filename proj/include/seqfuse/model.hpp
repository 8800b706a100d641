#pragma once

#include <cstdint>

#include "seqfuse/rng.hpp"

namespace seqfuse {

enum class Hypothesis { H0, H1 };

// Closed parameter interval. Singletons (lo == hi) are allowed and are how
// simple (point) hypotheses are expressed.
struct ParameterInterval {
    double lo = 0;
    double hi = 0;

    bool contains(double x) const { return x >= lo && x <= hi; }
    bool is_singleton() const { return lo == hi; }
};

// The true data-generating parameter for a simulation run.
struct TruthPoint {
    Hypothesis hypothesis = Hypothesis::H0;
    double value = 0;
};

// Running sufficient statistic: sum of observations (mean-shift model) or
// sum of squared observations (variance model), plus the sample count.
struct SuffStat {
    double acc = 0;
    std::int64_t n = 0;
};

enum class ModelKind {
    // H0: y ~ N(gamma, sigma^2), H1: y ~ N(theta, sigma^2).
    MeanShift,
    // H0: y ~ N(0, gamma), H1: y ~ N(0, theta), 0 < gamma < theta.
    Variance,
};

// An immutable composite testing problem: the model family plus the null and
// alternative parameter intervals. Construct through the factories, which
// enforce the per-model invariants.
class TestingProblem {
public:
    static TestingProblem mean_shift(ParameterInterval null_set, ParameterInterval alt_set,
                                     double sigma2);
    static TestingProblem variance(ParameterInterval null_set, ParameterInterval alt_set);

    ModelKind kind() const { return kind_; }
    const ParameterInterval& null_set() const { return null_set_; }
    const ParameterInterval& alt_set() const { return alt_set_; }
    double sigma2() const { return sigma2_; }
    double sigma() const { return sigma_; }

    const ParameterInterval& set_of(Hypothesis h) const {
        return h == Hypothesis::H0 ? null_set_ : alt_set_;
    }
    const ParameterInterval& opposite_set_of(Hypothesis h) const {
        return h == Hypothesis::H0 ? alt_set_ : null_set_;
    }

    // Throws std::invalid_argument if truth.value lies outside the interval
    // of its hypothesis.
    void validate_truth(const TruthPoint& truth) const;

private:
    TestingProblem(ModelKind kind, ParameterInterval null_set, ParameterInterval alt_set,
                   double sigma2);

    ModelKind kind_;
    ParameterInterval null_set_;
    ParameterInterval alt_set_;
    double sigma2_;
    double sigma_;
};

// One i.i.d. draw from the density indicated by the truth point. The caller
// is responsible for having validated the truth point.
double sample(const TestingProblem& problem, const TruthPoint& truth, CounterRng& rng);

// stat extended by one observation.
SuffStat accumulate(const TestingProblem& problem, SuffStat stat, double y);

// x projected onto the closed interval.
double clamp(double x, const ParameterInterval& interval);

// Constrained MLE of the model parameter over `interval` given the
// sufficient statistic: the clamp of acc/n (mean-shift) or of the mean of
// squares (variance). Requires stat.n >= 1.
double constrained_mle(const TestingProblem& problem, const SuffStat& stat,
                       const ParameterInterval& interval);

// Generalized log-likelihood ratio of the accumulated samples:
// sup over the alternative set minus sup over the null set, each attained at
// the constrained MLE. Requires stat.n >= 1.
double gllr(const TestingProblem& problem, const SuffStat& stat);

// Log-likelihood of the sufficient statistic at a fixed parameter value, up
// to an additive constant that does not depend on the parameter. Differences
// across parameter values are exact log-likelihood-ratio contributions.
double log_likelihood(const TestingProblem& problem, const SuffStat& stat, double value);

// KL divergence from the density at `from` to the opposite-family density at
// `to`, in closed form. The direction is carried by from.hypothesis.
double kl_divergence(const TestingProblem& problem, const TruthPoint& from, double to);

// Infimum of kl_divergence over the interval opposite to `fixed`. Both
// models' divergences are monotone in the opposite parameter's distance, so
// the infimum is attained at the clamp of fixed.value onto that interval.
double inf_kl(const TestingProblem& problem, const TruthPoint& fixed);

// Probability that the one-bit quantized block statistic equals +1 when the
// true parameter is `value`, for block length T0 and quantizer threshold
// lambda.
double bit_probability(const TestingProblem& problem, double value, int T0, double lambda);

}  // namespace seqfuse

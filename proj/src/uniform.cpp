#include "seqfuse/uniform.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "seqfuse/numerics.hpp"

namespace seqfuse {

UniformSensor::UniformSensor(TestingProblem problem, int block_length, double lambda)
    : problem_(std::move(problem)), block_length_(block_length), lambda_(lambda) {
    if (block_length < 1)
        throw std::invalid_argument("UniformSensor: block length must be >= 1");
}

std::optional<int> UniformSensor::push(double y) {
    block_ = accumulate(problem_, block_, y);
    if (block_.n < block_length_)
        return std::nullopt;
    int bit = block_.acc > lambda_ ? +1 : -1;
    block_ = SuffStat{};
    return bit;
}

int quantize_block(const TestingProblem& problem, int block_length, double lambda,
                   std::span<const double> samples) {
    if (static_cast<int>(samples.size()) != block_length)
        throw std::invalid_argument("quantize_block: expected exactly one block of samples");
    SuffStat stat;
    for (double y : samples)
        stat = accumulate(problem, stat, y);
    return stat.acc > lambda ? +1 : -1;
}

double bernoulli_mle(const TestingProblem& problem, int block_length, double lambda,
                     std::int64_t r0, std::int64_t r1, const ParameterInterval& interval) {
    if (r0 < 0 || r1 < 0 || r0 + r1 < 1)
        throw std::invalid_argument("bernoulli_mle: need at least one bit");
    // All-(+1) pushes the Bernoulli MLE to p = 1, i.e. the largest parameter;
    // all-(-1) symmetrically to the smallest.
    if (r1 == 0)
        return interval.lo;
    if (r0 == 0)
        return interval.hi;
    double frac = static_cast<double>(r0) / static_cast<double>(r0 + r1);
    double unconstrained;
    if (problem.kind() == ModelKind::MeanShift) {
        // Solve Phi((lambda - x T0) / (sigma sqrt(T0))) = r0/(r0+r1) for x.
        double z = std_normal_quantile(frac);
        unconstrained = (lambda - z * problem.sigma() * std::sqrt(double(block_length))) /
                        static_cast<double>(block_length);
    } else {
        unconstrained = lambda / chi_squared_quantile(block_length, frac);
    }
    return clamp(unconstrained, interval);
}

namespace {

double bernoulli_loglik(double p, std::int64_t r0, std::int64_t r1) {
    return static_cast<double>(r1) * std::log(p) + static_cast<double>(r0) * std::log1p(-p);
}

}  // namespace

double bernoulli_gllr(const TestingProblem& problem, int block_length, double lambda,
                      std::int64_t r0, std::int64_t r1) {
    if (r0 + r1 < 1)
        throw std::invalid_argument("bernoulli_gllr: need at least one bit");
    double theta_hat = bernoulli_mle(problem, block_length, lambda, r0, r1, problem.alt_set());
    double gamma_hat = bernoulli_mle(problem, block_length, lambda, r0, r1, problem.null_set());
    double p_theta = bit_probability(problem, theta_hat, block_length, lambda);
    double p_gamma = bit_probability(problem, gamma_hat, block_length, lambda);
    return bernoulli_loglik(p_theta, r0, r1) - bernoulli_loglik(p_gamma, r0, r1);
}

BernoulliFusion::BernoulliFusion(TestingProblem problem, int sensors, int block_length,
                                 double lambda, double threshold_a, double threshold_b)
    : problem_(std::move(problem)), sensors_(sensors), block_length_(block_length),
      lambda_(lambda), threshold_a_(threshold_a), threshold_b_(threshold_b) {
    if (sensors < 1)
        throw std::invalid_argument("BernoulliFusion: sensor count must be >= 1");
    if (block_length < 1)
        throw std::invalid_argument("BernoulliFusion: block length must be >= 1");
    if (!(threshold_a > 0 && threshold_b > 0))
        throw std::invalid_argument("BernoulliFusion: thresholds must be positive");
}

double BernoulliFusion::statistic() const {
    return bernoulli_gllr(problem_, block_length_, lambda_, r0_, r1_);
}

BernoulliFusion::StepOutcome BernoulliFusion::step(std::span<const int> bits) {
    if (stopped_)
        throw std::logic_error("BernoulliFusion::step called after stopping");
    if (bits.empty())
        return StepOutcome{r0_ + r1_ > 0 ? statistic() : 0.0, std::nullopt};

    for (int bit : bits) {
        if (bit == 1) ++r1_;
        else if (bit == -1) ++r0_;
        else throw std::invalid_argument("BernoulliFusion::step: bits must be +1 or -1");
    }
    ++blocks_;

    double stat = statistic();
    StepOutcome out{stat, std::nullopt};
    if (stat >= threshold_a_ || stat <= -threshold_b_) {
        stopped_ = true;
        out.verdict = Verdict{
            stat >= threshold_a_ ? Hypothesis::H1 : Hypothesis::H0,
            blocks_ * block_length_,
            r0_ + r1_,
            false,
        };
    }
    return out;
}

double quantized_kl(const TestingProblem& problem, const TruthPoint& from, double to,
                    int block_length, double lambda) {
    double p_from = bit_probability(problem, from.value, block_length, lambda);
    double p_to = bit_probability(problem, to, block_length, lambda);
    return bernoulli_kl(p_from, p_to);
}

double inf_quantized_kl(const TestingProblem& problem, const TruthPoint& fixed,
                        int block_length, double lambda) {
    double nearest = clamp(fixed.value, problem.opposite_set_of(fixed.hypothesis));
    return quantized_kl(problem, fixed, nearest, block_length, lambda);
}

namespace {

// Worst-case quantized KL at a fixed lambda. The divergence is monotone in
// each parameter (bit probabilities are strictly increasing in the
// parameter), so the inner minimum over disjoint intervals sits at the facing
// endpoints; the optional grid guards against a model where that ever fails.
double worst_case_kl(const TestingProblem& problem, int block_length, double lambda,
                     int inner_grid) {
    const auto& null_set = problem.null_set();
    const auto& alt_set = problem.alt_set();
    std::vector<double> gammas{null_set.lo, null_set.hi};
    std::vector<double> thetas{alt_set.lo, alt_set.hi};
    for (int i = 1; i < inner_grid; ++i) {
        double f = static_cast<double>(i) / inner_grid;
        gammas.push_back(null_set.lo + f * (null_set.hi - null_set.lo));
        thetas.push_back(alt_set.lo + f * (alt_set.hi - alt_set.lo));
    }
    double worst = std::numeric_limits<double>::infinity();
    for (double theta : thetas)
        for (double gamma : gammas) {
            double kl = quantized_kl(problem, TruthPoint{Hypothesis::H1, theta}, gamma,
                                     block_length, lambda);
            worst = std::min(worst, kl);
        }
    return worst;
}

}  // namespace

double minimax_lambda(const TestingProblem& problem, int block_length, double resolution,
                      int inner_grid) {
    if (!(resolution > 0))
        throw std::invalid_argument("minimax_lambda: resolution must be positive");
    const auto& null_set = problem.null_set();
    const auto& alt_set = problem.alt_set();
    if (null_set.is_singleton() && alt_set.is_singleton() && null_set.lo == alt_set.lo)
        throw std::domain_error("minimax_lambda: degenerate parameter sets");

    double lo, hi;
    if (problem.kind() == ModelKind::MeanShift) {
        double pad = 6 * problem.sigma() * std::sqrt(double(block_length));
        lo = std::min(null_set.lo, alt_set.lo) * block_length - pad;
        hi = std::max(null_set.hi, alt_set.hi) * block_length + pad;
    } else {
        lo = 1e-9;
        hi = alt_set.hi * chi_squared_quantile(block_length, 1 - 1e-6);
    }

    auto objective = [&](double lambda) {
        return worst_case_kl(problem, block_length, lambda, inner_grid);
    };

    const int grid = 256;
    double best_lambda = lo, best_value = -1;
    for (int i = 0; i <= grid; ++i) {
        double lambda = lo + (hi - lo) * i / grid;
        double value = objective(lambda);
        if (value > best_value) {
            best_value = value;
            best_lambda = lambda;
        }
    }
    if (!(best_value > 0))
        throw std::domain_error("minimax_lambda: worst-case divergence is not separated");

    // Golden-section refinement around the best grid cell.
    double step = (hi - lo) / grid;
    double a = std::max(lo, best_lambda - step);
    double b = std::min(hi, best_lambda + step);
    const double phi = 0.6180339887498949;
    double x1 = b - phi * (b - a);
    double x2 = a + phi * (b - a);
    double f1 = objective(x1), f2 = objective(x2);
    while (b - a > 0.25 * resolution) {
        if (f1 < f2) {
            a = x1;
            x1 = x2; f1 = f2;
            x2 = a + phi * (b - a);
            f2 = objective(x2);
        } else {
            b = x2;
            x2 = x1; f2 = f1;
            x1 = b - phi * (b - a);
            f1 = objective(x1);
        }
    }
    return 0.5 * (a + b);
}

Verdict run_uniform(const TestingProblem& problem, int sensors, int block_length,
                    double lambda, double threshold_a, double threshold_b,
                    const TruthPoint& truth, std::span<CounterRng> rngs, std::int64_t cap,
                    std::vector<TraceEvent>* trace) {
    if (static_cast<int>(rngs.size()) != sensors)
        throw std::invalid_argument("run_uniform: need one rng stream per sensor");
    if (cap < 1)
        throw std::invalid_argument("run_uniform: cap must be >= 1");
    problem.validate_truth(truth);

    std::vector<UniformSensor> sensor_states(
        static_cast<std::size_t>(sensors), UniformSensor(problem, block_length, lambda));
    BernoulliFusion fusion(problem, sensors, block_length, lambda, threshold_a, threshold_b);

    std::vector<int> bits(sensors);
    for (std::int64_t t = 1; t <= cap; ++t) {
        bool boundary = (t % block_length) == 0;
        for (int l = 0; l < sensors; ++l) {
            auto bit = sensor_states[l].push(sample(problem, truth, rngs[l]));
            if (boundary)
                bits[l] = *bit;
        }
        if (!boundary)
            continue;
        auto out = fusion.step(bits);
        if (trace)
            for (int l = 0; l < sensors; ++l)
                trace->push_back({t, l, bits[l], out.statistic, 0.0});
        if (out.verdict)
            return *out.verdict;
    }
    double stat = fusion.r0() + fusion.r1() > 0 ? fusion.statistic() : 0.0;
    return Verdict{stat >= 0 ? Hypothesis::H1 : Hypothesis::H0, cap, fusion.r0() + fusion.r1(),
                   true};
}

}  // namespace seqfuse

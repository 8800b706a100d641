#pragma once

namespace seqfuse {

// Standard normal CDF. Absolute error below 1e-14 on [-8, 8].
// Throws std::domain_error on non-finite input.
double std_normal_cdf(double x);

// Inverse of std_normal_cdf on the open interval (0, 1).
// Throws std::domain_error for p outside (0, 1).
double std_normal_quantile(double p);

// CDF of the chi-squared distribution with k degrees of freedom,
// computed as the regularized lower incomplete gamma P(k/2, x/2).
// Throws std::domain_error for x < 0 or k < 1.
double chi_squared_cdf(int k, double x);

// Upper tail 1 - CDF, computed through the continued-fraction branch so it
// keeps relative accuracy deep into the tail.
double chi_squared_sf(int k, double x);

// Inverse of chi_squared_cdf in p for fixed k, solved to 1e-12 in
// p-space with a bounded iteration count. Throws std::domain_error
// for p outside (0, 1); std::runtime_error if the solve stalls.
double chi_squared_quantile(int k, double p);

// KL divergence between Bernoulli(p) and Bernoulli(q) in nats, as an
// extended value: 0 when p == q, +infinity when q is degenerate and p is
// not. Throws std::domain_error outside [0, 1].
double bernoulli_kl(double p, double q);

}  // namespace seqfuse

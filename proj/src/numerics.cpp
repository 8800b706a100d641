#include "seqfuse/numerics.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace seqfuse {

namespace {

constexpr double kSqrt2 = 1.41421356237309504880168872420969808;
constexpr double kSqrt2Pi = 2.50662827463100050241576528481104525;

}  // namespace

double std_normal_cdf(double x) {
    if (!std::isfinite(x))
        throw std::domain_error("std_normal_cdf: non-finite input");
    // erfc keeps full relative accuracy in the lower tail, where a
    // direct 1 - Phi(-x) would cancel.
    return 0.5 * std::erfc(-x / kSqrt2);
}

namespace {

// Acklam's rational approximation to the normal quantile, |err| ~ 1e-9.
double normal_quantile_estimate(double p) {
    static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                               -2.759285104469687e+02, 1.383577518672690e+02,
                               -3.066479806614716e+01, 2.506628277459239e+00};
    static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                               -1.556989798598866e+02, 6.680131188771972e+01,
                               -1.328068155288572e+01};
    static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                               -2.400758277161838e+00, -2.549732539343734e+00,
                               4.374664141464968e+00,  2.938163982698783e+00};
    static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                               2.445134137142996e+00, 3.754408661907416e+00};
    const double plow = 0.02425;
    if (p < plow) {
        double q = std::sqrt(-2 * std::log(p));
        return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
               ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1);
    }
    if (p > 1 - plow) {
        double q = std::sqrt(-2 * std::log(1 - p));
        return -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
               ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1);
    }
    double q = p - 0.5;
    double r = q * q;
    return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
           (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1);
}

}  // namespace

double std_normal_quantile(double p) {
    if (!(p > 0.0 && p < 1.0))
        throw std::domain_error("std_normal_quantile: p must lie in (0, 1)");
    double x = normal_quantile_estimate(p);
    // Two Halley refinements against the erfc-based CDF push the
    // initial approximation to machine accuracy.
    for (int i = 0; i < 2; ++i) {
        double e = std_normal_cdf(x) - p;
        double u = e * kSqrt2Pi * std::exp(0.5 * x * x);
        x -= u / (1 + 0.5 * x * u);
    }
    return x;
}

namespace {

// Regularized lower incomplete gamma P(s, x), series branch (x < s + 1).
double gamma_p_series(double s, double x) {
    double sum = 1.0 / s;
    double term = sum;
    for (int n = 1; n < 500; ++n) {
        term *= x / (s + n);
        sum += term;
        if (std::fabs(term) < std::fabs(sum) * 1e-16)
            break;
    }
    return sum * std::exp(-x + s * std::log(x) - std::lgamma(s));
}

// Regularized upper incomplete gamma Q(s, x) by modified Lentz continued
// fraction (x >= s + 1).
double gamma_q_cf(double s, double x) {
    const double tiny = 1e-300;
    double b = x + 1 - s;
    double c = 1 / tiny;
    double d = 1 / b;
    double h = d;
    for (int i = 1; i < 500; ++i) {
        double an = -i * (i - s);
        b += 2;
        d = an * d + b;
        if (std::fabs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1 / d;
        double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < 1e-16)
            break;
    }
    return h * std::exp(-x + s * std::log(x) - std::lgamma(s));
}

double gamma_p(double s, double x) {
    if (x <= 0)
        return 0.0;
    if (x < s + 1)
        return gamma_p_series(s, x);
    return 1.0 - gamma_q_cf(s, x);
}

}  // namespace

double chi_squared_cdf(int k, double x) {
    if (k < 1)
        throw std::domain_error("chi_squared_cdf: degrees of freedom must be >= 1");
    if (!(x >= 0))
        throw std::domain_error("chi_squared_cdf: x must be >= 0");
    return gamma_p(0.5 * k, 0.5 * x);
}

double chi_squared_sf(int k, double x) {
    if (k < 1)
        throw std::domain_error("chi_squared_sf: degrees of freedom must be >= 1");
    if (!(x >= 0))
        throw std::domain_error("chi_squared_sf: x must be >= 0");
    double s = 0.5 * k, half_x = 0.5 * x;
    if (half_x <= 0)
        return 1.0;
    if (half_x < s + 1)
        return 1.0 - gamma_p_series(s, half_x);
    return gamma_q_cf(s, half_x);
}

double chi_squared_quantile(int k, double p) {
    if (k < 1)
        throw std::domain_error("chi_squared_quantile: degrees of freedom must be >= 1");
    if (!(p > 0.0 && p < 1.0))
        throw std::domain_error("chi_squared_quantile: p must lie in (0, 1)");

    // Wilson-Hilferty starting point, then safeguarded Newton on the CDF.
    double z = std_normal_quantile(p);
    double t = 1.0 - 2.0 / (9.0 * k) + z * std::sqrt(2.0 / (9.0 * k));
    double x = k * t * t * t;
    if (!(x > 0))
        x = 0.5 * std::exp((std::log(p) + std::lgamma(0.5 * k) + 0.5 * k * std::log(2.0)) / (0.5 * k));

    double lo = 0.0, hi = std::numeric_limits<double>::infinity();
    const double log_norm = 0.5 * k * std::log(2.0) + std::lgamma(0.5 * k);
    for (int it = 0; it < 200; ++it) {
        double f = chi_squared_cdf(k, x) - p;
        if (std::fabs(f) <= 1e-12)
            return x;
        if (f > 0) hi = x; else lo = x;
        double log_pdf = (0.5 * k - 1) * std::log(x) - 0.5 * x - log_norm;
        double step = f * std::exp(-log_pdf);
        double next = x - step;
        if (!(next > lo && next < hi))
            next = std::isinf(hi) ? 2 * x : 0.5 * (lo + hi);
        x = next;
    }
    throw std::runtime_error("chi_squared_quantile: root finding did not converge");
}

double bernoulli_kl(double p, double q) {
    if (!(p >= 0.0 && p <= 1.0) || !(q >= 0.0 && q <= 1.0))
        throw std::domain_error("bernoulli_kl: arguments must lie in [0, 1]");
    if (p == q)
        return 0.0;
    // Absolute continuity fails at degenerate q; the divergence is infinite.
    if (q <= 0.0 || q >= 1.0)
        return std::numeric_limits<double>::infinity();
    double kl = 0.0;
    if (p > 0) kl += p * std::log(p / q);
    if (p < 1) kl += (1 - p) * std::log((1 - p) / (1 - q));
    return kl;
}

}  // namespace seqfuse

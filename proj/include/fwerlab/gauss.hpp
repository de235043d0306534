#pragma once

#include <cstdint>

// Scalar special functions for the standard normal distribution.
//
// Accuracy targets: complementary tail relative error < 1e-13 over the
// normal-double range, quantile relative error < 1e-12 in both tails.
// Every function is pure and safe for unrestricted concurrent use.

namespace fwerlab {

/// Density of the standard normal, (2*pi)^{-1/2} exp(-x^2/2).
double std_normal_pdf(double x);

/// Cumulative distribution Phi(x). Monotone; Phi(x) + Phi(-x) = 1 to
/// within one rounding of 1.
double std_normal_cdf(double x);

/// Survival function 1 - Phi(x), evaluated with full relative accuracy
/// in the upper tail (never as 1 - cdf).
double std_normal_sf(double x);

/// Quantile Phi^{-1}(p) for p in (0,1). Throws std::domain_error outside.
double std_normal_quantile(double p);

/// Tail quantile: the x with sf(x) = eps, for eps in (0,1), without ever
/// forming 1 - eps. Throws std::domain_error outside (0,1).
double std_normal_quantile_complementary(double eps);

/// n * log(Phi(x)) for n >= 1, computed through the complementary tail so
/// exp of the result equals Phi(x)^n even for n up to 1e8 and beyond.
/// Throws std::domain_error for n < 1.
double log_cdf_pow(double x, std::int64_t n);

namespace detail {
/// Scaled complementary error function exp(t^2) erfc(t) for t >= 0.46875.
double erfcx_upper(double t);
/// exp(-x^2/2) with a split argument so the large-|x| relative error stays
/// at a few ulps instead of growing like x^2 * eps.
double exp_neg_half_square(double x);
}  // namespace detail

}  // namespace fwerlab

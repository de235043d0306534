#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "fwerlab/cutoffs.hpp"

namespace fwerlab {

/// Controls for the deterministic integration of the exchangeable FWER
/// integral. Defaults put the quadrature error far below the Monte Carlo
/// standard error at 1e6 replications.
struct QuadratureSpec {
  double rel_tol = 1e-10;
  double abs_tol = 1e-14;
  double truncation = 12.0;  // integrate the latent factor over [-T, T]
  int max_subdivisions = 2000;

  void validate() const;
};

enum class FwerMethod { closedForm, quadrature, asymptoticApprox };

/// A familywise error rate with the method that produced it and an error
/// estimate: 0 for closed forms, quadrature-plus-truncation bound for the
/// integral, +infinity for the (rate-free) asymptotic approximation.
struct FwerValue {
  double value;
  FwerMethod method;
  double error_estimate;
};

/// Thrown when adaptive subdivision hits its budget before reaching the
/// requested tolerance; carries the best estimate seen.
class QuadratureConvergenceError : public std::runtime_error {
 public:
  QuadratureConvergenceError(std::string what, double best, double err)
      : std::runtime_error(std::move(what)),
        best_estimate(best),
        error_estimate(err) {}

  double best_estimate;
  double error_estimate;
};

/// rho = 0 closed form: 1 - (1 - alpha/n)^n, evaluated in log space.
FwerValue fwer_independent(std::int64_t n, double alpha);

/// rho = 1 closed form: alpha/n (one rejection implies all).
FwerValue fwer_perfectly_correlated(std::int64_t n, double alpha);

/// Adaptive Gauss-Kronrod evaluation of
///   FWER = E_Z[ 1 - Phi^n((c + sqrt(rho) Z)/sqrt(1-rho)) ],  Z ~ N(0,1),
/// for rho strictly inside (0,1). The complementary integrand keeps full
/// relative accuracy even when the result is ~1e-9.
FwerValue fwer_quadrature(const EquicorrProblem& p, const QuadratureSpec& spec);

/// Large-n approximation 1 - exp(-alpha * n^{-rho/(1-rho)}). Carries an
/// unquantified error estimate (+inf) and is never used inside other
/// computations. rho = 1 is a domain error.
FwerValue fwer_asymptotic_approx(const EquicorrProblem& p);

/// Dispatcher: closed forms at rho in {0,1} (exact endpoint input only),
/// quadrature elsewhere.
FwerValue fwer_equicorr(const EquicorrProblem& p, const QuadratureSpec& spec);

/// [Phi(cutoff(n)/sqrt(1-rho))]^n per n: the no-exceedance probability
/// with the shared factor pinned at zero. Converges to 1 for rho in (0,1).
std::vector<std::pair<std::int64_t, double>> cdf_power_at_scaled_cutoff(
    double alpha, double rho, const std::vector<std::int64_t>& ns);

/// One point of the FWER-vs-rho curve with its convexity/bound probes.
struct ConvexityPoint {
  double rho;
  FwerValue fwer;
  std::optional<bool> second_difference_ok;  // interior points only
  bool linear_bound_ok;                      // value <= alpha*(1-rho)+tol
};

/// FWER curve over a sorted rho grid at fixed n, with per-point flags for
/// discrete convexity and the alpha*(1-rho) envelope. Grids smaller than
/// 3 carry no convexity flags.
std::vector<ConvexityPoint> convexity_probe(double alpha, std::int64_t n,
                                            const std::vector<double>& rhos,
                                            const QuadratureSpec& spec,
                                            double tolerance = 1e-3);

namespace detail {
struct GkResult {
  double kronrod;
  double gauss;
  double error;
};
/// One 15-point Kronrod / 7-point Gauss application on [a, b].
GkResult gauss_kronrod_15(const std::function<double(double)>& f, double a,
                          double b);
}  // namespace detail

}  // namespace fwerlab

#pragma once

#include <cstdint>
#include <utility>
#include <vector>

namespace fwerlab {

/// One equicorrelated testing problem: n hypotheses, target level alpha,
/// common correlation rho. Validates its invariants on construction.
struct EquicorrProblem {
  EquicorrProblem(std::int64_t n_, double alpha_, double rho_);

  std::int64_t n;
  double alpha;
  double rho;
};

/// A rejection threshold on the standard-normal scale together with the
/// per-test size it realises: sf(value) == per_test_level.
struct Cutoff {
  double value;
  double per_test_level;
};

/// Threshold for testing each of n hypotheses at size alpha/n, computed
/// through the complementary quantile (1 - alpha/n is never formed).
Cutoff bonferroni_cutoff(const EquicorrProblem& p);

/// Relaxed threshold at per-test size k*alpha/n. Requires k >= 1 and
/// k*alpha < 1; throws std::domain_error otherwise. k = 1 reproduces
/// bonferroni_cutoff exactly.
Cutoff kfwer_cutoff(const EquicorrProblem& p, std::int64_t k);

/// sqrt(2 ln n), the classical growth envelope of the cutoff. n >= 2.
double sqrt_2logn_bound(std::int64_t n);

/// Ratio cutoff(n)/sqrt(2 ln n) per n, for convergence reporting. On a
/// desk grid at alpha = .05 the ratio sits slightly above 1 and decreases
/// toward it; the crossing below 1 happens only near n ~ 2.5e13.
std::vector<std::pair<std::int64_t, double>> cutoff_ratio_diagnostic(
    double alpha, const std::vector<std::int64_t>& ns);

}  // namespace fwerlab

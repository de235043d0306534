#include "fwerlab/cutoffs.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "fwerlab/gauss.hpp"

namespace fwerlab {

EquicorrProblem::EquicorrProblem(std::int64_t n_, double alpha_, double rho_)
    : n(n_), alpha(alpha_), rho(rho_) {
  if (n < 1) {
    throw std::domain_error("EquicorrProblem: n must be >= 1");
  }
  if (!(alpha > 0.0) || !(alpha < 1.0)) {
    throw std::domain_error("EquicorrProblem: alpha must lie in (0,1)");
  }
  if (!(rho >= 0.0) || !(rho <= 1.0)) {
    throw std::domain_error("EquicorrProblem: rho must lie in [0,1]");
  }
}

Cutoff bonferroni_cutoff(const EquicorrProblem& p) {
  const double level = p.alpha / static_cast<double>(p.n);
  return {std_normal_quantile_complementary(level), level};
}

Cutoff kfwer_cutoff(const EquicorrProblem& p, std::int64_t k) {
  if (k < 1) {
    throw std::domain_error("kfwer_cutoff: k must be >= 1");
  }
  if (!(static_cast<double>(k) * p.alpha < 1.0)) {
    throw std::domain_error("kfwer_cutoff: requires k*alpha < 1");
  }
  const double level =
      static_cast<double>(k) * p.alpha / static_cast<double>(p.n);
  return {std_normal_quantile_complementary(level), level};
}

double sqrt_2logn_bound(std::int64_t n) {
  if (n < 2) {
    throw std::domain_error("sqrt_2logn_bound: n must be >= 2");
  }
  return std::sqrt(2.0 * std::log(static_cast<double>(n)));
}

std::vector<std::pair<std::int64_t, double>> cutoff_ratio_diagnostic(
    double alpha, const std::vector<std::int64_t>& ns) {
  std::vector<std::pair<std::int64_t, double>> out;
  out.reserve(ns.size());
  for (const std::int64_t n : ns) {
    const double c = bonferroni_cutoff(EquicorrProblem(n, alpha, 0.0)).value;
    out.emplace_back(n, c / sqrt_2logn_bound(n));
  }
  return out;
}

}  // namespace fwerlab

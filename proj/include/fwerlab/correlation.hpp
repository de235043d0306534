#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>

#include "fwerlab/equicorr.hpp"
#include "fwerlab/mc.hpp"

namespace fwerlab {

/// A validated correlation matrix: symmetric, unit diagonal, positive
/// semidefinite (small negative eigenvalues are clipped). Carries a cached
/// sampling factor F with F F^T = entries and the minimum off-diagonal
/// entry. Immutable after validation, so freely shareable across workers.
class CorrelationMatrix {
 public:
  std::int64_t size() const { return entries_.rows(); }
  const Eigen::MatrixXd& entries() const { return entries_; }
  const Eigen::MatrixXd& factor() const { return factor_; }
  double min_off_diag() const { return min_off_diag_; }
  /// True when validation clipped tiny negative eigenvalues (numerically
  /// indefinite input inside the -1e-10 tolerance).
  bool eigenvalues_clipped() const { return eigenvalues_clipped_; }

 private:
  friend CorrelationMatrix validate_correlation(const Eigen::MatrixXd& raw);
  CorrelationMatrix(Eigen::MatrixXd entries, Eigen::MatrixXd factor,
                    double min_off_diag, bool clipped)
      : entries_(std::move(entries)),
        factor_(std::move(factor)),
        min_off_diag_(min_off_diag),
        eigenvalues_clipped_(clipped) {}

  Eigen::MatrixXd entries_;
  Eigen::MatrixXd factor_;
  double min_off_diag_;
  bool eigenvalues_clipped_;
};

/// Checks squareness, symmetry (1e-12), unit diagonal, entry range and
/// positive semidefiniteness (eigenvalues >= -1e-10, then clipped), caches
/// the factorization. Throws std::invalid_argument naming the failed check
/// and the offending indices. The dense path is capped at n = 10000.
CorrelationMatrix validate_correlation(const Eigen::MatrixXd& raw);

/// Orthant bounds a_1..a_n for quadrant probabilities; all finite.
struct QuadrantSpec {
  Eigen::VectorXd bounds;

  void validate(std::int64_t n) const;
};

/// Monte Carlo FWER of the Bonferroni rule under N(0, Sigma): draws
/// X = F z with z iid standard normal and counts max_i X_i > cutoff.
EstimateResult estimate_fwer_general(const CorrelationMatrix& sigma,
                                     double alpha, const McConfig& cfg);

/// Monte Carlo k-FWER under N(0, Sigma) at the relaxed cutoff.
EstimateResult estimate_kfwer_general(const CorrelationMatrix& sigma,
                                      double alpha, std::int64_t k,
                                      const McConfig& cfg);

/// Deterministic upper bound for FWER(Sigma): the equicorrelated FWER at
/// rho = min off-diagonal, valid whenever that minimum is positive
/// (comparison inequality for Gaussian quadrant probabilities). Throws
/// std::domain_error when min_off_diag <= 0.
FwerValue slepian_upper_bound(const CorrelationMatrix& sigma, double alpha,
                              const QuadratureSpec& spec);

/// Monte Carlo estimate of P(X_i <= a_i for all i) under N(0, Sigma).
EstimateResult quadrant_probability_mc(const CorrelationMatrix& sigma,
                                       const QuadrantSpec& spec,
                                       const McConfig& cfg);

/// Dense, header-free, comma-separated n x n matrix.
CorrelationMatrix load_correlation_csv(const std::string& path);

/// Compact JSON form {"n": ..., "entries": [[...], ...]}.
CorrelationMatrix load_correlation_json(const std::string& path);

}  // namespace fwerlab

#include "fwerlab/correlation.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <vector>

#include <json.hpp>

#include "fwerlab/gauss.hpp"

namespace fwerlab {

namespace {

constexpr double kSymmetryTol = 1e-12;
constexpr double kDiagonalTol = 1e-12;
constexpr double kEigenvalueTol = -1e-10;
constexpr std::int64_t kDenseCap = 10000;

std::string at_indices(Eigen::Index i, Eigen::Index j) {
  std::ostringstream os;
  os << "(" << i << "," << j << ")";
  return os.str();
}

double cutoff_for(std::int64_t n, double level) {
  return std_normal_quantile_complementary(level / static_cast<double>(n));
}

}  // namespace

CorrelationMatrix validate_correlation(const Eigen::MatrixXd& raw) {
  if (raw.rows() != raw.cols() || raw.rows() < 1) {
    throw std::invalid_argument("correlation matrix must be square");
  }
  const Eigen::Index n = raw.rows();
  if (n > kDenseCap) {
    throw std::invalid_argument(
        "correlation matrix exceeds the dense-path cap of n = 10000; use the "
        "equicorrelated engine for larger problems");
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    if (std::abs(raw(i, i) - 1.0) > kDiagonalTol) {
      throw std::invalid_argument("correlation matrix diagonal entry " +
                                  at_indices(i, i) + " is not 1");
    }
    for (Eigen::Index j = i + 1; j < n; ++j) {
      if (std::abs(raw(i, j) - raw(j, i)) > kSymmetryTol) {
        throw std::invalid_argument("correlation matrix is asymmetric at " +
                                    at_indices(i, j));
      }
      if (std::abs(raw(i, j)) > 1.0 + kSymmetryTol) {
        throw std::invalid_argument("correlation matrix entry " +
                                    at_indices(i, j) + " lies outside [-1,1]");
      }
    }
  }

  Eigen::MatrixXd entries = 0.5 * (raw + raw.transpose());

  double min_off_diag = 0.0;
  if (n > 1) {
    min_off_diag = entries(0, 1);
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index j = 0; j < n; ++j) {
        if (i != j) {
          min_off_diag = std::min(min_off_diag, entries(i, j));
        }
      }
    }
  }

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(entries);
  if (eig.info() != Eigen::Success) {
    throw std::invalid_argument("eigendecomposition failed");
  }
  const double min_eig = eig.eigenvalues().minCoeff();
  if (min_eig < kEigenvalueTol) {
    std::ostringstream os;
    os << "correlation matrix is indefinite: smallest eigenvalue " << min_eig;
    throw std::invalid_argument(os.str());
  }

  Eigen::MatrixXd factor;
  if (min_eig > 1e-12) {
    Eigen::LLT<Eigen::MatrixXd> llt(entries);
    if (llt.info() == Eigen::Success) {
      factor = llt.matrixL();
    }
  }
  if (factor.size() == 0) {
    // semidefinite: clip tiny negative eigenvalues and take V sqrt(L)
    Eigen::VectorXd clipped = eig.eigenvalues().cwiseMax(0.0);
    factor = eig.eigenvectors() * clipped.cwiseSqrt().asDiagonal();
  }

  return CorrelationMatrix(std::move(entries), std::move(factor),
                           min_off_diag, min_eig < 0.0);
}

void QuadrantSpec::validate(std::int64_t n) const {
  if (bounds.size() != n) {
    throw std::invalid_argument(
        "quadrant bounds dimension does not match the matrix");
  }
  for (Eigen::Index i = 0; i < bounds.size(); ++i) {
    if (!std::isfinite(bounds(i))) {
      throw std::invalid_argument("quadrant bound " + std::to_string(i) +
                                  " is not finite");
    }
  }
}

namespace {

// Shared batch loop: draws X = F z and counts indicator(X) over the run.
template <typename Indicator>
std::int64_t run_general(const CorrelationMatrix& sigma, const McConfig& cfg,
                         Indicator indicator) {
  const Eigen::Index n = sigma.entries().rows();
  const Eigen::MatrixXd& factor = sigma.factor();
  return detail::run_batches(
      cfg.replications, cfg.batch_size, cfg.threads,
      [&](std::int64_t b, std::int64_t count) {
        CounterRng rng(cfg.seed, static_cast<std::uint64_t>(b));
        Eigen::VectorXd z(n);
        Eigen::VectorXd x(n);
        std::int64_t h = 0;
        for (std::int64_t i = 0; i < count; ++i) {
          for (Eigen::Index d = 0; d < n; ++d) {
            z(d) = rng.next_normal();
          }
          x.noalias() = factor * z;
          h += indicator(x);
        }
        return h;
      });
}

}  // namespace

EstimateResult estimate_fwer_general(const CorrelationMatrix& sigma,
                                     double alpha, const McConfig& cfg) {
  cfg.validate();
  if (!(alpha > 0.0) || !(alpha < 1.0)) {
    throw std::domain_error("estimate_fwer_general: alpha must lie in (0,1)");
  }
  const double c = cutoff_for(sigma.size(), alpha);
  const std::int64_t hits = run_general(
      sigma, cfg,
      [c](const Eigen::VectorXd& x) { return x.maxCoeff() > c ? 1 : 0; });
  return detail::make_estimate(hits, cfg.replications, "mc/general");
}

EstimateResult estimate_kfwer_general(const CorrelationMatrix& sigma,
                                      double alpha, std::int64_t k,
                                      const McConfig& cfg) {
  cfg.validate();
  const EquicorrProblem p(sigma.size(), alpha, 0.0);
  const Cutoff cutoff = kfwer_cutoff(p, k);  // validates k >= 1, k*alpha < 1
  if (k > sigma.size()) {
    return detail::make_estimate(0, cfg.replications, "mc/general-kfwer");
  }
  const double c = cutoff.value;
  const std::int64_t hits =
      run_general(sigma, cfg, [c, k](const Eigen::VectorXd& x) {
        return (x.array() > c).count() >= k ? 1 : 0;
      });
  return detail::make_estimate(hits, cfg.replications, "mc/general-kfwer");
}

FwerValue slepian_upper_bound(const CorrelationMatrix& sigma, double alpha,
                              const QuadratureSpec& spec) {
  const double delta = sigma.min_off_diag();
  if (!(delta > 0.0)) {
    throw std::domain_error(
        "slepian_upper_bound: requires a strictly positive minimum "
        "off-diagonal correlation");
  }
  return fwer_equicorr(EquicorrProblem(sigma.size(), alpha, delta), spec);
}

EstimateResult quadrant_probability_mc(const CorrelationMatrix& sigma,
                                       const QuadrantSpec& spec,
                                       const McConfig& cfg) {
  cfg.validate();
  spec.validate(sigma.size());
  const Eigen::VectorXd bounds = spec.bounds;
  const std::int64_t hits =
      run_general(sigma, cfg, [&bounds](const Eigen::VectorXd& x) {
        return (x.array() <= bounds.array()).all() ? 1 : 0;
      });
  return detail::make_estimate(hits, cfg.replications, "mc/quadrant");
}

CorrelationMatrix load_correlation_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open matrix file: " + path);
  }
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) {
      continue;
    }
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      row.push_back(std::stod(cell));
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) {
    throw std::runtime_error("matrix file is empty: " + path);
  }
  const std::size_t n = rows.size();
  Eigen::MatrixXd m(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    if (rows[i].size() != n) {
      throw std::runtime_error("matrix file is not square: row " +
                               std::to_string(i) + " has " +
                               std::to_string(rows[i].size()) + " of " +
                               std::to_string(n) + " entries");
    }
    for (std::size_t j = 0; j < n; ++j) {
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          rows[i][j];
    }
  }
  return validate_correlation(m);
}

CorrelationMatrix load_correlation_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open matrix file: " + path);
  }
  nlohmann::json j;
  in >> j;
  const auto n = j.at("n").get<std::int64_t>();
  const auto entries = j.at("entries");
  if (static_cast<std::int64_t>(entries.size()) != n) {
    throw std::runtime_error("json matrix: entries row count differs from n");
  }
  Eigen::MatrixXd m(n, n);
  for (std::int64_t i = 0; i < n; ++i) {
    const auto& row = entries.at(static_cast<std::size_t>(i));
    if (static_cast<std::int64_t>(row.size()) != n) {
      throw std::runtime_error("json matrix: row " + std::to_string(i) +
                               " length differs from n");
    }
    for (std::int64_t j2 = 0; j2 < n; ++j2) {
      m(i, j2) = row.at(static_cast<std::size_t>(j2)).get<double>();
    }
  }
  return validate_correlation(m);
}

}  // namespace fwerlab

#include "fwerlab/mc.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <stdexcept>
#include <thread>
#include <utility>

#include "fwerlab/equicorr.hpp"
#include "fwerlab/gauss.hpp"

namespace fwerlab {

void McConfig::validate() const {
  if (replications < 1) {
    throw std::domain_error("McConfig: replications must be >= 1");
  }
  if (batch_size < 1) {
    throw std::domain_error("McConfig: batch_size must be >= 1");
  }
  if (direct_max_ceiling < 1) {
    throw std::domain_error("McConfig: direct_max_ceiling must be >= 1");
  }
}

double threshold_for_draw(const EquicorrProblem& p, double beta) {
  if (p.rho == 1.0) {
    throw std::domain_error(
        "threshold_for_draw: rho = 1 is degenerate; use the closed form");
  }
  const double c = bonferroni_cutoff(p).value;
  return (c - std::sqrt(p.rho) * beta) / std::sqrt(1.0 - p.rho);
}

double sample_max_direct(std::int64_t n, CounterRng& rng,
                         std::int64_t ceiling) {
  if (n < 1) {
    throw std::domain_error("sample_max_direct: n must be >= 1");
  }
  if (n > ceiling) {
    throw std::domain_error(
        "sample_max_direct: n exceeds the direct sampling ceiling; use the "
        "inverse-CDF max sampler");
  }
  double best = rng.next_normal();
  for (std::int64_t i = 1; i < n; ++i) {
    best = std::max(best, rng.next_normal());
  }
  return best;
}

double max_quantile_from_uniform(double u, std::int64_t n) {
  const double eps = -std::expm1(std::log(u) / static_cast<double>(n));
  return std_normal_quantile_complementary(eps);
}

double sample_max_inverse_cdf(std::int64_t n, CounterRng& rng) {
  if (n < 1) {
    throw std::domain_error("sample_max_inverse_cdf: n must be >= 1");
  }
  return max_quantile_from_uniform(rng.next_uniform(), n);
}

double sample_kth_largest_inverse_cdf(std::int64_t n, std::int64_t k,
                                      CounterRng& rng) {
  if (k < 1 || k > n) {
    throw std::domain_error(
        "sample_kth_largest_inverse_cdf: requires 1 <= k <= n");
  }
  // Top-k uniform order statistics by the spacing recursion
  //   U_(n-j+1) = U_(n-j+2) * V_j^{1/(n-j+1)},  V_j iid uniform,
  // accumulated in log space; the k-th largest normal is the tail quantile
  // of -expm1(log U_(n-k+1)).
  double log_u = 0.0;
  for (std::int64_t j = 0; j < k; ++j) {
    log_u += std::log(rng.next_uniform()) / static_cast<double>(n - j);
  }
  return std_normal_quantile_complementary(-std::expm1(log_u));
}

ExchangeableDraw sample_exchangeable_draw(std::int64_t n, MaxSampler sampler,
                                          CounterRng& rng,
                                          std::int64_t ceiling) {
  const double beta = rng.next_normal();
  const double max_w = (sampler == MaxSampler::directMax)
                           ? sample_max_direct(n, rng, ceiling)
                           : sample_max_inverse_cdf(n, rng);
  return {beta, max_w};
}

namespace detail {

std::int64_t run_batches(
    std::int64_t replications, std::int64_t batch_size, int threads,
    const std::function<std::int64_t(std::int64_t, std::int64_t)>& batch) {
  const std::int64_t n_batches =
      (replications + batch_size - 1) / batch_size;
  std::vector<std::int64_t> hits(static_cast<std::size_t>(n_batches), 0);

  auto batch_count = [&](std::int64_t b) {
    return std::min(batch_size, replications - b * batch_size);
  };

  int workers = threads > 0
                    ? threads
                    : static_cast<int>(std::thread::hardware_concurrency());
  workers = std::max(1, std::min<int>(workers, static_cast<int>(n_batches)));

  if (workers == 1) {
    for (std::int64_t b = 0; b < n_batches; ++b) {
      hits[static_cast<std::size_t>(b)] = batch(b, batch_count(b));
    }
  } else {
    std::atomic<std::int64_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::int64_t b = next.fetch_add(1); b < n_batches;
             b = next.fetch_add(1)) {
          hits[static_cast<std::size_t>(b)] = batch(b, batch_count(b));
        }
      });
    }
    for (auto& t : pool) {
      t.join();
    }
  }

  std::int64_t total = 0;
  for (const std::int64_t h : hits) {
    total += h;
  }
  return total;
}

EstimateResult make_estimate(std::int64_t hits, std::int64_t replications,
                             std::string method_tag) {
  const double estimate =
      static_cast<double>(hits) / static_cast<double>(replications);
  const double std_error = std::sqrt(estimate * (1.0 - estimate) /
                                     static_cast<double>(replications));
  return {estimate, std_error, replications, hits, std::move(method_tag)};
}

}  // namespace detail

EstimateResult estimate_fwer(const EquicorrProblem& p, const McConfig& cfg) {
  cfg.validate();
  if (!(p.rho >= 0.0) || !(p.rho < 1.0)) {
    throw std::domain_error(
        "estimate_fwer: rho must lie in [0,1); rho = 1 has the exact closed "
        "form alpha/n");
  }
  const double c = bonferroni_cutoff(p).value;
  const double sqrt_rho = std::sqrt(p.rho);
  const double sqrt_one_minus_rho = std::sqrt(1.0 - p.rho);

  const std::int64_t hits = detail::run_batches(
      cfg.replications, cfg.batch_size, cfg.threads,
      [&](std::int64_t b, std::int64_t count) {
        CounterRng rng(cfg.seed, static_cast<std::uint64_t>(b));
        std::int64_t h = 0;
        for (std::int64_t i = 0; i < count; ++i) {
          const ExchangeableDraw draw = sample_exchangeable_draw(
              p.n, cfg.sampler, rng, cfg.direct_max_ceiling);
          const double threshold =
              (c - sqrt_rho * draw.beta) / sqrt_one_minus_rho;
          h += draw.max_w > threshold;
        }
        return h;
      });

  return detail::make_estimate(hits, cfg.replications,
                               cfg.sampler == MaxSampler::directMax
                                   ? "mc/direct"
                                   : "mc/inverse");
}

EstimateResult estimate_kfwer(const EquicorrProblem& p, std::int64_t k,
                              const McConfig& cfg) {
  cfg.validate();
  if (!(p.rho >= 0.0) || !(p.rho < 1.0)) {
    throw std::domain_error("estimate_kfwer: rho must lie in [0,1)");
  }
  const Cutoff cutoff = kfwer_cutoff(p, k);  // validates k and k*alpha
  if (k > p.n) {
    // more false rejections than hypotheses is impossible
    return detail::make_estimate(0, cfg.replications, "mc/kfwer-impossible");
  }
  if (cfg.sampler == MaxSampler::directMax && p.n > cfg.direct_max_ceiling) {
    throw std::domain_error(
        "estimate_kfwer: n exceeds the direct sampling ceiling; use the "
        "inverse-CDF sampler's order-statistic path");
  }
  const double c = cutoff.value;
  const double sqrt_rho = std::sqrt(p.rho);
  const double sqrt_one_minus_rho = std::sqrt(1.0 - p.rho);
  const bool direct = cfg.sampler == MaxSampler::directMax;

  const std::int64_t hits = detail::run_batches(
      cfg.replications, cfg.batch_size, cfg.threads,
      [&](std::int64_t b, std::int64_t count) {
        CounterRng rng(cfg.seed, static_cast<std::uint64_t>(b));
        std::int64_t h = 0;
        for (std::int64_t i = 0; i < count; ++i) {
          const double beta = rng.next_normal();
          const double threshold =
              (c - sqrt_rho * beta) / sqrt_one_minus_rho;
          if (direct) {
            std::int64_t exceed = 0;
            for (std::int64_t j = 0; j < p.n; ++j) {
              exceed += rng.next_normal() > threshold;
            }
            h += exceed >= k;
          } else {
            h += sample_kth_largest_inverse_cdf(p.n, k, rng) > threshold;
          }
        }
        return h;
      });

  return detail::make_estimate(
      hits, cfg.replications, direct ? "mc/kfwer-direct" : "mc/kfwer-order");
}

std::vector<std::vector<EstimateResult>> table_one_run(
    double alpha, const std::vector<std::int64_t>& ns,
    const std::vector<double>& rhos, const McConfig& cfg) {
  cfg.validate();
  std::vector<std::vector<EstimateResult>> grid;
  grid.reserve(rhos.size());
  for (std::size_t r = 0; r < rhos.size(); ++r) {
    std::vector<EstimateResult> row;
    row.reserve(ns.size());
    for (std::size_t c = 0; c < ns.size(); ++c) {
      const EquicorrProblem p(ns[c], alpha, rhos[r]);
      if (p.rho == 0.0 || p.rho == 1.0) {
        const double exact = (p.rho == 0.0)
                                 ? fwer_independent(p.n, p.alpha).value
                                 : fwer_perfectly_correlated(p.n, p.alpha).value;
        row.push_back({exact, 0.0, 0, 0, "closed-form"});
      } else {
        McConfig cell_cfg = cfg;
        cell_cfg.seed = derive_seed(
            cfg.seed, static_cast<std::uint64_t>(r * ns.size() + c));
        row.push_back(estimate_fwer(p, cell_cfg));
      }
    }
    grid.push_back(std::move(row));
  }
  return grid;
}

}  // namespace fwerlab

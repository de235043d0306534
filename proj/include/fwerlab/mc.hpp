#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "fwerlab/cutoffs.hpp"
#include "fwerlab/rng.hpp"

namespace fwerlab {

enum class MaxSampler { directMax, inverseCdfMax };

/// Monte Carlo run controls. Batches of batch_size replications each own
/// an independent substream derived from (seed, batch index); totals are
/// identical for any thread count or scheduling order.
struct McConfig {
  std::int64_t replications = 1'000'000;
  std::uint64_t seed = 0;
  MaxSampler sampler = MaxSampler::inverseCdfMax;
  std::int64_t batch_size = 1 << 16;
  std::int64_t direct_max_ceiling = 10'000'000;
  int threads = 0;  // 0 picks hardware concurrency

  void validate() const;
};

/// Outcome of an indicator-mean estimation: estimate == hits/replications
/// exactly, std_error is the binomial formula.
struct EstimateResult {
  double estimate;
  double std_error;
  std::int64_t replications;
  std::int64_t hits;
  std::string method_tag;
};

/// One replication of the exchangeable decomposition: the shared factor
/// and the max of n scaled idiosyncratic terms.
struct ExchangeableDraw {
  double beta;
  double max_w;
};

/// Per-replication threshold (cutoff - sqrt(rho)*beta)/sqrt(1-rho) that the
/// max of the W_i is compared against. rho = 1 is a domain error.
double threshold_for_draw(const EquicorrProblem& p, double beta);

/// Max of n iid standard normals by direct enumeration; consumes exactly n
/// variates. Refuses n above `ceiling` (use the inverse-CDF sampler there).
double sample_max_direct(std::int64_t n, CounterRng& rng,
                         std::int64_t ceiling = 10'000'000);

/// Value of the max-of-n CDF inverse at u: the x with Phi(x)^n = u,
/// computed as sf^{-1}(-expm1(log(u)/n)) so 1 - u^{1/n} keeps full
/// precision even at n = 1e8.
double max_quantile_from_uniform(double u, std::int64_t n);

/// Max of n iid standard normals in O(1): one uniform through
/// max_quantile_from_uniform.
double sample_max_inverse_cdf(std::int64_t n, CounterRng& rng);

/// k-th largest of n iid standard normals in O(k) via the top-k uniform
/// spacing recursion; consumes exactly k uniforms. Requires 1 <= k <= n.
double sample_kth_largest_inverse_cdf(std::int64_t n, std::int64_t k,
                                      CounterRng& rng);

/// One exchangeable replication with the configured max sampler.
ExchangeableDraw sample_exchangeable_draw(std::int64_t n, MaxSampler sampler,
                                          CounterRng& rng,
                                          std::int64_t ceiling = 10'000'000);

/// Monte Carlo FWER of the Bonferroni rule under the equicorrelated model,
/// rho in [0,1). Deterministic for a fixed config.
EstimateResult estimate_fwer(const EquicorrProblem& p, const McConfig& cfg);

/// Monte Carlo k-FWER at the relaxed cutoff. Direct sampler counts
/// exceedances among n materialized variates (subject to the ceiling); the
/// inverse-CDF sampler draws the k-th order statistic directly. k > n
/// returns an exact zero estimate.
EstimateResult estimate_kfwer(const EquicorrProblem& p, std::int64_t k,
                              const McConfig& cfg);

/// Grid of estimates, one row per rho and one column per n. Endpoint rows
/// (rho 0 or 1) are filled from the closed forms with zero-replication
/// results; every Monte Carlo cell gets its own derived seed.
std::vector<std::vector<EstimateResult>> table_one_run(
    double alpha, const std::vector<std::int64_t>& ns,
    const std::vector<double>& rhos, const McConfig& cfg);

namespace detail {
/// Runs `batch(index, count)` over ceil(replications/batch_size) batches,
/// possibly in parallel, and sums the returned hit counts in index order.
std::int64_t run_batches(
    std::int64_t replications, std::int64_t batch_size, int threads,
    const std::function<std::int64_t(std::int64_t, std::int64_t)>& batch);

EstimateResult make_estimate(std::int64_t hits, std::int64_t replications,
                             std::string method_tag);
}  // namespace detail

}  // namespace fwerlab

#include "fwerlab/equicorr.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>

#include "fwerlab/gauss.hpp"

namespace fwerlab {

namespace detail {

namespace {
// 15-point Kronrod extension of the 7-point Gauss rule (QUADPACK dqk15).
constexpr double kXgk[8] = {
    0.9914553711208126, 0.9491079123427585, 0.8648644233597691,
    0.7415311855993944, 0.5860872354676911, 0.4058451513773972,
    0.2077849550078985, 0.0};
constexpr double kWgk[8] = {
    0.0229353220105292, 0.0630920926299785, 0.1047900103222502,
    0.1406532597155259, 0.1690047266392679, 0.1903505780647854,
    0.2044329400752989, 0.2094821410847278};
constexpr double kWg[4] = {
    0.1294849661688697, 0.2797053914892767, 0.3818300505051189,
    0.4179591836734694};
}  // namespace

GkResult gauss_kronrod_15(const std::function<double(double)>& f, double a,
                          double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);

  const double fc = f(center);
  double resk = kWgk[7] * fc;
  double resg = kWg[3] * fc;
  for (int j = 0; j < 7; ++j) {
    const double dx = half * kXgk[j];
    const double fsum = f(center - dx) + f(center + dx);
    resk += kWgk[j] * fsum;
    if (j % 2 == 1) {  // odd Kronrod indices are the embedded Gauss nodes
      resg += kWg[j / 2] * fsum;
    }
  }
  const double integral = resk * half;
  const double err = std::abs((resk - resg) * half);
  return {integral, resg * half, err};
}

}  // namespace detail

void QuadratureSpec::validate() const {
  if (!(rel_tol > 0.0) || !(abs_tol > 0.0)) {
    throw std::domain_error("QuadratureSpec: tolerances must be positive");
  }
  if (!(truncation >= 8.0)) {
    throw std::domain_error("QuadratureSpec: truncation must be >= 8");
  }
  if (max_subdivisions < 10) {
    throw std::domain_error("QuadratureSpec: max_subdivisions must be >= 10");
  }
}

FwerValue fwer_independent(std::int64_t n, double alpha) {
  const EquicorrProblem p(n, alpha, 0.0);  // validates n, alpha
  const double nd = static_cast<double>(p.n);
  const double value = -std::expm1(nd * std::log1p(-p.alpha / nd));
  return {value, FwerMethod::closedForm, 0.0};
}

FwerValue fwer_perfectly_correlated(std::int64_t n, double alpha) {
  const EquicorrProblem p(n, alpha, 1.0);
  return {p.alpha / static_cast<double>(p.n), FwerMethod::closedForm, 0.0};
}

FwerValue fwer_quadrature(const EquicorrProblem& p,
                          const QuadratureSpec& spec) {
  if (!(p.rho > 0.0) || !(p.rho < 1.0)) {
    throw std::domain_error(
        "fwer_quadrature: rho must lie strictly in (0,1); the endpoints have "
        "closed forms");
  }
  spec.validate();

  const double c = bonferroni_cutoff(p).value;
  const double sqrt_rho = std::sqrt(p.rho);
  const double sqrt_one_minus_rho = std::sqrt(1.0 - p.rho);
  const std::int64_t n = p.n;

  const std::function<double(double)> integrand = [=](double z) {
    const double arg = (c + sqrt_rho * z) / sqrt_one_minus_rho;
    return std_normal_pdf(z) * (-std::expm1(log_cdf_pow(arg, n)));
  };

  const double T = spec.truncation;
  std::vector<double> knots = {-T, T};
  if (n >= 2) {
    // centre of the Phi^n transition; seeding a knot there avoids a missed
    // spike when the transition is narrow
    const double z_star =
        (sqrt_one_minus_rho *
             std_normal_quantile_complementary(1.0 / static_cast<double>(n)) -
         c) /
        sqrt_rho;
    if (z_star > -T + 0.5 && z_star < T - 0.5) {
      knots.insert(knots.begin() + 1, z_star);
    }
  }

  struct Segment {
    double a, b, integral, error;
    bool operator<(const Segment& o) const { return error < o.error; }
  };
  std::priority_queue<Segment> queue;
  double total = 0.0;
  double total_err = 0.0;
  int segments = 0;
  for (std::size_t i = 0; i + 1 < knots.size(); ++i) {
    const auto r = detail::gauss_kronrod_15(integrand, knots[i], knots[i + 1]);
    queue.push({knots[i], knots[i + 1], r.kronrod, r.error});
    total += r.kronrod;
    total_err += r.error;
    ++segments;
  }

  while (total_err > std::max(spec.rel_tol * std::abs(total), spec.abs_tol)) {
    if (segments >= spec.max_subdivisions) {
      throw QuadratureConvergenceError(
          "fwer_quadrature: subdivision budget exhausted before reaching "
          "tolerance",
          std::clamp(total, 0.0, 1.0), total_err + 2.0 * std_normal_sf(T));
    }
    Segment worst = queue.top();
    queue.pop();
    total -= worst.integral;
    total_err -= worst.error;
    const double mid = 0.5 * (worst.a + worst.b);
    for (const auto& [lo, hi] :
         {std::pair{worst.a, mid}, std::pair{mid, worst.b}}) {
      const auto r = detail::gauss_kronrod_15(integrand, lo, hi);
      queue.push({lo, hi, r.kronrod, r.error});
      total += r.kronrod;
      total_err += r.error;
    }
    ++segments;
  }

  const double truncation_bound = 2.0 * std_normal_sf(T);
  return {std::clamp(total, 0.0, 1.0), FwerMethod::quadrature,
          total_err + truncation_bound};
}

FwerValue fwer_asymptotic_approx(const EquicorrProblem& p) {
  if (p.rho == 1.0) {
    throw std::domain_error(
        "fwer_asymptotic_approx: exponent undefined at rho = 1");
  }
  const double exponent =
      -p.rho / (1.0 - p.rho) * std::log(static_cast<double>(p.n));
  const double value = -std::expm1(-p.alpha * std::exp(exponent));
  return {value, FwerMethod::asymptoticApprox,
          std::numeric_limits<double>::infinity()};
}

FwerValue fwer_equicorr(const EquicorrProblem& p, const QuadratureSpec& spec) {
  if (p.rho == 0.0) {
    return fwer_independent(p.n, p.alpha);
  }
  if (p.rho == 1.0) {
    return fwer_perfectly_correlated(p.n, p.alpha);
  }
  return fwer_quadrature(p, spec);
}

std::vector<std::pair<std::int64_t, double>> cdf_power_at_scaled_cutoff(
    double alpha, double rho, const std::vector<std::int64_t>& ns) {
  if (!(rho > 0.0) || !(rho < 1.0)) {
    throw std::domain_error(
        "cdf_power_at_scaled_cutoff: rho must lie strictly in (0,1)");
  }
  const double scale = std::sqrt(1.0 - rho);
  std::vector<std::pair<std::int64_t, double>> out;
  out.reserve(ns.size());
  for (const std::int64_t n : ns) {
    const double c = bonferroni_cutoff(EquicorrProblem(n, alpha, rho)).value;
    out.emplace_back(n, std::exp(log_cdf_pow(c / scale, n)));
  }
  return out;
}

std::vector<ConvexityPoint> convexity_probe(double alpha, std::int64_t n,
                                            const std::vector<double>& rhos,
                                            const QuadratureSpec& spec,
                                            double tolerance) {
  if (!std::is_sorted(rhos.begin(), rhos.end())) {
    throw std::domain_error("convexity_probe: rho grid must be sorted");
  }
  std::vector<ConvexityPoint> out;
  out.reserve(rhos.size());
  for (const double rho : rhos) {
    const FwerValue v = fwer_equicorr(EquicorrProblem(n, alpha, rho), spec);
    const bool bound_ok = v.value <= alpha * (1.0 - rho) + tolerance;
    out.push_back({rho, v, std::nullopt, bound_ok});
  }
  if (out.size() >= 3) {
    for (std::size_t i = 1; i + 1 < out.size(); ++i) {
      const double h1 = out[i].rho - out[i - 1].rho;
      const double h2 = out[i + 1].rho - out[i].rho;
      const double slope1 = (out[i].fwer.value - out[i - 1].fwer.value) / h1;
      const double slope2 = (out[i + 1].fwer.value - out[i].fwer.value) / h2;
      const double second = 2.0 * (slope2 - slope1) / (h1 + h2);
      out[i].second_difference_ok = second >= -tolerance;
    }
  }
  return out;
}

}  // namespace fwerlab

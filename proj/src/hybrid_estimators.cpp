#include "sumest/hybrid_estimators.hpp"

#include <stdexcept>

namespace sumest {

void validate(const HarmonicConfig& cfg) {
  if (!(cfg.eps > 0.0 && cfg.eps < 1.0)) {
    throw std::invalid_argument("harmonic_estimate: eps must lie in (0,1)");
  }
  if (!(cfg.theta_tilde > 0.0) || !std::isfinite(cfg.theta_tilde)) {
    throw std::invalid_argument("harmonic_estimate: theta_tilde must be positive");
  }
  if (!(cfg.phi > 0.0) || !std::isfinite(cfg.phi)) {
    throw std::invalid_argument("harmonic_estimate: phi must be positive");
  }
}

std::uint64_t harmonic_sample_count(const HarmonicConfig& cfg, double p_hat) {
  const double k = 45.0 * cfg.theta_tilde /
                   (cfg.phi * (1.0 - cfg.eps / 3.0) * p_hat * cfg.eps * cfg.eps);
  return std::max<std::uint64_t>(1, static_cast<std::uint64_t>(std::ceil(k)));
}

double coupon_patience(std::size_t distinct) {
  const double s = static_cast<double>(distinct);
  return 4.0 * s * std::log(3.0 * s);
}

std::uint64_t threshold_sample_count(std::uint64_t n, double eps) {
  const double nd = static_cast<double>(n);
  if (!(eps >= 8.0 / std::sqrt(nd))) {
    throw std::invalid_argument("find_threshold: requires eps >= 8/sqrt(n)");
  }
  return static_cast<std::uint64_t>(
      std::ceil(120.0 * std::cbrt(nd) * std::pow(eps, 2.0 / 3.0)));
}

std::string_view to_string(HybridBranch branch) {
  switch (branch) {
    case HybridBranch::kCouponCollector: return "coupon-collector";
    case HybridBranch::kSmallEpsProp: return "small-eps-prop";
    case HybridBranch::kQuantile: return "quantile";
    case HybridBranch::kHarmonic: return "harmonic";
  }
  return "unknown";
}

HybridBranch select_branch(std::uint64_t n, double eps, double p_hat) {
  const double nd = static_cast<double>(n);
  const double root = std::sqrt(nd);
  // ln(1) = 0 makes the bound infinite: a one-item universe is always collected.
  if (eps <= 1.0 / (root * std::log(nd))) return HybridBranch::kCouponCollector;
  if (eps < 8.0 / root) return HybridBranch::kSmallEpsProp;
  return p_hat >= 0.5 ? HybridBranch::kQuantile : HybridBranch::kHarmonic;
}

std::uint64_t hybrid_abort_budget(std::uint64_t n, double eps, double abort_constant) {
  if (!(abort_constant > 0.0)) {
    throw std::invalid_argument("hybrid_estimate: abort constant must be positive");
  }
  return static_cast<std::uint64_t>(
      std::floor(abort_constant * std::cbrt(static_cast<double>(n)) /
                 std::pow(eps, 4.0 / 3.0)));
}

}  // namespace sumest

#include "sumest/amplify.hpp"

namespace sumest {

std::uint64_t required_successes(double eps, const BernoulliConfig& cfg) {
  if (!(eps > 0.0 && eps < 1.0)) {
    throw std::invalid_argument("bernoulli_estimate: eps must lie in (0,1)");
  }
  if (!(cfg.success_constant > 0.0)) {
    throw std::invalid_argument("bernoulli_estimate: constant must be positive");
  }
  return static_cast<std::uint64_t>(std::ceil(1.0 + cfg.success_constant / (eps * eps)));
}

double binomial_upper_tail(std::uint64_t runs, double q, std::uint64_t k) {
  if (k == 0) return 1.0;
  if (k > runs) return 0.0;
  if (q <= 0.0) return 0.0;
  if (q >= 1.0) return 1.0;
  const double n = static_cast<double>(runs);
  const double log_q = std::log(q);
  const double log_1q = std::log1p(-q);
  double tail = 0.0;
  for (std::uint64_t i = runs + 1; i-- > k;) {
    const double x = static_cast<double>(i);
    const double log_term = std::lgamma(n + 1) - std::lgamma(x + 1) -
                            std::lgamma(n - x + 1) + x * log_q +
                            (n - x) * log_1q;
    tail += std::exp(log_term);
  }
  return std::min(tail, 1.0);
}

std::uint64_t repetitions_for(double target_failure, double per_run_failure) {
  if (!(per_run_failure > 0.0 && per_run_failure < 0.5)) {
    throw std::invalid_argument("repetitions_for: per-run failure must lie in (0, 1/2)");
  }
  if (!(target_failure > 0.0 && target_failure < 1.0)) {
    throw std::invalid_argument("repetitions_for: target failure must lie in (0, 1)");
  }
  constexpr std::uint64_t kMaxRuns = 1'000'001;
  for (std::uint64_t r = 1; r <= kMaxRuns; r += 2) {
    if (binomial_upper_tail(r, per_run_failure, (r + 1) / 2) <= target_failure) {
      return r;
    }
  }
  throw std::invalid_argument("repetitions_for: target failure unreachable");
}

double median_of(std::vector<double> values) {
  if (values.empty() || values.size() % 2 == 0) {
    throw std::invalid_argument("median_of: need an odd number of values");
  }
  const auto mid = values.begin() + static_cast<std::ptrdiff_t>(values.size() / 2);
  std::nth_element(values.begin(), mid, values.end());
  return *mid;
}

}  // namespace sumest

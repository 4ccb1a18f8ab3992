#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "sumest/amplify.hpp"
#include "sumest/instance.hpp"
#include "sumest/prop_estimators.hpp"
#include "sumest/sampler.hpp"
#include "sumest/set_size.hpp"

namespace sumest {

// ---------------------------------------------------------------------------
// Harmonic-mean estimate of the average weight W/n.
// ---------------------------------------------------------------------------

struct HarmonicConfig {
  double eps = 0.1;
  double theta_tilde = 1.0;  // advice: an upper bound on W/n
  double phi = 1.0;          // weights below phi are clipped to b_i = 0
};

struct HarmonicOptions {
  double target_failure = 1.0 / 10.0;  // for p_hat
  double per_run_failure = 1.0 / 3.0;
  BernoulliConfig bernoulli;
};

struct HarmonicTrace {
  double p_hat = 0.0;       // estimate of P_unif(w >= phi)
  std::uint64_t k = 0;      // proportional draws in the harmonic phase
  double H = 0.0;           // mean of the clipped inverse weights
  double theta_hat = 0.0;   // p_hat / H, +infinity when H == 0
};

void validate(const HarmonicConfig& cfg);

// ceil(45 * theta_tilde / (phi * (1 - eps/3) * p_hat * eps^2)), at least 1.
std::uint64_t harmonic_sample_count(const HarmonicConfig& cfg, double p_hat);

// Requires P_unif(w >= phi) > 0, otherwise the p_hat loop does not end
// unless the source enforces a budget.
template <HybridSource S>
HarmonicTrace harmonic_estimate(S& src, const HarmonicConfig& cfg,
                                const HarmonicOptions& opt = {}) {
  validate(cfg);
  HarmonicTrace out;
  out.p_hat = median_amplify(
      [&] {
        return bernoulli_estimate([&] { return src.uniform().weight >= cfg.phi; },
                                  cfg.eps / 3.0, opt.bernoulli)
            .p_hat;
      },
      opt.target_failure, opt.per_run_failure);

  out.k = harmonic_sample_count(cfg, out.p_hat);
  // The inverse weights are summed relative to the first kept weight w_ref,
  // so equal weights give theta_hat = p_hat * w exactly.
  double w_ref = 0.0;
  long double relative_sum = 0.0L;
  for (std::uint64_t i = 0; i < out.k; ++i) {
    const double w = src.proportional().weight;
    if (w < cfg.phi) continue;
    if (w_ref == 0.0) w_ref = w;
    relative_sum += w_ref / w;
  }
  const double kd = static_cast<double>(out.k);
  const double rel = static_cast<double>(relative_sum);
  if (w_ref == 0.0) {
    out.H = 0.0;
    out.theta_hat = kInfiniteEstimate;
  } else {
    out.H = rel / kd / w_ref;
    out.theta_hat = out.p_hat * (w_ref * (kd / rel));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Exact recovery by coupon collecting.
// ---------------------------------------------------------------------------

struct CouponResult {
  double sum = 0.0;             // exact sum over `items`
  std::vector<ItemDraw> items;  // distinct items seen, first-seen order
  std::uint64_t draws = 0;
};

// Stop rule: k consecutive draws without a new item, k >= 4|S| ln(3|S|).
double coupon_patience(std::size_t distinct);

template <DrawSource Draw>
CouponResult coupon_collect(Draw&& unif) {
  CouponResult out;
  std::unordered_set<ItemId> seen;
  std::uint64_t streak = 0;
  while (seen.empty() || static_cast<double>(streak) < coupon_patience(seen.size())) {
    const ItemDraw d = unif();
    ++out.draws;
    if (seen.insert(d.id).second) {
      out.items.push_back(d);
      streak = 0;
    } else {
      ++streak;
    }
  }
  std::vector<double> weights;
  weights.reserve(out.items.size());
  for (const auto& d : out.items) weights.push_back(d.weight);
  out.sum = canonical_sum(std::move(weights));
  return out;
}

// ---------------------------------------------------------------------------
// Known-n hybrid estimator.
// ---------------------------------------------------------------------------

// ceil(120 * n^(1/3) * eps^(2/3)).
std::uint64_t threshold_sample_count(std::uint64_t n, double eps);

// 180-th largest weight among threshold_sample_count(n, eps) uniform draws.
// Requires eps >= 8 / sqrt(n).
template <DrawSource Draw>
double find_threshold(Draw&& unif, std::uint64_t n, double eps) {
  constexpr std::size_t kRank = 180;
  const std::uint64_t count = threshold_sample_count(n, eps);
  std::vector<double> sampled;
  sampled.reserve(count);
  for (std::uint64_t i = 0; i < count; ++i) sampled.push_back(unif().weight);
  const auto nth = sampled.begin() + (kRank - 1);
  std::nth_element(sampled.begin(), nth, sampled.end(), std::greater<>{});
  return *nth;
}

enum class HybridBranch { kCouponCollector, kSmallEpsProp, kQuantile, kHarmonic };

std::string_view to_string(HybridBranch branch);

// Pure dispatch rule: coupon collector when eps <= 1/(sqrt(n) ln n), the
// collision estimator with advice n when eps < 8/sqrt(n), otherwise the
// quantile branch iff p_hat >= 1/2. p_hat is ignored by the first two.
HybridBranch select_branch(std::uint64_t n, double eps, double p_hat);

struct HybridOptions {
  double abort_constant = 1000.0;  // C in the C * n^(1/3) / eps^(4/3) budget
  double target_failure = 1.0 / 20.0;
  double per_run_failure = 1.0 / 3.0;
  BernoulliConfig bernoulli;
};

// floor(C * n^(1/3) / eps^(4/3)).
std::uint64_t hybrid_abort_budget(std::uint64_t n, double eps, double abort_constant);

struct HybridTrace {
  HybridBranch branch = HybridBranch::kQuantile;
  double theta = std::numeric_limits<double>::quiet_NaN();
  double p_hat = std::numeric_limits<double>::quiet_NaN();
  double W_hat = std::numeric_limits<double>::quiet_NaN();
  bool aborted = false;
  std::uint64_t budget = 0;  // 0 outside the main body
};

template <HybridSource S>
HybridTrace hybrid_estimate(S& src, std::uint64_t n, double eps,
                            const HybridOptions& opt = {}) {
  if (n == 0) throw std::invalid_argument("hybrid_estimate: n must be positive");
  if (!(eps > 0.0 && eps < 1.0)) {
    throw std::invalid_argument("hybrid_estimate: eps must lie in (0,1)");
  }
  HybridTrace out;
  out.branch = select_branch(n, eps, 1.0);
  if (out.branch == HybridBranch::kCouponCollector) {
    out.W_hat = coupon_collect([&] { return src.uniform(); }).sum;
    return out;
  }
  if (out.branch == HybridBranch::kSmallEpsProp) {
    out.W_hat = prop_estimate([&] { return src.proportional(); },
                              static_cast<double>(n), eps);
    return out;
  }

  out.budget = hybrid_abort_budget(n, eps, opt.abort_constant);
  BudgetedSource<S> guarded(src, out.budget);
  try {
    const double theta = find_threshold([&] { return guarded.uniform(); }, n, eps);
    out.theta = theta;
    out.p_hat = median_amplify(
        [&] {
          return bernoulli_estimate(
                     [&] { return guarded.proportional().weight >= theta; },
                     eps / 3.0, opt.bernoulli)
              .p_hat;
        },
        opt.target_failure, opt.per_run_failure);
    out.branch = select_branch(n, eps, out.p_hat);

    if (out.branch == HybridBranch::kQuantile) {
      const double n_heavy = 2.0 * std::pow(static_cast<double>(n) / eps, 2.0 / 3.0);
      // Rejected draws are real oracle queries and count against the budget.
      auto heavy_draw = [&] {
        for (;;) {
          ItemDraw d = guarded.proportional();
          if (d.weight >= theta) return d;
        }
      };
      const double w_heavy = median_amplify(
          [&] { return prop_estimate(heavy_draw, n_heavy, eps / 3.0); },
          opt.target_failure, opt.per_run_failure);
      out.W_hat = w_heavy / out.p_hat;
    } else {
      const HarmonicConfig cfg{eps, 3.0 * theta, theta};
      HarmonicOptions hopt;
      hopt.bernoulli = opt.bernoulli;
      const double rho = median_amplify(
          [&] { return harmonic_estimate(guarded, cfg, hopt).theta_hat; },
          opt.target_failure, opt.per_run_failure);
      out.W_hat = static_cast<double>(n) * rho;
    }
  } catch (const BudgetExhausted&) {
    out.aborted = true;
    out.W_hat = std::numeric_limits<double>::quiet_NaN();
  }
  return out;
}

// ---------------------------------------------------------------------------
// Unknown-n hybrid estimator.
// ---------------------------------------------------------------------------

struct NoAdviceHybridOptions {
  double target_failure = 1.0 / 6.0;
  double per_run_failure = 1.0 / 3.0;
};

struct NoAdviceHybridResult {
  double n_tilde = 0.0;
  double W_hat = 0.0;
};

template <HybridSource S>
NoAdviceHybridResult no_advice_hybrid_estimate(S& src, double eps,
                                               const NoAdviceHybridOptions& opt = {}) {
  NoAdviceHybridResult out;
  out.n_tilde = median_amplify(
      [&] { return set_size_estimate([&] { return src.uniform(); }).n_hat; },
      opt.target_failure, opt.per_run_failure);
  out.W_hat = median_amplify(
      [&] { return prop_estimate([&] { return src.proportional(); }, out.n_tilde, eps); },
      opt.target_failure, opt.per_run_failure);
  return out;
}

}  // namespace sumest

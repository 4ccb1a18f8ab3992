#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <unordered_map>
#include <vector>

#include "sumest/amplify.hpp"
#include "sumest/instance.hpp"
#include "sumest/rng.hpp"
#include "sumest/sampler.hpp"
#include "sumest/set_size.hpp"

namespace sumest {

inline constexpr double kInfiniteEstimate = std::numeric_limits<double>::infinity();

// Multiplicities of the distinct items in a proportional sample, in order of
// first appearance.
class CollisionTally {
 public:
  struct Entry {
    ItemDraw item;
    std::uint64_t count = 0;
  };

  CollisionTally() = default;
  explicit CollisionTally(std::span<const ItemDraw> sample);

  void add(const ItemDraw& draw);

  std::uint64_t sample_count() const noexcept { return m_; }
  const std::vector<Entry>& entries() const noexcept { return entries_; }

  // C(m,2) / sum_s C(c_s,2) / w(s); +infinity when no item repeats.
  double estimate() const;

 private:
  std::vector<Entry> entries_;
  std::unordered_map<ItemId, std::size_t> index_;
  std::uint64_t m_ = 0;
};

// ceil(sqrt(24 * n_tilde) / eps) + 1.
std::uint64_t prop_sample_count(double n_tilde, double eps);

// Collision estimator with size advice n_tilde. E[1/W_hat] = 1/W; if
// n_tilde >= n then |W_hat - W| <= eps * W with probability >= 2/3.
template <DrawSource Draw>
double prop_estimate(Draw&& prop, double n_tilde, double eps) {
  const std::uint64_t m = prop_sample_count(n_tilde, eps);
  CollisionTally tally;
  for (std::uint64_t i = 0; i < m; ++i) tally.add(prop());
  return tally.estimate();
}

// ---------------------------------------------------------------------------
// Dyadic buckets B_b = { a : w(a) in [2^b, 2^(b+1)) }.
// ---------------------------------------------------------------------------

// floor(log2(weight)); throws std::invalid_argument unless 0 < weight < inf.
int bucket_index(double weight);

inline bool in_bucket(double weight, int b) {
  return weight > 0.0 && std::isfinite(weight) && std::ilogb(weight) == b;
}

// Proportional draw conditioned on landing in bucket b: redraws until the
// bucket is hit. Throws BudgetExhausted after `budget` misses-and-hits.
template <DrawSource Draw>
ItemDraw prop_bucket_sample(Draw&& prop, int b, std::uint64_t budget = kUnlimited) {
  for (std::uint64_t used = 0; used < budget; ++used) {
    ItemDraw d = prop();
    if (in_bucket(d.weight, b)) return d;
  }
  throw BudgetExhausted(budget);
}

// Uniform draw from bucket b by rejection: a bucket item a is kept with
// probability 2^b / w(a) >= 1/2. `budget` bounds the proportional draws
// of the whole call.
template <DrawSource Draw>
ItemDraw unif_bucket_sample(Draw&& prop, int b, Rng& rng,
                            std::uint64_t budget = kUnlimited) {
  const double floor_weight = std::ldexp(1.0, b);
  for (std::uint64_t used = 0; used < budget; ++used) {
    ItemDraw d = prop();
    if (!in_bucket(d.weight, b)) continue;
    if (rng.unit() < floor_weight / d.weight) return d;
  }
  throw BudgetExhausted(budget);
}

// ---------------------------------------------------------------------------
// Sum estimation from proportional samples alone, no size advice.
// ---------------------------------------------------------------------------

struct NoAdviceBreakdown {
  int b = 0;
  double n_tilde_b = 0.0;  // median set-size estimate of B_b
  double W_hat_b = 0.0;    // median collision estimate of the bucket sum
  double P_hat_b = 0.0;    // median estimate of P_prop(a in B_b)
  double W_hat = 0.0;      // W_hat_b / P_hat_b
};

struct NoAdviceOptions {
  double target_failure = 1.0 / 10.0;
  double per_run_failure = 1.0 / 3.0;
  BernoulliConfig bernoulli;
  // Per bucket-sampler call.
  std::uint64_t bucket_budget = kUnlimited;
};

template <DrawSource Draw>
NoAdviceBreakdown no_advice_prop_estimate(Draw&& prop, Rng& rng, double eps,
                                          const NoAdviceOptions& opt = {}) {
  if (!(eps > 0.0 && eps < 1.0)) {
    throw std::invalid_argument("no_advice_prop_estimate: eps must lie in (0,1)");
  }
  NoAdviceBreakdown out;
  const ItemDraw first = prop();
  const ItemDraw second = prop();
  out.b = std::max(bucket_index(first.weight), bucket_index(second.weight));
  const int b = out.b;

  auto unif_in_bucket = [&] { return unif_bucket_sample(prop, b, rng, opt.bucket_budget); };
  auto prop_in_bucket = [&] { return prop_bucket_sample(prop, b, opt.bucket_budget); };

  out.n_tilde_b = median_amplify(
      [&] { return set_size_estimate(unif_in_bucket).n_hat; },
      opt.target_failure, opt.per_run_failure);

  out.W_hat_b = median_amplify(
      [&] { return prop_estimate(prop_in_bucket, out.n_tilde_b, eps / 3.0); },
      opt.target_failure, opt.per_run_failure);

  // Fresh draws, independent of the two that picked b.
  out.P_hat_b = median_amplify(
      [&] {
        return bernoulli_estimate([&] { return in_bucket(prop().weight, b); },
                                  eps / 3.0, opt.bernoulli)
            .p_hat;
      },
      opt.target_failure, opt.per_run_failure);

  out.W_hat = out.W_hat_b / out.P_hat_b;
  return out;
}

}  // namespace sumest

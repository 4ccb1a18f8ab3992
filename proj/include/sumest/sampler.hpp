#pragma once

#include <concepts>
#include <cstdint>
#include <stdexcept>
#include <string>

#include "sumest/instance.hpp"
#include "sumest/rng.hpp"

namespace sumest {

// A zero-argument draw procedure returning (item, weight) pairs. Every
// single-oracle estimator consumes one of these; bucket samplers and
// rejection filters are themselves draw procedures.
template <typename F>
concept DrawSource = std::invocable<F&> &&
    std::convertible_to<std::invoke_result_t<F&>, ItemDraw>;

// Access to both oracles over one universe, plus the private coins of the
// algorithm and the running query total.
template <typename S>
concept HybridSource = requires(S& s, const S& cs) {
  { s.proportional() } -> std::convertible_to<ItemDraw>;
  { s.uniform() } -> std::convertible_to<ItemDraw>;
  { s.rng() } -> std::same_as<Rng&>;
  { cs.total_draws() } -> std::convertible_to<std::uint64_t>;
};

// Thrown when a sampling loop runs past its draw allowance.
class BudgetExhausted : public std::runtime_error {
 public:
  explicit BudgetExhausted(std::uint64_t budget)
      : std::runtime_error("draw budget of " + std::to_string(budget) +
                           " exhausted"),
        budget_(budget) {}
  std::uint64_t budget() const noexcept { return budget_; }

 private:
  std::uint64_t budget_;
};

inline constexpr std::uint64_t kUnlimited = ~std::uint64_t{0};

struct OracleCounters {
  std::uint64_t proportional_draws = 0;
  std::uint64_t uniform_draws = 0;

  std::uint64_t total() const noexcept { return proportional_draws + uniform_draws; }
  friend bool operator==(const OracleCounters&, const OracleCounters&) = default;
};

// Oracle facade over a WeightedInstance. One handle per trial; the instance
// may be shared.
class SamplerHandle {
 public:
  SamplerHandle(const WeightedInstance& instance, std::uint64_t seed)
      : instance_(&instance), rng_(seed) {}

  // Item a with probability w(a)/W.
  ItemDraw proportional() {
    ++counters_.proportional_draws;
    return instance_->draw_at(instance_->proportional_table().draw(rng_));
  }

  // Each item with probability 1/n, zero-weight items included.
  ItemDraw uniform() {
    ++counters_.uniform_draws;
    return instance_->draw_at(rng_.below(instance_->size()));
  }

  Rng& rng() noexcept { return rng_; }
  const OracleCounters& counters() const noexcept { return counters_; }
  std::uint64_t total_draws() const noexcept { return counters_.total(); }
  const WeightedInstance& instance() const noexcept { return *instance_; }

 private:
  const WeightedInstance* instance_;
  Rng rng_;
  OracleCounters counters_;
};

// Wraps a hybrid source and throws BudgetExhausted before the draw that
// would take the source's total past `limit`.
template <HybridSource S>
class BudgetedSource {
 public:
  BudgetedSource(S& inner, std::uint64_t limit)
      : inner_(&inner), start_(inner.total_draws()), limit_(limit) {}

  ItemDraw proportional() {
    charge();
    return inner_->proportional();
  }
  ItemDraw uniform() {
    charge();
    return inner_->uniform();
  }
  Rng& rng() noexcept { return inner_->rng(); }
  std::uint64_t total_draws() const { return inner_->total_draws(); }
  std::uint64_t used() const { return inner_->total_draws() - start_; }
  std::uint64_t limit() const noexcept { return limit_; }

 private:
  void charge() const {
    if (used() >= limit_) throw BudgetExhausted(limit_);
  }

  S* inner_;
  std::uint64_t start_;
  std::uint64_t limit_;
};

static_assert(HybridSource<SamplerHandle>);
static_assert(HybridSource<BudgetedSource<SamplerHandle>>);

}  // namespace sumest

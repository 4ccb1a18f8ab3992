#pragma once

#include <algorithm>
#include <cmath>
#include <concepts>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace sumest {

// ---------------------------------------------------------------------------
// Relative-error estimation of a Bernoulli bias by a stopping rule.
//
// Trials are drawn until `s` successes have been seen; with N the number of
// trials consumed, p_hat = s / N. N is negative binomial with E[N] = s / p,
// so E[1 / p_hat] = 1 / p exactly. The success target is
// s = ceil(1 + c / eps^2) with c = success_constant.
// ---------------------------------------------------------------------------

struct BernoulliConfig {
  double success_constant = 5.2;
};

struct BernoulliEstimate {
  double p_hat = 0.0;
  std::uint64_t successes = 0;
  std::uint64_t trials = 0;
};

std::uint64_t required_successes(double eps, const BernoulliConfig& cfg = {});

// `next` returns one trial outcome per call. Runs until enough successes;
// callers that cannot guarantee p > 0 must bound the work through `next`.
template <typename Stream>
  requires std::invocable<Stream&> &&
           std::convertible_to<std::invoke_result_t<Stream&>, bool>
BernoulliEstimate bernoulli_estimate(Stream&& next, double eps,
                                     const BernoulliConfig& cfg = {}) {
  const std::uint64_t target = required_successes(eps, cfg);
  BernoulliEstimate out;
  out.successes = 0;
  while (out.successes < target) {
    ++out.trials;
    if (next()) ++out.successes;
  }
  out.p_hat = static_cast<double>(out.successes) / static_cast<double>(out.trials);
  return out;
}

// ---------------------------------------------------------------------------
// Median amplification.
// ---------------------------------------------------------------------------

// P(Bin(runs, q) >= k), summed exactly term by term.
double binomial_upper_tail(std::uint64_t runs, double q, std::uint64_t k);

// Smallest odd r such that a majority of r independent runs, each failing
// with probability q, fails with probability at most target_failure.
std::uint64_t repetitions_for(double target_failure, double per_run_failure);

// The ceil(r/2)-th order statistic of an odd-sized sample.
double median_of(std::vector<double> values);

struct AmplifiedRun {
  std::vector<double> values;
  double median = 0.0;
};

template <typename Run>
  requires std::invocable<Run&> &&
           std::convertible_to<std::invoke_result_t<Run&>, double>
AmplifiedRun amplify_runs(Run&& run, std::uint64_t runs) {
  if (runs % 2 == 0) throw std::invalid_argument("run count must be odd");
  AmplifiedRun out;
  out.values.reserve(runs);
  for (std::uint64_t i = 0; i < runs; ++i) {
    out.values.push_back(static_cast<double>(run()));
  }
  out.median = median_of(out.values);
  return out;
}

// Median of repetitions_for(target_failure, per_run_failure) runs.
template <typename Run>
  requires std::invocable<Run&> &&
           std::convertible_to<std::invoke_result_t<Run&>, double>
double median_amplify(Run&& run, double target_failure,
                      double per_run_failure = 1.0 / 3.0) {
  return amplify_runs(run, repetitions_for(target_failure, per_run_failure)).median;
}

}  // namespace sumest

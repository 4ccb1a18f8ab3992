#pragma once

#include <cmath>
#include <cstdint>
#include <numeric>
#include <vector>

#include <boost/math/distributions/chi_squared.hpp>

namespace sumest::testing {

// Pearson goodness of fit. Cells with zero expected mass must be empty and
// are dropped from the statistic.
inline double chi_square_pvalue(const std::vector<std::uint64_t>& observed,
                                const std::vector<double>& probs) {
  const double total = static_cast<double>(
      std::accumulate(observed.begin(), observed.end(), std::uint64_t{0}));
  double stat = 0.0;
  int cells = 0;
  for (std::size_t i = 0; i < observed.size(); ++i) {
    if (probs[i] == 0.0) {
      if (observed[i] != 0) return 0.0;
      continue;
    }
    const double expected = total * probs[i];
    const double diff = static_cast<double>(observed[i]) - expected;
    stat += diff * diff / expected;
    ++cells;
  }
  if (cells < 2) return 1.0;
  boost::math::chi_squared dist(cells - 1);
  return boost::math::cdf(boost::math::complement(dist, stat));
}

inline constexpr double kChiSquareAlpha = 1e-6;

struct MeanAndError {
  double mean = 0.0;
  double standard_error = 0.0;
};

inline MeanAndError mean_and_error(const std::vector<double>& xs) {
  const double n = static_cast<double>(xs.size());
  double mean = 0.0;
  for (double x : xs) mean += x;
  mean /= n;
  double var = 0.0;
  for (double x : xs) var += (x - mean) * (x - mean);
  var /= (n - 1.0);
  return {mean, std::sqrt(var / n)};
}

}  // namespace sumest::testing

#include "sumest/instance.hpp"
#include "sumest/prop_estimators.hpp"

namespace sumest::testing {

// E[1/W_hat] for the collision estimator with m proportional samples,
// computed by walking all n^m ordered samples. An infinite estimate
// contributes 0.
inline long double exact_inverse_expectation(const std::vector<double>& weights,
                                             std::size_t m) {
  const std::size_t n = weights.size();
  long double total = 0.0L;
  for (double w : weights) total += w;
  std::vector<std::size_t> digits(m, 0);
  long double expectation = 0.0L;
  for (;;) {
    long double prob = 1.0L;
    CollisionTally tally;
    for (std::size_t d : digits) {
      prob *= weights[d] / total;
      tally.add({ItemId{d}, weights[d]});
    }
    if (prob > 0.0L) {
      const double est = tally.estimate();
      if (std::isfinite(est)) expectation += prob / static_cast<long double>(est);
    }
    std::size_t pos = 0;
    while (pos < m && ++digits[pos] == n) digits[pos++] = 0;
    if (pos == m) break;
  }
  return expectation;
}

}  // namespace sumest::testing

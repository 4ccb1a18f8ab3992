#include "sumest/alias_table.hpp"

#include <stdexcept>

namespace sumest {

AliasTable::AliasTable(std::span<const double> weights)
    : accept_(weights.size(), 0.0), alias_(weights.size(), 0) {
  const std::size_t n = weights.size();
  if (n == 0) throw std::invalid_argument("alias table needs at least one weight");

  long double total = 0.0L;
  std::size_t some_positive = n;
  for (std::size_t i = 0; i < n; ++i) {
    if (weights[i] < 0.0) throw std::invalid_argument("negative weight");
    total += weights[i];
    if (weights[i] > 0.0 && some_positive == n) some_positive = i;
  }
  if (some_positive == n) throw std::invalid_argument("all weights are zero");

  std::vector<long double> scaled(n);
  std::vector<std::size_t> small;
  std::vector<std::size_t> large;
  for (std::size_t i = 0; i < n; ++i) {
    scaled[i] = static_cast<long double>(weights[i]) * n / total;
    (scaled[i] < 1.0L ? small : large).push_back(i);
  }

  while (!small.empty() && !large.empty()) {
    const std::size_t s = small.back();
    small.pop_back();
    const std::size_t l = large.back();
    accept_[s] = static_cast<double>(scaled[s]);
    alias_[s] = l;
    scaled[l] -= 1.0L - scaled[s];
    if (scaled[l] < 1.0L) {
      large.pop_back();
      small.push_back(l);
    }
  }
  // Leftovers are 1 up to rounding. A zero-weight leftover must still
  // never be returned, so it redirects to a positive item.
  for (auto* rest : {&small, &large}) {
    for (std::size_t i : *rest) {
      if (weights[i] > 0.0) {
        accept_[i] = 1.0;
        alias_[i] = i;
      } else {
        accept_[i] = 0.0;
        alias_[i] = some_positive;
      }
    }
  }
}

}  // namespace sumest

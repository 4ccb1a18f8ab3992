#pragma once

#include <cstdint>
#include <unordered_set>

#include "sumest/instance.hpp"
#include "sumest/sampler.hpp"

namespace sumest {

// Birthday-paradox cardinality estimate. s_hat is the number of distinct
// items seen before the first repeat and n_hat = 4 * s_hat^2, which is at
// least the universe size with probability >= 2/3.
struct SetSizeResult {
  std::uint64_t s_hat = 0;
  double n_hat = 0.0;
  std::uint64_t draws = 0;
};

// `unif` must return i.i.d. uniform draws over a finite set.
template <DrawSource Draw>
SetSizeResult set_size_estimate(Draw&& unif) {
  std::unordered_set<ItemId> seen;
  SetSizeResult out;
  for (;;) {
    const ItemDraw d = unif();
    ++out.draws;
    if (!seen.insert(d.id).second) break;
  }
  out.s_hat = seen.size();
  const double s = static_cast<double>(out.s_hat);
  out.n_hat = 4.0 * s * s;
  return out;
}

}  // namespace sumest

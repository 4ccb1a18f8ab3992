#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "sumest/rng.hpp"

namespace sumest {

// Walker/Vose alias table: O(n) build, O(1) draw of index i with
// probability weights[i] / sum(weights). Zero-weight indices are never drawn.
class AliasTable {
 public:
  AliasTable() = default;
  explicit AliasTable(std::span<const double> weights);

  std::size_t size() const noexcept { return accept_.size(); }

  std::size_t draw(Rng& rng) const {
    const std::size_t slot = rng.below(accept_.size());
    return rng.unit() < accept_[slot] ? slot : alias_[slot];
  }

 private:
  std::vector<double> accept_;
  std::vector<std::size_t> alias_;
};

}  // namespace sumest

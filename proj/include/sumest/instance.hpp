#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "sumest/alias_table.hpp"

namespace sumest {

// Opaque item identity. Estimators may compare and hash it, nothing else.
class ItemId {
 public:
  constexpr ItemId() = default;
  constexpr explicit ItemId(std::uint64_t token) : token_(token) {}

  constexpr std::uint64_t token() const noexcept { return token_; }
  friend constexpr bool operator==(ItemId, ItemId) = default;

 private:
  std::uint64_t token_ = 0;
};

// One oracle answer: the item and its weight.
struct ItemDraw {
  ItemId id;
  double weight = 0.0;

  friend bool operator==(const ItemDraw&, const ItemDraw&) = default;
};

class InstanceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Reported with the 1-based line number of the offending input line.
class ParseError : public InstanceError {
 public:
  ParseError(std::size_t line, const std::string& what);
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

// Order-independent sum: the same multiset of weights always sums to the
// same double, whatever order it is presented in.
double canonical_sum(std::vector<double> weights);

// The hidden universe behind the oracles. Immutable after construction and
// safe to share between threads.
class WeightedInstance {
 public:
  // Throws InstanceError on an empty item list, a negative or non-finite
  // weight, a zero total, or a repeated label.
  WeightedInstance(std::vector<std::string> labels, std::vector<double> weights);

  // Unlabelled instance; item i gets label "i".
  static WeightedInstance from_weights(std::vector<double> weights);

  std::size_t size() const noexcept { return weights_.size(); }
  double total_weight() const noexcept { return total_; }
  std::span<const double> weights() const noexcept { return weights_; }
  double weight(std::size_t index) const { return weights_.at(index); }
  const AliasTable& proportional_table() const noexcept { return table_; }
  const std::string& label(std::size_t index) const { return labels_.at(index); }

  // Items are identified by their position in source order.
  static ItemId id_of(std::size_t index) noexcept { return ItemId{index}; }
  ItemDraw draw_at(std::size_t index) const noexcept {
    return {id_of(index), weights_[index]};
  }

 private:
  std::vector<std::string> labels_;
  std::vector<double> weights_;
  double total_ = 0.0;
  AliasTable table_;
};

// Text format: one `<id-token> <weight>` per line; blank lines and lines
// starting with '#' are skipped.
WeightedInstance parse_instance(std::string_view text);
WeightedInstance load_instance(const std::filesystem::path& path);

}  // namespace sumest

template <>
struct std::hash<sumest::ItemId> {
  std::size_t operator()(sumest::ItemId id) const noexcept {
    return std::hash<std::uint64_t>{}(id.token());
  }
};

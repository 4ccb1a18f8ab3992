#include "sumest/prop_estimators.hpp"

#include <algorithm>
#include <stdexcept>

namespace sumest {

CollisionTally::CollisionTally(std::span<const ItemDraw> sample) {
  for (const auto& d : sample) add(d);
}

void CollisionTally::add(const ItemDraw& draw) {
  ++m_;
  auto [it, inserted] = index_.try_emplace(draw.id, entries_.size());
  if (inserted) {
    entries_.push_back({draw, 1});
  } else {
    ++entries_[it->second].count;
  }
}

double CollisionTally::estimate() const {
  if (m_ < 2) throw std::invalid_argument("collision estimate needs at least two samples");
  // Weights are taken relative to the largest colliding weight w0, so a
  // single repeated item gives back exactly its own weight, and the sum is
  // order-independent so the result depends on the tally alone.
  double w0 = 0.0;
  for (const auto& e : entries_) {
    if (e.count >= 2) w0 = std::max(w0, e.item.weight);
  }
  if (w0 == 0.0) return kInfiniteEstimate;
  std::vector<double> terms;
  for (const auto& e : entries_) {
    if (e.count < 2) continue;
    const double c = static_cast<double>(e.count);
    terms.push_back((c * (c - 1.0) / 2.0) * (w0 / e.item.weight));
  }
  const double m = static_cast<double>(m_);
  return w0 * ((m * (m - 1.0) / 2.0) / canonical_sum(std::move(terms)));
}

std::uint64_t prop_sample_count(double n_tilde, double eps) {
  if (!(n_tilde >= 1.0) || !std::isfinite(n_tilde)) {
    throw std::invalid_argument("prop_estimate: advice n_tilde must be >= 1");
  }
  if (!(eps > 0.0 && eps < 1.0)) {
    throw std::invalid_argument("prop_estimate: eps must lie in (0,1)");
  }
  return static_cast<std::uint64_t>(std::ceil(std::sqrt(24.0 * n_tilde) / eps)) + 1;
}

int bucket_index(double weight) {
  if (!(weight > 0.0) || !std::isfinite(weight)) {
    throw std::invalid_argument("bucket_index: weight must be positive and finite");
  }
  return std::ilogb(weight);
}

}  // namespace sumest

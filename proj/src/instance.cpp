#include "sumest/instance.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <unordered_set>

#include "line_fields.hpp"

namespace sumest {

ParseError::ParseError(std::size_t line, const std::string& what)
    : InstanceError("line " + std::to_string(line) + ": " + what), line_(line) {}

double canonical_sum(std::vector<double> weights) {
  std::sort(weights.begin(), weights.end());
  long double acc = 0.0L;
  for (double w : weights) acc += w;
  return static_cast<double>(acc);
}

WeightedInstance::WeightedInstance(std::vector<std::string> labels,
                                   std::vector<double> weights)
    : labels_(std::move(labels)), weights_(std::move(weights)) {
  if (labels_.size() != weights_.size()) {
    throw InstanceError("label and weight counts differ");
  }
  if (weights_.empty()) throw InstanceError("instance has no items");
  for (std::size_t i = 0; i < weights_.size(); ++i) {
    if (!std::isfinite(weights_[i]) || weights_[i] < 0.0) {
      throw InstanceError("item '" + labels_[i] + "' has invalid weight");
    }
  }
  std::unordered_set<std::string_view> seen;
  seen.reserve(labels_.size());
  for (const auto& label : labels_) {
    if (!seen.insert(label).second) {
      throw InstanceError("duplicate item id '" + label + "'");
    }
  }
  total_ = canonical_sum(weights_);
  if (!(total_ > 0.0)) throw InstanceError("total weight is zero");
  table_ = AliasTable(weights_);
}

WeightedInstance WeightedInstance::from_weights(std::vector<double> weights) {
  std::vector<std::string> labels;
  labels.reserve(weights.size());
  for (std::size_t i = 0; i < weights.size(); ++i) {
    labels.push_back(std::to_string(i));
  }
  return WeightedInstance(std::move(labels), std::move(weights));
}

WeightedInstance parse_instance(std::string_view text) {
  std::vector<std::string> labels;
  std::vector<double> weights;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;

    auto fields = detail::split_fields(line);
    if (fields.empty() || fields.front().front() == '#') continue;
    if (fields.size() != 2) {
      throw ParseError(line_no, "expected '<id> <weight>'");
    }
    double w = 0.0;
    auto [ptr, ec] = std::from_chars(fields[1].data(),
                                     fields[1].data() + fields[1].size(), w);
    if (ec != std::errc{} || ptr != fields[1].data() + fields[1].size()) {
      throw ParseError(line_no, "bad weight '" + std::string(fields[1]) + "'");
    }
    if (!std::isfinite(w) || w < 0.0) {
      throw ParseError(line_no, "negative or non-finite weight");
    }
    labels.emplace_back(fields[0]);
    weights.push_back(w);
  }
  return WeightedInstance(std::move(labels), std::move(weights));
}

WeightedInstance load_instance(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InstanceError("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_instance(buf.str());
}

}  // namespace sumest

#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include "sumest/graph.hpp"
#include "sumest/instance.hpp"

namespace sumest {

enum class GeneratorKind {
  kUniform,    // n items of weight 1
  kPointMass,  // one heavy item, light_count light items, zeros elsewhere
  kTwoLevel,   // heavy_count heavy items, the rest light
  kZipf,       // w_i = (i+1)^-alpha
  kDyadic,     // per_level items of weight 2^l for l = 0..levels-1
  kErGraph,    // G(n, p)
  kStar,       // K_{1,n-1}, centre 0
  kPath,       // 0 - 1 - ... - (n-1)
};

class SpecError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Textual form: `kind[:key=value[,key=value...]]`, e.g.
//   uniform:n=10000
//   two-level:n=100000,heavy-count=auto,heavy=1,light=0
//   point-mass:n=1000,heavy=1e6
//   er-graph:n=2000,p=0.005,seed=7
// `heavy-count=auto` resolves to floor((n/eps)^(2/3)) once eps is known.
struct GeneratorSpec {
  GeneratorKind kind = GeneratorKind::kUniform;
  std::uint64_t n = 0;
  double heavy_weight = 1.0;
  double light_weight = 1.0;
  std::optional<std::uint64_t> heavy_count;  // nullopt = auto
  std::optional<std::uint64_t> light_count;  // nullopt = n - 1 (point-mass)
  double alpha = 1.0;
  std::uint64_t levels = 0;
  std::uint64_t per_level = 0;
  double p = 0.0;
  std::uint64_t seed = 0;
};

GeneratorSpec parse_generator_spec(std::string_view text);
std::string to_string(const GeneratorSpec& spec);
std::string_view kind_name(GeneratorKind kind);
bool is_graph_kind(GeneratorKind kind);

// floor((n/eps)^(2/3)), the heavy-item count of the two-level hard instance.
std::uint64_t two_level_heavy_count(std::uint64_t n, double eps);

// `eps` is consulted only for heavy-count=auto.
WeightedInstance generate_instance(const GeneratorSpec& spec,
                                   std::optional<double> eps = std::nullopt);
Graph generate_graph(const GeneratorSpec& spec);

}  // namespace sumest

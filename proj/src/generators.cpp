#include "sumest/generators.hpp"

#include <charconv>
#include <cmath>
#include <sstream>

#include "sumest/rng.hpp"

namespace sumest {
namespace {

struct KindEntry {
  std::string_view name;
  GeneratorKind kind;
};

constexpr KindEntry kKinds[] = {
    {"uniform", GeneratorKind::kUniform},   {"point-mass", GeneratorKind::kPointMass},
    {"two-level", GeneratorKind::kTwoLevel}, {"zipf", GeneratorKind::kZipf},
    {"dyadic", GeneratorKind::kDyadic},     {"er-graph", GeneratorKind::kErGraph},
    {"star", GeneratorKind::kStar},         {"path", GeneratorKind::kPath},
};

std::uint64_t to_u64(std::string_view key, std::string_view value) {
  std::uint64_t out = 0;
  // Accept 1e5-style literals for convenience, as long as they are integral.
  double as_double = 0.0;
  auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec == std::errc{} && ptr == value.data() + value.size()) return out;
  auto [ptr2, ec2] = std::from_chars(value.data(), value.data() + value.size(), as_double);
  if (ec2 == std::errc{} && ptr2 == value.data() + value.size() && as_double >= 0.0 &&
      as_double == std::floor(as_double) && as_double < 1.8e19) {
    return static_cast<std::uint64_t>(as_double);
  }
  throw SpecError("generator parameter '" + std::string(key) +
                  "' needs a non-negative integer, got '" + std::string(value) + "'");
}

double to_double(std::string_view key, std::string_view value) {
  double out = 0.0;
  auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc{} || ptr != value.data() + value.size() || !std::isfinite(out)) {
    throw SpecError("generator parameter '" + std::string(key) + "' needs a number, got '" +
                    std::string(value) + "'");
  }
  return out;
}

std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

void require(bool ok, const std::string& what) {
  if (!ok) throw SpecError(what);
}

}  // namespace

std::string_view kind_name(GeneratorKind kind) {
  for (const auto& e : kKinds) {
    if (e.kind == kind) return e.name;
  }
  return "unknown";
}

bool is_graph_kind(GeneratorKind kind) {
  return kind == GeneratorKind::kErGraph || kind == GeneratorKind::kStar ||
         kind == GeneratorKind::kPath;
}

GeneratorSpec parse_generator_spec(std::string_view text) {
  GeneratorSpec spec;
  const auto colon = text.find(':');
  const std::string_view name = text.substr(0, colon);
  bool found = false;
  for (const auto& e : kKinds) {
    if (e.name == name) {
      spec.kind = e.kind;
      found = true;
    }
  }
  require(found, "unknown generator kind '" + std::string(name) + "'");
  if (colon == std::string_view::npos) return spec;

  std::string_view rest = text.substr(colon + 1);
  while (!rest.empty()) {
    const auto comma = rest.find(',');
    const std::string_view item = rest.substr(0, comma);
    rest = comma == std::string_view::npos ? std::string_view{} : rest.substr(comma + 1);
    const auto eq = item.find('=');
    require(eq != std::string_view::npos,
            "generator parameter '" + std::string(item) + "' is not key=value");
    const std::string_view key = item.substr(0, eq);
    const std::string_view value = item.substr(eq + 1);
    if (key == "n") {
      spec.n = to_u64(key, value);
    } else if (key == "heavy") {
      spec.heavy_weight = to_double(key, value);
    } else if (key == "light") {
      spec.light_weight = to_double(key, value);
    } else if (key == "heavy-count") {
      if (value == "auto") {
        spec.heavy_count.reset();
      } else {
        spec.heavy_count = to_u64(key, value);
      }
    } else if (key == "light-count") {
      spec.light_count = to_u64(key, value);
    } else if (key == "alpha") {
      spec.alpha = to_double(key, value);
    } else if (key == "levels") {
      spec.levels = to_u64(key, value);
    } else if (key == "per-level") {
      spec.per_level = to_u64(key, value);
    } else if (key == "p") {
      spec.p = to_double(key, value);
    } else if (key == "seed") {
      spec.seed = to_u64(key, value);
    } else {
      throw SpecError("unknown generator parameter '" + std::string(key) + "'");
    }
  }
  return spec;
}

std::string to_string(const GeneratorSpec& spec) {
  std::ostringstream out;
  out << kind_name(spec.kind) << ":";
  switch (spec.kind) {
    case GeneratorKind::kUniform:
    case GeneratorKind::kStar:
    case GeneratorKind::kPath:
      out << "n=" << spec.n;
      break;
    case GeneratorKind::kPointMass:
      out << "n=" << spec.n << ",heavy=" << format_double(spec.heavy_weight)
          << ",light=" << format_double(spec.light_weight);
      if (spec.light_count) out << ",light-count=" << *spec.light_count;
      break;
    case GeneratorKind::kTwoLevel:
      out << "n=" << spec.n << ",heavy-count="
          << (spec.heavy_count ? std::to_string(*spec.heavy_count) : std::string("auto"))
          << ",heavy=" << format_double(spec.heavy_weight)
          << ",light=" << format_double(spec.light_weight);
      break;
    case GeneratorKind::kZipf:
      out << "n=" << spec.n << ",alpha=" << format_double(spec.alpha);
      break;
    case GeneratorKind::kDyadic:
      out << "levels=" << spec.levels << ",per-level=" << spec.per_level;
      break;
    case GeneratorKind::kErGraph:
      out << "n=" << spec.n << ",p=" << format_double(spec.p) << ",seed=" << spec.seed;
      break;
  }
  return out.str();
}

std::uint64_t two_level_heavy_count(std::uint64_t n, double eps) {
  if (!(eps > 0.0 && eps < 1.0)) throw SpecError("heavy-count=auto needs eps in (0,1)");
  return static_cast<std::uint64_t>(
      std::floor(std::pow(static_cast<double>(n) / eps, 2.0 / 3.0)));
}

WeightedInstance generate_instance(const GeneratorSpec& spec, std::optional<double> eps) {
  require(!is_graph_kind(spec.kind), "graph generator used where an instance is expected");
  std::vector<double> w;
  switch (spec.kind) {
    case GeneratorKind::kUniform:
      require(spec.n >= 1, "uniform: n must be >= 1");
      w.assign(spec.n, 1.0);
      break;
    case GeneratorKind::kPointMass: {
      require(spec.n >= 1, "point-mass: n must be >= 1");
      const std::uint64_t light = spec.light_count.value_or(spec.n - 1);
      require(light <= spec.n - 1, "point-mass: light-count must be <= n - 1");
      require(spec.heavy_weight >= 0.0 && spec.light_weight >= 0.0,
              "point-mass: weights must be non-negative");
      w.assign(spec.n, 0.0);
      w[0] = spec.heavy_weight;
      for (std::uint64_t i = 1; i <= light; ++i) w[i] = spec.light_weight;
      break;
    }
    case GeneratorKind::kTwoLevel: {
      require(spec.n >= 1, "two-level: n must be >= 1");
      std::uint64_t heavy = 0;
      if (spec.heavy_count) {
        heavy = *spec.heavy_count;
      } else {
        require(eps.has_value(), "two-level: heavy-count=auto needs eps");
        heavy = two_level_heavy_count(spec.n, *eps);
      }
      require(heavy >= 1 && heavy <= spec.n, "two-level: heavy-count must lie in [1, n]");
      require(spec.heavy_weight >= 0.0 && spec.light_weight >= 0.0,
              "two-level: weights must be non-negative");
      w.assign(spec.n, spec.light_weight);
      for (std::uint64_t i = 0; i < heavy; ++i) w[i] = spec.heavy_weight;
      break;
    }
    case GeneratorKind::kZipf:
      require(spec.n >= 1, "zipf: n must be >= 1");
      w.resize(spec.n);
      for (std::uint64_t i = 0; i < spec.n; ++i) {
        w[i] = std::pow(static_cast<double>(i + 1), -spec.alpha);
      }
      break;
    case GeneratorKind::kDyadic:
      require(spec.levels >= 1 && spec.per_level >= 1,
              "dyadic: levels and per-level must be >= 1");
      require(spec.levels <= 1000, "dyadic: too many levels");
      for (std::uint64_t l = 0; l < spec.levels; ++l) {
        for (std::uint64_t i = 0; i < spec.per_level; ++i) {
          w.push_back(std::ldexp(1.0, static_cast<int>(l)));
        }
      }
      break;
    default:
      break;
  }
  try {
    return WeightedInstance::from_weights(std::move(w));
  } catch (const InstanceError& e) {
    throw SpecError(std::string(kind_name(spec.kind)) + ": " + e.what());
  }
}

Graph generate_graph(const GeneratorSpec& spec) {
  require(is_graph_kind(spec.kind), "instance generator used where a graph is expected");
  require(spec.n >= 1, std::string(kind_name(spec.kind)) + ": n must be >= 1");
  require(spec.n <= (std::uint64_t{1} << 32), "graph too large");
  std::vector<Graph::Edge> edges;
  const std::uint64_t n = spec.n;
  switch (spec.kind) {
    case GeneratorKind::kErGraph: {
      require(spec.p >= 0.0 && spec.p <= 1.0, "er-graph: p must lie in [0,1]");
      Rng rng(derive_seed(spec.seed, 0));
      for (std::uint64_t u = 0; u < n; ++u) {
        for (std::uint64_t v = u + 1; v < n; ++v) {
          if (rng.unit() < spec.p) {
            edges.emplace_back(static_cast<Graph::Vertex>(u), static_cast<Graph::Vertex>(v));
          }
        }
      }
      break;
    }
    case GeneratorKind::kStar:
      for (std::uint64_t v = 1; v < n; ++v) edges.emplace_back(0, static_cast<Graph::Vertex>(v));
      break;
    case GeneratorKind::kPath:
      for (std::uint64_t v = 1; v < n; ++v) {
        edges.emplace_back(static_cast<Graph::Vertex>(v - 1), static_cast<Graph::Vertex>(v));
      }
      break;
    default:
      break;
  }
  return Graph(spec.n, std::move(edges));
}

}  // namespace sumest

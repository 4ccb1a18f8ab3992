#pragma once

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "sumest/hybrid_estimators.hpp"
#include "sumest/instance.hpp"
#include "sumest/rng.hpp"

namespace sumest {

class GraphError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Simple undirected graph, immutable after construction.
class Graph {
 public:
  using Vertex = std::uint32_t;
  using Edge = std::pair<Vertex, Vertex>;

  // Throws GraphError on self-loops, repeated edges, or endpoints >= n.
  Graph(std::uint64_t vertex_count, std::vector<Edge> edges);

  std::uint64_t vertex_count() const noexcept { return degrees_.size(); }
  std::uint64_t edge_count() const noexcept { return edges_.size(); }
  std::uint64_t degree(Vertex v) const { return degrees_.at(v); }
  const std::vector<Edge>& edges() const noexcept { return edges_; }
  const std::vector<std::uint64_t>& degrees() const noexcept { return degrees_; }

  // Vertices of degree >= 1.
  std::uint64_t non_isolated_count() const noexcept { return non_isolated_; }
  // 2m / n.
  double average_degree() const noexcept {
    return 2.0 * static_cast<double>(edges_.size()) / static_cast<double>(degrees_.size());
  }

 private:
  std::vector<Edge> edges_;
  std::vector<std::uint64_t> degrees_;
  std::uint64_t non_isolated_ = 0;
};

// Format: a header line `n <count>`, then one `u v` edge per line with
// 0-based vertex ids. '#' lines and blank lines are skipped.
Graph parse_graph(std::string_view text);
Graph load_graph(const std::filesystem::path& path);

struct GraphQueryCounters {
  std::uint64_t vertex_queries = 0;
  std::uint64_t edge_queries = 0;
  std::uint64_t degree_queries = 0;

  friend bool operator==(const GraphQueryCounters&, const GraphQueryCounters&) = default;
};

// Degree-weighted view of a graph: U = V, w(v) = deg(v).
//   proportional(): random edge query + random endpoint + degree query
//   uniform():      random vertex query + degree query
class GraphOracle {
 public:
  GraphOracle(const Graph& graph, std::uint64_t seed) : graph_(&graph), rng_(seed) {}

  ItemDraw proportional() {
    if (graph_->edge_count() == 0) {
      throw GraphError("proportional draw on a graph without edges");
    }
    ++counters_.edge_queries;
    // One draw over the 2m (edge, endpoint) pairs.
    const std::uint64_t slot = rng_.below(2 * graph_->edge_count());
    const auto& e = graph_->edges()[slot >> 1];
    return with_degree((slot & 1) != 0 ? e.first : e.second);
  }

  ItemDraw uniform() {
    ++counters_.vertex_queries;
    return with_degree(static_cast<Graph::Vertex>(rng_.below(graph_->vertex_count())));
  }

  Rng& rng() noexcept { return rng_; }
  std::uint64_t total_draws() const noexcept {
    return counters_.vertex_queries + counters_.edge_queries;
  }
  const GraphQueryCounters& counters() const noexcept { return counters_; }
  const Graph& graph() const noexcept { return *graph_; }

 private:
  ItemDraw with_degree(Graph::Vertex v) {
    ++counters_.degree_queries;
    return {ItemId{v}, static_cast<double>(graph_->degrees()[v])};
  }

  const Graph* graph_;
  Rng rng_;
  GraphQueryCounters counters_;
};

static_assert(HybridSource<GraphOracle>);

struct DegreeSearchIteration {
  double theta_tilde = 0.0;
  double target_failure = 0.0;  // delta_j = 2 / (pi^2 j^2)
  std::uint64_t copies = 0;
  double d_hat = 0.0;           // median of the copies
};

struct DegreeSearchTrace {
  std::vector<DegreeSearchIteration> iterations;
  double d_hat = 0.0;
  double m_hat = 0.0;  // d_hat * n / 2
};

struct DegreeSearchOptions {
  double per_run_failure = 1.0 / 3.0 + 1.0 / 20.0;
  int max_iterations = 64;
  HarmonicOptions harmonic;
};

// 2 / (pi^2 j^2), j >= 1. Sums to 1/3 over all iterations.
double degree_search_failure(int iteration);

// Geometric search over the advice theta_tilde = 1, 2, 4, ...; iteration j
// takes the median of r_j harmonic estimates with phi = 1 and stops once
// the median is at most theta_tilde / 20.
DegreeSearchTrace estimate_avg_degree(GraphOracle& oracle, double eps,
                                      const DegreeSearchOptions& opt = {});

}  // namespace sumest

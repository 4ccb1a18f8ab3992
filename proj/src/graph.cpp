#include "sumest/graph.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <numbers>
#include <sstream>
#include <unordered_set>

#include "line_fields.hpp"

#include "sumest/amplify.hpp"

namespace sumest {

Graph::Graph(std::uint64_t vertex_count, std::vector<Edge> edges)
    : edges_(std::move(edges)), degrees_(vertex_count, 0) {
  if (vertex_count == 0) throw GraphError("graph has no vertices");
  if (vertex_count > (std::uint64_t{1} << 32)) throw GraphError("too many vertices");
  std::unordered_set<std::uint64_t> seen;
  seen.reserve(edges_.size());
  for (const auto& [u, v] : edges_) {
    if (u >= vertex_count || v >= vertex_count) {
      throw GraphError("edge (" + std::to_string(u) + "," + std::to_string(v) +
                       ") has an endpoint outside [0, n)");
    }
    if (u == v) throw GraphError("self-loop at vertex " + std::to_string(u));
    const auto lo = std::min(u, v);
    const auto hi = std::max(u, v);
    if (!seen.insert((std::uint64_t{lo} << 32) | hi).second) {
      throw GraphError("duplicate edge (" + std::to_string(lo) + "," +
                       std::to_string(hi) + ")");
    }
    ++degrees_[u];
    ++degrees_[v];
  }
  for (auto d : degrees_) non_isolated_ += d > 0 ? 1 : 0;
}

namespace {

std::uint64_t parse_u64(std::string_view field, std::size_t line_no) {
  std::uint64_t value = 0;
  auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc{} || ptr != field.data() + field.size()) {
    throw GraphError("line " + std::to_string(line_no) + ": bad integer '" +
                     std::string(field) + "'");
  }
  return value;
}

}  // namespace

Graph parse_graph(std::string_view text) {
  std::uint64_t n = 0;
  bool have_header = false;
  std::vector<Graph::Edge> edges;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    const auto fields = detail::split_fields(text.substr(pos, end - pos));
    pos = end + 1;
    ++line_no;
    if (fields.empty() || fields.front().front() == '#') continue;
    if (fields.size() != 2) {
      throw GraphError("line " + std::to_string(line_no) + ": expected two fields");
    }
    if (!have_header) {
      if (fields[0] != "n") {
        throw GraphError("line " + std::to_string(line_no) + ": missing 'n <count>' header");
      }
      n = parse_u64(fields[1], line_no);
      have_header = true;
      continue;
    }
    const auto u = parse_u64(fields[0], line_no);
    const auto v = parse_u64(fields[1], line_no);
    if (u >= n || v >= n) {
      throw GraphError("line " + std::to_string(line_no) + ": endpoint >= n");
    }
    edges.emplace_back(static_cast<Graph::Vertex>(u), static_cast<Graph::Vertex>(v));
  }
  if (!have_header) throw GraphError("missing 'n <count>' header");
  return Graph(n, std::move(edges));
}

Graph load_graph(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw GraphError("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_graph(buf.str());
}

double degree_search_failure(int iteration) {
  const double j = iteration;
  return 2.0 / (std::numbers::pi * std::numbers::pi * j * j);
}

DegreeSearchTrace estimate_avg_degree(GraphOracle& oracle, double eps,
                                      const DegreeSearchOptions& opt) {
  if (oracle.graph().edge_count() == 0) {
    throw GraphError("average-degree search needs at least one edge");
  }
  DegreeSearchTrace trace;
  double theta_tilde = 1.0;
  for (int j = 1; j <= opt.max_iterations; ++j, theta_tilde *= 2.0) {
    DegreeSearchIteration it;
    it.theta_tilde = theta_tilde;
    it.target_failure = degree_search_failure(j);
    it.copies = repetitions_for(it.target_failure, opt.per_run_failure);
    const HarmonicConfig cfg{eps, theta_tilde, 1.0};
    it.d_hat = amplify_runs(
                   [&] { return harmonic_estimate(oracle, cfg, opt.harmonic).theta_hat; },
                   it.copies)
                   .median;
    trace.iterations.push_back(it);
    if (it.d_hat <= theta_tilde / 20.0) {
      trace.d_hat = it.d_hat;
      trace.m_hat = it.d_hat * static_cast<double>(oracle.graph().vertex_count()) / 2.0;
      return trace;
    }
  }
  throw GraphError("average-degree search did not settle within max_iterations");
}

}  // namespace sumest

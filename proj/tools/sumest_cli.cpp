// sumest: command-line harness for the sum and edge-count estimators.
//
//   sumest estimate    --gen uniform:n=10000 --algo prop --eps 0.1
//   sumest bench       --gen uniform --n 1000,4000 --eps 0.1,0.2 --algo no-advice-hybrid
//                      --trials 200 --out runs.csv
//   sumest graph-edges --gen er-graph:n=2000,p=0.005,seed=7 --eps 0.1 --trials 200
//
// The default master seed comes from $SUMEST_SEED (or 1). The exit code is 0
// whenever the run completes; statistical outcomes are reported, not
// exit-coded.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "sumest/generators.hpp"
#include "sumest/graph.hpp"
#include "sumest/harness.hpp"
#include "sumest/instance.hpp"

namespace {

using namespace sumest;

std::uint64_t default_seed() {
  if (const char* env = std::getenv("SUMEST_SEED")) {
    try {
      return std::stoull(env);
    } catch (const std::exception&) {
      std::cerr << "warning: ignoring malformed SUMEST_SEED='" << env << "'\n";
    }
  }
  return 1;
}

struct CommonOptions {
  std::string instance_path;
  std::string gen;
  std::string algo = "prop";
  std::string advice = "exact-n";
  std::uint64_t seed = default_seed();
  double phi = 1.0;
  double abort_constant = HybridOptions{}.abort_constant;
  std::uint64_t max_draws = kUnlimited;
  unsigned parallel = 0;
  bool record_time = false;
};

void add_common(CLI::App* cmd, CommonOptions& o) {
  auto* inst = cmd->add_option("--instance", o.instance_path, "Instance file (<id> <weight> per line)");
  auto* gen = cmd->add_option("--gen", o.gen, "Generator spec, e.g. uniform:n=1000");
  inst->excludes(gen);
  cmd->add_option("--algo", o.algo,
                  "prop | no-advice-prop | hybrid | no-advice-hybrid | harmonic | coupon | set-size")
      ->capture_default_str();
  cmd->add_option("--advice", o.advice, "exact-n | inflated-n:<factor> | none")
      ->capture_default_str();
  cmd->add_option("--seed", o.seed, "Master seed (default $SUMEST_SEED or 1)");
  cmd->add_option("--phi", o.phi, "Clipping threshold for --algo harmonic")->capture_default_str();
  cmd->add_option("--abort-constant", o.abort_constant, "C in the hybrid abort budget")
      ->capture_default_str();
  cmd->add_option("--max-draws", o.max_draws, "Per-trial draw cap; exceeding it aborts the trial");
  cmd->add_option("--parallel", o.parallel, "Worker threads (0 = all cores)");
  cmd->add_flag("--record-time", o.record_time, "Fill wall_time_ms (breaks byte-identical CSVs)");
}

TrialConfig make_config(const CommonOptions& o, double eps, std::uint64_t trials,
                        std::uint64_t seed) {
  TrialConfig cfg;
  cfg.algorithm = parse_algorithm(o.algo);
  cfg.eps = eps;
  cfg.advice = parse_advice(o.advice);
  cfg.trials = trials;
  cfg.master_seed = seed;
  cfg.parallelism = o.parallel;
  cfg.phi = o.phi;
  cfg.hybrid.abort_constant = o.abort_constant;
  cfg.max_draws = o.max_draws;
  cfg.record_time = o.record_time;
  return cfg;
}

nlohmann::json report_json(const TrialReport& r) {
  return {{"algorithm", r.algorithm},   {"n", r.n},
          {"eps", r.eps},               {"advice", r.advice},
          {"seed", r.seed},             {"estimate", format_double17(r.estimate)},
          {"true_value", r.true_value}, {"prop_draws", r.prop_draws},
          {"unif_draws", r.unif_draws}, {"vertex_queries", r.vertex_queries},
          {"edge_queries", r.edge_queries}, {"degree_queries", r.degree_queries},
          {"success", r.success},       {"aborted", r.aborted}};
}

int run_estimate(const CommonOptions& o, double eps) {
  if (o.instance_path.empty() == o.gen.empty()) {
    throw std::invalid_argument("estimate: give exactly one of --instance or --gen");
  }
  const WeightedInstance instance = o.instance_path.empty()
                                        ? generate_instance(parse_generator_spec(o.gen), eps)
                                        : load_instance(o.instance_path);
  const TrialConfig cfg = make_config(o, eps, 1, o.seed);
  std::cout << report_json(run_trial(instance, cfg, 0)).dump(2) << '\n';
  return 0;
}

int run_bench(const CommonOptions& o, const std::vector<std::uint64_t>& ns,
              const std::vector<double>& epss, std::uint64_t trials, const std::string& out,
              const std::string& summary_path) {
  if (o.instance_path.empty() == o.gen.empty()) {
    throw std::invalid_argument("bench: give exactly one of --instance or --gen");
  }
  if (!o.instance_path.empty() && !ns.empty()) {
    throw std::invalid_argument("bench: --n applies to generated instances only");
  }
  std::optional<WeightedInstance> loaded;
  if (!o.instance_path.empty()) loaded.emplace(load_instance(o.instance_path));
  GeneratorSpec base;
  if (!o.gen.empty()) base = parse_generator_spec(o.gen);
  const std::vector<std::uint64_t> grid_n = ns.empty() ? std::vector<std::uint64_t>{0} : ns;

  std::vector<TrialReport> all;
  nlohmann::json summaries = nlohmann::json::array();
  std::uint64_t cell = 0;
  for (std::uint64_t n : grid_n) {
    for (double eps : epss) {
      GeneratorSpec spec = base;
      if (n != 0) spec.n = n;
      const WeightedInstance instance = loaded ? *loaded : generate_instance(spec, eps);
      const TrialConfig cfg = make_config(o, eps, trials, derive_seed(o.seed, cell++));
      auto reports = run_trials(instance, cfg);
      const TrialSummary s = summarize(reports);
      nlohmann::json line = nlohmann::json::parse(summary_json(s, -1));
      line["algorithm"] = o.algo;
      line["n"] = instance.size();
      line["eps"] = eps;
      if (!o.gen.empty()) line["generator"] = to_string(spec);
      std::cout << line.dump() << '\n';
      summaries.push_back(line);
      all.insert(all.end(), std::make_move_iterator(reports.begin()),
                 std::make_move_iterator(reports.end()));
    }
  }
  if (!out.empty()) write_csv_atomic(out, all);
  if (!summary_path.empty()) {
    std::ofstream js(summary_path);
    js << summaries.dump(2) << '\n';
  }
  return 0;
}

int run_graph_edges(const std::string& graph_path, const std::string& gen, double eps,
                    std::uint64_t trials, std::uint64_t seed, unsigned parallel,
                    bool record_time, const std::string& out) {
  if (graph_path.empty() == gen.empty()) {
    throw std::invalid_argument("graph-edges: give exactly one of --graph or --gen");
  }
  const Graph graph =
      graph_path.empty() ? generate_graph(parse_generator_spec(gen)) : load_graph(graph_path);
  GraphTrialConfig cfg;
  cfg.eps = eps;
  cfg.trials = trials;
  cfg.master_seed = seed;
  cfg.parallelism = parallel;
  cfg.record_time = record_time;
  const auto reports = run_graph_trials(graph, cfg);
  nlohmann::json line = nlohmann::json::parse(summary_json(summarize(reports), -1));
  line["n"] = graph.vertex_count();
  line["m"] = graph.edge_count();
  line["average_degree"] = graph.average_degree();
  line["non_isolated"] = graph.non_isolated_count();
  std::cout << line.dump() << '\n';
  if (!out.empty()) write_csv_atomic(out, reports);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sublinear sum and edge-count estimation harness"};
  app.require_subcommand(1);

  CommonOptions est_opts;
  double est_eps = 0.1;
  auto* estimate = app.add_subcommand("estimate", "One-shot estimator run");
  add_common(estimate, est_opts);
  estimate->add_option("--eps", est_eps, "Relative accuracy in (0,1)")->capture_default_str();

  CommonOptions bench_opts;
  std::vector<std::uint64_t> bench_n;
  std::vector<double> bench_eps{0.1};
  std::uint64_t bench_trials = 100;
  std::string bench_out;
  std::string bench_summary;
  auto* bench = app.add_subcommand("bench", "Monte Carlo grid over n and eps");
  add_common(bench, bench_opts);
  bench->add_option("--n", bench_n, "Universe sizes (overrides the generator's n)")->delimiter(',');
  bench->add_option("--eps", bench_eps, "Accuracy values")->delimiter(',');
  bench->add_option("--trials", bench_trials, "Trials per grid cell")->capture_default_str();
  bench->add_option("--out", bench_out, "CSV output path");
  bench->add_option("--summary", bench_summary, "JSON summary output path");

  std::string graph_path;
  std::string graph_gen;
  double graph_eps = 0.1;
  std::uint64_t graph_trials = 1;
  std::uint64_t graph_seed = default_seed();
  unsigned graph_parallel = 0;
  bool graph_time = false;
  std::string graph_out;
  auto* graph = app.add_subcommand("graph-edges", "Average-degree / edge-count estimation");
  graph->add_option("--graph", graph_path, "Edge-list file with an 'n <count>' header");
  graph->add_option("--gen", graph_gen, "er-graph:n=..,p=..,seed=.. | star:n=.. | path:n=..");
  graph->add_option("--eps", graph_eps, "Relative accuracy in (0,1)")->capture_default_str();
  graph->add_option("--trials", graph_trials, "Trials")->capture_default_str();
  graph->add_option("--seed", graph_seed, "Master seed (default $SUMEST_SEED or 1)");
  graph->add_option("--parallel", graph_parallel, "Worker threads (0 = all cores)");
  graph->add_flag("--record-time", graph_time, "Fill wall_time_ms");
  graph->add_option("--out", graph_out, "CSV output path");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*estimate) return run_estimate(est_opts, est_eps);
    if (*bench) {
      return run_bench(bench_opts, bench_n, bench_eps, bench_trials, bench_out, bench_summary);
    }
    if (*graph) {
      return run_graph_edges(graph_path, graph_gen, graph_eps, graph_trials, graph_seed,
                             graph_parallel, graph_time, graph_out);
    }
  } catch (const std::exception& e) {
    std::cerr << "sumest: " << e.what() << '\n';
    return 1;
  }
  return 1;
}

#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "sumest/graph.hpp"
#include "sumest/hybrid_estimators.hpp"
#include "sumest/instance.hpp"

namespace sumest {

enum class Algorithm {
  kProp,
  kNoAdviceProp,
  kHybrid,
  kNoAdviceHybrid,
  kHarmonic,
  kCoupon,
  kSetSize,
};

Algorithm parse_algorithm(std::string_view name);
std::string_view algorithm_name(Algorithm algo);

// How size advice is handed to the estimators that take it.
//   exact-n         n_tilde = n (harmonic: theta_tilde = W/n)
//   inflated-n:<f>  n_tilde = f * n (harmonic: theta_tilde = f * W/n)
//   none            estimators that need advice reject the run
struct AdvicePolicy {
  enum class Kind { kExact, kInflated, kNone };
  Kind kind = Kind::kExact;
  double factor = 1.0;
};

AdvicePolicy parse_advice(std::string_view text);
std::string to_string(const AdvicePolicy& advice);

struct TrialConfig {
  Algorithm algorithm = Algorithm::kProp;
  double eps = 0.1;
  AdvicePolicy advice;
  std::uint64_t trials = 1;
  std::uint64_t master_seed = 1;
  unsigned parallelism = 0;        // 0 = hardware concurrency
  double phi = 1.0;                // harmonic clipping threshold
  HybridOptions hybrid;            // abort constant etc.
  std::uint64_t max_draws = kUnlimited;  // per-trial guard; exceeding it aborts
  bool record_time = false;        // wall_time_ms stays 0 unless set
};

// One CSV row. Every field except wall_time_ms is a pure function of the
// configuration, the instance, and the master seed.
struct TrialReport {
  std::string algorithm;
  std::uint64_t n = 0;
  double eps = 0.0;
  std::string advice;
  std::uint64_t trial = 0;
  std::uint64_t seed = 0;
  double estimate = 0.0;
  double true_value = 0.0;
  std::uint64_t prop_draws = 0;
  std::uint64_t unif_draws = 0;
  std::uint64_t vertex_queries = 0;
  std::uint64_t edge_queries = 0;
  std::uint64_t degree_queries = 0;
  bool success = false;
  bool aborted = false;
  double wall_time_ms = 0.0;
};

// |estimate - truth| <= eps * truth, false for non-finite estimates.
bool within_relative(double estimate, double truth, double eps);

TrialReport run_trial(const WeightedInstance& instance, const TrialConfig& cfg,
                      std::uint64_t trial);
std::vector<TrialReport> run_trials(const WeightedInstance& instance, const TrialConfig& cfg);

struct GraphTrialConfig {
  double eps = 0.1;
  std::uint64_t trials = 1;
  std::uint64_t master_seed = 1;
  unsigned parallelism = 0;
  DegreeSearchOptions search;
  bool record_time = false;
};

// Edge-count trials: estimate = m_hat, true_value = m.
TrialReport run_graph_trial(const Graph& graph, const GraphTrialConfig& cfg,
                            std::uint64_t trial);
std::vector<TrialReport> run_graph_trials(const Graph& graph, const GraphTrialConfig& cfg);

// Aggregates recomputable from the CSV rows:
//   failure_rate = (#rows with success == 0) / trials
//   ci_low/ci_high = Clopper-Pearson 95% interval for failure_rate
//   mean_draws = sum(prop_draws + unif_draws) / trials, summed in row order
//   p95_draws = nearest-rank 95th percentile of prop_draws + unif_draws
//   abort_rate = (#rows with aborted == 1) / trials
struct TrialSummary {
  std::uint64_t trials = 0;
  std::uint64_t failures = 0;
  double failure_rate = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  double mean_draws = 0.0;
  std::uint64_t p95_draws = 0;
  double abort_rate = 0.0;
};

TrialSummary summarize(const std::vector<TrialReport>& reports);
std::pair<double, double> clopper_pearson(std::uint64_t failures, std::uint64_t trials,
                                          double confidence = 0.95);

// CSV: fixed header naming every TrialReport field; doubles printed with 17
// significant digits; booleans as 0/1.
std::string_view csv_header();
std::string csv_row(const TrialReport& r);
void write_csv(std::ostream& out, const std::vector<TrialReport>& reports);
// Writes to a sibling temporary file and renames it into place.
void write_csv_atomic(const std::filesystem::path& path,
                      const std::vector<TrialReport>& reports);

std::string summary_json(const TrialSummary& summary, int indent = 2);

// Shortest-round-trip-safe decimal form with 17 significant digits.
std::string format_double17(double v);

}  // namespace sumest

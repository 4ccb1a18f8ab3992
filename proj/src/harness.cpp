#include "sumest/harness.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <exception>
#include <fstream>
#include <mutex>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <boost/math/distributions/binomial.hpp>

#include "json.hpp"
#include "sumest/prop_estimators.hpp"
#include "sumest/rng.hpp"
#include "sumest/sampler.hpp"
#include "sumest/set_size.hpp"

namespace sumest {
namespace {

constexpr std::pair<std::string_view, Algorithm> kAlgorithms[] = {
    {"prop", Algorithm::kProp},
    {"no-advice-prop", Algorithm::kNoAdviceProp},
    {"hybrid", Algorithm::kHybrid},
    {"no-advice-hybrid", Algorithm::kNoAdviceHybrid},
    {"harmonic", Algorithm::kHarmonic},
    {"coupon", Algorithm::kCoupon},
    {"set-size", Algorithm::kSetSize},
};

bool needs_advice(Algorithm algo) {
  return algo == Algorithm::kProp || algo == Algorithm::kHybrid ||
         algo == Algorithm::kHarmonic;
}

// Runs job(i) for i in [0, count) on a small pool. Results are written by
// index, so output order never depends on scheduling.
template <typename Job>
void parallel_for(std::uint64_t count, unsigned parallelism, Job&& job) {
  unsigned workers = parallelism != 0 ? parallelism : std::thread::hardware_concurrency();
  workers = static_cast<unsigned>(std::clamp<std::uint64_t>(workers, 1, std::max<std::uint64_t>(count, 1)));
  if (workers == 1) {
    for (std::uint64_t i = 0; i < count; ++i) job(i);
    return;
  }
  std::atomic<std::uint64_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::uint64_t i = next++; i < count; i = next++) {
          try {
            job(i);
          } catch (...) {
            std::lock_guard lock(failure_mutex);
            if (!failure) failure = std::current_exception();
            next = count;
          }
        }
      });
    }
  }
  if (failure) std::rethrow_exception(failure);
}

double elapsed_ms(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
      .count();
}

}  // namespace

Algorithm parse_algorithm(std::string_view name) {
  for (const auto& [key, algo] : kAlgorithms) {
    if (key == name) return algo;
  }
  throw std::invalid_argument("unknown algorithm '" + std::string(name) + "'");
}

std::string_view algorithm_name(Algorithm algo) {
  for (const auto& [key, a] : kAlgorithms) {
    if (a == algo) return key;
  }
  return "unknown";
}

AdvicePolicy parse_advice(std::string_view text) {
  if (text == "exact-n" || text == "exact") return {AdvicePolicy::Kind::kExact, 1.0};
  if (text == "none") return {AdvicePolicy::Kind::kNone, 1.0};
  constexpr std::string_view kInflated = "inflated-n";
  if (text.starts_with(kInflated)) {
    std::string_view rest = text.substr(kInflated.size());
    if (!rest.empty() && (rest.front() == ':' || rest.front() == '=')) {
      rest.remove_prefix(1);
      double factor = 0.0;
      auto [ptr, ec] = std::from_chars(rest.data(), rest.data() + rest.size(), factor);
      if (ec == std::errc{} && ptr == rest.data() + rest.size() && factor > 0.0 &&
          std::isfinite(factor)) {
        return {AdvicePolicy::Kind::kInflated, factor};
      }
    }
  }
  throw std::invalid_argument("advice must be exact-n, inflated-n:<factor>, or none; got '" +
                              std::string(text) + "'");
}

std::string to_string(const AdvicePolicy& advice) {
  switch (advice.kind) {
    case AdvicePolicy::Kind::kExact: return "exact-n";
    case AdvicePolicy::Kind::kNone: return "none";
    case AdvicePolicy::Kind::kInflated: return "inflated-n:" + format_double17(advice.factor);
  }
  return "unknown";
}

bool within_relative(double estimate, double truth, double eps) {
  return std::isfinite(estimate) && std::abs(estimate - truth) <= eps * truth;
}

TrialReport run_trial(const WeightedInstance& instance, const TrialConfig& cfg,
                      std::uint64_t trial) {
  const auto start = std::chrono::steady_clock::now();
  TrialReport r;
  r.algorithm = std::string(algorithm_name(cfg.algorithm));
  r.n = instance.size();
  r.eps = cfg.eps;
  r.advice = to_string(cfg.advice);
  r.trial = trial;
  r.seed = derive_seed(cfg.master_seed, trial);

  if (needs_advice(cfg.algorithm) && cfg.advice.kind == AdvicePolicy::Kind::kNone) {
    throw std::invalid_argument(r.algorithm + " requires advice");
  }
  const double n = static_cast<double>(instance.size());
  const double W = instance.total_weight();
  const double factor = cfg.advice.factor;

  SamplerHandle handle(instance, r.seed);
  BudgetedSource guard(handle, cfg.max_draws);
  auto prop = [&] { return guard.proportional(); };
  auto unif = [&] { return guard.uniform(); };

  r.true_value = W;
  try {
    switch (cfg.algorithm) {
      case Algorithm::kProp:
        r.estimate = prop_estimate(prop, factor * n, cfg.eps);
        break;
      case Algorithm::kNoAdviceProp:
        r.estimate = no_advice_prop_estimate(prop, guard.rng(), cfg.eps).W_hat;
        break;
      case Algorithm::kHybrid: {
        const auto advised = static_cast<std::uint64_t>(std::llround(factor * n));
        const HybridTrace trace = hybrid_estimate(guard, std::max<std::uint64_t>(advised, 1),
                                                  cfg.eps, cfg.hybrid);
        r.estimate = trace.W_hat;
        r.aborted = trace.aborted;
        break;
      }
      case Algorithm::kNoAdviceHybrid:
        r.estimate = no_advice_hybrid_estimate(guard, cfg.eps).W_hat;
        break;
      case Algorithm::kHarmonic:
        r.true_value = W / n;
        r.estimate =
            harmonic_estimate(guard, HarmonicConfig{cfg.eps, factor * W / n, cfg.phi}).theta_hat;
        break;
      case Algorithm::kCoupon:
        r.estimate = coupon_collect(unif).sum;
        break;
      case Algorithm::kSetSize:
        r.true_value = n;
        r.estimate = set_size_estimate(unif).n_hat;
        break;
    }
  } catch (const BudgetExhausted&) {
    r.aborted = true;
    r.estimate = std::numeric_limits<double>::quiet_NaN();
  }

  switch (cfg.algorithm) {
    case Algorithm::kCoupon:
      r.success = !r.aborted && r.estimate == r.true_value;
      break;
    case Algorithm::kSetSize:
      r.success = !r.aborted && r.estimate >= r.true_value;
      break;
    default:
      r.success = !r.aborted && within_relative(r.estimate, r.true_value, cfg.eps);
      break;
  }
  r.prop_draws = handle.counters().proportional_draws;
  r.unif_draws = handle.counters().uniform_draws;
  if (cfg.record_time) r.wall_time_ms = elapsed_ms(start);
  return r;
}

std::vector<TrialReport> run_trials(const WeightedInstance& instance, const TrialConfig& cfg) {
  if (needs_advice(cfg.algorithm) && cfg.advice.kind == AdvicePolicy::Kind::kNone) {
    throw std::invalid_argument(std::string(algorithm_name(cfg.algorithm)) +
                                " requires advice");
  }
  std::vector<TrialReport> reports(cfg.trials);
  parallel_for(cfg.trials, cfg.parallelism,
               [&](std::uint64_t i) { reports[i] = run_trial(instance, cfg, i); });
  return reports;
}

TrialReport run_graph_trial(const Graph& graph, const GraphTrialConfig& cfg,
                            std::uint64_t trial) {
  const auto start = std::chrono::steady_clock::now();
  TrialReport r;
  r.algorithm = "graph-edges";
  r.n = graph.vertex_count();
  r.eps = cfg.eps;
  r.advice = "none";
  r.trial = trial;
  r.seed = derive_seed(cfg.master_seed, trial);
  r.true_value = static_cast<double>(graph.edge_count());

  GraphOracle oracle(graph, r.seed);
  const DegreeSearchTrace trace = estimate_avg_degree(oracle, cfg.eps, cfg.search);
  r.estimate = trace.m_hat;
  r.success = within_relative(r.estimate, r.true_value, cfg.eps);
  r.vertex_queries = oracle.counters().vertex_queries;
  r.edge_queries = oracle.counters().edge_queries;
  r.degree_queries = oracle.counters().degree_queries;
  r.prop_draws = r.edge_queries;
  r.unif_draws = r.vertex_queries;
  if (cfg.record_time) r.wall_time_ms = elapsed_ms(start);
  return r;
}

std::vector<TrialReport> run_graph_trials(const Graph& graph, const GraphTrialConfig& cfg) {
  std::vector<TrialReport> reports(cfg.trials);
  parallel_for(cfg.trials, cfg.parallelism,
               [&](std::uint64_t i) { reports[i] = run_graph_trial(graph, cfg, i); });
  return reports;
}

std::pair<double, double> clopper_pearson(std::uint64_t failures, std::uint64_t trials,
                                          double confidence) {
  if (trials == 0) return {0.0, 1.0};
  using boost::math::binomial_distribution;
  const double alpha = (1.0 - confidence) / 2.0;
  const auto n = static_cast<double>(trials);
  const auto k = static_cast<double>(failures);
  return {binomial_distribution<>::find_lower_bound_on_p(n, k, alpha),
          binomial_distribution<>::find_upper_bound_on_p(n, k, alpha)};
}

TrialSummary summarize(const std::vector<TrialReport>& reports) {
  TrialSummary s;
  s.trials = reports.size();
  if (reports.empty()) {
    s.ci_high = 1.0;
    return s;
  }
  std::uint64_t aborts = 0;
  double draw_sum = 0.0;
  std::vector<std::uint64_t> draws;
  draws.reserve(reports.size());
  for (const auto& r : reports) {
    if (!r.success) ++s.failures;
    if (r.aborted) ++aborts;
    const std::uint64_t d = r.prop_draws + r.unif_draws;
    draw_sum += static_cast<double>(d);
    draws.push_back(d);
  }
  const auto n = static_cast<double>(s.trials);
  s.failure_rate = static_cast<double>(s.failures) / n;
  std::tie(s.ci_low, s.ci_high) = clopper_pearson(s.failures, s.trials);
  s.mean_draws = draw_sum / n;
  std::sort(draws.begin(), draws.end());
  const auto rank = static_cast<std::size_t>(std::ceil(0.95 * n));
  s.p95_draws = draws[std::max<std::size_t>(rank, 1) - 1];
  s.abort_rate = static_cast<double>(aborts) / n;
  return s;
}

std::string format_double17(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  return std::string(buf, ptr);
}

std::string_view csv_header() {
  return "algorithm,n,eps,advice,trial,seed,estimate,true_value,prop_draws,unif_draws,"
         "vertex_queries,edge_queries,degree_queries,success,aborted,wall_time_ms";
}

std::string csv_row(const TrialReport& r) {
  std::ostringstream out;
  out << r.algorithm << ',' << r.n << ',' << format_double17(r.eps) << ',' << r.advice << ','
      << r.trial << ',' << r.seed << ',' << format_double17(r.estimate) << ','
      << format_double17(r.true_value) << ',' << r.prop_draws << ',' << r.unif_draws << ','
      << r.vertex_queries << ',' << r.edge_queries << ',' << r.degree_queries << ','
      << (r.success ? 1 : 0) << ',' << (r.aborted ? 1 : 0) << ','
      << format_double17(r.wall_time_ms);
  return out.str();
}

void write_csv(std::ostream& out, const std::vector<TrialReport>& reports) {
  out << csv_header() << '\n';
  for (const auto& r : reports) out << csv_row(r) << '\n';
}

void write_csv_atomic(const std::filesystem::path& path,
                      const std::vector<TrialReport>& reports) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    write_csv(out, reports);
    out.flush();
    if (!out) throw std::runtime_error("write failed for " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

std::string summary_json(const TrialSummary& s, int indent) {
  nlohmann::json j;
  j["trials"] = s.trials;
  j["failures"] = s.failures;
  j["failure_rate"] = s.failure_rate;
  j["failure_rate_ci95"] = {s.ci_low, s.ci_high};
  j["mean_draws"] = s.mean_draws;
  j["p95_draws"] = s.p95_draws;
  j["abort_rate"] = s.abort_rate;
  return j.dump(indent);
}

}  // namespace sumest

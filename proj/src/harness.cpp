#include "dklms/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <limits>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "dklms/adaptive.hpp"
#include "dklms/rng.hpp"
#include "dklms/sim.hpp"

namespace dklms {
namespace {

// 17 significant digits: shortest form that round-trips an IEEE double.
std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

struct TrialOutput {
  // Indexed [algorithm][step-1] in config order; NaN past a divergence.
  std::vector<std::vector<double>> sqerr;
  std::vector<std::vector<double>> loss;
  std::vector<long> first_bad;  // 1-based step of first non-finite MSE, 0 = none
  std::vector<double> comparator_loss;
};

NodeDataParams make_prototype(const ExperimentConfig& cfg) {
  NodeDataParams p;
  p.noise_variance = cfg.noise_variance;
  p.initial_output = cfg.initial_output;
  return p;
}

// Everything shared by all trials; built once, read-only afterwards.
struct RunContext {
  ExperimentConfig cfg;
  Topology topology;
  CombinationMatrix combination;
  std::shared_ptr<const PropagationWeights> propagation;  // dklms only
  std::vector<NodeDataParams> shared_params;              // empty if resampled
  Eigen::VectorXd w_star;                                 // linear stream only
  std::unique_ptr<KrrComparator> comparator;
  NodeDataParams prototype;

  explicit RunContext(const ExperimentConfig& c)
      : cfg(c),
        topology(resolve_topology(c)),
        combination(metropolis_weights(topology)),
        prototype(make_prototype(c)) {
    if (!cfg.resample_chi_per_trial) {
      shared_params = sample_node_params(
          topology.num_nodes(),
          rng::derive_seed(cfg.seed, rng::StreamTag::kNodeParams, 0),
          prototype);
    }
    if (cfg.stream_kind == StreamKind::kLinear) {
      rng::Generator gen(
          rng::derive_seed(cfg.seed, rng::StreamTag::kGroundTruth, 0));
      w_star.resize(cfg.linear_dim);
      for (int j = 0; j < cfg.linear_dim; ++j) w_star(j) = gen.gaussian();
    }
  }
};

std::vector<NodeDataParams> trial_node_params(const RunContext& ctx,
                                              int trial) {
  if (!ctx.shared_params.empty()) return ctx.shared_params;
  // Index 0 is reserved for the shared draw; trials use 1 + t.
  const std::uint64_t seed = rng::derive_seed(
      ctx.cfg.seed, rng::StreamTag::kNodeParams, 1 + static_cast<std::uint64_t>(trial));
  return sample_node_params(ctx.topology.num_nodes(), seed, ctx.prototype);
}

ObservationStream trial_stream(const RunContext& ctx,
                               const std::vector<NodeDataParams>& params,
                               int trial) {
  const std::uint64_t seed = rng::derive_seed(
      ctx.cfg.seed, rng::StreamTag::kTrialData, static_cast<std::uint64_t>(trial));
  if (ctx.cfg.stream_kind == StreamKind::kLinear) {
    return generate_linear_stream(ctx.w_star, params, ctx.cfg.steps, seed);
  }
  return generate_nonlinear_stream(params, ctx.cfg.steps,
                                   ctx.cfg.regressor_window, seed);
}

// One algorithm, one stream: per-step network MSE and networkwise loss.
// Stops stepping once the network MSE goes non-finite.
void run_algorithm(const RunContext& ctx, Algorithm alg,
                   const ObservationStream& stream, std::vector<double>& sqerr,
                   std::vector<double>& loss, long& first_bad) {
  const int k_nodes = stream.num_nodes;
  const int steps = stream.steps;
  const double nan = std::numeric_limits<double>::quiet_NaN();
  sqerr.assign(steps, nan);
  loss.assign(steps, nan);
  first_bad = 0;

  const Eigen::VectorXd mu =
      Eigen::VectorXd::Constant(k_nodes, ctx.cfg.step_size);

  std::unique_ptr<DklmsState> dklms;
  std::vector<KlmsState> noncoop;
  std::unique_ptr<LinearDlmsState> linear;
  std::unique_ptr<KlmsState> central;
  switch (alg) {
    case Algorithm::kDklms:
      dklms = std::make_unique<DklmsState>(*ctx.propagation, mu,
                                           ctx.cfg.kernel,
                                           ctx.cfg.buffer_capacity);
      break;
    case Algorithm::kNoncoopKlms:
      noncoop.assign(k_nodes, KlmsState(ctx.cfg.step_size, ctx.cfg.kernel,
                                        ctx.cfg.buffer_capacity));
      break;
    case Algorithm::kLinearDlms:
      linear = std::make_unique<LinearDlmsState>(ctx.combination, mu,
                                                 stream.dim);
      break;
    case Algorithm::kCentralizedKlms:
      central = std::make_unique<KlmsState>(ctx.cfg.step_size, ctx.cfg.kernel,
                                            /*capacity=*/0);
      break;
  }

  Eigen::VectorXd errors(k_nodes);
  for (int n = 1; n <= steps; ++n) {
    const Eigen::MatrixXd& inputs = stream.regressors[n - 1];
    const Eigen::VectorXd desired = stream.desired.row(n - 1).transpose();
    switch (alg) {
      case Algorithm::kDklms:
        errors = dklms->step(inputs, desired);
        break;
      case Algorithm::kNoncoopKlms:
        errors = noncoop_klms_step(noncoop, inputs, desired);
        break;
      case Algorithm::kLinearDlms:
        errors = linear->step(inputs, desired);
        break;
      case Algorithm::kCentralizedKlms:
        // One shared dictionary; nodes feed it in ascending order.
        for (int k = 0; k < k_nodes; ++k) {
          errors(k) = central->step(inputs.col(k), desired(k)).first;
        }
        break;
    }
    const double sq = errors.squaredNorm();
    const double mse = sq / k_nodes;
    if (!std::isfinite(mse)) {
      first_bad = n;
      return;
    }
    sqerr[n - 1] = mse;
    loss[n - 1] = 0.5 * sq;
  }
}

TrialOutput run_trial(const RunContext& ctx, int trial) {
  const auto params = trial_node_params(ctx, trial);
  const ObservationStream stream = trial_stream(ctx, params, trial);

  TrialOutput out;
  const int n_algs = static_cast<int>(ctx.cfg.algorithms.size());
  out.sqerr.resize(n_algs);
  out.loss.resize(n_algs);
  out.first_bad.assign(n_algs, 0);
  for (int j = 0; j < n_algs; ++j) {
    run_algorithm(ctx, ctx.cfg.algorithms[j], stream, out.sqerr[j],
                  out.loss[j], out.first_bad[j]);
  }

  if (ctx.comparator) {
    out.comparator_loss.resize(stream.steps);
    for (int n = 1; n <= stream.steps; ++n) {
      const Eigen::VectorXd pred =
          ctx.comparator->predict_batch(stream.regressors[n - 1]);
      const Eigen::VectorXd desired = stream.desired.row(n - 1).transpose();
      out.comparator_loss[n - 1] = 0.5 * (desired - pred).squaredNorm();
    }
  }
  return out;
}

std::unique_ptr<KrrComparator> build_comparator(const RunContext& ctx,
                                                const RunOptions& options) {
  if (options.comparator_samples < 1) {
    throw std::invalid_argument("comparator: sample count must be >= 1");
  }
  const int k_nodes = ctx.topology.num_nodes();
  const int want = options.comparator_samples;
  const int steps = (want + k_nodes - 1) / k_nodes;

  // Noiseless replica of the plant, on its own stream; fixed across trials
  // (shared node parameters even when trials resample theirs).
  std::vector<NodeDataParams> params =
      !ctx.shared_params.empty()
          ? ctx.shared_params
          : sample_node_params(
                k_nodes,
                rng::derive_seed(ctx.cfg.seed, rng::StreamTag::kNodeParams, 0),
                ctx.prototype);
  for (auto& p : params) p.noise_variance = 0.0;

  const std::uint64_t seed =
      rng::derive_seed(ctx.cfg.seed, rng::StreamTag::kComparatorReplica, 0);
  const ObservationStream replica =
      ctx.cfg.stream_kind == StreamKind::kLinear
          ? generate_linear_stream(ctx.w_star, params, steps, seed)
          : generate_nonlinear_stream(params, steps, ctx.cfg.regressor_window,
                                      seed);

  // Samples in step order, nodes ascending within a step.
  Eigen::MatrixXd centers(replica.dim, want);
  Eigen::VectorXd targets(want);
  int c = 0;
  for (int n = 1; n <= steps && c < want; ++n) {
    for (int k = 0; k < k_nodes && c < want; ++k, ++c) {
      centers.col(c) = replica.regressors[n - 1].col(k);
      targets(c) = replica.desired(n - 1, k);
    }
  }
  return std::make_unique<KrrComparator>(ctx.cfg.kernel, std::move(centers),
                                         targets, options.comparator_ridge);
}

}  // namespace

const MetricTrace& ExperimentResult::trace(Algorithm a) const {
  for (const auto& [alg, tr] : traces) {
    if (alg == a) return tr;
  }
  throw std::out_of_range("no trace for algorithm " + algorithm_name(a));
}

bool ExperimentResult::any_diverged() const {
  for (const auto& [alg, tr] : traces) {
    if (tr.diverged) return true;
  }
  return false;
}

ExperimentResult run_experiment(const ExperimentConfig& cfg,
                                const RunOptions& options) {
  cfg.validate();

  RunContext ctx(cfg);
  const bool wants_dklms =
      std::find(cfg.algorithms.begin(), cfg.algorithms.end(),
                Algorithm::kDklms) != cfg.algorithms.end();
  if (wants_dklms) {
    ctx.propagation = std::make_shared<const PropagationWeights>(
        PropagationWeights::build(ctx.combination, ctx.topology,
                                  cfg.buffer_capacity, cfg.mask_one_hop));
  }
  if (options.with_comparator) {
    ctx.comparator = build_comparator(ctx, options);
  }

  // Trials run on a pool; every trial owns derived seeds, so scheduling
  // cannot change any value, and the reduction below is in trial order.
  const int trials = cfg.trials;
  std::vector<TrialOutput> outputs(trials);
  int n_threads = cfg.threads == 0
                      ? static_cast<int>(std::thread::hardware_concurrency())
                      : cfg.threads;
  n_threads = std::max(1, std::min(n_threads, trials));
  if (n_threads == 1) {
    for (int t = 0; t < trials; ++t) outputs[t] = run_trial(ctx, t);
  } else {
    std::atomic<int> next{0};
    std::mutex err_mutex;
    std::exception_ptr first_error;
    auto worker = [&] {
      for (int t = next.fetch_add(1); t < trials; t = next.fetch_add(1)) {
        try {
          outputs[t] = run_trial(ctx, t);
        } catch (...) {
          std::lock_guard<std::mutex> lock(err_mutex);
          if (!first_error) first_error = std::current_exception();
          return;
        }
      }
    };
    std::vector<std::thread> pool;
    pool.reserve(n_threads);
    for (int i = 0; i < n_threads; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
    if (first_error) std::rethrow_exception(first_error);
  }

  ExperimentResult result;
  result.config = cfg;
  if (!ctx.shared_params.empty()) {
    result.chi.reserve(ctx.shared_params.size());
    for (const auto& p : ctx.shared_params) {
      result.chi.push_back(p.input_variance_scale);
    }
  }

  const int n_algs = static_cast<int>(cfg.algorithms.size());
  for (int j = 0; j < n_algs; ++j) {
    MetricTrace trace;
    long first_bad_min = 0;
    for (int t = 0; t < trials; ++t) {
      const long b = outputs[t].first_bad[j];
      if (b != 0 && (first_bad_min == 0 || b < first_bad_min)) {
        first_bad_min = b;
      }
    }
    const int len = first_bad_min == 0 ? cfg.steps
                                       : static_cast<int>(first_bad_min - 1);
    trace.diverged = first_bad_min != 0;
    trace.first_divergent_step = first_bad_min;
    trace.mse.assign(len, 0.0);
    trace.mean_loss.assign(len, 0.0);
    for (int t = 0; t < trials; ++t) {  // ascending: fixed reduction order
      for (int n = 0; n < len; ++n) {
        trace.mse[n] += outputs[t].sqerr[j][n];
        trace.mean_loss[n] += outputs[t].loss[j][n];
      }
    }
    trace.cumulative_loss.assign(len, 0.0);
    double acc = 0.0;
    for (int n = 0; n < len; ++n) {
      trace.mse[n] /= trials;
      trace.mean_loss[n] /= trials;
      acc += trace.mean_loss[n];
      trace.cumulative_loss[n] = acc;
    }
    const int tail = std::min(500, len);
    if (tail > 0) {
      double s = 0.0;
      for (int n = len - tail; n < len; ++n) s += trace.mse[n];
      trace.steady_state_mse = s / tail;
    } else {
      trace.steady_state_mse = std::numeric_limits<double>::quiet_NaN();
    }
    result.traces.emplace_back(cfg.algorithms[j], std::move(trace));
  }

  if (ctx.comparator) {
    result.comparator_loss.assign(cfg.steps, 0.0);
    for (int t = 0; t < trials; ++t) {
      for (int n = 0; n < cfg.steps; ++n) {
        result.comparator_loss[n] += outputs[t].comparator_loss[n];
      }
    }
    for (double& v : result.comparator_loss) v /= trials;
  }
  return result;
}

std::vector<std::string> emit_results(const ExperimentResult& result,
                                      const std::string& dir) {
  namespace fs = std::filesystem;
  fs::create_directories(dir);

  std::size_t rows = result.config.steps;
  for (const auto& [alg, trace] : result.traces) {
    rows = std::min(rows, trace.mse.size());
  }

  const fs::path results_path = fs::path(dir) / "results.csv";
  {
    std::ofstream out(results_path);
    if (!out) {
      throw std::runtime_error("cannot write " + results_path.string());
    }
    out << "n";
    for (const auto& [alg, trace] : result.traces) {
      out << ',' << algorithm_name(alg) << "_mse," << algorithm_name(alg)
          << "_cumloss";
    }
    out << '\n';
    for (std::size_t n = 0; n < rows; ++n) {
      out << (n + 1);
      for (const auto& [alg, trace] : result.traces) {
        out << ',' << format_double(trace.mse[n]) << ','
            << format_double(trace.cumulative_loss[n]);
      }
      out << '\n';
    }
  }

  const fs::path manifest_path = fs::path(dir) / "run_manifest.cfg";
  {
    std::ofstream out(manifest_path);
    if (!out) {
      throw std::runtime_error("cannot write " + manifest_path.string());
    }
    out << "# run manifest; feed back with `dklms-sim run --config` to "
           "reproduce byte-identical results\n";
    for (const auto& [alg, trace] : result.traces) {
      if (trace.diverged) {
        out << "# note: " << algorithm_name(alg)
            << " hit a non-finite network MSE at step "
            << trace.first_divergent_step << "\n";
      }
    }
    out << serialize_config(result.config);
  }
  return {results_path.string(), manifest_path.string()};
}

void dump_stream_csv(const ExperimentConfig& cfg, std::ostream& out) {
  cfg.validate();
  RunContext ctx(cfg);
  const int dim = cfg.stream_kind == StreamKind::kLinear
                      ? cfg.linear_dim
                      : cfg.regressor_window;
  out << "trial,node,n,x";
  for (int j = 0; j < dim; ++j) out << ",regressor_" << j;
  out << ",y,d\n";
  for (int t = 0; t < cfg.trials; ++t) {
    const auto params = trial_node_params(ctx, t);
    const ObservationStream stream = trial_stream(ctx, params, t);
    for (int k = 0; k < stream.num_nodes; ++k) {
      for (int n = 1; n <= stream.steps; ++n) {
        out << t << ',' << k << ',' << n << ','
            << format_double(stream.raw_input(n - 1, k));
        for (int j = 0; j < dim; ++j) {
          out << ',' << format_double(stream.regressors[n - 1](j, k));
        }
        out << ',' << format_double(stream.clean_output(n - 1, k)) << ','
            << format_double(stream.desired(n - 1, k)) << '\n';
      }
    }
  }
}

}  // namespace dklms

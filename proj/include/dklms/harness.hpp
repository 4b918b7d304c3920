#pragma once

#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "dklms/config.hpp"
#include "dklms/metrics.hpp"

namespace dklms {

// Trial-averaged per-iteration outputs of one algorithm.
struct MetricTrace {
  std::vector<double> mse;              // network MSE per iteration
  std::vector<double> cumulative_loss;  // networkwise cumulative loss
  std::vector<double> mean_loss;        // per-step networkwise loss
  double steady_state_mse = 0.0;        // mean of the last 500 iterations
  bool diverged = false;
  long first_divergent_step = 0;  // 1-based; 0 when finite throughout
};

struct RunOptions {
  // Fit the fixed kernel-ridge comparator on the first `comparator_samples`
  // samples of a noiseless replica stream and record its per-step losses.
  bool with_comparator = false;
  int comparator_samples = 500;
  double comparator_ridge = 1e-3;
};

struct ExperimentResult {
  ExperimentConfig config;  // resolved configuration the run used
  std::vector<double> chi;  // shared node input scales (empty if per-trial)
  std::vector<std::pair<Algorithm, MetricTrace>> traces;  // config order
  std::vector<double> comparator_loss;  // empty unless requested

  const MetricTrace& trace(Algorithm a) const;
  bool any_diverged() const;
};

// Runs T Monte-Carlo trials; every selected algorithm consumes the identical
// per-trial stream. Per-step network error uses the prior estimate
// (d_k(n) - f_{k,n-1}(x_k(n)))^2 averaged over nodes. Trials may execute on
// a thread pool; reduction order is fixed (ascending trial index), so output
// is independent of thread count. Non-finite MSE truncates the averaged
// trace at the earliest offending step across trials and flags the trace.
ExperimentResult run_experiment(const ExperimentConfig& cfg,
                                const RunOptions& options = {});

// Writes <dir>/results.csv (header `n,<alg>_mse,<alg>_cumloss`, 17
// significant digits) and <dir>/run_manifest.cfg (re-feedable as a config).
// Returns the paths written.
std::vector<std::string> emit_results(const ExperimentResult& result,
                                      const std::string& dir);

// Stream dump for generator cross-checks:
// trial,node,n,x,regressor_0..,y,d rows for every trial in the config.
void dump_stream_csv(const ExperimentConfig& cfg, std::ostream& out);

}  // namespace dklms

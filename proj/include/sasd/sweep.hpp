#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sasd/methods.hpp"
#include "sasd/metrics.hpp"

namespace sasd {

/// Grid experiment: every (method, N, theta, trial) combination gets one
/// seeded instance. The instance seed depends only on (base_seed, N, theta,
/// trial), so every method sees the same data and adding trials to one cell
/// never reshuffles another.
struct SweepOptions {
  std::vector<int> nValues;
  std::vector<double> thetaValues;
  int kernelLen = 10;
  int trials = 20;
  std::vector<std::string> methods;
  std::uint64_t baseSeed = 1;
  double successThreshold = 1e-2;
  SolverOptions solver;
  bool recordWalltime = true;  // false writes wall_seconds = 0 for byte-stable output
  int threads = 0;             // 0: hardware concurrency
};

/// Parse a key = value config file ('#' starts a comment). Unknown keys and
/// malformed values raise std::runtime_error naming the key.
SweepOptions parseSweepConfig(const std::string& path);

/// Run the grid. Solver exceptions become failure rows (e_rec = inf) rather
/// than aborting. Rows come back sorted by (method position in the config
/// list, N, theta, trial).
std::vector<TrialRecord> runSweep(const SweepOptions& opts);

struct SummaryRow {
  std::string method;
  int n = 0;
  int m = 0;
  double theta = 0;
  int trials = 0;
  int failures = 0;
  double failureRate = 0;
  double meanSuccessError = 0;  // +inf when the cell has no successes
};

/// Aggregate per (method, N, theta) cell, preserving record order.
std::vector<SummaryRow> summarize(const std::vector<TrialRecord>& records,
                                  double successThreshold);

/// CSV with header
/// `method,N,M,theta,trials,failures,failure_rate,mean_success_error,e_thr`.
void writeSummaryCsv(const std::vector<SummaryRow>& rows, double successThreshold,
                     const std::string& path);

}  // namespace sasd

#include "sasd/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <stdexcept>
#include <thread>
#include <tuple>

#include "sasd/lifting.hpp"
#include "sasd/random.hpp"
#include "sasd/serialize.hpp"

namespace sasd {

namespace {

std::string trim(const std::string& s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

std::vector<std::string> splitList(const std::string& s) {
  std::vector<std::string> parts;
  std::string cur;
  for (char c : s) {
    if (c == ',') {
      parts.push_back(trim(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  parts.push_back(trim(cur));
  return parts;
}

[[noreturn]] void badValue(const std::string& key, const std::string& value) {
  throw std::runtime_error("config: key '" + key + "': cannot parse value '" +
                           value + "'");
}

double parseDoubleValue(const std::string& key, const std::string& value) {
  char* end = nullptr;
  const double v = std::strtod(value.c_str(), &end);
  if (end == value.c_str() || *end != '\0') badValue(key, value);
  return v;
}

int parseIntValue(const std::string& key, const std::string& value) {
  char* end = nullptr;
  const long v = std::strtol(value.c_str(), &end, 10);
  if (end == value.c_str() || *end != '\0') badValue(key, value);
  return int(v);
}

std::uint64_t parseSeedValue(const std::string& key, const std::string& value) {
  char* end = nullptr;
  const unsigned long long v = std::strtoull(value.c_str(), &end, 10);
  if (end == value.c_str() || *end != '\0') badValue(key, value);
  return std::uint64_t(v);
}

bool parseBoolValue(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1") return true;
  if (value == "false" || value == "0") return false;
  badValue(key, value);
}

}  // namespace

SweepOptions parseSweepConfig(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error(path + ": cannot open config");

  SweepOptions o;
  o.nValues.clear();
  o.thetaValues.clear();
  o.methods.clear();

  std::string line;
  std::size_t lineNo = 0;
  while (std::getline(in, line)) {
    ++lineNo;
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos) {
      throw std::runtime_error("config: line " + std::to_string(lineNo) +
                               ": expected key = value, got '" + line + "'");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));

    if (key == "n_values") {
      for (const std::string& p : splitList(value)) {
        o.nValues.push_back(parseIntValue(key, p));
      }
    } else if (key == "theta_values") {
      for (const std::string& p : splitList(value)) {
        o.thetaValues.push_back(parseDoubleValue(key, p));
      }
    } else if (key == "kernel_len") {
      o.kernelLen = parseIntValue(key, value);
    } else if (key == "trials") {
      o.trials = parseIntValue(key, value);
    } else if (key == "methods") {
      for (const std::string& p : splitList(value)) {
        if (!isMethodName(p)) {
          std::string msg = "config: key 'methods': unknown method '" + p +
                            "'; valid methods:";
          for (const std::string& m : methodNames()) msg += " " + m;
          throw std::runtime_error(msg);
        }
        o.methods.push_back(p);
      }
    } else if (key == "base_seed") {
      o.baseSeed = parseSeedValue(key, value);
    } else if (key == "e_thr") {
      o.successThreshold = parseDoubleValue(key, value);
    } else if (key == "rho") {
      o.solver.rho = parseDoubleValue(key, value);
    } else if (key == "max_iters") {
      o.solver.maxIters = parseIntValue(key, value);
    } else if (key == "tol") {
      o.solver.tol = parseDoubleValue(key, value);
    } else if (key == "svd_tol") {
      o.solver.svdTol = parseDoubleValue(key, value);
    } else if (key == "svd_max_iters") {
      o.solver.svdMaxIters = parseIntValue(key, value);
    } else if (key == "lambda") {
      o.solver.lambda = parseDoubleValue(key, value);
    } else if (key == "momentum") {
      o.solver.momentum = parseDoubleValue(key, value);
    } else if (key == "homotopy_eta") {
      o.solver.homotopyEta = parseDoubleValue(key, value);
    } else if (key == "homotopy_inner_iters") {
      o.solver.homotopyInnerIters = parseIntValue(key, value);
    } else if (key == "homotopy_lambda_init") {
      o.solver.homotopyLambdaInit = parseDoubleValue(key, value);
    } else if (key == "homotopy_lambda_final") {
      o.solver.homotopyLambdaFinal = parseDoubleValue(key, value);
    } else if (key == "record_walltime") {
      o.recordWalltime = parseBoolValue(key, value);
    } else if (key == "threads") {
      o.threads = parseIntValue(key, value);
    } else {
      throw std::runtime_error("config: unknown key '" + key + "'");
    }
  }

  if (o.nValues.empty()) throw std::runtime_error("config: missing key 'n_values'");
  if (o.thetaValues.empty()) {
    throw std::runtime_error("config: missing key 'theta_values'");
  }
  if (o.methods.empty()) throw std::runtime_error("config: missing key 'methods'");
  for (int n : o.nValues) {
    if (n < 1) throw std::runtime_error("config: key 'n_values': entries must be >= 1");
  }
  for (double t : o.thetaValues) {
    if (t < 0.0 || t > 1.0) {
      throw std::runtime_error("config: key 'theta_values': entries must lie in [0, 1]");
    }
  }
  if (o.kernelLen < 1) throw std::runtime_error("config: key 'kernel_len': must be >= 1");
  if (o.trials < 1) throw std::runtime_error("config: key 'trials': must be >= 1");
  if (o.successThreshold <= 0.0) {
    throw std::runtime_error("config: key 'e_thr': must be > 0");
  }
  return o;
}

namespace {

struct Task {
  int methodIndex;
  int n;
  double theta;
  int trial;
};

TrialRecord runOneTrial(const Task& task, const SweepOptions& opts) {
  const std::string& method = opts.methods[std::size_t(task.methodIndex)];
  const std::uint64_t seed =
      trialSeed(opts.baseSeed, task.n, task.theta, task.trial);

  TrialRecord rec;
  rec.method = method;
  rec.n = task.n;
  rec.m = opts.kernelLen;
  rec.theta = task.theta;
  rec.seed = seed;

  const auto t0 = std::chrono::steady_clock::now();
  try {
    const Eigen::VectorXd x0 =
        bernoulliGaussian(task.n, task.theta, splitMix64(seed ^ 1));
    const Eigen::VectorXd h0 = gaussianKernel(opts.kernelLen, splitMix64(seed ^ 2));
    const Eigen::VectorXd y = convolve(x0, h0);
    const SolveOutcome out = solveByName(method, y, opts.kernelLen, opts.solver);
    rec.eRec = recoveryError(out.factors.h, h0, task.n);
    rec.iterations = out.iterations;
  } catch (const std::exception&) {
    rec.eRec = std::numeric_limits<double>::infinity();
    rec.iterations = 0;
  }
  const auto t1 = std::chrono::steady_clock::now();
  rec.success = isSuccess(rec.eRec, opts.successThreshold);
  rec.wallSeconds =
      opts.recordWalltime ? std::chrono::duration<double>(t1 - t0).count() : 0.0;
  return rec;
}

}  // namespace

std::vector<TrialRecord> runSweep(const SweepOptions& opts) {
  if (opts.methods.empty() || opts.nValues.empty() || opts.thetaValues.empty()) {
    throw std::invalid_argument("runSweep: methods, n_values, theta_values must be non-empty");
  }
  for (const std::string& m : opts.methods) {
    if (!isMethodName(m)) {
      throw std::invalid_argument("runSweep: unknown method '" + m + "'");
    }
  }

  std::vector<Task> tasks;
  tasks.reserve(opts.methods.size() * opts.nValues.size() * opts.thetaValues.size() *
                std::size_t(opts.trials));
  for (int mi = 0; mi < int(opts.methods.size()); ++mi) {
    for (int n : opts.nValues) {
      for (double theta : opts.thetaValues) {
        for (int t = 0; t < opts.trials; ++t) tasks.push_back({mi, n, theta, t});
      }
    }
  }

  std::vector<TrialRecord> results(tasks.size());
  unsigned workerCount = opts.threads > 0
                             ? unsigned(opts.threads)
                             : std::max(1u, std::thread::hardware_concurrency());
  workerCount = std::min<unsigned>(workerCount, unsigned(tasks.size()));

  if (workerCount <= 1) {
    for (std::size_t i = 0; i < tasks.size(); ++i) {
      results[i] = runOneTrial(tasks[i], opts);
    }
  } else {
    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
      for (;;) {
        const std::size_t i = next.fetch_add(1);
        if (i >= tasks.size()) return;
        results[i] = runOneTrial(tasks[i], opts);
      }
    };
    std::vector<std::thread> pool;
    pool.reserve(workerCount);
    for (unsigned w = 0; w < workerCount; ++w) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
  }

  // scheduling-independent output order
  std::vector<std::size_t> order(tasks.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const Task& ta = tasks[a];
    const Task& tb = tasks[b];
    return std::tie(ta.methodIndex, ta.n, ta.theta, ta.trial) <
           std::tie(tb.methodIndex, tb.n, tb.theta, tb.trial);
  });
  std::vector<TrialRecord> sorted;
  sorted.reserve(results.size());
  for (std::size_t i : order) sorted.push_back(std::move(results[i]));
  return sorted;
}

std::vector<SummaryRow> summarize(const std::vector<TrialRecord>& records,
                                  double successThreshold) {
  std::vector<SummaryRow> rows;
  std::vector<double> successSums;
  std::vector<int> successCounts;

  auto findRow = [&](const TrialRecord& r) -> std::size_t {
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (rows[i].method == r.method && rows[i].n == r.n && rows[i].theta == r.theta) {
        return i;
      }
    }
    SummaryRow row;
    row.method = r.method;
    row.n = r.n;
    row.m = r.m;
    row.theta = r.theta;
    rows.push_back(row);
    successSums.push_back(0.0);
    successCounts.push_back(0);
    return rows.size() - 1;
  };

  for (const TrialRecord& r : records) {
    const std::size_t i = findRow(r);
    ++rows[i].trials;
    const bool success = isSuccess(r.eRec, successThreshold);
    if (success) {
      successSums[i] += r.eRec;
      ++successCounts[i];
    } else {
      ++rows[i].failures;
    }
  }
  for (std::size_t i = 0; i < rows.size(); ++i) {
    rows[i].failureRate = rows[i].trials > 0
                              ? double(rows[i].failures) / double(rows[i].trials)
                              : 0.0;
    rows[i].meanSuccessError = successCounts[i] > 0
                                   ? successSums[i] / double(successCounts[i])
                                   : std::numeric_limits<double>::infinity();
  }
  return rows;
}

void writeSummaryCsv(const std::vector<SummaryRow>& rows, double successThreshold,
                     const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error(path + ": cannot open for writing");
  out << "method,N,M,theta,trials,failures,failure_rate,mean_success_error,e_thr\n";
  for (const SummaryRow& r : rows) {
    out << r.method << ',' << r.n << ',' << r.m << ',' << formatDouble(r.theta)
        << ',' << r.trials << ',' << r.failures << ',' << formatDouble(r.failureRate)
        << ',' << formatDouble(r.meanSuccessError) << ','
        << formatDouble(successThreshold) << '\n';
  }
  if (!out) throw std::runtime_error(path + ": write failed");
}

}  // namespace sasd

#pragma once

#include <Eigen/Core>

#include <string>
#include <vector>

#include "sasd/roco.hpp"

namespace sasd {

/// Knobs for every solver family, so one struct can travel through configs
/// and CLIs. Fields a given method ignores are harmless.
struct SolverOptions {
  // lifted ADMM
  double rho = 2.0;
  int maxIters = 1000;
  double tol = 1e-6;
  double svdTol = 1e-12;
  int svdMaxIters = 1000;
  // bilinear family; lambda <= 0 selects the data-scaled default
  double lambda = 0.0;
  double momentum = 0.9;
  double homotopyEta = 0.5;
  int homotopyInnerIters = 50;
  double homotopyLambdaInit = 0.0;   // <= 0: 10x the working lambda
  double homotopyLambdaFinal = 0.0;  // <= 0: the working lambda
};

struct SolveOutcome {
  FactorPair<double> factors;
  int iterations = 0;
  bool converged = false;
  std::vector<double> trace;  // one entry per iteration
  std::string traceName;      // "delta_z" for the lifted solver, else "objective"
};

/// The methods the harness accepts, in canonical order.
const std::vector<std::string>& methodNames();

bool isMethodName(const std::string& name);

/// Dispatch on method name. Throws std::invalid_argument for an unknown
/// name (the message lists the valid ones) and propagates solver
/// precondition errors.
SolveOutcome solveByName(const std::string& method, const Eigen::VectorXd& y,
                         Eigen::Index kernelLen, const SolverOptions& opts);

}  // namespace sasd

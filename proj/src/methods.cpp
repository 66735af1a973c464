#include "sasd/methods.hpp"

#include <stdexcept>

#include "sasd/bilinear.hpp"

namespace sasd {

namespace {

BilinearConfig<double> bilinearConfig(const SolverOptions& o, bool withHomotopy) {
  BilinearConfig<double> cfg;
  cfg.lambda = o.lambda;
  cfg.maxIters = o.maxIters;
  cfg.tol = o.tol;
  cfg.momentum = o.momentum;
  if (withHomotopy) {
    HomotopySchedule<double> sched;
    sched.lambdaInit = o.homotopyLambdaInit;
    sched.lambdaFinal = o.homotopyLambdaFinal;
    sched.eta = o.homotopyEta;
    sched.innerIters = o.homotopyInnerIters;
    cfg.homotopy = sched;
  }
  return cfg;
}

SolveOutcome fromBilinear(BilinearResult<double>&& r) {
  SolveOutcome out;
  out.factors = std::move(r.factors);
  out.iterations = r.state.iteration;
  out.converged = r.converged;
  out.trace.assign(r.state.objectives.begin(), r.state.objectives.end());
  out.traceName = "objective";
  return out;
}

}  // namespace

const std::vector<std::string>& methodNames() {
  static const std::vector<std::string> names = {
      "roco", "adm", "iadm", "homotopy-adm", "homotopy-iadm"};
  return names;
}

bool isMethodName(const std::string& name) {
  for (const std::string& m : methodNames()) {
    if (m == name) return true;
  }
  return false;
}

SolveOutcome solveByName(const std::string& method, const Eigen::VectorXd& y,
                         Eigen::Index kernelLen, const SolverOptions& opts) {
  if (method == "roco") {
    RocoConfig<double> cfg;
    cfg.rho = opts.rho;
    cfg.maxIters = opts.maxIters;
    cfg.tol = opts.tol;
    cfg.svdTol = opts.svdTol;
    cfg.svdMaxIters = opts.svdMaxIters;
    RocoResult<double> r = runRoco<double>(y, kernelLen, cfg);
    SolveOutcome out;
    out.factors = std::move(r.factors);
    out.iterations = r.state.iteration;
    out.converged = r.converged;
    out.trace.reserve(r.state.residuals.size());
    for (const auto& res : r.state.residuals) out.trace.push_back(res.deltaZ);
    out.traceName = "delta_z";
    return out;
  }
  if (method == "adm") {
    return fromBilinear(runAdm<double>(y, kernelLen, bilinearConfig(opts, false)));
  }
  if (method == "iadm") {
    return fromBilinear(runIadm<double>(y, kernelLen, bilinearConfig(opts, false)));
  }
  if (method == "homotopy-adm") {
    return fromBilinear(
        runHomotopy<double>(HomotopyBase::Adm, y, kernelLen, bilinearConfig(opts, true)));
  }
  if (method == "homotopy-iadm") {
    return fromBilinear(
        runHomotopy<double>(HomotopyBase::Iadm, y, kernelLen, bilinearConfig(opts, true)));
  }
  std::string msg = "unknown method '" + method + "'; valid methods:";
  for (const std::string& m : methodNames()) msg += " " + m;
  throw std::invalid_argument(msg);
}

}  // namespace sasd

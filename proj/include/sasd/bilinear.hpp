#pragma once

#include <Eigen/Core>

#include <cmath>
#include <optional>
#include <stdexcept>
#include <vector>

#include "sasd/lifting.hpp"
#include "sasd/roco.hpp"  // FactorPair

namespace sasd {

template <typename Scalar>
struct HomotopySchedule {
  Scalar lambdaInit = Scalar(0);   // <= 0: 1.0 * linf scale of correlate(y, hInit)
  Scalar lambdaFinal = Scalar(0);  // <= 0: the solver's working lambda
  Scalar eta = Scalar(0.5);        // geometric decay, in (0, 1)
  int innerIters = 50;
};

template <typename Scalar>
struct BilinearConfig {
  Scalar lambda = Scalar(0);  // <= 0: 0.1 * ||correlate(y, hInit)||_inf
  int maxIters = 1000;
  Scalar tol = Scalar(1e-6);
  Scalar momentum = Scalar(0.9);  // used by the inertial variant only
  std::optional<HomotopySchedule<Scalar>> homotopy;
};

template <typename Scalar>
struct BilinearState {
  VectorX<Scalar> x, h, xPrev, hPrev;
  int iteration = 0;
  std::vector<Scalar> objectives;  // value after each completed iteration
  Scalar lambda = Scalar(0);       // the working sparsity weight
};

template <typename Scalar>
struct HomotopyStage {
  Scalar lambda = Scalar(0);
  int iterations = 0;
  Scalar initialObjective = Scalar(0);  // at the warm start, under this stage's lambda
  Scalar finalObjective = Scalar(0);
};

template <typename Scalar>
struct BilinearResult {
  FactorPair<Scalar> factors;
  BilinearState<Scalar> state;
  bool converged = false;
  std::vector<HomotopyStage<Scalar>> stages;  // populated by the homotopy wrappers
};

namespace detail {

template <typename Scalar>
Scalar bilinearObjective(const VectorX<Scalar>& x, const VectorX<Scalar>& h,
                         const VectorX<Scalar>& y, Scalar lambda) {
  const VectorX<Scalar> r = convolve(x, h) - y;
  return Scalar(0.5) * r.squaredNorm() + lambda * x.template lpNorm<1>();
}

// Gradient of the data term with respect to the kernel block:
// g[k] = sum_n r[n] x[(n - k) mod N] for k < M.
template <typename Scalar>
VectorX<Scalar> kernelGradient(const VectorX<Scalar>& r, const VectorX<Scalar>& x,
                               Index m) {
  const Index n = r.size();
  VectorX<Scalar> g(m);
  for (Index k = 0; k < m; ++k) {
    Scalar acc = Scalar(0);
    for (Index i = 0; i < n; ++i) acc += r(i) * x(((i - k) % n + n) % n);
    g(k) = acc;
  }
  return g;
}

template <typename Scalar>
VectorX<Scalar> softThreshold(const VectorX<Scalar>& v, Scalar t) {
  VectorX<Scalar> out(v.size());
  for (Index i = 0; i < v.size(); ++i) {
    if (v(i) > t) {
      out(i) = v(i) - t;
    } else if (v(i) < -t) {
      out(i) = v(i) + t;
    } else {
      out(i) = Scalar(0);
    }
  }
  return out;
}

}  // namespace detail

/// One proximal-gradient step on the sparse block:
/// soft_threshold(x - step * correlate(convolve(x, h) - y, h), step * lambda).
template <typename Scalar>
VectorX<Scalar> lassoXStep(const VectorX<Scalar>& x, const VectorX<Scalar>& h,
                           const VectorX<Scalar>& y, Scalar lambda, Scalar step) {
  const VectorX<Scalar> g = correlate(VectorX<Scalar>(convolve(x, h) - y), h);
  return detail::softThreshold<Scalar>(x - step * g, step * lambda);
}

template <typename Scalar>
struct SphereStep {
  VectorX<Scalar> h;
  bool degenerate = false;  // step would have collapsed h; input returned instead
};

/// One Riemannian gradient step on the unit sphere: project the Euclidean
/// gradient onto the tangent space at h, step, and retract by
/// normalization. The tangent projection divides by <h, h> so the formula
/// stays exact for a slightly off-sphere (extrapolated) base point.
template <typename Scalar>
SphereStep<Scalar> sphereHStep(const VectorX<Scalar>& h, const VectorX<Scalar>& x,
                               const VectorX<Scalar>& y, Scalar step) {
  const VectorX<Scalar> r = convolve(x, h) - y;
  const VectorX<Scalar> gE = detail::kernelGradient<Scalar>(r, x, h.size());
  const VectorX<Scalar> gR = gE - (h.dot(gE) / h.dot(h)) * h;
  const VectorX<Scalar> cand = h - step * gR;
  const Scalar norm = cand.norm();
  if (norm < Scalar(1e-14)) return {h, true};
  return {VectorX<Scalar>(cand / norm), false};
}

namespace detail {

template <typename Scalar>
VectorX<Scalar> initialKernel(const VectorX<Scalar>& y, Index m) {
  VectorX<Scalar> h = y.head(m);
  const Scalar norm = h.norm();
  if (norm > Scalar(0)) return VectorX<Scalar>(h / norm);
  return VectorX<Scalar>::Unit(m, 0);  // degenerate observation window
}

template <typename Scalar>
Scalar defaultLambda(const VectorX<Scalar>& y, const VectorX<Scalar>& hInit) {
  const Scalar scale = correlate(y, hInit).template lpNorm<Eigen::Infinity>();
  return scale > Scalar(0) ? Scalar(0.1) * scale : Scalar(1);
}

// Alternating descent engine shared by the plain and the inertial variant.
// Each block extrapolates by beta * (w - wPrev), takes one lasso_x_step /
// sphere_h_step from the base, and backtracks from step 1 with halving.
// The acceptance rule differs by variant: with beta = 0 a step is accepted
// when the block objective does not increase, so the plain method is
// monotone; with beta > 0 the objective must oscillate for the momentum to
// pay off, so a step is accepted when the smooth data term is majorized by
// its quadratic model at the base (the descent lemma), which pins the step
// to the local curvature. An inertial iteration that still raises the
// objective restarts the momentum, keeping the sequence bounded. A step
// that cannot be accepted leaves the block unchanged.
template <typename Scalar>
bool descendInPlace(BilinearState<Scalar>& s, const VectorX<Scalar>& y, Scalar beta,
                    int maxIters, Scalar tol) {
  constexpr Scalar kMinStep = Scalar(1e-16);
  const Index m = s.h.size();
  const bool inertial = beta > Scalar(0);
  for (int it = 0; it < maxIters; ++it) {
    // sparse block
    const VectorX<Scalar> xBase = s.x + beta * (s.x - s.xPrev);
    const VectorX<Scalar> rX = convolve(xBase, s.h) - y;
    const Scalar gXBase = Scalar(0.5) * rX.squaredNorm();
    const VectorX<Scalar> gradX = correlate(rX, s.h);
    const Scalar fBase = gXBase + s.lambda * xBase.template lpNorm<1>();
    VectorX<Scalar> xNext = s.x;
    for (Scalar step = Scalar(1); step >= kMinStep; step /= Scalar(2)) {
      VectorX<Scalar> cand =
          softThreshold<Scalar>(xBase - step * gradX, step * s.lambda);
      const Scalar gCand = Scalar(0.5) * (convolve(cand, s.h) - y).squaredNorm();
      bool accept;
      if (inertial) {
        const VectorX<Scalar> diff = cand - xBase;
        accept = gCand <= gXBase + gradX.dot(diff) +
                              diff.squaredNorm() / (Scalar(2) * step);
      } else {
        accept = gCand + s.lambda * cand.template lpNorm<1>() <= fBase;
      }
      if (accept) {
        xNext = std::move(cand);
        break;
      }
    }
    s.xPrev = s.x;
    s.x = xNext;

    // kernel block
    const VectorX<Scalar> hBase = s.h + beta * (s.h - s.hPrev);
    const VectorX<Scalar> rH = convolve(s.x, hBase) - y;
    const Scalar gHBase = Scalar(0.5) * rH.squaredNorm();
    const VectorX<Scalar> gradH = kernelGradient<Scalar>(rH, s.x, m);
    const VectorX<Scalar> gradR  // tangent projection, exact off the sphere too
        = gradH - (hBase.dot(gradH) / hBase.dot(hBase)) * hBase;
    VectorX<Scalar> hNext = s.h;
    for (Scalar step = Scalar(1); step >= kMinStep; step /= Scalar(2)) {
      const VectorX<Scalar> pre = hBase - step * gradR;
      const Scalar norm = pre.norm();
      if (norm < Scalar(1e-14)) continue;  // retraction would collapse
      const VectorX<Scalar> cand = pre / norm;
      const Scalar gCand = Scalar(0.5) * (convolve(s.x, cand) - y).squaredNorm();
      bool accept;
      if (inertial) {
        const VectorX<Scalar> diff = cand - hBase;
        accept = gCand <= gHBase + gradH.dot(diff) +
                              diff.squaredNorm() / (Scalar(2) * step);
      } else {
        accept = gCand <= gHBase;
      }
      if (accept) {
        hNext = cand;
        break;
      }
    }
    s.hPrev = s.h;
    s.h = hNext;

    s.objectives.push_back(bilinearObjective(s.x, s.h, y, s.lambda));
    ++s.iteration;

    const Scalar change = std::sqrt((s.x - s.xPrev).squaredNorm() +
                                    (s.h - s.hPrev).squaredNorm());
    const std::size_t k = s.objectives.size();
    if (beta > Scalar(0) && k >= 2 && s.objectives[k - 1] > s.objectives[k - 2]) {
      s.xPrev = s.x;  // restart: the overshoot is not worth extrapolating
      s.hPrev = s.h;
    }
    if (change < tol) return true;
  }
  return false;
}

// Sign rule shared with the lifted solver: flip the pair so the first
// nonzero entry of h is positive. Leaves the convolution unchanged.
template <typename Scalar>
FactorPair<Scalar> factorsFromIterate(const VectorX<Scalar>& x, const VectorX<Scalar>& h) {
  FactorPair<Scalar> f;
  Scalar s = Scalar(1);
  for (Index i = 0; i < h.size(); ++i) {
    if (std::abs(h(i)) > Scalar(1e-12)) {
      s = h(i) > Scalar(0) ? Scalar(1) : Scalar(-1);
      break;
    }
  }
  f.x = s * x;
  f.h = s * h;
  f.sigma = x.norm();
  f.degenerate = f.sigma == Scalar(0);
  return f;
}

template <typename Scalar>
BilinearState<Scalar> initialState(const VectorX<Scalar>& y, Index m, Scalar lambda) {
  BilinearState<Scalar> s;
  s.h = initialKernel(y, m);
  s.x = VectorX<Scalar>::Zero(y.size());
  s.xPrev = s.x;
  s.hPrev = s.h;
  s.lambda = lambda > Scalar(0) ? lambda : defaultLambda(y, s.h);
  return s;
}

template <typename Scalar>
BilinearResult<Scalar> runAlternating(const VectorX<Scalar>& y, Index m,
                                      const BilinearConfig<Scalar>& cfg, Scalar beta) {
  if (m < 1 || m > y.size()) {
    throw std::invalid_argument("bilinear solver: kernel length must be in [1, N]");
  }
  BilinearResult<Scalar> result;
  result.state = initialState(y, m, cfg.lambda);
  result.converged =
      descendInPlace(result.state, y, beta, cfg.maxIters, cfg.tol);
  result.factors = factorsFromIterate(result.state.x, result.state.h);
  return result;
}

}  // namespace detail

/// Alternating descent: proximal-gradient x block, Riemannian-descent h
/// block, backtracking on both. Monotone in the objective.
template <typename Scalar>
BilinearResult<Scalar> runAdm(const VectorX<Scalar>& y, Index kernelLen,
                              const BilinearConfig<Scalar>& cfg = {}) {
  return detail::runAlternating(y, kernelLen, cfg, Scalar(0));
}

/// Inertial variant: both blocks extrapolate by cfg.momentum before
/// stepping. With momentum zero this is exactly runAdm.
template <typename Scalar>
BilinearResult<Scalar> runIadm(const VectorX<Scalar>& y, Index kernelLen,
                               const BilinearConfig<Scalar>& cfg = {}) {
  if (cfg.momentum < Scalar(0) || cfg.momentum >= Scalar(1)) {
    throw std::invalid_argument("runIadm: momentum must lie in [0, 1)");
  }
  return detail::runAlternating(y, kernelLen, cfg, cfg.momentum);
}

enum class HomotopyBase { Adm, Iadm };

/// Continuation wrapper: solve at a geometrically decreasing sequence of
/// sparsity weights lambdaInit * eta^k, warm-starting every stage from the
/// previous solution, and stop after the first stage whose weight is at or
/// below lambdaFinal. Each stage runs the base solver for at most
/// innerIters iterations.
template <typename Scalar>
BilinearResult<Scalar> runHomotopy(HomotopyBase base, const VectorX<Scalar>& y,
                                   Index kernelLen, const BilinearConfig<Scalar>& cfg) {
  if (!cfg.homotopy) throw std::invalid_argument("runHomotopy: schedule missing");
  HomotopySchedule<Scalar> sched = *cfg.homotopy;
  if (!(sched.eta > Scalar(0) && sched.eta < Scalar(1))) {
    throw std::invalid_argument("runHomotopy: eta must lie in (0, 1)");
  }
  if (sched.innerIters < 1) throw std::invalid_argument("runHomotopy: innerIters < 1");
  if (kernelLen < 1 || kernelLen > y.size()) {
    throw std::invalid_argument("runHomotopy: kernel length must be in [1, N]");
  }

  const Scalar beta = base == HomotopyBase::Iadm ? cfg.momentum : Scalar(0);

  BilinearResult<Scalar> result;
  result.state = detail::initialState(y, kernelLen, cfg.lambda);
  const Scalar lambdaFinal =
      sched.lambdaFinal > Scalar(0) ? sched.lambdaFinal : result.state.lambda;
  Scalar lambda = sched.lambdaInit > Scalar(0)
                      ? sched.lambdaInit
                      : detail::defaultLambda(y, result.state.h) * Scalar(10);
  if (lambda < lambdaFinal) lambda = lambdaFinal;

  for (;;) {
    result.state.lambda = lambda;
    // restart the momentum history at each stage
    result.state.xPrev = result.state.x;
    result.state.hPrev = result.state.h;
    const int before = result.state.iteration;
    const Scalar warmObjective =
        detail::bilinearObjective(result.state.x, result.state.h, y, lambda);
    result.converged = detail::descendInPlace(result.state, y, beta,
                                              sched.innerIters, cfg.tol);
    HomotopyStage<Scalar> stage;
    stage.lambda = lambda;
    stage.iterations = result.state.iteration - before;
    stage.initialObjective = warmObjective;
    stage.finalObjective =
        detail::bilinearObjective(result.state.x, result.state.h, y, lambda);
    result.stages.push_back(stage);
    if (lambda <= lambdaFinal) break;
    lambda *= sched.eta;
  }
  result.factors = detail::factorsFromIterate(result.state.x, result.state.h);
  return result;
}

}  // namespace sasd

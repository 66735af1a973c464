#pragma once

#include <Eigen/Core>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "sasd/lifting.hpp"

namespace sasd {

template <typename Scalar>
struct RocoConfig {
  Scalar rho = Scalar(2);        // consensus penalty; 20 works better for images
  int maxIters = 1000;
  Scalar tol = Scalar(1e-6);     // stop when ||Z_next - Z||_F drops below this
  Scalar svdTol = Scalar(1e-12);
  int svdMaxIters = 1000;
};

template <typename Scalar>
struct IterationResiduals {
  Scalar primalP;  // ||Z - P||_F
  Scalar primalQ;  // ||Z - Q||_F
  Scalar data;     // ||A(Z) - y||_2
  Scalar deltaZ;   // ||Z - Z_prev||_F
};

/// Solver variables. Z is the lifted iterate, P carries the row-sparsity
/// split, Q the rank-one split; dualP/dualQ/dualY are the scaled multipliers
/// of the two consensus constraints and the data constraint.
template <typename Scalar>
struct AdmmState {
  MatrixX<Scalar> Z, P, Q, dualP, dualQ;
  VectorX<Scalar> dualY;
  int iteration = 0;
  std::vector<IterationResiduals<Scalar>> residuals;
  bool svdWarning = false;  // set when a rank-one projection hit its iteration cap

  static AdmmState zeros(Index n, Index m) {
    AdmmState s;
    s.Z = MatrixX<Scalar>::Zero(n, m);
    s.P = MatrixX<Scalar>::Zero(n, m);
    s.Q = MatrixX<Scalar>::Zero(n, m);
    s.dualP = MatrixX<Scalar>::Zero(n, m);
    s.dualQ = MatrixX<Scalar>::Zero(n, m);
    s.dualY = VectorX<Scalar>::Zero(n);
    return s;
  }
};

/// Rank-one factors extracted from a lifted matrix: Z ~ sigma u v^T with
/// x = s sigma u and h = s v, where s makes the first nonzero entry of h
/// positive. ||h||_2 = 1 unless degenerate (sigma = 0), in which case both
/// factors are zero.
template <typename Scalar>
struct FactorPair {
  VectorX<Scalar> x;
  VectorX<Scalar> h;
  Scalar sigma = Scalar(0);
  Scalar sigma2 = Scalar(0);   // estimated second singular value of the source matrix
  bool tieSuspected = false;   // sigma2 within 1e-6 of sigma: extraction is arbitrary
  bool degenerate = false;
};

/// Row-wise group soft threshold: the unique minimizer of
///   ||P||_{r,2,1} + (rho/2) ||PHat - P||_F^2.
/// Each row shrinks by the factor (1 - 1/(rho ||row||_2))_+, so rows with
/// norm at most 1/rho vanish exactly.
template <typename Scalar>
MatrixX<Scalar> proxRowL21(const MatrixX<Scalar>& pHat, Scalar rho) {
  if (!(rho > Scalar(0))) throw std::invalid_argument("proxRowL21: rho must be positive");
  const Index n = pHat.rows();
  const Index m = pHat.cols();
  MatrixX<Scalar> out(n, m);
  for (Index r = 0; r < n; ++r) {
    Scalar sq = Scalar(0);
    for (Index c = 0; c < m; ++c) sq += pHat(r, c) * pHat(r, c);
    const Scalar norm = std::sqrt(sq);
    if (rho * norm <= Scalar(1)) {
      out.row(r).setZero();
    } else {
      const Scalar factor = Scalar(1) - Scalar(1) / (rho * norm);
      for (Index c = 0; c < m; ++c) out(r, c) = factor * pHat(r, c);
    }
  }
  return out;
}

template <typename Scalar>
struct SingularTriple {
  Scalar sigma = Scalar(0);
  VectorX<Scalar> u, v;
  int iterations = 0;
  bool converged = true;
};

/// Leading singular triple by power iteration on the M x M Gram matrix
/// A^T A (M is small, so forming the Gram costs O(N M^2) once and each
/// sweep O(M^2)). The iteration starts from the all-ones vector, making the
/// result deterministic; should that start vector be annihilated by the
/// Gram matrix, the basis vectors are tried in order.
template <typename Scalar>
SingularTriple<Scalar> leadingTriple(const MatrixX<Scalar>& a, Scalar tol, int maxIters) {
  const Index n = a.rows();
  const Index m = a.cols();
  SingularTriple<Scalar> t;
  t.u = VectorX<Scalar>::Zero(n);
  t.v = VectorX<Scalar>::Zero(m);
  const MatrixX<Scalar> gram = a.transpose() * a;
  if (gram.norm() == Scalar(0)) return t;  // sigma stays 0

  VectorX<Scalar> v = VectorX<Scalar>::Constant(m, Scalar(1) / std::sqrt(Scalar(m)));
  Index restart = 0;
  t.converged = false;
  for (int it = 0; it < maxIters; ++it) {
    VectorX<Scalar> w = gram * v;
    const Scalar wn = w.norm();
    if (wn == Scalar(0)) {
      // start vector lies in the null space; some basis vector does not
      if (restart >= m) break;
      v = VectorX<Scalar>::Unit(m, restart++);
      continue;
    }
    w /= wn;
    const Scalar diff = (w - v).norm();
    v = w;
    t.iterations = it + 1;
    if (diff <= tol) {
      t.converged = true;
      break;
    }
  }
  const VectorX<Scalar> av = a * v;
  t.sigma = av.norm();
  t.v = v;
  t.u = t.sigma > Scalar(0) ? VectorX<Scalar>(av / t.sigma) : VectorX<Scalar>::Zero(n);
  return t;
}

template <typename Scalar>
struct Rank1Projection {
  MatrixX<Scalar> matrix;
  SingularTriple<Scalar> triple;
};

/// Best rank-<=1 Frobenius approximation sigma_1 u_1 v_1^T.
/// Non-convergence of the power iteration is reported through the triple's
/// flag; the best iterate is still returned.
template <typename Scalar>
Rank1Projection<Scalar> projectRank1(const MatrixX<Scalar>& qHat, Scalar svdTol,
                                     int svdMaxIters) {
  Rank1Projection<Scalar> p;
  p.triple = leadingTriple(qHat, svdTol, svdMaxIters);
  if (p.triple.sigma == Scalar(0)) {
    p.matrix = MatrixX<Scalar>::Zero(qHat.rows(), qHat.cols());
  } else {
    p.matrix = p.triple.sigma * p.triple.u * p.triple.v.transpose();
  }
  return p;
}

/// Exact minimizer of
///   ||Z - C1||_F^2 + ||Z - C2||_F^2 + ||convolveLifted(Z) - c3||_2^2.
/// Writing W for the cyclic lift of Z, the normal equations decouple into
/// W (2 I + 1 1^T) = cyclicLift(C1 + C2) + c3 1^T, and Sherman-Morrison
/// gives the inverse of (2 I + 1 1^T) as (I - 1 1^T / (M + 2)) / 2. Applying
/// 1 1^T as a row-sum subtraction keeps the whole update O(NM).
template <typename Scalar>
MatrixX<Scalar> solveZUpdate(const MatrixX<Scalar>& c1, const MatrixX<Scalar>& c2,
                             const VectorX<Scalar>& c3) {
  const Index n = c1.rows();
  const Index m = c1.cols();
  if (c2.rows() != n || c2.cols() != m || c3.size() != n) {
    throw std::invalid_argument("solveZUpdate: inconsistent dimensions");
  }
  MatrixX<Scalar> b = cyclicLift(MatrixX<Scalar>(c1 + c2));
  b.colwise() += c3;
  const VectorX<Scalar> rowSums = b.rowwise().sum();
  b.colwise() -= VectorX<Scalar>(rowSums / Scalar(m + 2));
  return MatrixX<Scalar>(Scalar(0.5) * cyclicUnlift(b));
}

/// One ADMM sweep: row-sparsity prox on Z + dualP, rank-one projection of
/// Z + dualQ, the closed-form Z update, then the three multiplier ascent
/// steps. Appends the iteration's residuals.
template <typename Scalar>
void admmStep(AdmmState<Scalar>& state, const VectorX<Scalar>& y,
              const RocoConfig<Scalar>& cfg) {
  state.P = proxRowL21<Scalar>(state.Z + state.dualP, cfg.rho);

  const Rank1Projection<Scalar> proj =
      projectRank1<Scalar>(state.Z + state.dualQ, cfg.svdTol, cfg.svdMaxIters);
  state.Q = proj.matrix;
  if (!proj.triple.converged) state.svdWarning = true;

  const MatrixX<Scalar> zPrev = state.Z;
  state.Z = solveZUpdate<Scalar>(state.P - state.dualP, state.Q - state.dualQ,
                                 y - state.dualY);

  state.dualP += state.Z - state.P;
  state.dualQ += state.Z - state.Q;
  const VectorX<Scalar> az = convolveLifted(state.Z);
  state.dualY += az - y;

  IterationResiduals<Scalar> res;
  res.primalP = (state.Z - state.P).norm();
  res.primalQ = (state.Z - state.Q).norm();
  res.data = (az - y).norm();
  res.deltaZ = (state.Z - zPrev).norm();
  state.residuals.push_back(res);
  ++state.iteration;
}

/// Factor extraction with the sign rule: s is the sign of the first entry
/// of v whose magnitude exceeds 1e-12 (v has unit norm, so one always
/// does). A zero matrix yields the degenerate all-zero pair.
template <typename Scalar>
FactorPair<Scalar> extractFactors(const MatrixX<Scalar>& z,
                                  Scalar svdTol = Scalar(1e-12), int svdMaxIters = 1000) {
  FactorPair<Scalar> f;
  if (z.norm() == Scalar(0)) {
    f.x = VectorX<Scalar>::Zero(z.rows());
    f.h = VectorX<Scalar>::Zero(z.cols());
    f.degenerate = true;
    return f;
  }
  const SingularTriple<Scalar> t = leadingTriple(z, svdTol, svdMaxIters);
  Scalar s = Scalar(1);
  for (Index i = 0; i < t.v.size(); ++i) {
    if (std::abs(t.v(i)) > Scalar(1e-12)) {
      s = t.v(i) > Scalar(0) ? Scalar(1) : Scalar(-1);
      break;
    }
  }
  f.x = s * t.sigma * t.u;
  f.h = s * t.v;
  f.sigma = t.sigma;
  // a near-tie makes the extracted direction arbitrary; report it
  const MatrixX<Scalar> deflated = z - t.sigma * t.u * t.v.transpose();
  f.sigma2 = leadingTriple(deflated, svdTol, svdMaxIters).sigma;
  f.tieSuspected = f.sigma2 >= f.sigma * (Scalar(1) - Scalar(1e-6));
  return f;
}

template <typename Scalar>
struct RocoResult {
  FactorPair<Scalar> factors;
  AdmmState<Scalar> state;
  bool converged = false;
};

/// Full solve from the all-zeros state: ADMM sweeps until the Z iterate
/// stalls below cfg.tol in Frobenius norm or maxIters is reached (the
/// result is returned either way, with converged reporting which).
template <typename Scalar>
RocoResult<Scalar> runRoco(const VectorX<Scalar>& y, Index kernelLen,
                           const RocoConfig<Scalar>& cfg = {}) {
  const Index n = y.size();
  if (kernelLen < 1 || kernelLen > n) {
    throw std::invalid_argument("runRoco: kernel length must be in [1, N]");
  }
  RocoResult<Scalar> result;
  result.state = AdmmState<Scalar>::zeros(n, kernelLen);
  for (int it = 0; it < cfg.maxIters; ++it) {
    admmStep(result.state, y, cfg);
    if (result.state.residuals.back().deltaZ < cfg.tol) {
      result.converged = true;
      break;
    }
  }
  result.factors = extractFactors(result.state.Z, cfg.svdTol, cfg.svdMaxIters);
  return result;
}

}  // namespace sasd

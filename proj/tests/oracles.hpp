// Independently coded reference implementations the production code is
// checked against. Everything here favors the obvious formula over speed.
#pragma once

#include <Eigen/Cholesky>
#include <Eigen/Core>
#include <Eigen/SVD>

#include <cmath>
#include <complex>
#include <limits>
#include <vector>

namespace oracle {

// Circular convolution through the transform domain: naive O(N^2) DFT,
// pointwise product, inverse DFT. The kernel is zero-padded to length N.
inline Eigen::VectorXd dftConvolve(const Eigen::VectorXd& x, const Eigen::VectorXd& h) {
  using cd = std::complex<double>;
  const Eigen::Index n = x.size();
  const double twoPi = 2.0 * 3.141592653589793238462643383279502884;

  std::vector<cd> hx(static_cast<std::size_t>(n));
  std::vector<cd> hh(static_cast<std::size_t>(n));
  for (Eigen::Index k = 0; k < n; ++k) {
    cd ax(0.0, 0.0), ah(0.0, 0.0);
    for (Eigen::Index t = 0; t < n; ++t) {
      const cd w = std::polar(1.0, -twoPi * double(k) * double(t) / double(n));
      ax += x(t) * w;
      if (t < h.size()) ah += h(t) * w;
    }
    hx[std::size_t(k)] = ax;
    hh[std::size_t(k)] = ah;
  }
  Eigen::VectorXd y(n);
  for (Eigen::Index t = 0; t < n; ++t) {
    cd acc(0.0, 0.0);
    for (Eigen::Index k = 0; k < n; ++k) {
      const cd w = std::polar(1.0, twoPi * double(k) * double(t) / double(n));
      acc += hx[std::size_t(k)] * hh[std::size_t(k)] * w;
    }
    y(t) = acc.real() / double(n);
  }
  return y;
}

// The quadratic min ||Z-C1||_F^2 + ||Z-C2||_F^2 + ||A(Z)-c3||_2^2 solved by
// assembling its dense normal equations (2I + A^T A) vec(Z) = vec(C1 + C2)
// + A^T c3, with A built entry by entry from the definition
// A(Z)[i] = sum_c Z[(i - c) mod N, c].
inline Eigen::MatrixXd denseZUpdate(const Eigen::MatrixXd& c1, const Eigen::MatrixXd& c2,
                                    const Eigen::VectorXd& c3) {
  const Eigen::Index n = c1.rows();
  const Eigen::Index m = c1.cols();
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n * m);
  for (Eigen::Index c = 0; c < m; ++c) {
    for (Eigen::Index r = 0; r < n; ++r) {
      a((r + c) % n, c * n + r) = 1.0;  // column-major vec index
    }
  }
  Eigen::MatrixXd lhs = a.transpose() * a;
  lhs.diagonal().array() += 2.0;

  const Eigen::MatrixXd sum = c1 + c2;
  Eigen::VectorXd rhs(n * m);
  for (Eigen::Index c = 0; c < m; ++c) {
    for (Eigen::Index r = 0; r < n; ++r) rhs(c * n + r) = sum(r, c);
  }
  rhs += a.transpose() * c3;

  const Eigen::VectorXd w = lhs.ldlt().solve(rhs);
  Eigen::MatrixXd z(n, m);
  for (Eigen::Index c = 0; c < m; ++c) {
    for (Eigen::Index r = 0; r < n; ++r) z(r, c) = w(c * n + r);
  }
  return z;
}

// Best rank-one Frobenius approximation through a full dense SVD.
inline Eigen::MatrixXd svdRank1(const Eigen::MatrixXd& a) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const double sigma = svd.singularValues()(0);
  if (sigma == 0.0) return Eigen::MatrixXd::Zero(a.rows(), a.cols());
  return sigma * svd.matrixU().col(0) * svd.matrixV().col(0).transpose();
}

inline double secondSingularValue(const Eigen::MatrixXd& a) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(a);
  return svd.singularValues().size() > 1 ? svd.singularValues()(1) : 0.0;
}

// Row-wise block soft threshold evaluated one row at a time with scalar
// arithmetic, accumulating the squared norm in ascending column order.
inline Eigen::MatrixXd rowProx(const Eigen::MatrixXd& pHat, double rho) {
  Eigen::MatrixXd out(pHat.rows(), pHat.cols());
  for (Eigen::Index r = 0; r < pHat.rows(); ++r) {
    double sq = 0.0;
    for (Eigen::Index c = 0; c < pHat.cols(); ++c) sq += pHat(r, c) * pHat(r, c);
    const double norm = std::sqrt(sq);
    const double scaled = rho * norm;
    if (scaled <= 1.0) {
      for (Eigen::Index c = 0; c < pHat.cols(); ++c) out(r, c) = 0.0;
    } else {
      const double factor = 1.0 - 1.0 / scaled;
      for (Eigen::Index c = 0; c < pHat.cols(); ++c) out(r, c) = factor * pHat(r, c);
    }
  }
  return out;
}

// Second, separately written enumeration of the shift/sign-quotient
// recovery error: two passes per shift instead of one fused pass.
inline double enumRecoveryError(const Eigen::VectorXd& hHat, const Eigen::VectorXd& h0,
                                Eigen::Index n) {
  Eigen::VectorXd a = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd b = Eigen::VectorXd::Zero(n);
  a.head(hHat.size()) = hHat;
  b.head(h0.size()) = h0;

  double best = std::numeric_limits<double>::infinity();
  for (int sign = 0; sign < 2; ++sign) {
    const double s = sign == 0 ? 1.0 : -1.0;
    for (Eigen::Index tau = 0; tau < n; ++tau) {
      double err2 = 0.0;
      for (Eigen::Index i = 0; i < n; ++i) {
        const double d = s * a(((i - tau) % n + n) % n) - b(i);
        err2 += d * d;
      }
      best = std::min(best, err2);
    }
  }
  return std::sqrt(best);
}

}  // namespace oracle

#pragma once

#include <Eigen/Core>

#include <stdexcept>

namespace sasd {

template <typename Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
template <typename Scalar>
using MatrixX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

using Index = Eigen::Index;

/// Circular shift of a vector. Positive tau moves entries toward larger
/// indices: out[n] = v[(n - tau) mod N]. Any integer tau is accepted and
/// reduced modulo N, so shifting by tau and then -tau is the identity.
template <typename Derived>
typename Derived::PlainObject circShift(const Eigen::MatrixBase<Derived>& v, Index tau) {
  const Index n = v.size();
  typename Derived::PlainObject out(n);
  if (n == 0) return out;
  const Index t = ((tau % n) + n) % n;
  for (Index i = 0; i < n; ++i) {
    out((i + t) % n) = v(i);
  }
  return out;
}

/// Per-column cyclic lift: column m of the result is column m of Z shifted
/// down by m positions. A pure permutation of entries, hence exactly
/// invertible and Frobenius-norm preserving.
template <typename Derived>
typename Derived::PlainObject cyclicLift(const Eigen::MatrixBase<Derived>& Z) {
  const Index n = Z.rows();
  const Index m = Z.cols();
  typename Derived::PlainObject out(n, m);
  for (Index c = 0; c < m; ++c) {
    for (Index r = 0; r < n; ++r) {
      out((r + c) % n, c) = Z(r, c);
    }
  }
  return out;
}

/// Exact inverse of cyclicLift: column m is shifted up by m positions.
template <typename Derived>
typename Derived::PlainObject cyclicUnlift(const Eigen::MatrixBase<Derived>& C) {
  const Index n = C.rows();
  const Index m = C.cols();
  typename Derived::PlainObject out(n, m);
  for (Index c = 0; c < m; ++c) {
    for (Index r = 0; r < n; ++r) {
      out(r, c) = C((r + c) % n, c);
    }
  }
  return out;
}

/// Circular convolution y[n] = sum_k h[k] x[(n - k) mod N] by the direct
/// O(NM) sum; the kernel is treated as zero-padded to length N. Accumulation
/// runs over k ascending, the same order convolveLifted uses, so the two
/// agree bitwise on Z = x h^T.
template <typename DerivedX, typename DerivedH>
typename DerivedX::PlainObject convolve(const Eigen::MatrixBase<DerivedX>& x,
                                        const Eigen::MatrixBase<DerivedH>& h) {
  using Scalar = typename DerivedX::Scalar;
  const Index n = x.size();
  const Index m = h.size();
  if (m > n) throw std::invalid_argument("convolve: kernel longer than signal");
  typename DerivedX::PlainObject y(n);
  for (Index i = 0; i < n; ++i) {
    Scalar acc = Scalar(0);
    for (Index k = 0; k < m; ++k) {
      acc += h(k) * x(((i - k) % n + n) % n);
    }
    y(i) = acc;
  }
  return y;
}

/// The convolution operator evaluated on a lifted matrix: row sums of the
/// cyclic lift, y[n] = sum_m Z[(n - m) mod N, m]. Equals convolve(x, h)
/// when Z = x h^T.
template <typename Derived>
VectorX<typename Derived::Scalar> convolveLifted(const Eigen::MatrixBase<Derived>& Z) {
  using Scalar = typename Derived::Scalar;
  const Index n = Z.rows();
  const Index m = Z.cols();
  VectorX<Scalar> y(n);
  for (Index i = 0; i < n; ++i) {
    Scalar acc = Scalar(0);
    for (Index c = 0; c < m; ++c) {
      acc += Z(((i - c) % n + n) % n, c);
    }
    y(i) = acc;
  }
  return y;
}

/// Adjoint of convolution with a fixed kernel:
/// out[m] = sum_n r[n] h[(n - m) mod N], so that
/// <convolve(x, h), r> = <x, correlate(r, h)> for every x.
template <typename DerivedR, typename DerivedH>
typename DerivedR::PlainObject correlate(const Eigen::MatrixBase<DerivedR>& r,
                                         const Eigen::MatrixBase<DerivedH>& h) {
  using Scalar = typename DerivedR::Scalar;
  const Index n = r.size();
  const Index m = h.size();
  if (m > n) throw std::invalid_argument("correlate: kernel longer than signal");
  typename DerivedR::PlainObject out(n);
  for (Index i = 0; i < n; ++i) {
    Scalar acc = Scalar(0);
    for (Index k = 0; k < m; ++k) {
      acc += h(k) * r((i + k) % n);
    }
    out(i) = acc;
  }
  return out;
}

}  // namespace sasd

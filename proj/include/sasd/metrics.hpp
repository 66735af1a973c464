#pragma once

#include <Eigen/Core>

#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>

#include "sasd/lifting.hpp"

namespace sasd {

/// PSNR values are capped here so exact recoveries stay finite.
inline constexpr double kPsnrCapDb = 200.0;

/// Recovery error quotiented by the shift/sign ambiguity group:
/// min over tau in {0..N-1} and s in {+1,-1} of
/// || s * circShift(pad(hHat), tau) - pad(h0) ||_2,
/// where both kernels are zero-padded to length N. Brute force over all
/// 2N candidates.
template <typename DerivedA, typename DerivedB>
typename DerivedA::Scalar recoveryError(const Eigen::MatrixBase<DerivedA>& hHat,
                                        const Eigen::MatrixBase<DerivedB>& h0, Index n) {
  using Scalar = typename DerivedA::Scalar;
  if (hHat.size() > n || h0.size() > n) {
    throw std::invalid_argument("recoveryError: kernels longer than padded length");
  }
  VectorX<Scalar> a = VectorX<Scalar>::Zero(n);
  VectorX<Scalar> b = VectorX<Scalar>::Zero(n);
  a.head(hHat.size()) = hHat;
  b.head(h0.size()) = h0;

  Scalar best = std::numeric_limits<Scalar>::infinity();
  for (Index tau = 0; tau < n; ++tau) {
    Scalar plus = Scalar(0);
    Scalar minus = Scalar(0);
    for (Index i = 0; i < n; ++i) {
      const Scalar shifted = a(((i - tau) % n + n) % n);
      const Scalar dp = shifted - b(i);
      const Scalar dm = shifted + b(i);
      plus += dp * dp;
      minus += dm * dm;
    }
    best = std::min(best, std::min(plus, minus));
  }
  return std::sqrt(best);
}

/// Shift-searched PSNR for vectorized square images:
/// max over tau in {0..sqrt(N)-1} of 10 log10(N / ||circShift(IHat, tau) - I0||^2),
/// capped at kPsnrCapDb (an exact match for some shift would otherwise
/// divide by zero).
template <typename DerivedA, typename DerivedB>
double psnrShifted(const Eigen::MatrixBase<DerivedA>& iHat,
                   const Eigen::MatrixBase<DerivedB>& i0) {
  const Index n = iHat.size();
  if (i0.size() != n) throw std::invalid_argument("psnrShifted: size mismatch");
  const Index side = static_cast<Index>(std::llround(std::sqrt(static_cast<double>(n))));
  if (side * side != n) throw std::invalid_argument("psnrShifted: length is not a perfect square");

  double best = -std::numeric_limits<double>::infinity();
  for (Index tau = 0; tau < side; ++tau) {
    double err2 = 0.0;
    for (Index i = 0; i < n; ++i) {
      const double d = static_cast<double>(iHat(((i - tau) % n + n) % n)) -
                       static_cast<double>(i0(i));
      err2 += d * d;
    }
    if (err2 == 0.0) return kPsnrCapDb;
    best = std::max(best, 10.0 * std::log10(static_cast<double>(n) / err2));
  }
  return std::min(best, kPsnrCapDb);
}

/// A trial succeeds when its recovery error is at or below the threshold.
inline bool isSuccess(double eRec, double eThr) {
  if (eThr <= 0.0) throw std::invalid_argument("isSuccess: threshold must be positive");
  return eRec <= eThr;
}

/// One sweep trial outcome; serialized by writeTrialCsv.
struct TrialRecord {
  std::string method;
  int n = 0;
  int m = 0;
  double theta = 0.0;
  std::uint64_t seed = 0;
  double eRec = 0.0;
  bool success = false;
  int iterations = 0;
  double wallSeconds = 0.0;
};

}  // namespace sasd

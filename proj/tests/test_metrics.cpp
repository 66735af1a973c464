#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <Eigen/Core>

#include <cmath>

#include "oracles.hpp"
#include "sasd/lifting.hpp"
#include "sasd/metrics.hpp"
#include "sasd/random.hpp"

using Eigen::VectorXd;

namespace {

VectorXd randomVector(Eigen::Index n, std::uint64_t seed) {
  sasd::Rng rng(seed);
  VectorXd v(n);
  for (Eigen::Index i = 0; i < n; ++i) v(i) = rng.normal();
  return v;
}

VectorXd pad(const VectorXd& v, Eigen::Index n) {
  VectorXd out = VectorXd::Zero(n);
  out.head(v.size()) = v;
  return out;
}

}  // namespace

TEST_CASE("recoveryError vanishes on the identity and on transformed copies") {
  const VectorXd h = randomVector(6, 1);
  CHECK(sasd::recoveryError(h, h, 16) == 0.0);

  const VectorXd moved = sasd::circShift(pad(h, 16), 3);
  CHECK(sasd::recoveryError(VectorXd(-moved), h, 16) < 1e-12);
}

TEST_CASE("recoveryError is invariant over the whole shift/sign group") {
  const Eigen::Index n = 32;
  const VectorXd h = randomVector(7, 2);
  const VectorXd padded = pad(h, n);
  for (Eigen::Index tau = 0; tau < n; ++tau) {
    for (double s : {1.0, -1.0}) {
      const VectorXd candidate = s * sasd::circShift(padded, tau);
      CHECK(sasd::recoveryError(candidate, h, n) < 1e-12);
    }
  }
}

TEST_CASE("recoveryError is symmetric under joint transformation") {
  const Eigen::Index n = 24;
  const VectorXd a = randomVector(5, 3);
  const VectorXd b = randomVector(5, 4);
  const double base = sasd::recoveryError(a, b, n);
  for (Eigen::Index tau : {1, 7, 13}) {
    for (double s : {1.0, -1.0}) {
      const VectorXd ta = s * sasd::circShift(pad(a, n), tau);
      const VectorXd tb = s * sasd::circShift(pad(b, n), tau);
      CHECK(sasd::recoveryError(ta, tb, n) == doctest::Approx(base).epsilon(1e-10));
    }
  }
}

TEST_CASE("recoveryError equals the independent enumeration oracle") {
  for (std::uint64_t seed = 1; seed <= 50; ++seed) {
    const Eigen::Index n = 16;
    const VectorXd a = randomVector(1 + Eigen::Index(seed % 16), 2 * seed);
    const VectorXd b = randomVector(1 + Eigen::Index((3 * seed) % 16), 2 * seed + 1);
    CHECK(sasd::recoveryError(a, b, n) == oracle::enumRecoveryError(a, b, n));
  }
  CHECK_THROWS_AS(sasd::recoveryError(randomVector(8, 1), randomVector(3, 2), 4),
                  std::invalid_argument);
}

TEST_CASE("psnrShifted caps exact matches") {
  const VectorXd img = randomVector(64, 5);  // 8x8
  CHECK(sasd::psnrShifted(img, img) == sasd::kPsnrCapDb);

  // recoveries advanced by an in-range shift still hit the cap
  for (Eigen::Index k = 0; k < 8; ++k) {
    CHECK(sasd::psnrShifted(sasd::circShift(img, -k), img) == sasd::kPsnrCapDb);
  }
}

TEST_CASE("psnrShifted matches the formula on a flat perturbation") {
  const Eigen::Index n = 100;  // 10x10
  const VectorXd img = randomVector(n, 6);
  // error energy N/100 with no better shift: 10 log10(100) = 20 dB
  const VectorXd noisy = img + VectorXd::Constant(n, 0.1);
  CHECK(sasd::psnrShifted(noisy, img) == doctest::Approx(20.0).epsilon(1e-9));
}

TEST_CASE("psnrShifted rejects non-square lengths") {
  CHECK_THROWS_AS(sasd::psnrShifted(randomVector(12, 7), randomVector(12, 8)),
                  std::invalid_argument);
  CHECK_THROWS_AS(sasd::psnrShifted(randomVector(16, 7), randomVector(9, 8)),
                  std::invalid_argument);
}

TEST_CASE("success classification is inclusive at the threshold") {
  CHECK(sasd::isSuccess(0.005, 0.01));
  CHECK(sasd::isSuccess(0.01, 0.01));
  CHECK_FALSE(sasd::isSuccess(0.02, 0.01));
  CHECK_THROWS_AS(sasd::isSuccess(0.1, 0.0), std::invalid_argument);
}

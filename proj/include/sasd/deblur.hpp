#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sasd/idx.hpp"
#include "sasd/methods.hpp"

namespace sasd {

/// Image deblurring experiment: vectorize each selected image row-major,
/// blur it with a seeded unit-norm kernel by circular convolution, run each
/// solver, and score the recovered image with the shift-searched PSNR.
struct DeblurOptions {
  std::vector<int> digits;   // pick the first image carrying each label
  std::vector<int> indices;  // alternative: direct image indices
  int kernelLen = 9;
  std::uint64_t kernelSeed = 7;
  std::vector<std::string> methods = {"roco"};
  SolverOptions solver;
  std::string outDir;          // empty: no image/table files written
  bool recordWalltime = true;  // runtimes go to a separate non-deterministic file
};

struct DeblurRecord {
  std::string method;
  int imageIndex = 0;
  int label = -1;  // -1 when the image set carries no labels
  double psnrDb = 0;
  int iterations = 0;
  bool converged = false;
  double wallSeconds = 0;
};

struct DeblurReport {
  std::vector<DeblurRecord> rows;
};

/// Select image indices: explicit indices win; otherwise the first
/// occurrence of each requested digit label (requires labels). Throws when
/// a digit is absent or labels are missing.
std::vector<int> selectImages(const ImageSet& set, const DeblurOptions& opts);

/// Run the experiment on an in-memory image set. When outDir is non-empty,
/// writes per-image PGMs (truth, blurred, one recovered per method), a
/// deterministic psnr_table.csv, and runtimes.csv kept separate so wall
/// times never perturb byte-stable outputs.
DeblurReport runDeblur(const ImageSet& set, const DeblurOptions& opts);

}  // namespace sasd

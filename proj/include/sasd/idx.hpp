#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <string>
#include <vector>

namespace sasd {

/// A stack of same-sized grayscale images with intensities in [0, 1].
struct ImageSet {
  std::vector<Eigen::MatrixXd> images;  // each rows x cols, row-major origin top-left
  std::vector<int> labels;              // empty when no label file was read
  int rows = 0;
  int cols = 0;
};

/// Parse a big-endian IDX3 unsigned-byte image file (magic 0x00000803).
/// Pixel bytes are divided by 255 so intensities land in [0, 1].
/// Throws std::runtime_error naming the byte offset on a bad magic or a
/// truncated payload.
ImageSet readIdxImages(const std::string& path);

/// Parse a big-endian IDX1 unsigned-byte label file (magic 0x00000801).
std::vector<int> readIdxLabels(const std::string& path);

/// Attach labels to an image set; sizes must agree.
void attachLabels(ImageSet& set, std::vector<int> labels);

}  // namespace sasd

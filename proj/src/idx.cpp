#include "sasd/idx.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace sasd {

namespace {

std::uint32_t readBigEndian32(std::istream& in, const std::string& path,
                              std::size_t offset) {
  unsigned char b[4];
  if (!in.read(reinterpret_cast<char*>(b), 4)) {
    throw std::runtime_error(path + ": truncated header at byte offset " +
                             std::to_string(offset));
  }
  return (std::uint32_t(b[0]) << 24) | (std::uint32_t(b[1]) << 16) |
         (std::uint32_t(b[2]) << 8) | std::uint32_t(b[3]);
}

std::ifstream openBinary(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error(path + ": cannot open file");
  return in;
}

}  // namespace

ImageSet readIdxImages(const std::string& path) {
  std::ifstream in = openBinary(path);
  const std::uint32_t magic = readBigEndian32(in, path, 0);
  if (magic != 0x00000803u) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "0x%08x", magic);
    throw std::runtime_error(path + ": bad image magic " + buf +
                             " at byte offset 0 (want 0x00000803)");
  }
  const std::uint32_t count = readBigEndian32(in, path, 4);
  const std::uint32_t rows = readBigEndian32(in, path, 8);
  const std::uint32_t cols = readBigEndian32(in, path, 12);
  if (rows == 0 || cols == 0) {
    throw std::runtime_error(path + ": zero image dimensions in header");
  }

  ImageSet set;
  set.rows = int(rows);
  set.cols = int(cols);
  set.images.reserve(count);

  const std::size_t pixels = std::size_t(rows) * cols;
  std::vector<unsigned char> buf(pixels);
  for (std::uint32_t i = 0; i < count; ++i) {
    if (!in.read(reinterpret_cast<char*>(buf.data()), std::streamsize(pixels))) {
      const std::size_t offset = 16 + std::size_t(i) * pixels +
                                 std::size_t(in.gcount());
      throw std::runtime_error(path + ": truncated pixel data at byte offset " +
                               std::to_string(offset) + " (image " +
                               std::to_string(i) + " of " + std::to_string(count) +
                               ")");
    }
    Eigen::MatrixXd img(rows, cols);
    for (std::uint32_t r = 0; r < rows; ++r) {
      for (std::uint32_t c = 0; c < cols; ++c) {
        img(r, c) = double(buf[std::size_t(r) * cols + c]) / 255.0;
      }
    }
    set.images.push_back(std::move(img));
  }
  return set;
}

std::vector<int> readIdxLabels(const std::string& path) {
  std::ifstream in = openBinary(path);
  const std::uint32_t magic = readBigEndian32(in, path, 0);
  if (magic != 0x00000801u) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "0x%08x", magic);
    throw std::runtime_error(path + ": bad label magic " + buf +
                             " at byte offset 0 (want 0x00000801)");
  }
  const std::uint32_t count = readBigEndian32(in, path, 4);
  std::vector<unsigned char> raw(count);
  if (count > 0 &&
      !in.read(reinterpret_cast<char*>(raw.data()), std::streamsize(count))) {
    throw std::runtime_error(path + ": truncated label data at byte offset " +
                             std::to_string(8 + std::size_t(in.gcount())));
  }
  return std::vector<int>(raw.begin(), raw.end());
}

void attachLabels(ImageSet& set, std::vector<int> labels) {
  if (labels.size() != set.images.size()) {
    throw std::runtime_error("label count " + std::to_string(labels.size()) +
                             " does not match image count " +
                             std::to_string(set.images.size()));
  }
  set.labels = std::move(labels);
}

}  // namespace sasd

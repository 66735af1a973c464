#include "sasd/serialize.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace sasd {

namespace {

constexpr char kCsvHeader[] = "method,N,M,theta,seed,e_rec,success,iterations,wall_seconds";

std::ofstream openOut(const std::string& path, std::ios::openmode mode = {}) {
  std::ofstream out(path, mode);
  if (!out) throw std::runtime_error(path + ": cannot open for writing");
  return out;
}

std::ifstream openIn(const std::string& path, std::ios::openmode mode = {}) {
  std::ifstream in(path, mode);
  if (!in) throw std::runtime_error(path + ": cannot open for reading");
  return in;
}

double parseDouble(const std::string& field, const std::string& path) {
  char* end = nullptr;
  const double v = std::strtod(field.c_str(), &end);
  if (end == field.c_str()) {
    throw std::runtime_error(path + ": cannot parse number from '" + field + "'");
  }
  return v;
}

std::vector<std::string> splitCsvLine(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      fields.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  fields.push_back(cur);
  return fields;
}

}  // namespace

std::string formatDouble(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void writeTrialCsv(const std::vector<TrialRecord>& records, const std::string& path) {
  std::ofstream out = openOut(path);
  out << kCsvHeader << '\n';
  for (const TrialRecord& r : records) {
    out << r.method << ',' << r.n << ',' << r.m << ',' << formatDouble(r.theta)
        << ',' << r.seed << ',' << formatDouble(r.eRec) << ','
        << (r.success ? 1 : 0) << ',' << r.iterations << ','
        << formatDouble(r.wallSeconds) << '\n';
  }
  if (!out) throw std::runtime_error(path + ": write failed");
}

std::vector<TrialRecord> readTrialCsv(const std::string& path) {
  std::ifstream in = openIn(path);
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error(path + ": empty file");
  // tolerate a trailing \r from foreign editors
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kCsvHeader) {
    throw std::runtime_error(path + ": unexpected header '" + line + "'");
  }
  std::vector<TrialRecord> records;
  std::size_t lineNo = 1;
  while (std::getline(in, line)) {
    ++lineNo;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const std::vector<std::string> f = splitCsvLine(line);
    if (f.size() != 9) {
      throw std::runtime_error(path + ": line " + std::to_string(lineNo) +
                               " has " + std::to_string(f.size()) +
                               " fields, want 9");
    }
    TrialRecord r;
    r.method = f[0];
    r.n = int(parseDouble(f[1], path));
    r.m = int(parseDouble(f[2], path));
    r.theta = parseDouble(f[3], path);
    r.seed = std::strtoull(f[4].c_str(), nullptr, 10);
    r.eRec = parseDouble(f[5], path);
    r.success = parseDouble(f[6], path) != 0.0;
    r.iterations = int(parseDouble(f[7], path));
    r.wallSeconds = parseDouble(f[8], path);
    records.push_back(std::move(r));
  }
  return records;
}

void writeVectorText(const Eigen::VectorXd& v, const std::string& path) {
  std::ofstream out = openOut(path);
  for (Eigen::Index i = 0; i < v.size(); ++i) out << formatDouble(v(i)) << '\n';
  if (!out) throw std::runtime_error(path + ": write failed");
}

Eigen::VectorXd readVectorText(const std::string& path) {
  std::ifstream in = openIn(path);
  std::vector<double> values;
  std::string line;
  std::size_t lineNo = 0;
  while (std::getline(in, line)) {
    ++lineNo;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    // skip blank lines so trailing newlines are harmless
    std::string trimmed;
    for (char c : line) {
      if (!std::isspace(static_cast<unsigned char>(c))) trimmed += c;
    }
    if (trimmed.empty()) continue;
    char* end = nullptr;
    const double v = std::strtod(line.c_str(), &end);
    if (end == line.c_str()) {
      throw std::runtime_error(path + ": line " + std::to_string(lineNo) +
                               ": cannot parse '" + line + "'");
    }
    values.push_back(v);
  }
  Eigen::VectorXd out(Eigen::Index(values.size()));
  for (std::size_t i = 0; i < values.size(); ++i) out(Eigen::Index(i)) = values[i];
  return out;
}

void writePgm(const Eigen::MatrixXd& image, const std::string& path) {
  std::ofstream out = openOut(path, std::ios::binary);
  out << "P5\n" << image.cols() << ' ' << image.rows() << "\n255\n";
  for (Eigen::Index r = 0; r < image.rows(); ++r) {
    for (Eigen::Index c = 0; c < image.cols(); ++c) {
      double v = image(r, c);
      if (v < 0.0) v = 0.0;
      if (v > 1.0) v = 1.0;
      const int q = int(std::floor(v * 255.0 + 0.5));
      out.put(char(static_cast<unsigned char>(q)));
    }
  }
  if (!out) throw std::runtime_error(path + ": write failed");
}

Eigen::MatrixXd readPgm(const std::string& path) {
  std::ifstream in = openIn(path, std::ios::binary);
  std::string magic;
  in >> magic;
  if (magic != "P5") throw std::runtime_error(path + ": not a binary PGM (P5)");
  auto nextToken = [&]() -> long {
    // header tokens may be separated by whitespace and '#' comments
    for (;;) {
      int c = in.peek();
      if (c == '#') {
        std::string comment;
        std::getline(in, comment);
      } else if (std::isspace(c)) {
        in.get();
      } else {
        break;
      }
    }
    long v = 0;
    if (!(in >> v)) throw std::runtime_error(path + ": malformed PGM header");
    return v;
  };
  const long cols = nextToken();
  const long rows = nextToken();
  const long maxval = nextToken();
  if (cols <= 0 || rows <= 0 || maxval <= 0 || maxval > 255) {
    throw std::runtime_error(path + ": unsupported PGM dimensions or maxval");
  }
  in.get();  // the single whitespace byte after maxval
  std::vector<unsigned char> buf(std::size_t(rows) * std::size_t(cols));
  if (!in.read(reinterpret_cast<char*>(buf.data()), std::streamsize(buf.size()))) {
    throw std::runtime_error(path + ": truncated PGM pixel data");
  }
  Eigen::MatrixXd img(rows, cols);
  for (long r = 0; r < rows; ++r) {
    for (long c = 0; c < cols; ++c) {
      img(r, c) = double(buf[std::size_t(r) * std::size_t(cols) + std::size_t(c)]) /
                  double(maxval);
    }
  }
  return img;
}

}  // namespace sasd

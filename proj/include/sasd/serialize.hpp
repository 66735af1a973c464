#pragma once

#include <Eigen/Core>

#include <string>
#include <vector>

#include "sasd/metrics.hpp"  // TrialRecord

namespace sasd {

/// Shortest decimal form that round-trips a double exactly (printf %.17g).
std::string formatDouble(double v);

/// CSV with header `method,N,M,theta,seed,e_rec,success,iterations,wall_seconds`,
/// one row per record in the given order, doubles at %.17g so values
/// round-trip exactly. success is written as 0/1.
void writeTrialCsv(const std::vector<TrialRecord>& records, const std::string& path);
std::vector<TrialRecord> readTrialCsv(const std::string& path);

/// One value per line at %.17g.
void writeVectorText(const Eigen::VectorXd& v, const std::string& path);
Eigen::VectorXd readVectorText(const std::string& path);

/// Binary PGM (P5, maxval 255). Intensities are expected in [0, 1] and are
/// quantized by rounding half-up; out-of-range values are clamped.
void writePgm(const Eigen::MatrixXd& image, const std::string& path);
Eigen::MatrixXd readPgm(const std::string& path);

}  // namespace sasd

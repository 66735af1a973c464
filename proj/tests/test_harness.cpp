#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <sys/wait.h>

#include <Eigen/Core>

#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "sasd/lifting.hpp"
#include "sasd/metrics.hpp"
#include "sasd/random.hpp"
#include "sasd/serialize.hpp"

namespace fs = std::filesystem;
using Eigen::VectorXd;

namespace {

struct RunResult {
  int exitCode = -1;
  std::string out;
  std::string err;
};

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path scratchDir() {
  const fs::path dir = fs::temp_directory_path() / "sasd_harness_tests";
  fs::create_directories(dir);
  return dir;
}

RunResult runCli(const std::string& args) {
  const fs::path outLog = scratchDir() / "stdout.log";
  const fs::path errLog = scratchDir() / "stderr.log";
  const std::string cmd = std::string(SASD_BIN) + " " + args + " > " +
                          outLog.string() + " 2> " + errLog.string();
  const int status = std::system(cmd.c_str());
  RunResult r;
  r.exitCode = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.out = slurp(outLog);
  r.err = slurp(errLog);
  return r;
}

std::size_t countOccurrences(const std::string& haystack, const std::string& needle) {
  std::size_t count = 0;
  for (std::size_t pos = haystack.find(needle); pos != std::string::npos;
       pos = haystack.find(needle, pos + needle.size())) {
    ++count;
  }
  return count;
}

void pushBigEndian32(std::vector<unsigned char>& bytes, std::uint32_t v) {
  bytes.push_back(static_cast<unsigned char>((v >> 24) & 0xff));
  bytes.push_back(static_cast<unsigned char>((v >> 16) & 0xff));
  bytes.push_back(static_cast<unsigned char>((v >> 8) & 0xff));
  bytes.push_back(static_cast<unsigned char>(v & 0xff));
}

void writeBytes(const fs::path& path, const std::vector<unsigned char>& bytes) {
  std::ofstream out(path, std::ios::binary);
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
}

// the sweep's per-trial instance recipe, reproduced for end-to-end checks
struct Instance {
  VectorXd x0, h0, y;
};

Instance makeInstance(std::uint64_t baseSeed, Eigen::Index n, Eigen::Index m,
                      double theta, std::uint64_t trial) {
  const std::uint64_t seed = sasd::trialSeed(baseSeed, std::uint64_t(n), theta, trial);
  Instance inst;
  inst.x0 = sasd::bernoulliGaussian(n, theta, sasd::splitMix64(seed ^ 1));
  inst.h0 = sasd::gaussianKernel(m, sasd::splitMix64(seed ^ 2));
  inst.y = sasd::convolve(inst.x0, inst.h0);
  return inst;
}

}  // namespace

TEST_CASE("solve recovers a planted sparse instance end to end") {
  const fs::path dir = scratchDir() / "solve_ok";
  fs::create_directories(dir);
  const Instance inst = makeInstance(1, 64, 8, 0.125, 0);
  sasd::writeVectorText(inst.y, (dir / "y.txt").string());

  const RunResult r = runCli("solve --y " + (dir / "y.txt").string() +
                             " --kernel-len 8 --method roco --rho 2 --out " +
                             (dir / "out").string());
  CHECK(r.exitCode == 0);
  CHECK(r.out.find("solve: method=roco") != std::string::npos);

  const VectorXd xHat = sasd::readVectorText((dir / "out" / "x.txt").string());
  const VectorXd hHat = sasd::readVectorText((dir / "out" / "h.txt").string());
  REQUIRE(xHat.size() == 64);
  REQUIRE(hHat.size() == 8);
  CHECK(sasd::recoveryError(hHat, inst.h0, 64) <= 1e-2);
  // reconstruction is immune to the shift/sign ambiguity
  CHECK((sasd::convolve(xHat, hHat) - inst.y).norm() <= 1e-2 * inst.y.norm());

  nlohmann::json diag;
  std::ifstream jf(dir / "out" / "diagnostics.json");
  REQUIRE(jf.good());
  jf >> diag;
  CHECK(diag["method"] == "roco");
  CHECK(diag["iterations"].get<int>() >= 1);
  CHECK(diag["trace"].size() == diag["iterations"].get<std::size_t>());
  CHECK(diag["trace_name"] == "delta_z");
}

TEST_CASE("solve rejects bad usage with exit code 1") {
  const fs::path dir = scratchDir() / "solve_bad";
  fs::create_directories(dir);
  sasd::writeVectorText(VectorXd::Ones(16), (dir / "y.txt").string());

  const RunResult bogus = runCli("solve --y " + (dir / "y.txt").string() +
                                 " --kernel-len 4 --method bogus --out " +
                                 (dir / "out").string());
  CHECK(bogus.exitCode == 1);
  CHECK(bogus.err.find("unknown method 'bogus'") != std::string::npos);
  CHECK(bogus.err.find("roco") != std::string::npos);

  const RunResult zeroLen = runCli("solve --y " + (dir / "y.txt").string() +
                                   " --kernel-len 0 --method roco --out " +
                                   (dir / "out").string());
  CHECK(zeroLen.exitCode == 1);

  const RunResult missingFlag = runCli("solve --kernel-len 4 --method roco --out " +
                                       (dir / "out").string());
  CHECK(missingFlag.exitCode == 1);

  CHECK(runCli("--help").exitCode == 0);
}

TEST_CASE("solve reports runtime failures with exit code 2") {
  const RunResult r = runCli("solve --y /nonexistent/y.txt --kernel-len 4 --out " +
                             (scratchDir() / "never").string());
  CHECK(r.exitCode == 2);
  CHECK_FALSE(r.err.empty());
}

TEST_CASE("sweep runs are byte-identical and summarized") {
  const fs::path dir = scratchDir() / "sweep";
  fs::create_directories(dir);
  {
    std::ofstream cfg(dir / "sweep.cfg");
    cfg << "# tiny deterministic grid\n"
        << "n_values = 32\n"
        << "theta_values = 0.2\n"
        << "kernel_len = 4\n"
        << "trials = 2\n"
        << "methods = roco, adm\n"
        << "base_seed = 9\n"
        << "max_iters = 150\n"
        << "e_thr = 1e-2\n"
        << "record_walltime = false\n";
  }

  const RunResult first = runCli("sweep " + (dir / "sweep.cfg").string() + " " +
                                 (dir / "run1.csv").string());
  CHECK(first.exitCode == 0);
  const RunResult second = runCli("sweep " + (dir / "sweep.cfg").string() + " " +
                                  (dir / "run2.csv").string());
  CHECK(second.exitCode == 0);
  CHECK(slurp(dir / "run1.csv") == slurp(dir / "run2.csv"));

  const std::vector<sasd::TrialRecord> rows =
      sasd::readTrialCsv((dir / "run1.csv").string());
  REQUIRE(rows.size() == 4);  // 2 methods x 1 N x 1 theta x 2 trials
  CHECK(rows[0].method == "roco");
  CHECK(rows[1].method == "roco");
  CHECK(rows[2].method == "adm");
  CHECK(rows[3].method == "adm");
  for (const sasd::TrialRecord& row : rows) {
    CHECK(row.n == 32);
    CHECK(row.m == 4);
    CHECK(row.theta == 0.2);
    CHECK(row.wallSeconds == 0.0);
    CHECK(row.success == sasd::isSuccess(row.eRec, 1e-2));
  }
  // both methods see the same instance seeds
  CHECK(rows[0].seed == rows[2].seed);
  CHECK(rows[1].seed == rows[3].seed);

  const std::string summary = slurp(dir / "run1_summary.csv");
  CHECK(summary.find("method,N,M,theta,trials,failures,failure_rate,"
                     "mean_success_error,e_thr") == 0);
  CHECK(countOccurrences(summary, "\n") == 3);  // header + one row per cell
}

TEST_CASE("sweep rejects malformed configs with exit code 1") {
  const fs::path dir = scratchDir() / "sweep_bad";
  fs::create_directories(dir);
  {
    std::ofstream cfg(dir / "bad.cfg");
    cfg << "n_values = 32\n"
        << "theta_values = 0.2\n"
        << "bogus_key = 3\n";
  }
  const RunResult r = runCli("sweep " + (dir / "bad.cfg").string() + " " +
                             (dir / "out.csv").string());
  CHECK(r.exitCode == 1);
  CHECK(r.err.find("bogus_key") != std::string::npos);
}

TEST_CASE("heatmap shades failure-rate extremes black and white") {
  const fs::path dir = scratchDir() / "heatmap";
  fs::create_directories(dir);

  std::vector<sasd::TrialRecord> records;
  auto add = [&](const std::string& method, int n, double theta, bool success) {
    sasd::TrialRecord r;
    r.method = method;
    r.n = n;
    r.m = 4;
    r.theta = theta;
    r.eRec = success ? 1e-4 : 1.0;
    r.success = success;
    records.push_back(r);
  };
  for (const std::string method : {"roco", "adm"}) {
    add(method, 100, 0.1, true);   // failure rate 0
    add(method, 100, 0.1, true);
    add(method, 200, 0.1, false);  // failure rate 1
    add(method, 200, 0.1, false);
  }
  sasd::writeTrialCsv(records, (dir / "grid.csv").string());

  const RunResult r = runCli("heatmap " + (dir / "grid.csv").string() + " " +
                             (dir / "grid.svg").string() +
                             " --metric failure_rate");
  CHECK(r.exitCode == 0);
  const std::string svg = slurp(dir / "grid.svg");
  CHECK(svg.find("rgb(0,0,0)") != std::string::npos);
  CHECK(svg.find("rgb(255,255,255)") != std::string::npos);
  CHECK(countOccurrences(svg, "class=\"panel\"") == 2);

  const RunResult mean = runCli("heatmap " + (dir / "grid.csv").string() + " " +
                                (dir / "mean.svg").string() +
                                " --metric mean_success_error");
  CHECK(mean.exitCode == 0);

  const RunResult badMetric = runCli("heatmap " + (dir / "grid.csv").string() +
                                     " " + (dir / "bad.svg").string() +
                                     " --metric bogus");
  CHECK(badMetric.exitCode == 1);
  CHECK(badMetric.err.find("failure_rate") != std::string::npos);
}

TEST_CASE("heatmap collapses a constant grid to a single-value legend") {
  const fs::path dir = scratchDir() / "heatmap_flat";
  fs::create_directories(dir);

  std::vector<sasd::TrialRecord> records;
  for (int n : {100, 200}) {
    sasd::TrialRecord r;
    r.method = "roco";
    r.n = n;
    r.m = 4;
    r.theta = 0.1;
    r.eRec = 1e-4;
    r.success = true;
    records.push_back(r);
  }
  sasd::writeTrialCsv(records, (dir / "flat.csv").string());

  const RunResult r = runCli("heatmap " + (dir / "flat.csv").string() + " " +
                             (dir / "flat.svg").string());
  CHECK(r.exitCode == 0);
  CHECK(slurp(dir / "flat.svg").find("all cells") != std::string::npos);
}

TEST_CASE("deblur produces deterministic tables from a synthetic IDX set") {
  const fs::path dir = scratchDir() / "deblur";
  fs::create_directories(dir);

  // one 8x8 glyph, bright strokes on a dark field
  std::vector<unsigned char> img;
  pushBigEndian32(img, 0x00000803u);
  pushBigEndian32(img, 1);
  pushBigEndian32(img, 8);
  pushBigEndian32(img, 8);
  for (int r = 0; r < 8; ++r) {
    for (int c = 0; c < 8; ++c) {
      const bool stroke = (r == 1 && c >= 1 && c <= 6) || (c == 1 && r <= 4) ||
                          (r == 4 && c >= 1 && c <= 5) || (c == 6 && r >= 4) ||
                          (r == 6 && c >= 1 && c <= 6);
      img.push_back(stroke ? 230 : 10);
    }
  }
  writeBytes(dir / "glyph-images-idx3-ubyte", img);

  std::vector<unsigned char> lbl;
  pushBigEndian32(lbl, 0x00000801u);
  pushBigEndian32(lbl, 1);
  lbl.push_back(5);
  writeBytes(dir / "glyph-labels-idx1-ubyte", lbl);

  const std::string base = "deblur --mnist " +
                           (dir / "glyph-images-idx3-ubyte").string() +
                           " --labels " + (dir / "glyph-labels-idx1-ubyte").string() +
                           " --indices 0 --kernel-len 3 --method roco"
                           " --max-iters 150 --out ";
  const RunResult first = runCli(base + (dir / "run1").string());
  CHECK(first.exitCode == 0);
  const RunResult second = runCli(base + (dir / "run2").string());
  CHECK(second.exitCode == 0);

  const std::string table = slurp(dir / "run1" / "psnr_table.csv");
  CHECK(table == slurp(dir / "run2" / "psnr_table.csv"));
  CHECK(table.find("method,image_index,label,psnr_db,iterations,converged") == 0);
  CHECK(table.find("roco,0,5,") != std::string::npos);

  CHECK(fs::exists(dir / "run1" / "idx0_digit5_truth.pgm"));
  CHECK(fs::exists(dir / "run1" / "idx0_digit5_blurred.pgm"));
  CHECK(fs::exists(dir / "run1" / "idx0_digit5_recovered_roco.pgm"));
  CHECK(fs::exists(dir / "run1" / "runtimes.csv"));

  const RunResult missing = runCli(
      "deblur --mnist /nonexistent-idx3-ubyte --indices 0 --out " +
      (dir / "never").string());
  CHECK(missing.exitCode == 2);
}

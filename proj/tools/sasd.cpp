#include <cctype>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "sasd/deblur.hpp"
#include "sasd/heatmap.hpp"
#include "sasd/idx.hpp"
#include "sasd/lifting.hpp"
#include "sasd/methods.hpp"
#include "sasd/serialize.hpp"
#include "sasd/sweep.hpp"

namespace {

namespace fs = std::filesystem;

void requireKnownMethod(const std::string& method) {
  if (sasd::isMethodName(method)) return;
  std::string msg = "unknown method '" + method + "'; valid methods:";
  for (const std::string& m : sasd::methodNames()) msg += " " + m;
  throw std::invalid_argument(msg);
}

std::vector<int> parseIntCsv(const std::string& s, const std::string& flag) {
  std::vector<int> out;
  std::string cur;
  auto flush = [&]() {
    if (cur.empty()) return;
    std::size_t pos = 0;
    const int v = std::stoi(cur, &pos);
    if (pos != cur.size()) {
      throw std::invalid_argument(flag + ": cannot parse '" + cur + "'");
    }
    out.push_back(v);
    cur.clear();
  };
  for (char c : s) {
    if (c == ',') {
      flush();
    } else if (!std::isspace(static_cast<unsigned char>(c))) {
      cur += c;
    }
  }
  flush();
  return out;
}

struct SolveArgs {
  std::string yPath;
  int kernelLen = 0;
  std::string method = "roco";
  std::string outDir;
  sasd::SolverOptions solver;
};

int cmdSolve(const SolveArgs& a) {
  requireKnownMethod(a.method);
  const Eigen::VectorXd y = sasd::readVectorText(a.yPath);
  if (y.size() == 0) throw std::runtime_error(a.yPath + ": no values");

  const sasd::SolveOutcome out =
      sasd::solveByName(a.method, y, a.kernelLen, a.solver);

  fs::create_directories(a.outDir);
  sasd::writeVectorText(out.factors.x, (fs::path(a.outDir) / "x.txt").string());
  sasd::writeVectorText(out.factors.h, (fs::path(a.outDir) / "h.txt").string());

  nlohmann::json diag;
  diag["method"] = a.method;
  diag["n"] = y.size();
  diag["kernel_len"] = a.kernelLen;
  diag["iterations"] = out.iterations;
  diag["converged"] = out.converged;
  diag["degenerate"] = out.factors.degenerate;
  diag["sigma"] = out.factors.sigma;
  diag["sigma2"] = out.factors.sigma2;
  diag["tie_suspected"] = out.factors.tieSuspected;
  diag["trace_name"] = out.traceName;
  diag["trace"] = out.trace;
  std::ofstream jf(fs::path(a.outDir) / "diagnostics.json");
  if (!jf) throw std::runtime_error(a.outDir + "/diagnostics.json: cannot write");
  jf << diag.dump(2) << '\n';

  std::cout << "solve: method=" << a.method << " n=" << y.size()
            << " kernel_len=" << a.kernelLen << " iterations=" << out.iterations
            << " converged=" << (out.converged ? "yes" : "no") << '\n';
  return 0;
}

int cmdSweep(const std::string& configPath, const std::string& outCsv) {
  sasd::SweepOptions opts;
  try {
    opts = sasd::parseSweepConfig(configPath);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  const std::vector<sasd::TrialRecord> records = sasd::runSweep(opts);
  sasd::writeTrialCsv(records, outCsv);

  fs::path summaryPath(outCsv);
  summaryPath.replace_filename(summaryPath.stem().string() + "_summary" +
                               summaryPath.extension().string());
  const auto summary = sasd::summarize(records, opts.successThreshold);
  sasd::writeSummaryCsv(summary, opts.successThreshold, summaryPath.string());

  int failures = 0;
  for (const sasd::TrialRecord& r : records) failures += r.success ? 0 : 1;
  std::cout << "sweep: " << records.size() << " trials, " << failures
            << " failures; results " << outCsv << ", summary "
            << summaryPath.string() << '\n';
  return 0;
}

struct DeblurArgs {
  std::string mnistPath;
  std::string labelsPath;
  std::string digitsCsv = "5,0,9,3";
  std::string indicesCsv;
  int kernelLen = 9;
  std::uint64_t kernelSeed = 7;
  std::vector<std::string> methods;
  std::string outDir;
  sasd::SolverOptions solver;
  DeblurArgs() { solver.rho = 20.0; }  // blur recovery wants a stiffer penalty
};

std::string guessLabelPath(const std::string& imagePath) {
  std::string p = imagePath;
  const std::size_t img = p.find("images");
  if (img == std::string::npos) return {};
  p.replace(img, 6, "labels");
  const std::size_t idx3 = p.find("idx3");
  if (idx3 != std::string::npos) p.replace(idx3, 4, "idx1");
  return fs::exists(p) ? p : std::string{};
}

int cmdDeblur(DeblurArgs& a) {
  for (const std::string& m : a.methods) requireKnownMethod(m);
  if (a.methods.empty()) a.methods = {"roco"};

  sasd::ImageSet set = sasd::readIdxImages(a.mnistPath);
  std::string labelsPath = a.labelsPath;
  if (labelsPath.empty()) labelsPath = guessLabelPath(a.mnistPath);
  if (!labelsPath.empty()) {
    sasd::attachLabels(set, sasd::readIdxLabels(labelsPath));
  }

  sasd::DeblurOptions opts;
  opts.digits = parseIntCsv(a.digitsCsv, "--digits");
  opts.indices = parseIntCsv(a.indicesCsv, "--indices");
  opts.kernelLen = a.kernelLen;
  opts.kernelSeed = a.kernelSeed;
  opts.methods = a.methods;
  opts.solver = a.solver;
  opts.outDir = a.outDir;

  const sasd::DeblurReport report = sasd::runDeblur(set, opts);
  for (const sasd::DeblurRecord& r : report.rows) {
    std::cout << "deblur: method=" << r.method << " idx=" << r.imageIndex;
    if (r.label >= 0) std::cout << " digit=" << r.label;
    std::cout << " psnr_db=" << sasd::formatDouble(r.psnrDb)
              << " iterations=" << r.iterations << '\n';
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"short-and-sparse blind deconvolution toolkit"};
  app.require_subcommand(1);

  SolveArgs solveArgs;
  CLI::App* solve = app.add_subcommand(
      "solve", "recover a sparse signal and short kernel from one observation");
  solve->add_option("--y", solveArgs.yPath, "observation file, one value per line")
      ->required();
  solve->add_option("--kernel-len", solveArgs.kernelLen, "kernel length M")
      ->required();
  solve->add_option("--method", solveArgs.method,
                    "roco | adm | iadm | homotopy-adm | homotopy-iadm");
  solve->add_option("--out", solveArgs.outDir, "output directory")->required();
  solve->add_option("--rho", solveArgs.solver.rho, "ADMM penalty");
  solve->add_option("--lambda", solveArgs.solver.lambda,
                    "sparsity weight (<= 0: data-scaled default)");
  solve->add_option("--max-iters", solveArgs.solver.maxIters, "iteration cap");
  solve->add_option("--tol", solveArgs.solver.tol, "stopping tolerance");
  solve->add_option("--svd-tol", solveArgs.solver.svdTol,
                    "power-iteration tolerance");
  solve->add_option("--svd-max-iters", solveArgs.solver.svdMaxIters,
                    "power-iteration cap");
  solve->add_option("--momentum", solveArgs.solver.momentum,
                    "extrapolation weight for iadm");
  solve->add_option("--homotopy-eta", solveArgs.solver.homotopyEta,
                    "continuation decay factor");
  solve->add_option("--homotopy-inner-iters", solveArgs.solver.homotopyInnerIters,
                    "iterations per continuation stage");
  solve->add_option("--homotopy-lambda-init", solveArgs.solver.homotopyLambdaInit,
                    "starting weight (<= 0: 10x the working lambda)");
  solve->add_option("--homotopy-lambda-final", solveArgs.solver.homotopyLambdaFinal,
                    "final weight (<= 0: the working lambda)");

  std::string sweepConfig, sweepOut;
  CLI::App* sweep =
      app.add_subcommand("sweep", "run a seeded (N, theta) grid experiment");
  sweep->add_option("config", sweepConfig, "key = value config file")->required();
  sweep->add_option("out", sweepOut, "results CSV path (summary lands beside it)")
      ->required();

  DeblurArgs deblurArgs;
  deblurArgs.solver.rho = 20.0;  // image-scale penalty default
  CLI::App* deblur =
      app.add_subcommand("deblur", "blur and recover images from an IDX file");
  deblur->add_option("--mnist", deblurArgs.mnistPath, "IDX3 image file")->required();
  deblur->add_option("--labels", deblurArgs.labelsPath,
                     "IDX1 label file (default: sibling of the image file)");
  deblur->add_option("--digits", deblurArgs.digitsCsv,
                     "digit labels to pick, first occurrence each");
  deblur->add_option("--indices", deblurArgs.indicesCsv,
                     "explicit image indices (overrides --digits)");
  deblur->add_option("--kernel-len", deblurArgs.kernelLen, "blur kernel length");
  deblur->add_option("--kernel-seed", deblurArgs.kernelSeed, "blur kernel seed");
  deblur->add_option("--method", deblurArgs.methods,
                     "solver method, repeatable (default roco)");
  deblur->add_option("--out", deblurArgs.outDir, "output directory")->required();
  deblur->add_option("--rho", deblurArgs.solver.rho, "ADMM penalty");
  deblur->add_option("--lambda", deblurArgs.solver.lambda,
                     "sparsity weight (<= 0: data-scaled default)");
  deblur->add_option("--max-iters", deblurArgs.solver.maxIters, "iteration cap");
  deblur->add_option("--tol", deblurArgs.solver.tol, "stopping tolerance");

  std::string heatCsv, heatSvg, heatMetric = "failure_rate";
  CLI::App* heatmap =
      app.add_subcommand("heatmap", "render a sweep CSV as shaded SVG grids");
  heatmap->add_option("csv", heatCsv, "sweep results CSV")->required();
  heatmap->add_option("out", heatSvg, "output SVG path")->required();
  heatmap->add_option("--metric", heatMetric,
                      "failure_rate | mean_success_error");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    if (solve->parsed()) return cmdSolve(solveArgs);
    if (sweep->parsed()) return cmdSweep(sweepConfig, sweepOut);
    if (deblur->parsed()) return cmdDeblur(deblurArgs);
    if (heatmap->parsed()) {
      sasd::renderHeatmapFile(heatCsv, sasd::heatmapMetricFromName(heatMetric),
                              heatSvg);
      std::cout << "heatmap: wrote " << heatSvg << '\n';
      return 0;
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 1;
}

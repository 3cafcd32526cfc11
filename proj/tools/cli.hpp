#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "pvortex/pvortex.hpp"

namespace pvortex::cli {

enum ExitCode : int { kOk = 0, kInvalidInput = 1, kCertificationFailure = 2, kSolverFailure = 3 };

struct RunConfig {
  std::string scenario;
  std::string domain = "disk";
  double p = 2.0;
  std::string user_model = "zero";
  std::vector<double> shift{0.1, 0.0};

  double kappa1 = 0.5;
  double kappa2 = 0.5;
  double c = 0.1;
  double c1 = 0.09;
  double d1 = 0.11;
  /// 0 picks the certified index.
  int nu = 0;
  /// Empty picks nu0 * {1, 3, 9, 27} with nu0 the certified index.
  std::vector<int> nu_list;
  std::string c_grid = "0.05:0.4:8";

  int n_samples = 64;
  int n_boundary = 16;
  int n_theta = 8;
  int n_radius = 4;
  double rel_tol = 1e-10;
  double abs_tol = 1e-12;
  double orbit_tol = 1e-9;
  std::uint64_t seed = 0;

  std::filesystem::path out = ".";
};

/// Range checks that do not need a model; throws Error(InvalidArgument).
void validate(const RunConfig& config);

/// "a:b:n" into n equispaced values from a to b.
std::vector<double> parse_grid(const std::string& spec);

DomainModel make_model(const RunConfig& config);

/// Runs one scenario and writes its artifacts under config.out.
int run(const RunConfig& config, std::ostream& log);

/// Parses argv (flags override the --config file) and runs.
int main(int argc, const char* const* argv, std::ostream& log);

}  // namespace pvortex::cli

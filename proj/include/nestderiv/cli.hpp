#pragma once

#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "nestderiv/rays.hpp"
#include "nestderiv/report.hpp"

namespace nestderiv::cli {

enum class Command { exact, rays, asym, compare, invert, bernoulli, xlarge_check };

struct RunConfig {
  Command command = Command::exact;
  std::optional<std::string> fn;
  std::optional<std::filesystem::path> omega_file;

  // Numbers are kept as text and parsed once the working precision is fixed.
  std::optional<std::string> x0;
  std::optional<std::string> x;
  std::vector<std::string> n;
  int nmax = 10;
  int order = 10;
  std::optional<unsigned> precision_bits;
  bool rational = false;
  std::optional<KappaMethod> kappa;

  int grid_points = 2048;
  std::optional<std::string> window_lo;
  std::optional<std::string> window_hi;

  int upto = 20;
  bool check_identity = false;
  bool check_asymptotic = false;
  std::vector<std::string> x_ladder{"1e2", "1e3", "1e4"};

  OutputFormat format = OutputFormat::csv;
  std::optional<std::filesystem::path> out;
  bool precision_dump = false;
};

/// Parses argv (argv[0] is the program name). Throws UsageError; help requests return nullopt
/// after printing usage to `help_out`.
std::optional<RunConfig> parse_args(int argc, const char* const* argv, std::ostream& help_out);

/// Executes cfg, writing the artifact to cfg.out or `out`. Returns the exit status; errors are
/// reported as one JSON object per line on `err`.
int run_command(const RunConfig& cfg, std::ostream& out, std::ostream& err);

/// parse_args + run_command with usage errors mapped to status 2.
int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace nestderiv::cli

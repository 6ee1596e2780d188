#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "nlq/convolution.hpp"
#include "nlq/solver.hpp"
#include "nlq/structure.hpp"

namespace nlq {

/// Parse or validation failure; `line` is 0 when no single line is to blame.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(int line, const std::string& message)
      : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + message : message), line_(line) {}
  int line() const noexcept { return line_; }

 private:
  int line_;
};

/// Sectioned key = value run description:
///   [problem] preset and scalar overrides
///   [kernel]  name, radius
///   [grid]    n, margin (cutoff transition margin)
///   [solver]  tolerances, relaxation, caps, jacobian, fd_step, coercivity scales
///   [verify]  suite, samples, seed
///   [mms]     solution, meshes, p, a
///   [output]  dir
struct RunConfig {
  std::string preset = "p_laplacian_neumann";
  PresetParams params;

  std::string kernel = "gaussian";
  double kernel_radius = 0.05;

  Index n = 33;
  double margin = 0.1;

  SolveConfig solver;
  std::vector<double> coercivity_scales = {1, 2, 4, 8, 16};

  std::string suite = "all";
  int samples = 20;
  unsigned seed = 12345;

  std::string mms_solution = "cos_cos";
  std::vector<Index> mms_meshes = {9, 17, 33, 65};
  double mms_p = 2.0;
  double mms_a = 1.0;

  std::string output_dir = "out";

  /// Line on which each `section.key` was read; not part of the value.
  std::map<std::string, int> lines;

  bool operator==(const RunConfig& o) const;
  int line_of(const std::string& key) const;
};

RunConfig parse_config(std::istream& in);
RunConfig parse_config_string(const std::string& text);
RunConfig load_config(const std::string& path);
void serialize_config(std::ostream& out, const RunConfig& cfg);
std::string serialize_config_string(const RunConfig& cfg);

/// Names accepted by `preset`, including the canned counterexamples.
std::vector<std::string> config_preset_names();

/// Builds the coefficient set on `grid` and checks it against its own
/// hypothesis mode; violations are raised as ConfigError at the offending key.
CoefficientSet build_coefficients(const RunConfig& cfg, const GridSpec& grid);
Kernel build_kernel(const RunConfig& cfg, const GridSpec& grid);
ExtensionOperator build_extension(const RunConfig& cfg, const GridSpec& grid);

}  // namespace nlq

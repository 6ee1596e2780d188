#pragma once

#include <iosfwd>
#include <string>

#include "nlq/config.hpp"

namespace nlq::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 1;
inline constexpr int kExitNotConverged = 2;

/// Writes solution.csv and report.json into out_dir.
int cmd_solve(const RunConfig& cfg, const std::string& out_dir, std::ostream& log);

/// suite: extension, convolution, hypotheses, moser or all. Prints JSON verdicts.
int cmd_verify(const RunConfig& cfg, const std::string& suite, std::ostream& out, std::ostream& log);

/// Prints the convergence table as CSV; also writes mms.csv and mms.json when out_dir is set.
int cmd_mms(const RunConfig& cfg, const std::string& out_dir, std::ostream& out, std::ostream& log);

}  // namespace nlq::cli

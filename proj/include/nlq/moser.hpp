#pragma once

#include <optional>
#include <string>
#include <vector>

#include "nlq/convolution.hpp"
#include "nlq/extension.hpp"
#include "nlq/solver.hpp"
#include "nlq/structure.hpp"

namespace nlq {

/// Exponent ladder r_n = base * q^n with the L^r norms of one field.
struct MoserProbe {
  double kappa = 1.0;
  double h = 1.0;
  std::optional<double> q1;  // in (p r~, p*)
  std::optional<double> q2;  // in (p, p_*)
  double q_ratio = 2.0;
  /// True when p >= N: p* is infinite and the ladder starts at p instead.
  bool infinite_critical = false;
  std::vector<double> ladder;
  std::vector<double> norms;

  double sup() const;
};

/// Nodal u * min(u, h)^(kappa p). kappa = 0 returns u unchanged.
/// Throws DomainError when u has negative values and kappa p is fractional.
DiscreteField moser_test_function(const DiscreteField& u, double kappa, double h, double p);

struct EnergyTerms {
  double gradient = 0;          // int |grad u|^p u_h^(kappa p)
  double gradient_below = 0;    // same over {u <= h}
  double critical = 0;          // (kappa p + 1)(a5 + a6) int u^p* u_h^(kappa p)
  double boundary = 0;          // (c1 + c2) int_bd u^p_* u_h^(kappa p) + c2 |bd|
  double constant = 0;          // (1 + kappa p) a6 |Omega|
  double forcing = 0;           // ||f||_r' (|Omega|^(1/r) + ...)
  double source_level = 0;      // b1 ||w||_p*^alpha1 (...)
  double source_slope = 0;      // b2 ||grad w||_p^alpha2 (...)
};

struct EnergyCheck {
  double lhs = 0;
  double rhs = 0;
  bool pass = false;
  double margin = 0;  // rhs (1 + tol) - lhs
  EnergyTerms terms;
};

/// Both sides of the truncated energy inequality for a nonnegative field u
/// (the positive or negative part of a solution), all integrals by the grid
/// quadrature. Hoelder constants are formed from f, the frozen data and the
/// growth constants of the set. Refuses (InvalidParameter) when the set fails
/// the H hypotheses on sampling.
EnergyCheck energy_inequality_check(const DiscreteField& u, const CoefficientSet& set, const FrozenNonlocalData& data,
                                    double kappa, double h, double tol = 0.05);

/// Runs the check on u+ and u- (each with h = half its maximum, or 1 if zero).
std::vector<EnergyCheck> energy_inequality_parts(const DiscreteField& u, const CoefficientSet& set,
                                                 const FrozenNonlocalData& data, double kappa = 1.0, double tol = 0.05);

/// Ratio p* / q1 with q1 = (p r~ + p*) / 2, or 2 when p* is infinite.
double default_ladder_ratio(const CoefficientSet& set);

/// Number of ladder steps taking the base exponent past r_max.
int ladder_steps(double base, double q_ratio, double r_max = 1e4);

/// r_n = p* q^n (or p q^n when p* is infinite) for n = 0..n_steps, with the
/// interior L^{r_n} norms of u.
MoserProbe lr_ladder(const DiscreteField& u, double p, int n, double q_ratio, int n_steps);

struct ThresholdCheck {
  double t = 0;
  double measure = 0;  // |{|u| > t}| by the lumped weights
  bool skipped = false;
  bool holds_every_r = false;
  bool limit_exceeds = false;  // largest-r norm >= t (1 - tol)
};

struct SupLimitVerdict {
  std::vector<ThresholdCheck> thresholds;
  double largest_r_norm = 0;
  double nodal_max = 0;
  bool limit_matches_max = false;  // within tol of the nodal max
  bool pass = false;
};

SupLimitVerdict sup_limit_check(const DiscreteField& u, const std::vector<double>& thresholds, const MoserProbe& probe,
                                double tol = 0.02);

struct BoundednessReport {
  MoserProbe probe;
  std::vector<double> boundary_norms;  // L^{r_n}(boundary) along the ladder
  SupLimitVerdict sup_limit;
  std::vector<EnergyCheck> energy;
  double nodal_max = 0;
  double boundary_max = 0;
  bool anomaly = false;  // largest-r norm falls short of the nodal max
  bool bounded = false;
  bool certified = false;
  std::vector<std::string> failures;
};

/// Ladder, threshold checks at {0.25, 0.5, 0.9} max|u|, boundary ladder norms
/// and the energy inequality on u+ and u-.
BoundednessReport boundedness_report(const DiscreteField& u, const CoefficientSet& set, const Kernel& rho,
                                     const ExtensionOperator& ext);

}  // namespace nlq

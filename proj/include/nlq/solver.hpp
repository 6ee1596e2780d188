#pragma once

#include <Eigen/Sparse>

#include <optional>
#include <string>
#include <vector>

#include "nlq/convolution.hpp"
#include "nlq/extension.hpp"
#include "nlq/manufactured.hpp"
#include "nlq/structure.hpp"

namespace nlq {

/// rho * E(u) and its gradient, restricted to the solution grid.
struct FrozenNonlocalData {
  DiscreteField w;
  VectorField g;

  static FrozenNonlocalData zero(const GridSpec& grid) {
    return {DiscreteField(grid), VectorField::Zero(grid.num_nodes(), 2)};
  }
};

FrozenNonlocalData freeze(const DiscreteField& u, const Kernel& rho, const ExtensionOperator& ext);

enum class JacobianMode { analytic, finite_difference };

struct SolveConfig {
  double inner_tol = 1e-10;
  double outer_tol = 1e-10;
  double relaxation = 1.0;
  int max_inner = 50;
  int max_outer = 200;
  JacobianMode jacobian = JacobianMode::analytic;
  double fd_step = 1e-7;

  void validate() const;
};

/// Discrete weak form tested against every nodal hat function:
///   R_i = sum_T |T| A(x_T, u_T, grad u|_T) . grad phi_i|_T
///       + w_i a |u_i|^(p-2) u_i - w_i B(x_i, w_i, g_i) - beta_i C(x_i, u_i)
/// with x_T, u_T the centroid values, w_i the lumped interior weights and
/// beta_i the boundary trapezoid weights.
Eigen::VectorXd residual(const DiscreteField& u, const FrozenNonlocalData& data, const CoefficientSet& set);

/// Jacobian of `residual` in u with the nonlocal data held fixed. Analytic when the
/// set carries flux derivatives and mode is analytic, element-level central
/// differences otherwise.
Eigen::SparseMatrix<double> residual_jacobian(const DiscreteField& u, const FrozenNonlocalData& data,
                                              const CoefficientSet& set, JacobianMode mode = JacobianMode::analytic,
                                              double fd_step = 1e-7);

struct LocalReport {
  bool converged = false;
  int iterations = 0;
  int regularized_steps = 0;
  std::vector<double> residual_history;
  std::string message;
};

/// Damped Newton on the frozen problem: halve the step (at most 30 times) until
/// the residual norm decreases; on failure retry with a mass-weighted shift.
/// Stops once ||R||_2 <= inner_tol.
std::pair<DiscreteField, LocalReport> local_solve(const FrozenNonlocalData& data, const CoefficientSet& set,
                                                  const DiscreteField& u0, const SolveConfig& cfg);

struct FieldNorms {
  double lp = 0, w1p = 0, linf = 0, boundary_lp = 0;
};
FieldNorms field_norms(const DiscreteField& u, double p);

struct OuterStep {
  LocalReport inner;
  double update = 0;  // ||T(u_k) - u_k||_{W1p} / ||T(u_k)||_{W1p}
  FieldNorms norms;   // of the relaxed iterate u_{k+1}
};

struct CoercivityRow {
  double scale = 0;
  double pairing = 0;  // <T(t v), t v>
  double norm = 0;     // ||t v||_{W1p}
  double ratio = 0;
};

struct SolveReport {
  bool converged = false;
  int outer_iterations = 0;
  std::vector<OuterStep> steps;
  double final_residual = 0;  // ||R(u; freeze(u))||_2 of the coupled system
  FieldNorms norms;
  std::vector<CoercivityRow> coercivity;
  DiscreteField solution = DiscreteField::constant(GridSpec::unit_square(2), 0.0);
  std::string message;
};

/// u_{k+1} = (1 - theta) u_k + theta S(freeze(u_k)) with S the local solve. Stops
/// when the relative W^{1,p} distance between S(freeze(u_k)) and u_k is at most
/// outer_tol. A set whose source ignores the nonlocal data needs one outer step.
SolveReport fixed_point_solve(const CoefficientSet& set, const Kernel& rho, const ExtensionOperator& ext,
                              const SolveConfig& cfg, const std::optional<DiscreteField>& u0 = std::nullopt);

/// <T v, v> assembled term by term (flux, absorption, source, boundary).
double duality_pairing(const CoefficientSet& set, const DiscreteField& v, const FrozenNonlocalData& data);
double duality_pairing(const CoefficientSet& set, const DiscreteField& v, const Kernel& rho, const ExtensionOperator& ext);

std::vector<CoercivityRow> coercivity_probe(const CoefficientSet& set, const DiscreteField& v, const std::vector<double>& scales,
                                            const Kernel& rho, const ExtensionOperator& ext);

struct MmsRow {
  Index n = 0;
  double h = 0;
  double l2_error = 0;
  double w1p_error = 0;
  std::optional<double> l2_order;
  std::optional<double> w1p_order;
  bool converged = false;
  int newton_iterations = 0;
};

struct MmsStudy {
  std::string solution;
  double p = 2;
  std::vector<MmsRow> rows;
  double neumann_mismatch = 0;
  std::vector<std::string> warnings;

  double min_l2_order() const;
  double min_w1p_order() const;
};

/// Solves the manufactured Neumann problem on each unit-square mesh with the
/// p-Laplacian flux and records L^2 and W^{1,p} errors against the exact field.
MmsStudy mms_study(const ManufacturedSolution& exact, const std::vector<Index>& meshes, const SolveConfig& cfg,
                   double p = 2.0, double a = 1.0);

}  // namespace nlq

#pragma once

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "nlq/grid.hpp"

namespace nlq {

using Mat2 = Eigen::Matrix2d;

/// Flux A(x, s, xi) -> R^2.
using FluxFn = std::function<Vec2(const Vec2& x, double s, const Vec2& xi)>;
using FluxXiJacobianFn = std::function<Mat2(const Vec2& x, double s, const Vec2& xi)>;
using FluxSJacobianFn = std::function<Vec2(const Vec2& x, double s, const Vec2& xi)>;
/// Source B(x, s, xi) -> R, evaluated at the nonlocal arguments.
using SourceFn = std::function<double(const Vec2& x, double s, const Vec2& xi)>;
/// Boundary flux C(x, s) -> R.
using BoundaryFn = std::function<double(const Vec2& x, double s)>;
using ScalarFieldFn = std::function<double(const Vec2& x)>;

/// Jacobian-only regularization of |xi|: (|xi|^2 + eps^2)^(1/2).
inline constexpr double kJacobianEpsilon = 1e-10;

enum class HypothesisMode { A, H };
std::string to_string(HypothesisMode mode);

struct GrowthConstants {
  double a1 = 0, a2 = 0, a3 = 0, a4 = 1, a5 = 0, a6 = 0;
  double b1 = 0, b2 = 0;
  double c1 = 0, c2 = 0;
};

/// Full structure data of the boundary value problem. Analytic derivatives are
/// optional; the solver falls back to finite differences when they are empty.
struct CoefficientSet {
  std::string name;
  double p = 2.0;
  double a = 1.0;

  FluxFn flux;
  FluxXiJacobianFn flux_dxi;
  FluxSJacobianFn flux_ds;
  SourceFn source;
  BoundaryFn boundary;
  std::function<double(const Vec2& x, double s)> boundary_ds;

  /// False when B ignores (s, xi); the nonlocal data then play no role.
  bool nonlocal = true;

  GrowthConstants k;
  double alpha1 = 0, alpha2 = 0, alpha3 = 0;
  /// Nonnegative majorant f in the B growth bound, and its tag r (f in L^{r'}).
  DiscreteField f = DiscreteField::constant(GridSpec::unit_square(2), 0.0);
  double r = 1.0;

  /// Mode under which the preset is advertised to satisfy the hypotheses.
  HypothesisMode mode = HypothesisMode::A;
};

/// Critical exponents in dimension n: (n p / (n - p), (n - 1) p / (n - p)), +inf when p >= n.
std::pair<double, double> critical_exponents(double p, int n = 2);

struct ExponentData {
  int n = 2;
  double p = 2;
  double p_star = 0;
  double p_lower_star = 0;
  double r1 = 1;       // p* / (p* - alpha1)
  double r2 = 1;       // p / (p - alpha2)
  double r_tilde = 1;  // max{r, r1, r2}
  bool r_tilde_admissible = false;  // r_tilde < p* / p
};

ExponentData exponent_data(const CoefficientSet& set);

struct Violation {
  std::string clause;
  std::string detail;
};

/// Sampled verdict. An empty violation list means "no violation found", not a proof.
struct Verdict {
  std::vector<Violation> violations;

  bool ok() const { return violations.empty(); }
  bool names(const std::string& clause) const;
  std::string summary() const;
};

/// Exponent and constant conditions. Mode A: alpha_i in [0, p - 1), r in [1, p*).
/// Mode H: alpha1 in [0, p* - p), alpha2 in [0, min{p - 1, (p/p*)(p* - p)}), r in [1, p*/p).
Verdict validate_exponent_conditions(const CoefficientSet& set, HypothesisMode mode);

struct SampleCloud {
  std::vector<Vec2> points;
  std::vector<double> levels;
  std::vector<Vec2> slopes;
};

/// x on a 5 x 5 lattice over the closed unit square, s in {0, +-1, +-10},
/// xi on circles of radius {0, 1, 10} at 8 equally spaced angles.
SampleCloud default_sample_cloud();

/// Checks every growth clause at every sample. Mode A: A1, A2 (as stated,
/// A(x,s,xi-xi').(xi-xi') > 0), A2-LL ((A(xi)-A(xi')).(xi-xi') > 0), A3, A4, A5.
/// Mode H: H1..H4. Boundary clauses use the cloud points lying on the boundary.
Verdict validate_growth(const CoefficientSet& set, HypothesisMode mode, const SampleCloud& cloud = default_sample_cloud());

struct PresetParams {
  std::optional<double> p, a, mu, q, lambda;
  std::optional<double> forcing;       // constant part f0 of B
  std::optional<double> forcing_wave;  // f1 in f1 cos(2 pi x1) cos(pi x2); 0, or 0.5 for pq_laplacian
  std::optional<double> gain_s;        // b1 in b1 tanh(s)
  std::optional<double> gain_xi;       // b2 in b2 tanh(|xi|)
  std::optional<double> alpha1, alpha2, alpha3, r;
};

/// p_laplacian_neumann, pq_laplacian, robin_p_laplacian, mms_forcing.
/// mms_forcing uses the manufactured forcing of cos(pi x1) cos(pi x2).
CoefficientSet preset(const std::string& name, const GridSpec& grid, const PresetParams& params = {});
std::vector<std::string> preset_names();

/// B(x, s, xi) = forcing(x); |forcing| is the growth majorant.
CoefficientSet mms_forcing_set(const ScalarFieldFn& forcing, const GridSpec& grid, double p = 2.0, double a = 1.0);

/// Canned sets that break exactly one growth clause: A1, A3 and A4.
std::vector<std::pair<std::string, CoefficientSet>> counterexample_sets(const GridSpec& grid);

/// |xi|^(p-2) xi with value 0 at xi = 0.
Vec2 power_flux(const Vec2& xi, double p);
/// Regularized Jacobian of power_flux.
Mat2 power_flux_jacobian(const Vec2& xi, double p);

}  // namespace nlq

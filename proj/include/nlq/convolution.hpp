#pragma once

#include <iosfwd>
#include <string>

#include "nlq/extension.hpp"
#include "nlq/grid.hpp"

namespace nlq {

/// Grid-sampled kernel on a window centred at the origin: offsets
/// (dx * hx, dy * hy) with |dx| <= half_x, |dy| <= half_y.
class Kernel {
 public:
  Kernel(double hx, double hy, Index half_x, Index half_y, Eigen::VectorXd values);

  /// Window grid, nodes numbered row-major from (-half_x, -half_y).
  const GridSpec& window() const { return window_; }
  Index half_x() const { return half_x_; }
  Index half_y() const { return half_y_; }
  double hx() const { return window_.hx(); }
  double hy() const { return window_.hy(); }
  const Eigen::VectorXd& values() const { return values_; }

  /// Sample at lattice offset (dx, dy); zero outside the window.
  double at(Index dx, Index dy) const;
  /// Riemann-sum L^1 norm hx * hy * sum |rho|.
  double mass() const { return mass_; }

  Kernel scaled(double factor) const;

 private:
  GridSpec window_;
  Index half_x_;
  Index half_y_;
  Eigen::VectorXd values_;
  double mass_;
};

enum class KernelShape { gaussian, box, bump, delta };

KernelShape parse_kernel_shape(const std::string& name);
std::string to_string(KernelShape shape);

/// Samples a preset kernel at the spacing of `field_grid`.
///   gaussian: radius is sigma, support truncated to the disc of radius 4 sigma
///   box:      constant on the square |x|_inf <= radius
///   bump:     exp(-1 / (1 - |x|^2 / radius^2)) on the disc of radius `radius`
///   delta:    single node of height 1 / (hx hy); radius ignored
/// Throws InvalidParameter when the window would not fit inside `field_grid`.
Kernel kernel_preset(KernelShape shape, double radius, const GridSpec& field_grid, bool normalize = true);

/// (rho * v)(x_i) = sum_j hx hy rho(x_i - y_j) v(y_j), with v read as zero off its grid.
DiscreteField convolve(const Kernel& rho, const DiscreteField& v);
/// Same sum evaluated only at the nodes of `output`, an aligned sub-lattice of v's grid.
DiscreteField convolve_on(const Kernel& rho, const DiscreteField& v, const GridSpec& output);
inline DiscreteField convolve(const Kernel& rho, const ExtendedField& v) { return convolve(rho, v.field); }

/// Node representative of the gradient: mean of the six lattice triangles
/// around each node. Triangles off the grid count as zero, which matches the
/// zero extension of fields that vanish on the outer node ring.
VectorField lattice_node_gradient(const DiscreteField& v);

/// rho * (lattice_node_gradient(v)), component-wise.
VectorField convolve_gradient(const Kernel& rho, const DiscreteField& v);
VectorField convolve_gradient_on(const Kernel& rho, const DiscreteField& v, const GridSpec& output);
inline VectorField convolve_gradient(const Kernel& rho, const ExtendedField& v) { return convolve_gradient(rho, v.field); }

struct InequalityCheck {
  double lhs = 0.0;
  double rhs = 0.0;
  bool pass = false;
};

/// ||rho * v||_r <= ||rho||_1 ||v||_r, with relative slack 1e-9.
InequalityCheck young_check(const Kernel& rho, const ExtendedField& v, double r);
/// ||grad(rho * v)||_p <= N ||rho||_1 ||grad v||_p with N = 2, relative slack 1e-9.
InequalityCheck gradient_bound_check(const Kernel& rho, const ExtendedField& v, double p);

/// max |G(rho * v) - rho * grad v| over nodes at least half_width + 1 nodes from
/// the grid boundary, where G is lattice_node_gradient and `exact_gradient`
/// holds the exact gradient of v sampled at the nodes.
double commutation_residual(const Kernel& rho, const DiscreteField& v, const VectorField& exact_gradient);

/// Kernel CSV: `# origin half_x half_y` followed by the grid CSV of the window.
void write_kernel_csv(std::ostream& out, const Kernel& rho);
Kernel read_kernel_csv(std::istream& in);

}  // namespace nlq

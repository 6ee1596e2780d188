#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <utility>
#include <vector>

#include "nlq/errors.hpp"

namespace nlq {

using Index = Eigen::Index;
using Vec2 = Eigen::Vector2d;

/// Per-triangle or per-node 2-vectors, one row per entity.
template <typename Scalar>
using VectorField2 = Eigen::Matrix<Scalar, Eigen::Dynamic, 2>;
using VectorField = VectorField2<double>;

struct Rect {
  double x_min = 0.0;
  double y_min = 0.0;
  double x_max = 1.0;
  double y_max = 1.0;

  double width() const { return x_max - x_min; }
  double height() const { return y_max - y_min; }
  double area() const { return width() * height(); }
  double perimeter() const { return 2.0 * (width() + height()); }
  bool operator==(const Rect&) const = default;
};

enum class Region { interior, boundary };

/// Uniform node lattice on an axis-aligned rectangle. Every cell is split
/// into two triangles along the lower-left to upper-right diagonal:
///   lower = (n00, n10, n11), upper = (n00, n11, n01).
/// Nodes are numbered row-major, node(i, j) = j * nx + i with i along x.
class GridSpec {
 public:
  GridSpec(Rect rect, Index nx, Index ny);

  static GridSpec unit_square(Index n) { return GridSpec(Rect{0.0, 0.0, 1.0, 1.0}, n, n); }

  const Rect& rect() const { return rect_; }
  Index nx() const { return nx_; }
  Index ny() const { return ny_; }
  double hx() const { return rect_.width() / static_cast<double>(nx_ - 1); }
  double hy() const { return rect_.height() / static_cast<double>(ny_ - 1); }

  Index num_nodes() const { return nx_ * ny_; }
  Index num_triangles() const { return 2 * (nx_ - 1) * (ny_ - 1); }
  double triangle_area() const { return 0.5 * hx() * hy(); }

  Index node(Index i, Index j) const { return j * nx_ + i; }
  Index node_i(Index node) const { return node % nx_; }
  Index node_j(Index node) const { return node / nx_; }
  double x(Index i) const { return rect_.x_min + static_cast<double>(i) * hx(); }
  double y(Index j) const { return rect_.y_min + static_cast<double>(j) * hy(); }
  Vec2 point(Index node) const { return {x(node_i(node)), y(node_j(node))}; }
  bool is_boundary(Index node) const;

  /// Vertex nodes of triangle t, ordered as in the class comment.
  std::array<Index, 3> triangle(Index t) const;
  Vec2 centroid(Index t) const;

  /// Gradients of the three hat functions of triangle t, in vertex order.
  std::array<Vec2, 3> hat_gradients(Index t) const;

  bool operator==(const GridSpec&) const = default;

 private:
  Rect rect_;
  Index nx_;
  Index ny_;
};

/// Nodal values of a continuous piecewise-linear function on a GridSpec.
struct DiscreteField {
  GridSpec grid;
  Eigen::VectorXd values;

  DiscreteField(GridSpec g, Eigen::VectorXd v);
  explicit DiscreteField(GridSpec g) : DiscreteField(g, Eigen::VectorXd::Zero(g.num_nodes())) {}

  static DiscreteField constant(const GridSpec& g, double c) {
    return DiscreteField(g, Eigen::VectorXd::Constant(g.num_nodes(), c));
  }
  template <typename Fn>
  static DiscreteField sample(const GridSpec& g, Fn&& fn) {
    Eigen::VectorXd v(g.num_nodes());
    for (Index k = 0; k < g.num_nodes(); ++k) v[k] = fn(g.point(k));
    return DiscreteField(g, std::move(v));
  }

  double operator[](Index node) const { return values[node]; }
};

struct BoundaryEdge {
  Index a;
  Index b;
  double length;
};

/// Trapezoidal rule on the rectangle boundary. `weights` is indexed by node
/// and is zero away from the boundary.
struct BoundaryQuadrature {
  std::vector<BoundaryEdge> edges;
  Eigen::VectorXd weights;
};

/// Vertex-average (mass-lumped) weights: w_i = sum over triangles containing i of area / 3.
Eigen::VectorXd interior_weights(const GridSpec& grid);
BoundaryQuadrature boundary_quadrature(const GridSpec& grid);

Eigen::VectorXd region_weights(const GridSpec& grid, Region region);

/// Piecewise-linear evaluation at an arbitrary point of the rectangle.
double interpolate(const DiscreteField& field, const Vec2& point);

namespace detail {

template <typename Scalar>
Scalar scaled_power_sum_root(const Eigen::VectorXd& weights, const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& abs_values,
                             double p) {
  Scalar peak = 0;
  for (Index k = 0; k < abs_values.size(); ++k)
    if (weights[k] > 0) peak = std::max(peak, abs_values[k]);
  if (!(peak > 0)) return Scalar(0);
  if (std::isinf(p)) return peak;
  Scalar sum = 0;
  for (Index k = 0; k < abs_values.size(); ++k)
    if (weights[k] > 0) sum += weights[k] * std::pow(abs_values[k] / peak, p);
  return peak * std::pow(sum, 1.0 / p);
}

inline void require_exponent(double p) {
  if (!(p >= 1.0)) throw InvalidExponent("Lebesgue exponent must be >= 1");
}

}  // namespace detail

/// (sum_k w_k |u_k|^p)^(1/p) with the interior or boundary rule; p = +inf gives the max.
template <typename Derived>
typename Derived::Scalar lp_norm(const GridSpec& grid, const Eigen::MatrixBase<Derived>& values, double p,
                                 Region region = Region::interior) {
  using Scalar = typename Derived::Scalar;
  detail::require_exponent(p);
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> abs_values = values.derived().cwiseAbs();
  return detail::scaled_power_sum_root<Scalar>(region_weights(grid, region), abs_values, p);
}

inline double lp_norm(const DiscreteField& u, double p, Region region = Region::interior) {
  return lp_norm(u.grid, u.values, p, region);
}

/// L^p norm of a per-node vector field (Euclidean magnitude per node).
template <typename Derived>
typename Derived::Scalar lp_norm_nodal_vector(const GridSpec& grid, const Eigen::MatrixBase<Derived>& field, double p) {
  using Scalar = typename Derived::Scalar;
  detail::require_exponent(p);
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> mags = field.derived().rowwise().norm();
  return detail::scaled_power_sum_root<Scalar>(region_weights(grid, Region::interior), mags, p);
}

/// Exact per-triangle gradient of the piecewise-linear reconstruction.
template <typename Derived>
VectorField2<typename Derived::Scalar> gradient(const GridSpec& grid, const Eigen::MatrixBase<Derived>& values) {
  using Scalar = typename Derived::Scalar;
  const auto& u = values.derived();
  VectorField2<Scalar> g(grid.num_triangles(), 2);
  const double hx = grid.hx();
  const double hy = grid.hy();
  for (Index j = 0; j + 1 < grid.ny(); ++j) {
    for (Index i = 0; i + 1 < grid.nx(); ++i) {
      const Scalar u00 = u[grid.node(i, j)];
      const Scalar u10 = u[grid.node(i + 1, j)];
      const Scalar u01 = u[grid.node(i, j + 1)];
      const Scalar u11 = u[grid.node(i + 1, j + 1)];
      const Index t = 2 * (j * (grid.nx() - 1) + i);
      g(t, 0) = (u10 - u00) / hx;
      g(t, 1) = (u11 - u10) / hy;
      g(t + 1, 0) = (u11 - u01) / hx;
      g(t + 1, 1) = (u01 - u00) / hy;
    }
  }
  return g;
}

inline VectorField gradient(const DiscreteField& u) { return gradient(u.grid, u.values); }

/// (integral of |grad u|^p)^(1/p); the gradient is constant per triangle.
template <typename Derived>
typename Derived::Scalar gradient_seminorm(const GridSpec& grid, const Eigen::MatrixBase<Derived>& values, double p) {
  using Scalar = typename Derived::Scalar;
  detail::require_exponent(p);
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> mags = gradient(grid, values).rowwise().norm();
  const Eigen::VectorXd w = Eigen::VectorXd::Constant(mags.size(), grid.triangle_area());
  return detail::scaled_power_sum_root<Scalar>(w, mags, p);
}

inline double gradient_seminorm(const DiscreteField& u, double p) { return gradient_seminorm(u.grid, u.values, p); }

/// Sum of the gradient seminorm and the L^p norm (not a p-th root of sums).
template <typename Derived>
typename Derived::Scalar w1p_norm(const GridSpec& grid, const Eigen::MatrixBase<Derived>& values, double p) {
  return gradient_seminorm(grid, values, p) + lp_norm(grid, values, p);
}

inline double w1p_norm(const DiscreteField& u, double p) { return w1p_norm(u.grid, u.values, p); }

inline double max_abs(const DiscreteField& u) { return u.values.size() ? u.values.cwiseAbs().maxCoeff() : 0.0; }

// Nodal field algebra. Products and powers act on nodal values.

DiscreteField truncate(const DiscreteField& u, double level);
std::pair<DiscreteField, DiscreteField> pos_neg_parts(const DiscreteField& u);

DiscreteField operator+(const DiscreteField& u, const DiscreteField& v);
DiscreteField operator-(const DiscreteField& u, const DiscreteField& v);
DiscreteField operator*(double c, const DiscreteField& u);
DiscreteField pointwise_multiply(const DiscreteField& u, const DiscreteField& v);
/// u^e nodally; throws DomainError for a negative base with non-integer e.
DiscreteField pointwise_power(const DiscreteField& u, double exponent);

void require_same_grid(const GridSpec& a, const GridSpec& b, const char* what);

}  // namespace nlq

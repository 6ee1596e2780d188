#include "nlq/grid.hpp"

#include <string>

namespace nlq {

GridSpec::GridSpec(Rect rect, Index nx, Index ny) : rect_(rect), nx_(nx), ny_(ny) {
  if (nx < 2 || ny < 2) throw InvalidParameter("grid needs at least 2 nodes per axis");
  if (!(rect.width() > 0.0) || !(rect.height() > 0.0)) throw InvalidParameter("grid rectangle must have positive extent");
}

bool GridSpec::is_boundary(Index node) const {
  const Index i = node_i(node);
  const Index j = node_j(node);
  return i == 0 || j == 0 || i == nx_ - 1 || j == ny_ - 1;
}

std::array<Index, 3> GridSpec::triangle(Index t) const {
  const Index cell = t / 2;
  const Index i = cell % (nx_ - 1);
  const Index j = cell / (nx_ - 1);
  const Index n00 = node(i, j);
  const Index n10 = node(i + 1, j);
  const Index n01 = node(i, j + 1);
  const Index n11 = node(i + 1, j + 1);
  if (t % 2 == 0) return {n00, n10, n11};
  return {n00, n11, n01};
}

Vec2 GridSpec::centroid(Index t) const {
  const auto v = triangle(t);
  return (point(v[0]) + point(v[1]) + point(v[2])) / 3.0;
}

std::array<Vec2, 3> GridSpec::hat_gradients(Index t) const {
  const double ix = 1.0 / hx();
  const double iy = 1.0 / hy();
  if (t % 2 == 0) return {Vec2(-ix, 0.0), Vec2(ix, -iy), Vec2(0.0, iy)};
  return {Vec2(0.0, -iy), Vec2(ix, 0.0), Vec2(-ix, iy)};
}

DiscreteField::DiscreteField(GridSpec g, Eigen::VectorXd v) : grid(g), values(std::move(v)) {
  if (values.size() != grid.num_nodes())
    throw InvalidParameter("field has " + std::to_string(values.size()) + " values, grid has " +
                           std::to_string(grid.num_nodes()) + " nodes");
  if (!values.allFinite()) throw InvalidParameter("field values must be finite");
}

Eigen::VectorXd interior_weights(const GridSpec& grid) {
  Eigen::VectorXd w = Eigen::VectorXd::Zero(grid.num_nodes());
  const double third = grid.triangle_area() / 3.0;
  for (Index t = 0; t < grid.num_triangles(); ++t)
    for (Index v : grid.triangle(t)) w[v] += third;
  return w;
}

BoundaryQuadrature boundary_quadrature(const GridSpec& grid) {
  BoundaryQuadrature q;
  const Index nx = grid.nx();
  const Index ny = grid.ny();
  const double hx = grid.hx();
  const double hy = grid.hy();
  q.edges.reserve(static_cast<std::size_t>(2 * (nx + ny - 2)));
  for (Index i = 0; i + 1 < nx; ++i) q.edges.push_back({grid.node(i, 0), grid.node(i + 1, 0), hx});
  for (Index j = 0; j + 1 < ny; ++j) q.edges.push_back({grid.node(nx - 1, j), grid.node(nx - 1, j + 1), hy});
  for (Index i = nx - 1; i > 0; --i) q.edges.push_back({grid.node(i, ny - 1), grid.node(i - 1, ny - 1), hx});
  for (Index j = ny - 1; j > 0; --j) q.edges.push_back({grid.node(0, j), grid.node(0, j - 1), hy});

  q.weights = Eigen::VectorXd::Zero(grid.num_nodes());
  for (const auto& e : q.edges) {
    q.weights[e.a] += 0.5 * e.length;
    q.weights[e.b] += 0.5 * e.length;
  }
  return q;
}

Eigen::VectorXd region_weights(const GridSpec& grid, Region region) {
  return region == Region::interior ? interior_weights(grid) : boundary_quadrature(grid).weights;
}

double interpolate(const DiscreteField& field, const Vec2& point) {
  const GridSpec& g = field.grid;
  const double sx = (point.x() - g.rect().x_min) / g.hx();
  const double sy = (point.y() - g.rect().y_min) / g.hy();
  const Index i = std::clamp<Index>(static_cast<Index>(std::floor(sx)), 0, g.nx() - 2);
  const Index j = std::clamp<Index>(static_cast<Index>(std::floor(sy)), 0, g.ny() - 2);
  const double s = sx - static_cast<double>(i);
  const double t = sy - static_cast<double>(j);
  const double u00 = field[g.node(i, j)];
  const double u10 = field[g.node(i + 1, j)];
  const double u01 = field[g.node(i, j + 1)];
  const double u11 = field[g.node(i + 1, j + 1)];
  if (t <= s) return u00 + s * (u10 - u00) + t * (u11 - u10);
  return u00 + s * (u11 - u01) + t * (u01 - u00);
}

void require_same_grid(const GridSpec& a, const GridSpec& b, const char* what) {
  if (!(a == b)) throw AlignmentError(std::string(what) + ": fields live on different grids");
}

DiscreteField truncate(const DiscreteField& u, double level) {
  if (!(level > 0.0)) throw InvalidParameter("truncation level must be positive");
  return DiscreteField(u.grid, u.values.cwiseMin(level));
}

std::pair<DiscreteField, DiscreteField> pos_neg_parts(const DiscreteField& u) {
  return {DiscreteField(u.grid, u.values.cwiseMax(0.0)), DiscreteField(u.grid, (-u.values).cwiseMax(0.0))};
}

DiscreteField operator+(const DiscreteField& u, const DiscreteField& v) {
  require_same_grid(u.grid, v.grid, "add");
  return DiscreteField(u.grid, u.values + v.values);
}

DiscreteField operator-(const DiscreteField& u, const DiscreteField& v) {
  require_same_grid(u.grid, v.grid, "subtract");
  return DiscreteField(u.grid, u.values - v.values);
}

DiscreteField operator*(double c, const DiscreteField& u) { return DiscreteField(u.grid, c * u.values); }

DiscreteField pointwise_multiply(const DiscreteField& u, const DiscreteField& v) {
  require_same_grid(u.grid, v.grid, "multiply");
  return DiscreteField(u.grid, u.values.cwiseProduct(v.values));
}

DiscreteField pointwise_power(const DiscreteField& u, double exponent) {
  const bool integral = std::floor(exponent) == exponent;
  Eigen::VectorXd out(u.values.size());
  for (Index k = 0; k < out.size(); ++k) {
    const double base = u.values[k];
    if (base < 0.0 && !integral)
      throw DomainError("negative base " + std::to_string(base) + " with fractional exponent at node " +
                        std::to_string(k));
    out[k] = std::pow(base, exponent);
    if (!std::isfinite(out[k])) throw DomainError("power is not finite at node " + std::to_string(k));
  }
  return DiscreteField(u.grid, std::move(out));
}

}  // namespace nlq

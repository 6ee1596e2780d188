#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <random>

#include "nlq/convolution.hpp"
#include "nlq/extension.hpp"
#include "nlq/grid.hpp"
#include "nlq/structure.hpp"

namespace nlq::oracle {

inline DiscreteField random_field(const GridSpec& grid, std::mt19937& rng, double lo = -1.0, double hi = 1.0) {
  std::uniform_real_distribution<double> dist(lo, hi);
  Eigen::VectorXd v(grid.num_nodes());
  for (Index i = 0; i < v.size(); ++i) v[i] = dist(rng);
  return DiscreteField(grid, std::move(v));
}

inline double relative_error(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  const double scale = std::max(a.cwiseAbs().maxCoeff(), b.cwiseAbs().maxCoeff());
  return scale == 0.0 ? 0.0 : (a - b).cwiseAbs().maxCoeff() / scale;
}

/// Full double sum over every (output, input) node pair, kernel read by lattice offset.
inline Eigen::VectorXd brute_force_convolution(const Kernel& rho, const DiscreteField& v) {
  const GridSpec& g = v.grid;
  Eigen::VectorXd out = Eigen::VectorXd::Zero(g.num_nodes());
  for (Index oj = 0; oj < g.ny(); ++oj)
    for (Index oi = 0; oi < g.nx(); ++oi) {
      double sum = 0.0;
      for (Index j = 0; j < g.ny(); ++j)
        for (Index i = 0; i < g.nx(); ++i) {
          const Index dx = oi - i;
          const Index dy = oj - j;
          if (std::abs(dx) > rho.half_x() || std::abs(dy) > rho.half_y()) continue;
          sum += rho.hx() * rho.hy() * rho.at(dx, dy) * v[g.node(i, j)];
        }
      out[g.node(oi, oj)] = sum;
    }
  return out;
}

/// Applies R1, R2, R3, R4 to a point of (-1, 3)^2 in that order, returning the pre-image in [0, 1]^2.
inline Vec2 reflect_point(Vec2 x) {
  // R4 is applied last to u, so its coordinate map is undone first.
  if (x.x() > 1.0) x.x() = 2.0 - x.x();  // R4
  if (x.y() > 1.0) x.y() = 2.0 - x.y();  // R3
  if (x.x() < 0.0) x.x() = -x.x();       // R2
  if (x.y() < 0.0) x.y() = -x.y();       // R1
  return x;
}

/// Dense P1 assembly for A = xi, lumped absorption a u, lumped load b and
/// boundary term -lambda u (Robin). Gradients from the triangle coordinates.
struct DenseLinearSystem {
  Eigen::MatrixXd matrix;  // K + a M + lambda Bd
  Eigen::VectorXd load;    // M b
};

inline DenseLinearSystem dense_linear_system(const GridSpec& g, double a, double lambda, const Eigen::VectorXd& b) {
  const Index n = g.num_nodes();
  Eigen::MatrixXd k = Eigen::MatrixXd::Zero(n, n);
  Eigen::VectorXd lumped = Eigen::VectorXd::Zero(n);
  auto add_triangle = [&](Index p0, Index p1, Index p2) {
    const Index idx[3] = {p0, p1, p2};
    Eigen::Matrix3d coords;
    for (int r = 0; r < 3; ++r) {
      const Vec2 x = g.point(idx[r]);
      coords.row(r) << 1.0, x.x(), x.y();
    }
    const double area = 0.5 * std::abs(coords.determinant());
    // Columns of inv(coords) hold the affine coefficients of each barycentric coordinate.
    const Eigen::Matrix3d c = coords.inverse();
    for (int r = 0; r < 3; ++r) {
      lumped[idx[r]] += area / 3.0;
      for (int s = 0; s < 3; ++s) k(idx[r], idx[s]) += area * (c(1, r) * c(1, s) + c(2, r) * c(2, s));
    }
  };
  for (Index j = 0; j + 1 < g.ny(); ++j)
    for (Index i = 0; i + 1 < g.nx(); ++i) {
      add_triangle(g.node(i, j), g.node(i + 1, j), g.node(i + 1, j + 1));
      add_triangle(g.node(i, j), g.node(i + 1, j + 1), g.node(i, j + 1));
    }
  Eigen::VectorXd boundary = Eigen::VectorXd::Zero(n);
  auto add_edge = [&](Index p, Index q) {
    const double len = (g.point(p) - g.point(q)).norm();
    boundary[p] += 0.5 * len;
    boundary[q] += 0.5 * len;
  };
  for (Index i = 0; i + 1 < g.nx(); ++i) {
    add_edge(g.node(i, 0), g.node(i + 1, 0));
    add_edge(g.node(i, g.ny() - 1), g.node(i + 1, g.ny() - 1));
  }
  for (Index j = 0; j + 1 < g.ny(); ++j) {
    add_edge(g.node(0, j), g.node(0, j + 1));
    add_edge(g.node(g.nx() - 1, j), g.node(g.nx() - 1, j + 1));
  }
  DenseLinearSystem s;
  s.matrix = k;
  s.matrix.diagonal() += a * lumped + lambda * boundary;
  s.load = lumped.cwiseProduct(b);
  return s;
}

}  // namespace nlq::oracle

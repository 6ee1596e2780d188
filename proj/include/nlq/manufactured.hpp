#pragma once

#include <functional>
#include <string>

#include "nlq/grid.hpp"

namespace nlq {

/// Closed-form field with derivatives, used to build manufactured forcings.
struct ManufacturedSolution {
  std::string name;
  std::function<double(const Vec2&)> value;
  std::function<Vec2(const Vec2&)> gradient;
  std::function<Eigen::Matrix2d(const Vec2&)> hessian;
};

/// cos(pi x1) cos(pi x2); zero normal derivative on the unit square.
ManufacturedSolution cos_cos_solution();
ManufacturedSolution constant_solution(double c);
/// sin(pi x1) cos(pi x2); nonzero normal derivative on x1 = 0 and x1 = 1.
ManufacturedSolution sin_cos_solution();
ManufacturedSolution manufactured_by_name(const std::string& name);

/// Strong form -div(|grad u|^(p-2) grad u) + a |u|^(p-2) u; requires p >= 2.
std::function<double(const Vec2&)> p_laplacian_forcing(const ManufacturedSolution& u, double p, double a);

/// max |grad u . nu| over `samples_per_side` points on each side of the unit square.
double neumann_flux_mismatch(const ManufacturedSolution& u, int samples_per_side = 65);

}  // namespace nlq

#include "nlq/manufactured.hpp"

#include <cmath>
#include <numbers>

#include "nlq/errors.hpp"

namespace nlq {

namespace {
constexpr double pi = std::numbers::pi;
}

ManufacturedSolution cos_cos_solution() {
  return {"cos_cos",
          [](const Vec2& x) { return std::cos(pi * x.x()) * std::cos(pi * x.y()); },
          [](const Vec2& x) {
            return Vec2(-pi * std::sin(pi * x.x()) * std::cos(pi * x.y()), -pi * std::cos(pi * x.x()) * std::sin(pi * x.y()));
          },
          [](const Vec2& x) {
            const double cc = std::cos(pi * x.x()) * std::cos(pi * x.y());
            const double ss = std::sin(pi * x.x()) * std::sin(pi * x.y());
            Eigen::Matrix2d h;
            h << -pi * pi * cc, pi * pi * ss, pi * pi * ss, -pi * pi * cc;
            return h;
          }};
}

ManufacturedSolution constant_solution(double c) {
  return {"constant", [c](const Vec2&) { return c; }, [](const Vec2&) { return Vec2(0.0, 0.0); },
          [](const Vec2&) { return Eigen::Matrix2d::Zero().eval(); }};
}

ManufacturedSolution sin_cos_solution() {
  return {"sin_cos",
          [](const Vec2& x) { return std::sin(pi * x.x()) * std::cos(pi * x.y()); },
          [](const Vec2& x) {
            return Vec2(pi * std::cos(pi * x.x()) * std::cos(pi * x.y()), -pi * std::sin(pi * x.x()) * std::sin(pi * x.y()));
          },
          [](const Vec2& x) {
            const double sc = std::sin(pi * x.x()) * std::cos(pi * x.y());
            const double cs = std::cos(pi * x.x()) * std::sin(pi * x.y());
            Eigen::Matrix2d h;
            h << -pi * pi * sc, -pi * pi * cs, -pi * pi * cs, -pi * pi * sc;
            return h;
          }};
}

ManufacturedSolution manufactured_by_name(const std::string& name) {
  if (name == "cos_cos") return cos_cos_solution();
  if (name == "sin_cos") return sin_cos_solution();
  if (name == "constant") return constant_solution(1.0);
  throw InvalidParameter("unknown manufactured solution '" + name + "' (expected cos_cos, sin_cos or constant)");
}

std::function<double(const Vec2&)> p_laplacian_forcing(const ManufacturedSolution& u, double p, double a) {
  if (!(p >= 2.0)) throw InvalidParameter("manufactured p-Laplacian forcing needs p >= 2");
  return [u, p, a](const Vec2& x) {
    const Vec2 g = u.gradient(x);
    const Eigen::Matrix2d h = u.hessian(x);
    const double n2 = g.squaredNorm();
    double div = 0.0;
    if (p == 2.0) {
      div = h.trace();
    } else if (n2 > 0.0) {
      div = std::pow(n2, 0.5 * (p - 2.0)) * (h.trace() + (p - 2.0) * g.dot(h * g) / n2);
    }
    const double v = u.value(x);
    return -div + a * std::pow(std::abs(v), p - 2.0) * v;
  };
}

double neumann_flux_mismatch(const ManufacturedSolution& u, int samples_per_side) {
  double worst = 0.0;
  for (int k = 0; k < samples_per_side; ++k) {
    const double t = static_cast<double>(k) / (samples_per_side - 1);
    worst = std::max(worst, std::abs(u.gradient(Vec2(0.0, t)).x()));
    worst = std::max(worst, std::abs(u.gradient(Vec2(1.0, t)).x()));
    worst = std::max(worst, std::abs(u.gradient(Vec2(t, 0.0)).y()));
    worst = std::max(worst, std::abs(u.gradient(Vec2(t, 1.0)).y()));
  }
  return worst;
}

}  // namespace nlq

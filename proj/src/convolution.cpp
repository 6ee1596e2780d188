#include "nlq/convolution.hpp"

#include <cmath>
#include <istream>
#include <numbers>
#include <ostream>
#include <sstream>

#include "nlq/field_io.hpp"

namespace nlq {

namespace {

using RowMajorMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

bool same_spacing(double a, double b) { return std::abs(a - b) <= 1e-12 * std::max(std::abs(a), std::abs(b)); }

void require_spacing(const Kernel& rho, const GridSpec& g) {
  if (!same_spacing(rho.hx(), g.hx()) || !same_spacing(rho.hy(), g.hy()))
    throw AlignmentError("kernel spacing does not match the field grid");
}

Index lattice_offset(double from, double to, double h, const char* axis) {
  const double s = (to - from) / h;
  const double r = std::round(s);
  if (std::abs(s - r) > 1e-9) throw AlignmentError(std::string("output grid is not aligned along ") + axis);
  return static_cast<Index>(r);
}

}  // namespace

Kernel::Kernel(double hx, double hy, Index half_x, Index half_y, Eigen::VectorXd values)
    : window_(Rect{-static_cast<double>(half_x) * hx, -static_cast<double>(half_y) * hy, static_cast<double>(half_x) * hx,
                   static_cast<double>(half_y) * hy},
              2 * half_x + 1, 2 * half_y + 1),
      half_x_(half_x),
      half_y_(half_y),
      values_(std::move(values)) {
  if (half_x < 1 || half_y < 1) throw InvalidParameter("kernel window half-width must be at least 1");
  if (values_.size() != window_.num_nodes()) throw InvalidParameter("kernel values do not match the window");
  if (!values_.allFinite()) throw InvalidParameter("kernel values must be finite");
  mass_ = hx * hy * values_.cwiseAbs().sum();
  if (!(mass_ > 0.0)) throw InvalidParameter("kernel mass must be positive");
}

double Kernel::at(Index dx, Index dy) const {
  if (std::abs(dx) > half_x_ || std::abs(dy) > half_y_) return 0.0;
  return values_[window_.node(dx + half_x_, dy + half_y_)];
}

Kernel Kernel::scaled(double factor) const { return Kernel(hx(), hy(), half_x_, half_y_, factor * values_); }

KernelShape parse_kernel_shape(const std::string& name) {
  if (name == "gaussian") return KernelShape::gaussian;
  if (name == "box") return KernelShape::box;
  if (name == "bump") return KernelShape::bump;
  if (name == "delta") return KernelShape::delta;
  throw InvalidParameter("unknown kernel '" + name + "' (expected gaussian, box, bump or delta)");
}

std::string to_string(KernelShape shape) {
  switch (shape) {
    case KernelShape::gaussian: return "gaussian";
    case KernelShape::box: return "box";
    case KernelShape::bump: return "bump";
    case KernelShape::delta: return "delta";
  }
  return "?";
}

Kernel kernel_preset(KernelShape shape, double radius, const GridSpec& field_grid, bool normalize) {
  const double hx = field_grid.hx();
  const double hy = field_grid.hy();
  if (shape == KernelShape::delta) {
    Eigen::VectorXd v = Eigen::VectorXd::Zero(9);
    v[4] = 1.0 / (hx * hy);
    return Kernel(hx, hy, 1, 1, std::move(v));
  }
  if (!(radius > 0.0)) throw InvalidParameter("kernel radius must be positive");

  const double support = shape == KernelShape::gaussian ? 4.0 * radius : radius;
  const Index half_x = std::max<Index>(1, static_cast<Index>(std::floor(support / hx + 1e-9)));
  const Index half_y = std::max<Index>(1, static_cast<Index>(std::floor(support / hy + 1e-9)));
  if (2 * half_x + 1 > field_grid.nx() || 2 * half_y + 1 > field_grid.ny())
    throw InvalidParameter("kernel radius exceeds the field grid window");

  const Index nx = 2 * half_x + 1;
  Eigen::VectorXd v(nx * (2 * half_y + 1));
  for (Index dy = -half_y; dy <= half_y; ++dy) {
    for (Index dx = -half_x; dx <= half_x; ++dx) {
      const double x = static_cast<double>(dx) * hx;
      const double y = static_cast<double>(dy) * hy;
      const double r2 = x * x + y * y;
      double value = 0.0;
      switch (shape) {
        case KernelShape::gaussian:
          if (r2 <= support * support)
            value = std::exp(-r2 / (2.0 * radius * radius)) / (2.0 * std::numbers::pi * radius * radius);
          break;
        case KernelShape::box:
          value = 1.0 / (4.0 * radius * radius);
          break;
        case KernelShape::bump:
          if (r2 < radius * radius) value = std::exp(-1.0 / (1.0 - r2 / (radius * radius)));
          break;
        case KernelShape::delta:
          break;
      }
      v[(dy + half_y) * nx + (dx + half_x)] = value;
    }
  }
  Kernel k(hx, hy, half_x, half_y, std::move(v));
  return normalize ? k.scaled(1.0 / k.mass()) : k;
}

DiscreteField convolve_on(const Kernel& rho, const DiscreteField& v, const GridSpec& output) {
  const GridSpec& g = v.grid;
  require_spacing(rho, g);
  if (!same_spacing(output.hx(), g.hx()) || !same_spacing(output.hy(), g.hy()))
    throw AlignmentError("output grid spacing does not match the field grid");
  const Index ox = lattice_offset(g.rect().x_min, output.rect().x_min, g.hx(), "x");
  const Index oy = lattice_offset(g.rect().y_min, output.rect().y_min, g.hy(), "y");

  const Eigen::Map<const RowMajorMatrix> in(v.values.data(), g.ny(), g.nx());
  Eigen::VectorXd out_values = Eigen::VectorXd::Zero(output.num_nodes());
  Eigen::Map<RowMajorMatrix> out(out_values.data(), output.ny(), output.nx());

  const double cell = rho.hx() * rho.hy();
  for (Index dy = -rho.half_y(); dy <= rho.half_y(); ++dy) {
    // Output row y reads input row y + oy - dy.
    const Index y0 = std::max<Index>(0, dy - oy);
    const Index y1 = std::min<Index>(output.ny(), g.ny() + dy - oy);
    if (y1 <= y0) continue;
    for (Index dx = -rho.half_x(); dx <= rho.half_x(); ++dx) {
      const double c = cell * rho.at(dx, dy);
      if (c == 0.0) continue;
      const Index x0 = std::max<Index>(0, dx - ox);
      const Index x1 = std::min<Index>(output.nx(), g.nx() + dx - ox);
      if (x1 <= x0) continue;
      out.block(y0, x0, y1 - y0, x1 - x0) += c * in.block(y0 + oy - dy, x0 + ox - dx, y1 - y0, x1 - x0);
    }
  }
  return DiscreteField(output, std::move(out_values));
}

DiscreteField convolve(const Kernel& rho, const DiscreteField& v) { return convolve_on(rho, v, v.grid); }

VectorField lattice_node_gradient(const DiscreteField& v) {
  const GridSpec& g = v.grid;
  const VectorField tri = gradient(v);
  VectorField out = VectorField::Zero(g.num_nodes(), 2);
  const Index cells_x = g.nx() - 1;
  auto add = [&](Index node, Index ci, Index cj, int which) {
    if (ci < 0 || cj < 0 || ci >= cells_x || cj >= g.ny() - 1) return;
    out.row(node) += tri.row(2 * (cj * cells_x + ci) + which);
  };
  for (Index j = 0; j < g.ny(); ++j) {
    for (Index i = 0; i < g.nx(); ++i) {
      const Index n = g.node(i, j);
      add(n, i, j, 0);          // as n00 of the lower triangle
      add(n, i, j, 1);          // as n00 of the upper triangle
      add(n, i - 1, j, 0);      // as n10
      add(n, i - 1, j - 1, 0);  // as n11
      add(n, i - 1, j - 1, 1);  // as n11
      add(n, i, j - 1, 1);      // as n01
    }
  }
  out /= 6.0;
  return out;
}

VectorField convolve_gradient_on(const Kernel& rho, const DiscreteField& v, const GridSpec& output) {
  const VectorField g = lattice_node_gradient(v);
  VectorField out(output.num_nodes(), 2);
  for (int c = 0; c < 2; ++c) out.col(c) = convolve_on(rho, DiscreteField(v.grid, g.col(c)), output).values;
  return out;
}

VectorField convolve_gradient(const Kernel& rho, const DiscreteField& v) { return convolve_gradient_on(rho, v, v.grid); }

InequalityCheck young_check(const Kernel& rho, const ExtendedField& v, double r) {
  InequalityCheck c;
  c.lhs = lp_norm(convolve(rho, v), r);
  c.rhs = rho.mass() * lp_norm(v.field, r);
  c.pass = c.lhs <= c.rhs * (1.0 + 1e-9);
  return c;
}

InequalityCheck gradient_bound_check(const Kernel& rho, const ExtendedField& v, double p) {
  constexpr double dimension = 2.0;
  InequalityCheck c;
  c.lhs = lp_norm_nodal_vector(v.grid(), convolve_gradient(rho, v), p);
  c.rhs = dimension * rho.mass() * gradient_seminorm(v.field, p);
  c.pass = c.lhs <= c.rhs * (1.0 + 1e-9);
  return c;
}

double commutation_residual(const Kernel& rho, const DiscreteField& v, const VectorField& exact_gradient) {
  const GridSpec& g = v.grid;
  if (exact_gradient.rows() != g.num_nodes()) throw InvalidParameter("exact gradient must have one row per node");
  const VectorField lhs = lattice_node_gradient(convolve(rho, v));
  VectorField rhs(g.num_nodes(), 2);
  for (int c = 0; c < 2; ++c) rhs.col(c) = convolve(rho, DiscreteField(g, exact_gradient.col(c))).values;

  const Index mx = rho.half_x() + 1;
  const Index my = rho.half_y() + 1;
  double worst = 0.0;
  for (Index j = my; j < g.ny() - my; ++j)
    for (Index i = mx; i < g.nx() - mx; ++i) {
      const Index n = g.node(i, j);
      worst = std::max(worst, (lhs.row(n) - rhs.row(n)).norm());
    }
  return worst;
}

void write_kernel_csv(std::ostream& out, const Kernel& rho) {
  out << "# origin " << rho.half_x() << ' ' << rho.half_y() << '\n';
  write_field_csv(out, DiscreteField(rho.window(), rho.values()));
}

Kernel read_kernel_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw InvalidParameter("kernel csv: missing origin header");
  std::istringstream ls(line);
  std::string hash, key;
  Index half_x = 0, half_y = 0;
  if (!(ls >> hash >> key >> half_x >> half_y) || hash != "#" || key != "origin")
    throw InvalidParameter("kernel csv: malformed origin header '" + line + "'");
  DiscreteField window = read_field_csv(in);
  if (window.grid.nx() != 2 * half_x + 1 || window.grid.ny() != 2 * half_y + 1)
    throw InvalidParameter("kernel csv: origin offset does not centre the window");
  return Kernel(window.grid.hx(), window.grid.hy(), half_x, half_y, window.values);
}

}  // namespace nlq

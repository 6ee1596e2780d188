#include "nlq/solver.hpp"

#include <Eigen/SparseLU>

#include <cmath>
#include <limits>
#include <sstream>

namespace nlq {

namespace {

double signed_power(double s, double e) { return s == 0.0 ? 0.0 : std::copysign(std::pow(std::abs(s), e), s); }

double absorption(double a, double p, double s) { return a * signed_power(s, p - 1.0); }

double absorption_ds(double a, double p, double s) {
  return a * (p - 1.0) * std::pow(s * s + kJacobianEpsilon * kJacobianEpsilon, 0.5 * (p - 2.0));
}

void require_finite(double v, const char* what, Index node) {
  if (!std::isfinite(v)) throw EvaluationError(std::string(what) + " is not finite", static_cast<long>(node));
}

void require_finite(const Vec2& v, const char* what, Index node) {
  if (!v.allFinite()) throw EvaluationError(std::string(what) + " is not finite", static_cast<long>(node));
}

double fd_step_for(double h, double scale) { return h * std::max(1.0, std::abs(scale)); }

Mat2 flux_dxi_fd(const CoefficientSet& set, const Vec2& x, double s, const Vec2& xi, double h) {
  Mat2 m;
  for (int k = 0; k < 2; ++k) {
    const double step = fd_step_for(h, xi[k]);
    Vec2 plus = xi, minus = xi;
    plus[k] += step;
    minus[k] -= step;
    m.col(k) = (set.flux(x, s, plus) - set.flux(x, s, minus)) / (2.0 * step);
  }
  return m;
}

Vec2 flux_ds_fd(const CoefficientSet& set, const Vec2& x, double s, const Vec2& xi, double h) {
  const double step = fd_step_for(h, s);
  return (set.flux(x, s + step, xi) - set.flux(x, s - step, xi)) / (2.0 * step);
}

double boundary_ds_fd(const CoefficientSet& set, const Vec2& x, double s, double h) {
  const double step = fd_step_for(h, s);
  return (set.boundary(x, s + step) - set.boundary(x, s - step)) / (2.0 * step);
}

struct TriangleState {
  std::array<Index, 3> v;
  std::array<Vec2, 3> grad_hat;
  Vec2 x;
  double s;
  Vec2 xi;
};

TriangleState triangle_state(const GridSpec& g, const Eigen::VectorXd& u, Index t) {
  TriangleState st{g.triangle(t), g.hat_gradients(t), g.centroid(t), 0.0, Vec2::Zero()};
  for (int k = 0; k < 3; ++k) {
    st.s += u[st.v[k]] / 3.0;
    st.xi += u[st.v[k]] * st.grad_hat[k];
  }
  return st;
}

void require_data_grid(const DiscreteField& u, const FrozenNonlocalData& data) {
  require_same_grid(u.grid, data.w.grid, "nonlocal data");
  if (data.g.rows() != u.grid.num_nodes()) throw InvalidParameter("nonlocal gradient must have one row per node");
}

}  // namespace

FrozenNonlocalData freeze(const DiscreteField& u, const Kernel& rho, const ExtensionOperator& ext) {
  require_same_grid(u.grid, ext.source(), "extension source");
  const ExtendedField e = ext.extend(u);
  return {convolve_on(rho, e.field, ext.source()), convolve_gradient_on(rho, e.field, ext.source())};
}

void SolveConfig::validate() const {
  if (!(inner_tol > 0.0)) throw InvalidParameter("inner_tol must be positive");
  if (!(outer_tol > 0.0)) throw InvalidParameter("outer_tol must be positive");
  if (!(relaxation > 0.0 && relaxation <= 1.0)) throw InvalidParameter("relaxation must lie in (0, 1]");
  if (max_inner < 1) throw InvalidParameter("max_inner must be at least 1");
  if (max_outer < 1) throw InvalidParameter("max_outer must be at least 1");
  if (!(fd_step > 0.0)) throw InvalidParameter("fd_step must be positive");
}

Eigen::VectorXd residual(const DiscreteField& u, const FrozenNonlocalData& data, const CoefficientSet& set) {
  require_data_grid(u, data);
  if (!set.flux) throw InvalidParameter("coefficient set has no flux");
  const GridSpec& g = u.grid;
  const double area = g.triangle_area();
  Eigen::VectorXd r = Eigen::VectorXd::Zero(g.num_nodes());

  for (Index t = 0; t < g.num_triangles(); ++t) {
    const TriangleState st = triangle_state(g, u.values, t);
    const Vec2 a = set.flux(st.x, st.s, st.xi);
    require_finite(a, "flux", st.v[0]);
    for (int k = 0; k < 3; ++k) r[st.v[k]] += area * a.dot(st.grad_hat[k]);
  }

  const Eigen::VectorXd w = interior_weights(g);
  const Eigen::VectorXd beta = boundary_quadrature(g).weights;
  for (Index i = 0; i < g.num_nodes(); ++i) {
    const Vec2 x = g.point(i);
    const double s = u[i];
    const double absorb = absorption(set.a, set.p, s);
    require_finite(absorb, "absorption", i);
    r[i] += w[i] * absorb;
    if (set.source) {
      const double b = set.source(x, data.w[i], data.g.row(i).transpose());
      require_finite(b, "source", i);
      r[i] -= w[i] * b;
    }
    if (set.boundary && beta[i] > 0.0) {
      const double c = set.boundary(x, s);
      require_finite(c, "boundary flux", i);
      r[i] -= beta[i] * c;
    }
  }
  return r;
}

Eigen::SparseMatrix<double> residual_jacobian(const DiscreteField& u, const FrozenNonlocalData& data,
                                              const CoefficientSet& set, JacobianMode mode, double fd_step) {
  require_data_grid(u, data);
  const GridSpec& g = u.grid;
  const double area = g.triangle_area();
  const bool analytic_xi = mode == JacobianMode::analytic && static_cast<bool>(set.flux_dxi);
  const bool analytic_s = mode == JacobianMode::analytic && static_cast<bool>(set.flux_ds);
  const bool analytic_c = mode == JacobianMode::analytic && static_cast<bool>(set.boundary_ds);

  std::vector<Eigen::Triplet<double>> entries;
  entries.reserve(static_cast<std::size_t>(g.num_triangles()) * 9 + static_cast<std::size_t>(g.num_nodes()));

  for (Index t = 0; t < g.num_triangles(); ++t) {
    const TriangleState st = triangle_state(g, u.values, t);
    const Mat2 m = analytic_xi ? set.flux_dxi(st.x, st.s, st.xi) : flux_dxi_fd(set, st.x, st.s, st.xi, fd_step);
    const Vec2 d = analytic_s ? set.flux_ds(st.x, st.s, st.xi) : flux_ds_fd(set, st.x, st.s, st.xi, fd_step);
    if (!m.allFinite() || !d.allFinite()) throw EvaluationError("flux derivative is not finite", static_cast<long>(st.v[0]));
    for (int k = 0; k < 3; ++k) {
      const double ds_part = d.dot(st.grad_hat[k]) / 3.0;
      for (int l = 0; l < 3; ++l)
        entries.emplace_back(st.v[k], st.v[l], area * (st.grad_hat[k].dot(m * st.grad_hat[l]) + ds_part));
    }
  }

  const Eigen::VectorXd w = interior_weights(g);
  const Eigen::VectorXd beta = boundary_quadrature(g).weights;
  for (Index i = 0; i < g.num_nodes(); ++i) {
    double diag = w[i] * absorption_ds(set.a, set.p, u[i]);
    if (set.boundary && beta[i] > 0.0) {
      const Vec2 x = g.point(i);
      diag -= beta[i] * (analytic_c ? set.boundary_ds(x, u[i]) : boundary_ds_fd(set, x, u[i], fd_step));
    }
    require_finite(diag, "absorption or boundary derivative", i);
    entries.emplace_back(i, i, diag);
  }

  Eigen::SparseMatrix<double> j(g.num_nodes(), g.num_nodes());
  j.setFromTriplets(entries.begin(), entries.end());
  return j;
}

std::pair<DiscreteField, LocalReport> local_solve(const FrozenNonlocalData& data, const CoefficientSet& set,
                                                  const DiscreteField& u0, const SolveConfig& cfg) {
  cfg.validate();
  const GridSpec& g = u0.grid;
  const Eigen::VectorXd mass = interior_weights(g);

  LocalReport rep;
  Eigen::VectorXd u = u0.values;
  Eigen::VectorXd r = residual(DiscreteField(g, u), data, set);
  double norm = r.norm();
  rep.residual_history.push_back(norm);

  auto trial_norm = [&](const Eigen::VectorXd& v, Eigen::VectorXd& out) {
    try {
      out = residual(DiscreteField(g, v), data, set);
    } catch (const EvaluationError&) {
      return std::numeric_limits<double>::infinity();
    } catch (const std::invalid_argument&) {  // non-finite trial values
      return std::numeric_limits<double>::infinity();
    }
    return out.norm();
  };

  while (norm > cfg.inner_tol) {
    if (rep.iterations >= cfg.max_inner) {
      rep.message = "Newton iteration limit reached";
      break;
    }
    const Eigen::SparseMatrix<double> jac =
        residual_jacobian(DiscreteField(g, u), data, set, cfg.jacobian, cfg.fd_step);

    double diag_scale = jac.diagonal().cwiseAbs().maxCoeff();
    if (!(diag_scale > 0.0)) diag_scale = 1.0;
    const double mu_unit = diag_scale / mass.maxCoeff();

    bool accepted = false;
    bool factorized = false;
    Eigen::VectorXd next_u, next_r;
    double next_norm = norm;
    // mu = 0 is plain Newton; the shifted retries move toward a scaled residual step.
    for (int attempt = 0; attempt <= 7 && !accepted; ++attempt) {
      const double mu = attempt == 0 ? 0.0 : mu_unit * std::pow(100.0, attempt - 5);
      Eigen::SparseMatrix<double> lhs = jac;
      if (mu > 0.0) {
        Eigen::SparseMatrix<double> shift(g.num_nodes(), g.num_nodes());
        std::vector<Eigen::Triplet<double>> d;
        for (Index i = 0; i < g.num_nodes(); ++i) d.emplace_back(i, i, mu * mass[i]);
        shift.setFromTriplets(d.begin(), d.end());
        lhs += shift;
      }
      lhs.makeCompressed();
      Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
      lu.compute(lhs);
      if (lu.info() != Eigen::Success) continue;
      const Eigen::VectorXd step = lu.solve(-r);
      if (lu.info() != Eigen::Success || !step.allFinite()) continue;
      factorized = true;

      double lambda = 1.0;
      for (int halving = 0; halving <= 30; ++halving, lambda *= 0.5) {
        Eigen::VectorXd cand = u + lambda * step;
        Eigen::VectorXd cand_r;
        const double cand_norm = trial_norm(cand, cand_r);
        if (cand_norm < norm) {
          next_u = std::move(cand);
          next_r = std::move(cand_r);
          next_norm = cand_norm;
          accepted = true;
          break;
        }
      }
      if (accepted && mu > 0.0) ++rep.regularized_steps;
    }
    if (!factorized) throw SolverError("Jacobian stays singular after regularized retries");
    if (!accepted) {
      std::ostringstream msg;
      msg << "line search failed at residual " << norm;
      rep.message = msg.str();
      break;
    }
    u = std::move(next_u);
    r = std::move(next_r);
    norm = next_norm;
    ++rep.iterations;
    rep.residual_history.push_back(norm);
  }
  rep.converged = norm <= cfg.inner_tol;
  if (rep.converged) rep.message.clear();
  return {DiscreteField(g, std::move(u)), rep};
}

FieldNorms field_norms(const DiscreteField& u, double p) {
  FieldNorms n;
  n.lp = lp_norm(u, p);
  n.w1p = w1p_norm(u, p);
  n.linf = max_abs(u);
  n.boundary_lp = lp_norm(u, p, Region::boundary);
  return n;
}

SolveReport fixed_point_solve(const CoefficientSet& set, const Kernel& rho, const ExtensionOperator& ext,
                              const SolveConfig& cfg, const std::optional<DiscreteField>& u0) {
  cfg.validate();
  const GridSpec& g = ext.source();
  DiscreteField u = u0 ? *u0 : DiscreteField(g);
  require_same_grid(u.grid, g, "initial guess");

  SolveReport rep;
  for (int k = 0; k < cfg.max_outer; ++k) {
    const FrozenNonlocalData data = set.nonlocal ? freeze(u, rho, ext) : FrozenNonlocalData::zero(g);
    auto [local, inner] = local_solve(data, set, u, cfg);
    OuterStep step;
    step.inner = inner;
    ++rep.outer_iterations;
    if (!inner.converged) {
      step.norms = field_norms(u, set.p);
      rep.steps.push_back(std::move(step));
      rep.message = "inner solve did not converge: " + inner.message;
      break;
    }
    const double change = w1p_norm(local - u, set.p);
    const double size = w1p_norm(local, set.p);
    step.update = size > 0.0 ? change / size : change;
    u = set.nonlocal ? (1.0 - cfg.relaxation) * u + cfg.relaxation * local : local;
    step.norms = field_norms(u, set.p);
    rep.steps.push_back(std::move(step));
    if (!set.nonlocal || rep.steps.back().update <= cfg.outer_tol) {
      rep.converged = true;
      break;
    }
  }
  if (!rep.converged && rep.message.empty()) rep.message = "outer iteration limit reached";

  const FrozenNonlocalData data = set.nonlocal ? freeze(u, rho, ext) : FrozenNonlocalData::zero(g);
  rep.final_residual = residual(u, data, set).norm();
  rep.norms = field_norms(u, set.p);
  rep.solution = u;
  return rep;
}

double duality_pairing(const CoefficientSet& set, const DiscreteField& v, const FrozenNonlocalData& data) {
  require_data_grid(v, data);
  const GridSpec& g = v.grid;
  const VectorField grad = gradient(v);
  double flux = 0.0;
  for (Index t = 0; t < g.num_triangles(); ++t) {
    const auto tri = g.triangle(t);
    const double s = (v[tri[0]] + v[tri[1]] + v[tri[2]]) / 3.0;
    const Vec2 xi = grad.row(t).transpose();
    flux += g.triangle_area() * set.flux(g.centroid(t), s, xi).dot(xi);
  }
  const Eigen::VectorXd w = interior_weights(g);
  const Eigen::VectorXd beta = boundary_quadrature(g).weights;
  double absorb = 0.0, source = 0.0, boundary = 0.0;
  for (Index i = 0; i < g.num_nodes(); ++i) {
    const Vec2 x = g.point(i);
    absorb += w[i] * set.a * std::pow(std::abs(v[i]), set.p);
    if (set.source) source += w[i] * set.source(x, data.w[i], data.g.row(i).transpose()) * v[i];
    if (set.boundary && beta[i] > 0.0) boundary += beta[i] * set.boundary(x, v[i]) * v[i];
  }
  return flux + absorb - source - boundary;
}

double duality_pairing(const CoefficientSet& set, const DiscreteField& v, const Kernel& rho, const ExtensionOperator& ext) {
  return duality_pairing(set, v, set.nonlocal ? freeze(v, rho, ext) : FrozenNonlocalData::zero(v.grid));
}

std::vector<CoercivityRow> coercivity_probe(const CoefficientSet& set, const DiscreteField& v, const std::vector<double>& scales,
                                            const Kernel& rho, const ExtensionOperator& ext) {
  if (max_abs(v) == 0.0) throw InvalidParameter("coercivity probe needs a nonzero direction");
  std::vector<CoercivityRow> rows;
  for (double t : scales) {
    if (!(t > 0.0)) throw InvalidParameter("coercivity scales must be positive");
    const DiscreteField tv = t * v;
    CoercivityRow row;
    row.scale = t;
    row.pairing = duality_pairing(set, tv, rho, ext);
    row.norm = w1p_norm(tv, set.p);
    row.ratio = row.norm > 0.0 ? row.pairing / row.norm : 0.0;
    rows.push_back(row);
  }
  return rows;
}

double MmsStudy::min_l2_order() const {
  double m = std::numeric_limits<double>::infinity();
  for (const auto& r : rows)
    if (r.l2_order) m = std::min(m, *r.l2_order);
  return m;
}

double MmsStudy::min_w1p_order() const {
  double m = std::numeric_limits<double>::infinity();
  for (const auto& r : rows)
    if (r.w1p_order) m = std::min(m, *r.w1p_order);
  return m;
}

MmsStudy mms_study(const ManufacturedSolution& exact, const std::vector<Index>& meshes, const SolveConfig& cfg, double p,
                   double a) {
  MmsStudy study;
  study.solution = exact.name;
  study.p = p;
  study.neumann_mismatch = neumann_flux_mismatch(exact);
  if (study.neumann_mismatch > 1e-8) {
    std::ostringstream msg;
    msg << "manufactured solution '" << exact.name << "' has nonzero normal flux (max " << study.neumann_mismatch
        << ") on the boundary; the Neumann problem does not reproduce it";
    study.warnings.push_back(msg.str());
  }
  const auto forcing = p_laplacian_forcing(exact, p, a);

  for (Index n : meshes) {
    const GridSpec grid = GridSpec::unit_square(n);
    const CoefficientSet set = mms_forcing_set(forcing, grid, p, a);
    auto [uh, rep] = local_solve(FrozenNonlocalData::zero(grid), set, DiscreteField(grid), cfg);

    const DiscreteField ue = DiscreteField::sample(grid, exact.value);
    const DiscreteField err = uh - ue;
    const VectorField gh = gradient(uh);
    Eigen::VectorXd grad_err(grid.num_triangles());
    for (Index t = 0; t < grid.num_triangles(); ++t)
      grad_err[t] = (gh.row(t).transpose() - exact.gradient(grid.centroid(t))).norm();
    const Eigen::VectorXd tri_w = Eigen::VectorXd::Constant(grid.num_triangles(), grid.triangle_area());

    MmsRow row;
    row.n = n;
    row.h = grid.hx();
    row.l2_error = lp_norm(err, 2.0);
    row.w1p_error = detail::scaled_power_sum_root<double>(tri_w, grad_err, p) + lp_norm(err, p);
    row.converged = rep.converged;
    row.newton_iterations = rep.iterations;
    if (!study.rows.empty()) {
      const MmsRow& prev = study.rows.back();
      const double ratio = std::log(prev.h / row.h);
      if (prev.l2_error > 0 && row.l2_error > 0) row.l2_order = std::log(prev.l2_error / row.l2_error) / ratio;
      if (prev.w1p_error > 0 && row.w1p_error > 0) row.w1p_order = std::log(prev.w1p_error / row.w1p_error) / ratio;
    }
    study.rows.push_back(row);
  }
  return study;
}

}  // namespace nlq

#include "nlq/moser.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace nlq {

namespace {

constexpr double inf = std::numeric_limits<double>::infinity();

// |s|^e for s >= 0 with |s|^inf in {0, 1, inf}.
double power(double s, double e) {
  if (std::isinf(e)) return s < 1.0 ? 0.0 : (s == 1.0 ? 1.0 : inf);
  return std::pow(s, e);
}

// c * x with 0 * inf = 0.
double scale(double c, double x) { return c == 0.0 ? 0.0 : c * x; }

bool is_integer(double x) { return std::floor(x) == x; }

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

}  // namespace

double MoserProbe::sup() const {
  double s = 0.0;
  for (double n : norms) s = std::max(s, n);
  return s;
}

DiscreteField moser_test_function(const DiscreteField& u, double kappa, double h, double p) {
  if (!(kappa >= 0.0)) throw InvalidParameter("kappa must be nonnegative");
  if (!(h > 0.0)) throw InvalidParameter("truncation level h must be positive");
  const double e = kappa * p;
  if (e == 0.0) return u;
  if (u.values.minCoeff() < 0.0 && !is_integer(e))
    throw DomainError("test function needs u >= 0 for fractional kappa p; split u with pos_neg_parts");
  Eigen::VectorXd v(u.values.size());
  for (Index i = 0; i < v.size(); ++i) v[i] = u[i] * std::pow(std::min(u[i], h), e);
  return DiscreteField(u.grid, std::move(v));
}

EnergyCheck energy_inequality_check(const DiscreteField& u, const CoefficientSet& set, const FrozenNonlocalData& data,
                                    double kappa, double h, double tol) {
  if (!(kappa > 0.0)) throw InvalidParameter("kappa must be positive");
  if (!(h > 0.0)) throw InvalidParameter("truncation level h must be positive");
  if (u.values.size() && u.values.minCoeff() < 0.0)
    throw DomainError("energy inequality needs a nonnegative field; split u with pos_neg_parts");
  const Verdict exponents = validate_exponent_conditions(set, HypothesisMode::H);
  if (!exponents.ok()) throw InvalidParameter("set fails the H exponent conditions: " + exponents.summary());
  const Verdict growth = validate_growth(set, HypothesisMode::H);
  if (!growth.ok()) throw InvalidParameter("set fails the H growth conditions: " + growth.summary());
  require_same_grid(u.grid, data.w.grid, "nonlocal data");
  require_same_grid(u.grid, set.f.grid, "majorant f");

  const GridSpec& g = u.grid;
  const double p = set.p;
  const double kp = kappa * p;
  const ExponentData ex = exponent_data(set);
  const GrowthConstants& k = set.k;
  const double omega = g.rect().area();
  const double perimeter = g.rect().perimeter();

  Eigen::VectorXd trunc(g.num_nodes());  // u_h^(kappa p)
  Eigen::VectorXd below(g.num_nodes());  // 1[u <= h] u_h^(kappa p)
  for (Index i = 0; i < g.num_nodes(); ++i) {
    trunc[i] = std::pow(std::min(u[i], h), kp);
    below[i] = u[i] <= h ? trunc[i] : 0.0;
  }

  EnergyCheck c;
  EnergyTerms& t = c.terms;
  const VectorField grad = gradient(u);
  for (Index tri = 0; tri < g.num_triangles(); ++tri) {
    const auto v = g.triangle(tri);
    const double gp = std::pow(grad.row(tri).norm(), p) * g.triangle_area();
    t.gradient += gp * (trunc[v[0]] + trunc[v[1]] + trunc[v[2]]) / 3.0;
    t.gradient_below += gp * (below[v[0]] + below[v[1]] + below[v[2]]) / 3.0;
  }
  c.lhs = k.a4 * (t.gradient + kp * t.gradient_below);

  const Eigen::VectorXd w = interior_weights(g);
  const Eigen::VectorXd beta = boundary_quadrature(g).weights;
  double crit = 0.0, bd = 0.0;
  for (Index i = 0; i < g.num_nodes(); ++i) {
    if (w[i] > 0.0 && trunc[i] > 0.0) crit += w[i] * power(u[i], ex.p_star) * trunc[i];
    if (beta[i] > 0.0 && trunc[i] > 0.0) bd += beta[i] * power(u[i], ex.p_lower_star) * trunc[i];
  }
  t.critical = scale((kp + 1.0) * (k.a5 + k.a6), crit);
  t.boundary = scale(k.c1 + k.c2, bd) + k.c2 * perimeter;
  t.constant = (1.0 + kp) * k.a6 * omega;

  // int |coef| u u_h^(kappa p) <= K (|Omega|^(1/r_j) + |Omega|^(1/r_j - 1/r~) ||u u_h^kappa||_{p r~}^p),
  // with K from Hoelder and u u_h^(kappa p) <= (u u_h^kappa)^p + 1.
  Eigen::VectorXd uk(g.num_nodes());
  for (Index i = 0; i < g.num_nodes(); ++i) uk[i] = u[i] * std::pow(std::min(u[i], h), kappa);
  const double base_norm = std::pow(lp_norm(g, uk, p * ex.r_tilde), p);
  auto holder_tail = [&](double rj) {
    return std::pow(omega, 1.0 / rj) + std::pow(omega, 1.0 / rj - 1.0 / ex.r_tilde) * base_norm;
  };
  const double r_dual = set.r == 1.0 ? inf : set.r / (set.r - 1.0);
  t.forcing = lp_norm(set.f, r_dual) * holder_tail(set.r);
  if (k.b1 != 0.0) {
    const double wn = lp_norm(data.w, ex.p_star);
    t.source_level = k.b1 * (set.alpha1 == 0.0 ? 1.0 : std::pow(wn, set.alpha1)) * holder_tail(ex.r1);
  }
  if (k.b2 != 0.0) {
    const double gn = lp_norm_nodal_vector(g, data.g, p);
    t.source_slope = k.b2 * (set.alpha2 == 0.0 ? 1.0 : std::pow(gn, set.alpha2)) * holder_tail(ex.r2);
  }

  c.rhs = t.critical + t.boundary + t.constant + t.forcing + t.source_level + t.source_slope;
  c.margin = c.rhs * (1.0 + tol) - c.lhs;
  c.pass = c.lhs <= c.rhs * (1.0 + tol);
  return c;
}

std::vector<EnergyCheck> energy_inequality_parts(const DiscreteField& u, const CoefficientSet& set,
                                                 const FrozenNonlocalData& data, double kappa, double tol) {
  const auto [plus, minus] = pos_neg_parts(u);
  std::vector<EnergyCheck> out;
  for (const DiscreteField* part : {&plus, &minus}) {
    const double m = max_abs(*part);
    out.push_back(energy_inequality_check(*part, set, data, kappa, m > 0.0 ? 0.5 * m : 1.0, tol));
  }
  return out;
}

double default_ladder_ratio(const CoefficientSet& set) {
  const ExponentData ex = exponent_data(set);
  if (std::isinf(ex.p_star)) return 2.0;
  const double q1 = 0.5 * (set.p * ex.r_tilde + ex.p_star);
  return ex.p_star / q1;
}

int ladder_steps(double base, double q_ratio, double r_max) {
  if (!(q_ratio > 1.0)) throw InvalidParameter("ladder ratio must exceed 1");
  if (base >= r_max) return 0;
  return static_cast<int>(std::ceil(std::log(r_max / base) / std::log(q_ratio)));
}

MoserProbe lr_ladder(const DiscreteField& u, double p, int n, double q_ratio, int n_steps) {
  if (!(q_ratio > 1.0)) throw InvalidParameter("ladder ratio must exceed 1");
  if (n_steps < 0) throw InvalidParameter("ladder needs a nonnegative step count");
  const auto [p_star, p_lower_star] = critical_exponents(p, n);
  MoserProbe probe;
  probe.q_ratio = q_ratio;
  probe.infinite_critical = std::isinf(p_star);
  const double base = probe.infinite_critical ? p : p_star;
  if (!probe.infinite_critical) probe.q1 = p_star / q_ratio;
  probe.q2 = std::isinf(p_lower_star) ? 2.0 * p : 0.5 * (p + p_lower_star);
  double r = base;
  for (int k = 0; k <= n_steps; ++k, r *= q_ratio) {
    probe.ladder.push_back(r);
    probe.norms.push_back(lp_norm(u, r));
  }
  return probe;
}

SupLimitVerdict sup_limit_check(const DiscreteField& u, const std::vector<double>& thresholds, const MoserProbe& probe,
                                double tol) {
  if (probe.ladder.empty()) throw InvalidParameter("sup limit check needs a nonempty ladder");
  SupLimitVerdict v;
  v.nodal_max = max_abs(u);
  v.largest_r_norm = probe.norms.back();
  const Eigen::VectorXd w = interior_weights(u.grid);
  bool all = true;
  for (double t : thresholds) {
    ThresholdCheck c;
    c.t = t;
    for (Index i = 0; i < u.values.size(); ++i)
      if (std::abs(u[i]) > t) c.measure += w[i];
    if (c.measure == 0.0) {
      c.skipped = true;
      v.thresholds.push_back(c);
      continue;
    }
    c.holds_every_r = true;
    for (std::size_t k = 0; k < probe.ladder.size(); ++k) {
      const double bound = t * std::pow(c.measure, 1.0 / probe.ladder[k]);
      if (probe.norms[k] < bound * (1.0 - 1e-12)) c.holds_every_r = false;
    }
    c.limit_exceeds = v.largest_r_norm >= t * (1.0 - tol);
    all = all && c.holds_every_r && c.limit_exceeds;
    v.thresholds.push_back(c);
  }
  v.limit_matches_max = std::abs(v.largest_r_norm - v.nodal_max) <= tol * v.nodal_max;
  v.pass = all && v.limit_matches_max;
  return v;
}

BoundednessReport boundedness_report(const DiscreteField& u, const CoefficientSet& set, const Kernel& rho,
                                     const ExtensionOperator& ext) {
  BoundednessReport rep;
  const double q = default_ladder_ratio(set);
  const double base = std::isinf(critical_exponents(set.p).first) ? set.p : critical_exponents(set.p).first;
  rep.probe = lr_ladder(u, set.p, 2, q, ladder_steps(base, q));
  const ExponentData ex = exponent_data(set);
  if (!std::isinf(ex.p_star)) rep.probe.q1 = 0.5 * (set.p * ex.r_tilde + ex.p_star);
  else rep.probe.q1 = 2.0 * set.p * ex.r_tilde;

  rep.nodal_max = max_abs(u);
  rep.boundary_max = lp_norm(u, inf, Region::boundary);
  for (double r : rep.probe.ladder) rep.boundary_norms.push_back(lp_norm(u, r, Region::boundary));

  rep.bounded = std::isfinite(rep.nodal_max);
  for (double n : rep.probe.norms) rep.bounded = rep.bounded && std::isfinite(n);
  if (!rep.bounded) rep.failures.push_back("non-finite ladder norm");

  for (std::size_t k = 1; k < rep.probe.ladder.size(); ++k) {
    const double omega = u.grid.rect().area();
    const double lo = rep.probe.norms[k - 1] / std::pow(omega, 1.0 / rep.probe.ladder[k - 1]);
    const double hi = rep.probe.norms[k] / std::pow(omega, 1.0 / rep.probe.ladder[k]);
    if (hi < lo * (1.0 - 1e-12)) {
      rep.failures.push_back("ladder not monotone at r = " + fmt(rep.probe.ladder[k]));
      break;
    }
  }

  rep.sup_limit = sup_limit_check(u, {0.25 * rep.nodal_max, 0.5 * rep.nodal_max, 0.9 * rep.nodal_max}, rep.probe);
  rep.anomaly = rep.nodal_max > 0.0 && !rep.sup_limit.limit_matches_max;
  if (rep.anomaly)
    rep.failures.push_back("largest ladder norm " + fmt(rep.sup_limit.largest_r_norm) + " is not within 2% of the nodal max " +
                           fmt(rep.nodal_max));
  for (const auto& t : rep.sup_limit.thresholds) {
    if (t.skipped) continue;
    if (!t.holds_every_r) rep.failures.push_back("threshold inequality fails at t = " + fmt(t.t));
    if (!t.limit_exceeds) rep.failures.push_back("ladder limit below threshold t = " + fmt(t.t));
  }

  try {
    const FrozenNonlocalData data = set.nonlocal ? freeze(u, rho, ext) : FrozenNonlocalData::zero(u.grid);
    rep.energy = energy_inequality_parts(u, set, data);
    const char* names[] = {"positive", "negative"};
    for (std::size_t k = 0; k < rep.energy.size(); ++k)
      if (!rep.energy[k].pass)
        rep.failures.push_back(std::string("energy inequality fails on the ") + names[k] + " part (lhs " +
                               fmt(rep.energy[k].lhs) + ", rhs " + fmt(rep.energy[k].rhs) + ")");
  } catch (const std::invalid_argument& e) {
    rep.failures.push_back(std::string("energy inequality refused: ") + e.what());
  }

  rep.certified = rep.failures.empty();
  return rep;
}

}  // namespace nlq

#include "nlq/structure.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <set>
#include <sstream>

#include "nlq/manufactured.hpp"

namespace nlq {

namespace {

constexpr double inf = std::numeric_limits<double>::infinity();

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

std::string where(const Vec2& x, double s, const Vec2& xi) {
  return "x=(" + fmt(x.x()) + "," + fmt(x.y()) + ") s=" + fmt(s) + " xi=(" + fmt(xi.x()) + "," + fmt(xi.y()) + ")";
}

// c * |base|^e with 0 * inf = 0; an infinite exponent gives |base|^inf in {0, 1, inf}.
double growth_term(double c, double base, double e) {
  if (c == 0.0) return 0.0;
  return c * std::pow(std::abs(base), e);
}

bool leq(double lhs, double rhs) { return lhs <= rhs + 1e-12 * std::max(1.0, std::abs(rhs)); }

class ViolationLog {
 public:
  explicit ViolationLog(Verdict& v) : verdict_(v) {}
  void add(const std::string& clause, const std::string& detail) {
    if (seen_.insert(clause).second) verdict_.violations.push_back({clause, detail});
  }

 private:
  Verdict& verdict_;
  std::set<std::string> seen_;
};

bool on_unit_square_boundary(const Vec2& x) {
  return x.x() == 0.0 || x.y() == 0.0 || x.x() == 1.0 || x.y() == 1.0;
}

DiscreteField majorant(const GridSpec& grid, const ScalarFieldFn& fn) {
  return DiscreteField::sample(grid, [&](const Vec2& x) { return std::abs(fn(x)); });
}

}  // namespace

std::string to_string(HypothesisMode mode) { return mode == HypothesisMode::A ? "A" : "H"; }

std::pair<double, double> critical_exponents(double p, int n) {
  if (!(p > 1.0)) throw InvalidExponent("critical exponents need p > 1");
  if (n < 2) throw InvalidParameter("critical exponents need dimension >= 2");
  const double nd = static_cast<double>(n);
  if (p >= nd) return {inf, inf};
  return {nd * p / (nd - p), (nd - 1.0) * p / (nd - p)};
}

ExponentData exponent_data(const CoefficientSet& set) {
  ExponentData e;
  e.p = set.p;
  std::tie(e.p_star, e.p_lower_star) = critical_exponents(set.p, e.n);
  e.r1 = std::isinf(e.p_star) ? 1.0 : e.p_star / (e.p_star - set.alpha1);
  e.r2 = set.p / (set.p - set.alpha2);
  e.r_tilde = std::max({set.r, e.r1, e.r2});
  e.r_tilde_admissible = e.r_tilde < e.p_star / set.p;
  return e;
}

bool Verdict::names(const std::string& clause) const {
  for (const auto& v : violations)
    if (v.clause == clause) return true;
  return false;
}

std::string Verdict::summary() const {
  if (ok()) return "no violation found";
  std::string out;
  for (const auto& v : violations) {
    if (!out.empty()) out += "; ";
    out += "(" + v.clause + ") " + v.detail;
  }
  return out;
}

Verdict validate_exponent_conditions(const CoefficientSet& set, HypothesisMode mode) {
  Verdict verdict;
  auto fail = [&](const std::string& clause, const std::string& detail) { verdict.violations.push_back({clause, detail}); };

  if (!(set.p > 1.0)) {
    fail("structure", "p = " + fmt(set.p) + " must exceed 1");
    return verdict;
  }
  if (!(set.a > 0.0)) fail("structure", "a = " + fmt(set.a) + " must be positive");
  const GrowthConstants& k = set.k;
  for (double c : {k.a1, k.a2, k.a3, k.a5, k.a6, k.b1, k.b2, k.c1, k.c2})
    if (!(c >= 0.0)) {
      fail("structure", "growth constants must be nonnegative");
      break;
    }
  if (!(k.a4 > 0.0)) fail("structure", "a4 = " + fmt(k.a4) + " must be positive");
  if (set.f.values.size() && set.f.values.minCoeff() < 0.0) fail("structure", "majorant f must be nonnegative");

  const auto [p_star, p_lower_star] = critical_exponents(set.p);
  (void)p_lower_star;
  const double p = set.p;

  if (mode == HypothesisMode::A) {
    const std::pair<const char*, double> alphas[] = {{"alpha1", set.alpha1}, {"alpha2", set.alpha2}, {"alpha3", set.alpha3}};
    for (const auto& [label, alpha] : alphas)
      if (!(alpha >= 0.0 && alpha < p - 1.0))
        fail("alpha-range", std::string(label) + " = " + fmt(alpha) + " is outside [0, p-1) = [0, " + fmt(p - 1.0) + ")");
    if (!(set.r >= 1.0 && set.r < p_star))
      fail("r-range", "r = " + fmt(set.r) + " is outside [1, p*) = [1, " + fmt(p_star) + ")");
  } else {
    if (!(set.alpha1 >= 0.0 && set.alpha1 < p_star - p))
      fail("alpha-H", "alpha1 = " + fmt(set.alpha1) + " is outside [0, p*-p) = [0, " + fmt(p_star - p) + ")");
    const double scaled = std::isinf(p_star) ? p : (p / p_star) * (p_star - p);
    const double bound = std::min(p - 1.0, scaled);
    if (!(set.alpha2 >= 0.0 && set.alpha2 < bound))
      fail("alpha-H", "alpha2 = " + fmt(set.alpha2) + " is outside [0, min{p-1, (p/p*)(p*-p)}) = [0, " + fmt(bound) + ")");
    if (!(set.alpha3 >= 0.0)) fail("alpha-H", "alpha3 must be nonnegative");
    if (!(set.r >= 1.0 && set.r < p_star / p))
      fail("r-range", "r = " + fmt(set.r) + " is outside [1, p*/p) = [1, " + fmt(p_star / p) + ")");
  }
  return verdict;
}

SampleCloud default_sample_cloud() {
  SampleCloud cloud;
  for (int j = 0; j < 5; ++j)
    for (int i = 0; i < 5; ++i) cloud.points.emplace_back(0.25 * i, 0.25 * j);
  cloud.levels = {0.0, 1.0, -1.0, 10.0, -10.0};
  cloud.slopes.emplace_back(0.0, 0.0);
  for (double radius : {1.0, 10.0})
    for (int a = 0; a < 8; ++a) {
      const double t = 2.0 * std::numbers::pi * a / 8.0;
      cloud.slopes.emplace_back(radius * std::cos(t), radius * std::sin(t));
    }
  return cloud;
}

Verdict validate_growth(const CoefficientSet& set, HypothesisMode mode, const SampleCloud& cloud) {
  Verdict verdict;
  ViolationLog log(verdict);
  const GrowthConstants& k = set.k;
  const double p = set.p;
  const auto [p_star, p_lower_star] = critical_exponents(p);
  const bool a_mode = mode == HypothesisMode::A;
  const std::string c1 = a_mode ? "A1" : "H1";
  const std::string c3 = a_mode ? "A3" : "H2";
  const std::string c4 = a_mode ? "A4" : "H3";
  const std::string c5 = a_mode ? "A5" : "H4";

  for (const Vec2& x : cloud.points) {
    const double fx = interpolate(set.f, x);
    for (double s : cloud.levels) {
      for (const Vec2& xi : cloud.slopes) {
        const Vec2 flux = set.flux(x, s, xi);
        const double nxi = xi.norm();

        const double s_growth = a_mode ? growth_term(k.a2, s, p - 1.0) : growth_term(k.a2, s, p_star * (p - 1.0) / p);
        const double bound1 = growth_term(k.a1, nxi, p - 1.0) + s_growth + k.a3;
        if (!leq(flux.norm(), bound1))
          log.add(c1, "|A| = " + fmt(flux.norm()) + " > " + fmt(bound1) + " at " + where(x, s, xi));

        const double coercive = a_mode ? growth_term(k.a4, nxi, p) - k.a5
                                       : growth_term(k.a4, nxi, p) - growth_term(k.a5, s, p_star) - k.a6;
        if (!leq(coercive, flux.dot(xi)))
          log.add(c3, "A.xi = " + fmt(flux.dot(xi)) + " < " + fmt(coercive) + " at " + where(x, s, xi));

        const double b = set.source(x, s, xi);
        const double bound4 = fx + growth_term(k.b1, s, set.alpha1) + growth_term(k.b2, nxi, set.alpha2);
        if (!leq(std::abs(b), bound4))
          log.add(c4, "|B| = " + fmt(std::abs(b)) + " > " + fmt(bound4) + " at " + where(x, s, xi));

        if (a_mode) {
          for (const Vec2& other : cloud.slopes) {
            const Vec2 d = xi - other;
            if (d.norm() == 0.0) continue;
            if (!(set.flux(x, s, d).dot(d) > 0.0))
              log.add("A2", "A(x,s,xi-xi').(xi-xi') <= 0 at " + where(x, s, d));
            if (!((flux - set.flux(x, s, other)).dot(d) > 0.0))
              log.add("A2-LL", "(A(xi)-A(xi')).(xi-xi') <= 0 at " + where(x, s, xi));
          }
        }
      }
      if (on_unit_square_boundary(x)) {
        const double c = set.boundary(x, s);
        const double bound5 = a_mode ? growth_term(k.c1, s, set.alpha3) + k.c2 : growth_term(k.c1, s, p_lower_star - 1.0) + k.c2;
        if (!leq(std::abs(c), bound5))
          log.add(c5, "|C| = " + fmt(std::abs(c)) + " > " + fmt(bound5) + " at " + where(x, s, Vec2::Zero()));
      }
    }
  }
  return verdict;
}

Vec2 power_flux(const Vec2& xi, double p) {
  const double n = xi.norm();
  if (n == 0.0) return Vec2::Zero();
  return std::pow(n, p - 2.0) * xi;
}

Mat2 power_flux_jacobian(const Vec2& xi, double p) {
  const double n2 = xi.squaredNorm() + kJacobianEpsilon * kJacobianEpsilon;
  return std::pow(n2, 0.5 * (p - 2.0)) * (Mat2::Identity() + (p - 2.0) * xi * xi.transpose() / n2);
}

namespace {

struct SourceShape {
  double f0 = 2.0;
  double wave = 0.0;
  double gain_s = 0.1;
  double gain_xi = 0.0;
};

// B = f0 + f1 cos(2 pi x1) cos(pi x2) + b1 tanh(s) + b2 tanh(|xi|), all terms bounded.
void attach_bounded_source(CoefficientSet& set, const GridSpec& grid, const SourceShape& shape) {
  const double pi = std::numbers::pi;
  auto base = [shape, pi](const Vec2& x) { return shape.f0 + shape.wave * std::cos(2.0 * pi * x.x()) * std::cos(pi * x.y()); };
  set.source = [base, shape](const Vec2& x, double s, const Vec2& xi) {
    return base(x) + shape.gain_s * std::tanh(s) + shape.gain_xi * std::tanh(xi.norm());
  };
  set.nonlocal = shape.gain_s != 0.0 || shape.gain_xi != 0.0;
  set.f = DiscreteField::sample(grid, [shape, pi](const Vec2& x) {
    return std::abs(shape.f0) + std::abs(shape.wave) * std::abs(std::cos(2.0 * pi * x.x()) * std::cos(pi * x.y()));
  });
  set.k.b1 = std::abs(shape.gain_s);
  set.k.b2 = std::abs(shape.gain_xi);
  set.alpha1 = 0.0;
  set.alpha2 = 0.0;
}

void attach_p_laplacian(CoefficientSet& set) {
  const double p = set.p;
  set.flux = [p](const Vec2&, double, const Vec2& xi) { return power_flux(xi, p); };
  set.flux_dxi = [p](const Vec2&, double, const Vec2& xi) { return power_flux_jacobian(xi, p); };
  set.flux_ds = [](const Vec2&, double, const Vec2&) { return Vec2::Zero().eval(); };
  set.k.a1 = 1.0;
  set.k.a4 = 1.0;
}

void attach_neumann(CoefficientSet& set) {
  set.boundary = [](const Vec2&, double) { return 0.0; };
  set.boundary_ds = [](const Vec2&, double) { return 0.0; };
}

void apply_declared_overrides(CoefficientSet& set, const PresetParams& params) {
  if (params.alpha1) set.alpha1 = *params.alpha1;
  if (params.alpha2) set.alpha2 = *params.alpha2;
  if (params.alpha3) set.alpha3 = *params.alpha3;
  if (params.r) set.r = *params.r;
}

SourceShape source_shape(const PresetParams& params, double default_wave = 0.0) {
  SourceShape shape;
  shape.wave = default_wave;
  shape.f0 = params.forcing.value_or(shape.f0);
  shape.wave = params.forcing_wave.value_or(shape.wave);
  shape.gain_s = params.gain_s.value_or(shape.gain_s);
  shape.gain_xi = params.gain_xi.value_or(shape.gain_xi);
  return shape;
}

}  // namespace

std::vector<std::string> preset_names() { return {"p_laplacian_neumann", "pq_laplacian", "robin_p_laplacian", "mms_forcing"}; }

CoefficientSet preset(const std::string& name, const GridSpec& grid, const PresetParams& params) {
  CoefficientSet set;
  set.name = name;
  set.a = params.a.value_or(1.0);

  if (name == "p_laplacian_neumann") {
    set.p = params.p.value_or(2.0);
    attach_p_laplacian(set);
    attach_neumann(set);
    attach_bounded_source(set, grid, source_shape(params));
  } else if (name == "pq_laplacian") {
    set.p = params.p.value_or(2.5);
    const double q = params.q.value_or(1.5);
    const double mu = params.mu.value_or(1.0);
    const double p = set.p;
    if (!(q > 1.0 && q < p)) throw InvalidParameter("pq_laplacian needs 1 < q < p");
    if (!(mu >= 0.0)) throw InvalidParameter("pq_laplacian needs mu >= 0");
    set.flux = [p, q, mu](const Vec2&, double, const Vec2& xi) { return (power_flux(xi, p) + mu * power_flux(xi, q)).eval(); };
    set.flux_dxi = [p, q, mu](const Vec2&, double, const Vec2& xi) {
      return (power_flux_jacobian(xi, p) + mu * power_flux_jacobian(xi, q)).eval();
    };
    set.flux_ds = [](const Vec2&, double, const Vec2&) { return Vec2::Zero().eval(); };
    // |xi|^(q-1) <= |xi|^(p-1) + 1, and A.xi >= |xi|^p.
    set.k.a1 = 1.0 + mu;
    set.k.a3 = mu;
    set.k.a4 = 1.0;
    attach_neumann(set);
    // A nonconstant default solution keeps Newton away from the |xi|^(q-2) singularity at xi = 0.
    attach_bounded_source(set, grid, source_shape(params, 0.5));
  } else if (name == "robin_p_laplacian") {
    set.p = params.p.value_or(2.0);
    const double p = set.p;
    const double lambda = params.lambda.value_or(0.5);
    if (!(lambda >= 0.0)) throw InvalidParameter("robin_p_laplacian needs lambda >= 0");
    attach_p_laplacian(set);
    attach_bounded_source(set, grid, source_shape(params));
    set.boundary = [p, lambda](const Vec2&, double s) { return -lambda * std::pow(std::abs(s), p - 2.0) * s; };
    set.boundary_ds = [p, lambda](const Vec2&, double s) {
      return -lambda * (p - 1.0) * std::pow(s * s + kJacobianEpsilon * kJacobianEpsilon, 0.5 * (p - 2.0));
    };
    // |s|^(p-1) <= |s|^(p_*-1) + 1 because p_* > p.
    set.k.c1 = lambda;
    set.k.c2 = lambda;
    set.alpha3 = p - 1.0;
    set.mode = HypothesisMode::H;
  } else if (name == "mms_forcing") {
    const double p = params.p.value_or(2.0);
    set = mms_forcing_set(p_laplacian_forcing(cos_cos_solution(), p, set.a), grid, p, set.a);
  } else {
    std::string known;
    for (const auto& n : preset_names()) known += (known.empty() ? "" : ", ") + n;
    throw InvalidParameter("unknown preset '" + name + "' (expected one of " + known + ")");
  }
  apply_declared_overrides(set, params);
  return set;
}

CoefficientSet mms_forcing_set(const ScalarFieldFn& forcing, const GridSpec& grid, double p, double a) {
  CoefficientSet set;
  set.name = "mms_forcing";
  set.p = p;
  set.a = a;
  attach_p_laplacian(set);
  attach_neumann(set);
  set.source = [forcing](const Vec2& x, double, const Vec2&) { return forcing(x); };
  set.nonlocal = false;
  set.f = majorant(grid, forcing);
  return set;
}

std::vector<std::pair<std::string, CoefficientSet>> counterexample_sets(const GridSpec& grid) {
  std::vector<std::pair<std::string, CoefficientSet>> out;
  PresetParams neutral;
  neutral.gain_s = 0.0;

  // (1 + |s|) |xi|^(p-2) xi grows in s while the declared bound has a2 = 0.
  CoefficientSet growing = preset("p_laplacian_neumann", grid, neutral);
  growing.name = "counterexample_a1";
  growing.flux = [p = growing.p](const Vec2&, double s, const Vec2& xi) { return ((1.0 + std::abs(s)) * power_flux(xi, p)).eval(); };
  growing.flux_dxi = {};
  growing.flux_ds = {};
  out.emplace_back("A1", growing);

  // Half the p-Laplacian flux cannot dominate a4 |xi|^p with a4 = 1.
  CoefficientSet weak = preset("p_laplacian_neumann", grid, neutral);
  weak.name = "counterexample_a3";
  weak.flux = [p = weak.p](const Vec2&, double, const Vec2& xi) { return (0.5 * power_flux(xi, p)).eval(); };
  weak.flux_dxi = {};
  out.emplace_back("A3", weak);

  // B = f0 + s^2 against a declared growth b1 |s|^0.5.
  CoefficientSet quadratic = preset("p_laplacian_neumann", grid, neutral);
  quadratic.name = "counterexample_a4";
  quadratic.source = [](const Vec2&, double s, const Vec2&) { return 2.0 + s * s; };
  quadratic.nonlocal = true;
  quadratic.k.b1 = 1.0;
  quadratic.alpha1 = 0.5;
  out.emplace_back("A4", quadratic);
  return out;
}

}  // namespace nlq

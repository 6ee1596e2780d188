// Acceptance gate: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <chrono>
#include <cstdio>
#include <functional>
#include <numbers>
#include <string>

#include "nlq/moser.hpp"
#include "nlq/solver.hpp"
#include "test_support.hpp"

using namespace nlq;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

struct Problem {
  GridSpec grid;
  ExtensionOperator ext;
  Kernel rho;
  explicit Problem(Index n)
      : grid(GridSpec::unit_square(n)), ext(grid), rho(kernel_preset(KernelShape::gaussian, 0.05, ext.target())) {}
};

Outcome exact_constant() {
  const auto t0 = std::chrono::steady_clock::now();
  const Problem pb(33);
  PresetParams params;
  params.gain_s = 0.0;  // B = 2
  const SolveReport rep = fixed_point_solve(preset("p_laplacian_neumann", pb.grid, params), pb.rho, pb.ext, SolveConfig{});
  const double dev = (rep.solution.values.array() - 2.0).abs().maxCoeff();
  const double secs = seconds_since(t0);
  return {rep.converged && dev <= 1e-9 && secs < 5.0, fmt("max |u - 2| = %.2e, runtime %.2f s", dev, secs)};
}

Outcome linear_oracle() {
  const GridSpec g = GridSpec::unit_square(9);
  const Eigen::VectorXd b = DiscreteField::sample(g, [](const Vec2& x) {
    return 2.0 + 0.7 * std::cos(2.0 * std::numbers::pi * x.x()) * std::cos(std::numbers::pi * x.y());
  }).values;
  std::mt19937 rng(2024);
  double worst_res = 0.0, worst_sol = 0.0;
  for (double lambda : {0.0, 0.5}) {
    PresetParams params;
    params.gain_s = 0.0;
    params.forcing_wave = 0.7;
    params.lambda = lambda;
    const CoefficientSet set = preset(lambda > 0.0 ? "robin_p_laplacian" : "p_laplacian_neumann", g, params);
    const oracle::DenseLinearSystem sys = oracle::dense_linear_system(g, 1.0, lambda, b);
    const FrozenNonlocalData data = FrozenNonlocalData::zero(g);
    for (int k = 0; k < 10; ++k) {
      const DiscreteField u = oracle::random_field(g, rng, -2.0, 3.0);
      worst_res = std::max(worst_res, oracle::relative_error(residual(u, data, set), sys.matrix * u.values - sys.load));
    }
    const auto [u, rep] = local_solve(data, set, DiscreteField(g), SolveConfig{});
    const Eigen::VectorXd direct = sys.matrix.lu().solve(sys.load);
    worst_sol = std::max(worst_sol, rep.converged ? oracle::relative_error(u.values, direct) : 1.0);
  }
  return {worst_res <= 1e-10 && worst_sol <= 1e-10, fmt("residual rel err %.2e, solution rel err %.2e", worst_res, worst_sol)};
}

Outcome convolution_oracle() {
  std::mt19937 rng(7);
  std::uniform_int_distribution<Index> size(5, 65);
  std::uniform_real_distribution<double> val(-0.5, 1.0);
  double worst = 0.0;
  Index largest = 0;
  for (int s = 0; s < 100; ++s) {
    const Index n = s == 0 ? 65 : size(rng);
    largest = std::max(largest, n);
    const GridSpec g = GridSpec::unit_square(n);
    const Index hx = std::uniform_int_distribution<Index>(1, std::min<Index>(6, (n - 1) / 2))(rng);
    const Index hy = std::uniform_int_distribution<Index>(1, std::min<Index>(6, (n - 1) / 2))(rng);
    Eigen::VectorXd kv((2 * hx + 1) * (2 * hy + 1));
    for (Index k = 0; k < kv.size(); ++k) kv[k] = val(rng);
    const Kernel rho(g.hx(), g.hy(), hx, hy, kv);
    const DiscreteField v = oracle::random_field(g, rng);
    worst = std::max(worst, oracle::relative_error(convolve(rho, v).values, oracle::brute_force_convolution(rho, v)));
  }
  return {worst <= 1e-12, fmt("100 pairs up to %gx%g, worst rel err %.2e", double(largest), double(largest), worst)};
}

Outcome extension_identities() {
  const GridSpec src = GridSpec::unit_square(33);
  const ExtensionOperator op(src);
  std::mt19937 rng(11);
  bool restriction = true;
  double lin = 0.0, worst_excess = -1e300;
  for (int s = 0; s < 100; ++s) {
    const DiscreteField u = oracle::random_field(src, rng);
    const DiscreteField v = oracle::random_field(src, rng);
    restriction = restriction && op.restrict(op.extend(u).field).values == u.values;
    const Eigen::VectorXd d = op.extend(2.0 * u - 3.0 * v).values() - (2.0 * op.extend(u).values() - 3.0 * op.extend(v).values());
    lin = std::max(lin, d.cwiseAbs().maxCoeff());
    for (double p : {1.5, 2.0, 3.0})
      worst_excess = std::max(worst_excess, extension_norm_ratio(op, u, p) - (std::pow(2.0, 4.0 / p) + 10.0 * src.hx()));
  }
  // Linearity: 2u - 3v is formed before extension, so only the final rounding can differ.
  const bool ok = restriction && lin <= 1e-14 && worst_excess <= 0.0;
  return {ok, fmt("restriction exact %g, linearity dev %.2e, max(ratio - bound) %.3f", restriction ? 1.0 : 0.0, lin, worst_excess)};
}

Outcome norm_inequalities() {
  const ExtensionOperator op(GridSpec::unit_square(17));
  std::mt19937 rng(13);
  bool young = true, grad = true;
  double worst_young = 0.0, worst_grad = 0.0;
  for (KernelShape shape : {KernelShape::gaussian, KernelShape::box, KernelShape::bump, KernelShape::delta}) {
    const Kernel rho = kernel_preset(shape, 0.1, op.target());
    for (int s = 0; s < 100; ++s) {
      const ExtendedField e = op.extend(oracle::random_field(op.source(), rng));
      for (double p : {1.5, 2.0}) {
        const double p_star = critical_exponents(p).first;
        for (double r : {1.0, 2.0, p, p_star}) {
          const InequalityCheck c = young_check(rho, e, r);
          young = young && c.pass;
          worst_young = std::max(worst_young, c.lhs / c.rhs);
        }
        const InequalityCheck g = gradient_bound_check(rho, e, p);
        grad = grad && g.pass;
        worst_grad = std::max(worst_grad, g.lhs / g.rhs);
      }
    }
  }
  auto v_fn = [](const Vec2& x) { return std::sin(std::numbers::pi * x.x()) * std::cos(2.0 * x.y()); };
  auto g_fn = [](const Vec2& x) {
    return Vec2(std::numbers::pi * std::cos(std::numbers::pi * x.x()) * std::cos(2.0 * x.y()),
                -2.0 * std::sin(std::numbers::pi * x.x()) * std::sin(2.0 * x.y()));
  };
  double min_order = 1e300, prev = 0.0;
  for (Index n : {17, 33, 65, 129}) {
    const GridSpec g = GridSpec::unit_square(n);
    VectorField exact(g.num_nodes(), 2);
    for (Index k = 0; k < g.num_nodes(); ++k) exact.row(k) = g_fn(g.point(k)).transpose();
    const double res = commutation_residual(kernel_preset(KernelShape::gaussian, 0.08, g), DiscreteField::sample(g, v_fn), exact);
    if (prev > 0.0) min_order = std::min(min_order, std::log2(prev / res));
    prev = res;
  }
  return {young && grad && min_order >= 0.9,
          fmt("Young max ratio %.3f, gradient max ratio %.3f, commutation order %.3f", worst_young, worst_grad, min_order)};
}

Outcome coercivity() {
  const Problem pb(17);
  std::mt19937 rng(17);
  bool ok = true;
  int tables = 0;
  for (const auto& name : preset_names()) {
    const CoefficientSet set = preset(name, pb.grid);
    if (!validate_exponent_conditions(set, set.mode).ok() || !validate_growth(set, set.mode).ok()) return {false, name + " fails validation"};
    for (int d = 0; d < 5; ++d) {
      const auto rows = coercivity_probe(set, oracle::random_field(pb.grid, rng), {1, 2, 4, 8, 16}, pb.rho, pb.ext);
      for (std::size_t k = 1; k < rows.size(); ++k) ok = ok && rows[k].ratio > rows[k - 1].ratio;
      ++tables;
    }
  }
  return {ok, fmt("%g presets x 5 directions, strictly increasing %g", tables / 5.0, ok ? 1.0 : 0.0)};
}

Outcome mms() {
  const auto t0 = std::chrono::steady_clock::now();
  const MmsStudy s = mms_study(cos_cos_solution(), {9, 17, 33, 65}, SolveConfig{});
  bool converged = true;
  for (const auto& r : s.rows) converged = converged && r.converged;
  const double secs = seconds_since(t0);
  return {converged && s.min_l2_order() >= 1.8 && s.min_w1p_order() >= 0.9 && secs < 120.0,
          fmt("L2 order %.3f, W1p order %.3f, runtime %.2f s", s.min_l2_order(), s.min_w1p_order(), secs)};
}

Outcome moser_suite() {
  const Problem pb(33);
  bool ok = true;
  std::string failures;
  double worst_energy = 0.0, worst_limit = 0.0;
  auto check = [&](const std::string& label, const CoefficientSet& set, const DiscreteField& u) {
    const BoundednessReport b = boundedness_report(u, set, pb.rho, pb.ext);
    bool thresholds = true;
    for (const auto& t : b.sup_limit.thresholds) thresholds = thresholds && (t.skipped || t.holds_every_r);
    bool energy = !b.energy.empty();
    for (const auto& e : b.energy) {
      energy = energy && e.pass;
      if (e.rhs > 0) worst_energy = std::max(worst_energy, e.lhs / e.rhs);
    }
    if (b.nodal_max > 0) worst_limit = std::max(worst_limit, std::abs(b.sup_limit.largest_r_norm - b.nodal_max) / b.nodal_max);
    const bool pass = energy && b.sup_limit.limit_matches_max && thresholds && b.certified;
    if (!pass) failures += " " + label;
    ok = ok && pass;
  };
  for (const auto& name : preset_names()) {
    const CoefficientSet set = preset(name, pb.grid);
    const SolveReport rep = fixed_point_solve(set, pb.rho, pb.ext, SolveConfig{});
    if (!rep.converged) return {false, name + " did not converge"};
    check(name, set, rep.solution);
  }
  Outcome o{ok, fmt("worst energy lhs/rhs %.3f, worst ladder/max gap %.4f", worst_energy, worst_limit)};
  if (!ok) o.detail += ", failing:" + failures;
  return o;
}

Outcome coupled_solve() {
  const Problem pb(33);
  const CoefficientSet set = preset("p_laplacian_neumann", pb.grid);  // B = 2 + 0.1 tanh(s)
  SolveConfig half;
  half.relaxation = 0.5;
  const SolveReport a = fixed_point_solve(set, pb.rho, pb.ext, SolveConfig{});
  const SolveReport b = fixed_point_solve(set, pb.rho, pb.ext, half);
  const double lo = a.solution.values.minCoeff(), hi = a.solution.values.maxCoeff();
  const double gap = (a.solution.values - b.solution.values).cwiseAbs().maxCoeff();
  return {a.converged && b.converged && lo >= 1.9 && hi <= 2.1 && gap <= 1e-8,
          fmt("range [%.6f, %.6f], theta gap %.2e", lo, hi, gap)};
}

Outcome falsification() {
  const GridSpec g = GridSpec::unit_square(9);
  bool ok = true;
  std::string named;
  for (const auto& [clause, set] : counterexample_sets(g)) {
    const Verdict v = validate_growth(set, HypothesisMode::A);
    ok = ok && !v.ok() && v.names(clause);
    named += " " + set.name + "->" + (v.names(clause) ? clause : std::string("missed"));
  }
  return {ok, "rejected:" + named};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"exact constant solution", exact_constant},
      {"linear-case dense oracle", linear_oracle},
      {"convolution brute-force oracle", convolution_oracle},
      {"extension identities", extension_identities},
      {"Young, gradient bound, commutation", norm_inequalities},
      {"coercivity probe", coercivity},
      {"MMS convergence", mms},
      {"Moser suite", moser_suite},
      {"coupled nonlocal solve", coupled_solve},
      {"hypothesis falsification", falsification},
  };
  int failed = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    Outcome o;
    try {
      o = criteria[k].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    std::printf("%s criterion %zu (%s): %s\n", o.pass ? "PASS" : "FAIL", k + 1, criteria[k].first, o.detail.c_str());
    std::fflush(stdout);
    failed += o.pass ? 0 : 1;
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}

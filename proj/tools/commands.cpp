#include "commands.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <numbers>
#include <random>

#include "nlq/field_io.hpp"
#include "nlq/moser.hpp"
#include "nlq/report_json.hpp"

namespace nlq::cli {

namespace {

using nlohmann::json;

DiscreteField random_field(const GridSpec& grid, std::mt19937& rng) {
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  Eigen::VectorXd v(grid.num_nodes());
  for (Index i = 0; i < v.size(); ++i) v[i] = dist(rng);
  return DiscreteField(grid, std::move(v));
}

json check(const std::string& name, bool pass, json detail = json::object()) {
  detail["name"] = name;
  detail["pass"] = pass;
  return detail;
}

struct SuiteResult {
  json body;
  bool pass = true;
};

SuiteResult suite_extension(const RunConfig& cfg) {
  const GridSpec grid = GridSpec::unit_square(cfg.n);
  const ExtensionOperator ext = build_extension(cfg, grid);
  std::mt19937 rng(cfg.seed);
  bool restriction = true, linear = true;
  double worst_linear = 0.0;
  std::map<double, double> worst_ratio = {{1.5, 0.0}, {2.0, 0.0}, {3.0, 0.0}};
  for (int s = 0; s < cfg.samples; ++s) {
    const DiscreteField u = random_field(grid, rng);
    const DiscreteField v = random_field(grid, rng);
    const ExtendedField eu = ext.extend(u);
    restriction = restriction && ext.restrict(eu.field).values == u.values;
    const DiscreteField combo = 2.5 * u + (-0.75) * v;
    const Eigen::VectorXd expect = 2.5 * eu.values() - 0.75 * ext.extend(v).values();
    const double diff = (ext.extend(combo).values() - expect).cwiseAbs().maxCoeff();
    worst_linear = std::max(worst_linear, diff);
    linear = linear && diff <= 1e-12;
    for (auto& [p, worst] : worst_ratio) worst = std::max(worst, extension_norm_ratio(ext, u, p));
  }
  SuiteResult r;
  r.body["checks"].push_back(check("restriction identity", restriction));
  r.body["checks"].push_back(check("linearity", linear, {{"max_deviation", worst_linear}}));
  for (const auto& [p, worst] : worst_ratio) {
    const double bound = std::pow(2.0, 4.0 / p) + 10.0 * grid.hx();
    r.body["checks"].push_back(check("L^p ratio bound", worst <= bound, {{"p", p}, {"max_ratio", worst}, {"bound", bound}}));
    r.pass = r.pass && worst <= bound;
  }
  r.pass = r.pass && restriction && linear;
  return r;
}

SuiteResult suite_convolution(const RunConfig& cfg) {
  const GridSpec grid = GridSpec::unit_square(cfg.n);
  const ExtensionOperator ext = build_extension(cfg, grid);
  const Kernel rho = build_kernel(cfg, grid);
  CoefficientSet probe;
  probe.p = cfg.params.p.value_or(2.0);
  const double p_star = critical_exponents(probe.p).first;
  const std::vector<double> exponents = {1.0, 2.0, probe.p, p_star};
  std::mt19937 rng(cfg.seed);
  SuiteResult r;
  bool young = true, grad = true;
  double worst_young = 0.0, worst_grad = 0.0;
  for (int s = 0; s < cfg.samples; ++s) {
    const ExtendedField e = ext.extend(random_field(grid, rng));
    for (double q : exponents) {
      const InequalityCheck c = young_check(rho, e, q);
      young = young && c.pass;
      if (c.rhs > 0) worst_young = std::max(worst_young, c.lhs / c.rhs);
    }
    const InequalityCheck g = gradient_bound_check(rho, e, probe.p);
    grad = grad && g.pass;
    if (g.rhs > 0) worst_grad = std::max(worst_grad, g.lhs / g.rhs);
  }
  r.body["kernel"] = {{"name", cfg.kernel}, {"radius", cfg.kernel_radius}, {"mass", rho.mass()}};
  r.body["checks"].push_back(check("Young inequality", young, {{"max_ratio", worst_young}}));
  r.body["checks"].push_back(check("gradient bound, factor 2", grad, {{"max_ratio", worst_grad}}));
  r.pass = young && grad;
  return r;
}

SuiteResult suite_hypotheses(const RunConfig& cfg) {
  const GridSpec grid = GridSpec::unit_square(cfg.n);
  const CoefficientSet set = build_coefficients(cfg, grid);
  SuiteResult r;
  const Verdict exponents = validate_exponent_conditions(set, set.mode);
  const Verdict growth = validate_growth(set, set.mode);
  r.body["set"] = set.name;
  r.body["mode"] = to_string(set.mode);
  r.body["checks"].push_back(check("exponent conditions", exponents.ok(), {{"verdict", to_json(exponents)}}));
  r.body["checks"].push_back(check("growth conditions", growth.ok(), {{"verdict", to_json(growth)}}));
  r.pass = exponents.ok() && growth.ok();
  for (const auto& [clause, bad] : counterexample_sets(grid)) {
    const Verdict v = validate_growth(bad, HypothesisMode::A);
    const bool named = v.names(clause);
    r.body["checks"].push_back(check("rejects " + bad.name, named, {{"clause", clause}, {"verdict", to_json(v)}}));
    r.pass = r.pass && named;
  }
  if (!growth.ok()) r.body["violated"] = growth.violations.front().clause;
  return r;
}

SuiteResult suite_moser(const RunConfig& cfg) {
  const GridSpec grid = GridSpec::unit_square(cfg.n);
  const CoefficientSet set = build_coefficients(cfg, grid);
  const Kernel rho = build_kernel(cfg, grid);
  const ExtensionOperator ext = build_extension(cfg, grid);
  const SolveReport rep = fixed_point_solve(set, rho, ext, cfg.solver);
  SuiteResult r;
  r.body["checks"].push_back(check("solve converged", rep.converged));
  r.pass = rep.converged;
  if (rep.converged) {
    const BoundednessReport b = boundedness_report(rep.solution, set, rho, ext);
    r.body["checks"].push_back(check("boundedness certified", b.certified, {{"report", to_json(b)}}));
    r.pass = r.pass && b.certified;
  }
  return r;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  out << text;
}

}  // namespace

int cmd_solve(const RunConfig& cfg, const std::string& out_dir, std::ostream& log) {
  const GridSpec grid = GridSpec::unit_square(cfg.n);
  const CoefficientSet set = build_coefficients(cfg, grid);
  const Verdict growth = validate_growth(set, set.mode);
  if (!growth.ok()) throw ConfigError(cfg.line_of("problem.preset"), "coefficient set fails its hypotheses: " + growth.summary());
  const Kernel rho = build_kernel(cfg, grid);
  const ExtensionOperator ext = build_extension(cfg, grid);

  SolveReport rep = fixed_point_solve(set, rho, ext, cfg.solver);
  if (!cfg.coercivity_scales.empty()) {
    const DiscreteField v = DiscreteField::sample(grid, [](const Vec2& x) { return std::sin(std::numbers::pi * x.x()); });
    rep.coercivity = coercivity_probe(set, v, cfg.coercivity_scales, rho, ext);
  }

  json report = {{"preset", set.name},
                 {"mode", to_string(set.mode)},
                 {"p", set.p},
                 {"grid", {{"n", cfg.n}, {"h", grid.hx()}}},
                 {"kernel", {{"name", cfg.kernel}, {"radius", cfg.kernel_radius}, {"mass", rho.mass()}}},
                 {"solve", to_json(rep)}};
  if (rep.converged) report["boundedness"] = to_json(boundedness_report(rep.solution, set, rho, ext));

  const std::filesystem::path dir(out_dir);
  std::filesystem::create_directories(dir);
  save_field_csv((dir / "solution.csv").string(), rep.solution);
  write_text(dir / "report.json", report.dump(2) + "\n");

  log << (rep.converged ? "converged" : "not converged") << " after " << rep.outer_iterations
      << " outer iteration(s); final residual " << rep.final_residual << '\n';
  if (!rep.converged) log << rep.message << '\n';
  return rep.converged ? kExitOk : kExitNotConverged;
}

int cmd_verify(const RunConfig& cfg, const std::string& suite, std::ostream& out, std::ostream& log) {
  const std::vector<std::string> all = {"extension", "convolution", "hypotheses", "moser"};
  std::vector<std::string> run;
  if (suite == "all") run = all;
  else if (std::find(all.begin(), all.end(), suite) != all.end()) run = {suite};
  else throw ConfigError(cfg.line_of("verify.suite"), "unknown suite '" + suite + "'");

  json verdicts = json::object();
  bool pass = true;
  for (const auto& name : run) {
    SuiteResult r = name == "extension"     ? suite_extension(cfg)
                    : name == "convolution" ? suite_convolution(cfg)
                    : name == "hypotheses"  ? suite_hypotheses(cfg)
                                            : suite_moser(cfg);
    r.body["pass"] = r.pass;
    verdicts[name] = r.body;
    log << name << ": " << (r.pass ? "pass" : "FAIL") << '\n';
    pass = pass && r.pass;
  }
  out << json{{"pass", pass}, {"suites", verdicts}}.dump(2) << '\n';
  return pass ? kExitOk : kExitNotConverged;
}

int cmd_mms(const RunConfig& cfg, const std::string& out_dir, std::ostream& out, std::ostream& log) {
  ManufacturedSolution exact;
  try {
    exact = manufactured_by_name(cfg.mms_solution);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(cfg.line_of("mms.solution"), e.what());
  }
  const MmsStudy study = mms_study(exact, cfg.mms_meshes, cfg.solver, cfg.mms_p, cfg.mms_a);
  for (const auto& w : study.warnings) log << "warning: " << w << '\n';

  std::ostringstream csv;
  csv << std::setprecision(10);
  csv << "n,h,l2_error,w1p_error,l2_order,w1p_order,converged\n";
  bool converged = true;
  for (const auto& r : study.rows) {
    csv << r.n << ',' << r.h << ',' << r.l2_error << ',' << r.w1p_error << ',';
    if (r.l2_order) csv << *r.l2_order;
    csv << ',';
    if (r.w1p_order) csv << *r.w1p_order;
    csv << ',' << (r.converged ? 1 : 0) << '\n';
    converged = converged && r.converged;
  }
  out << csv.str();
  if (study.rows.size() > 1)
    log << "observed orders: L2 >= " << study.min_l2_order() << ", W1p >= " << study.min_w1p_order() << '\n';

  if (!out_dir.empty()) {
    const std::filesystem::path dir(out_dir);
    std::filesystem::create_directories(dir);
    write_text(dir / "mms.csv", csv.str());
    write_text(dir / "mms.json", to_json(study).dump(2) + "\n");
  }
  return converged ? kExitOk : kExitNotConverged;
}

}  // namespace nlq::cli

#include "nlq/config.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <functional>
#include <sstream>

namespace nlq {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double to_double(const std::string& v, int line, const std::string& key) {
  try {
    std::size_t used = 0;
    const double d = std::stod(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return d;
  } catch (const std::exception&) {
    throw ConfigError(line, key + ": expected a number, got '" + v + "'");
  }
}

long to_long(const std::string& v, int line, const std::string& key) {
  try {
    std::size_t used = 0;
    const long n = std::stol(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return n;
  } catch (const std::exception&) {
    throw ConfigError(line, key + ": expected an integer, got '" + v + "'");
  }
}

std::vector<std::string> split_list(const std::string& v) {
  std::vector<std::string> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

template <typename T, typename Conv>
std::vector<T> parse_list(const std::string& v, int line, const std::string& key, Conv conv) {
  std::vector<T> out;
  for (const auto& item : split_list(v)) out.push_back(static_cast<T>(conv(item, line, key)));
  if (out.empty()) throw ConfigError(line, key + ": expected a comma-separated list");
  return out;
}

template <typename T>
std::string join(const std::vector<T>& xs) {
  std::string out;
  for (const auto& x : xs) {
    if (!out.empty()) out += ", ";
    if constexpr (std::is_floating_point_v<T>) out += num(x);
    else out += std::to_string(x);
  }
  return out;
}

using Setter = std::function<void(RunConfig&, const std::string& value, int line, const std::string& key)>;

const std::map<std::string, Setter>& setters() {
  auto opt = [](std::optional<double> PresetParams::*field) {
    return Setter([field](RunConfig& c, const std::string& v, int l, const std::string& k) { c.params.*field = to_double(v, l, k); });
  };
  auto real = [](double RunConfig::*field) {
    return Setter([field](RunConfig& c, const std::string& v, int l, const std::string& k) { c.*field = to_double(v, l, k); });
  };
  auto solver_real = [](double SolveConfig::*field) {
    return Setter([field](RunConfig& c, const std::string& v, int l, const std::string& k) { c.solver.*field = to_double(v, l, k); });
  };
  auto solver_int = [](int SolveConfig::*field) {
    return Setter([field](RunConfig& c, const std::string& v, int l, const std::string& k) {
      c.solver.*field = static_cast<int>(to_long(v, l, k));
    });
  };
  auto text = [](std::string RunConfig::*field) {
    return Setter([field](RunConfig& c, const std::string& v, int, const std::string&) { c.*field = v; });
  };

  static const std::map<std::string, Setter> table = {
      {"problem.preset", text(&RunConfig::preset)},
      {"problem.p", opt(&PresetParams::p)},
      {"problem.a", opt(&PresetParams::a)},
      {"problem.mu", opt(&PresetParams::mu)},
      {"problem.q", opt(&PresetParams::q)},
      {"problem.lambda", opt(&PresetParams::lambda)},
      {"problem.forcing", opt(&PresetParams::forcing)},
      {"problem.forcing_wave", opt(&PresetParams::forcing_wave)},
      {"problem.gain_s", opt(&PresetParams::gain_s)},
      {"problem.gain_xi", opt(&PresetParams::gain_xi)},
      {"problem.alpha1", opt(&PresetParams::alpha1)},
      {"problem.alpha2", opt(&PresetParams::alpha2)},
      {"problem.alpha3", opt(&PresetParams::alpha3)},
      {"problem.r", opt(&PresetParams::r)},
      {"kernel.name", text(&RunConfig::kernel)},
      {"kernel.radius", real(&RunConfig::kernel_radius)},
      {"grid.n", Setter([](RunConfig& c, const std::string& v, int l, const std::string& k) { c.n = to_long(v, l, k); })},
      {"grid.margin", real(&RunConfig::margin)},
      {"solver.inner_tol", solver_real(&SolveConfig::inner_tol)},
      {"solver.outer_tol", solver_real(&SolveConfig::outer_tol)},
      {"solver.relaxation", solver_real(&SolveConfig::relaxation)},
      {"solver.max_inner", solver_int(&SolveConfig::max_inner)},
      {"solver.max_outer", solver_int(&SolveConfig::max_outer)},
      {"solver.fd_step", solver_real(&SolveConfig::fd_step)},
      {"solver.jacobian", Setter([](RunConfig& c, const std::string& v, int l, const std::string& k) {
         if (v == "analytic") c.solver.jacobian = JacobianMode::analytic;
         else if (v == "finite_difference") c.solver.jacobian = JacobianMode::finite_difference;
         else throw ConfigError(l, k + ": expected analytic or finite_difference, got '" + v + "'");
       })},
      {"solver.coercivity", Setter([](RunConfig& c, const std::string& v, int l, const std::string& k) {
         c.coercivity_scales = v == "none" ? std::vector<double>{} : parse_list<double>(v, l, k, to_double);
       })},
      {"verify.suite", text(&RunConfig::suite)},
      {"verify.samples", Setter([](RunConfig& c, const std::string& v, int l, const std::string& k) {
         c.samples = static_cast<int>(to_long(v, l, k));
       })},
      {"verify.seed", Setter([](RunConfig& c, const std::string& v, int l, const std::string& k) {
         c.seed = static_cast<unsigned>(to_long(v, l, k));
       })},
      {"mms.solution", text(&RunConfig::mms_solution)},
      {"mms.meshes", Setter([](RunConfig& c, const std::string& v, int l, const std::string& k) {
         c.mms_meshes = parse_list<Index>(v, l, k, to_long);
       })},
      {"mms.p", real(&RunConfig::mms_p)},
      {"mms.a", real(&RunConfig::mms_a)},
      {"output.dir", text(&RunConfig::output_dir)},
  };
  return table;
}

void check_values(const RunConfig& c) {
  auto at = [&](const char* key) { return c.line_of(key); };
  if (c.n < 3) throw ConfigError(at("grid.n"), "grid.n must be at least 3");
  if (!(c.margin > 0.0 && c.margin < 1.0)) throw ConfigError(at("grid.margin"), "grid.margin must lie in (0, 1)");
  if (!(c.kernel_radius > 0.0)) throw ConfigError(at("kernel.radius"), "kernel.radius must be positive");
  try {
    parse_kernel_shape(c.kernel);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(at("kernel.name"), e.what());
  }
  try {
    c.solver.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(0, std::string("solver: ") + e.what());
  }
  for (double t : c.coercivity_scales)
    if (!(t > 0.0)) throw ConfigError(at("solver.coercivity"), "coercivity scales must be positive");
  if (c.samples < 1) throw ConfigError(at("verify.samples"), "verify.samples must be at least 1");
  for (Index m : c.mms_meshes)
    if (m < 3) throw ConfigError(at("mms.meshes"), "mms meshes need at least 3 nodes per side");
  if (!(c.mms_p >= 2.0)) throw ConfigError(at("mms.p"), "mms.p must be at least 2");
  if (!(c.mms_a > 0.0)) throw ConfigError(at("mms.a"), "mms.a must be positive");
  const auto names = config_preset_names();
  if (std::find(names.begin(), names.end(), c.preset) == names.end())
    throw ConfigError(at("problem.preset"), "unknown preset '" + c.preset + "'");
}

}  // namespace

bool RunConfig::operator==(const RunConfig& o) const {
  auto same_params = [](const PresetParams& a, const PresetParams& b) {
    return a.p == b.p && a.a == b.a && a.mu == b.mu && a.q == b.q && a.lambda == b.lambda && a.forcing == b.forcing &&
           a.forcing_wave == b.forcing_wave && a.gain_s == b.gain_s && a.gain_xi == b.gain_xi && a.alpha1 == b.alpha1 &&
           a.alpha2 == b.alpha2 && a.alpha3 == b.alpha3 && a.r == b.r;
  };
  auto same_solver = [](const SolveConfig& a, const SolveConfig& b) {
    return a.inner_tol == b.inner_tol && a.outer_tol == b.outer_tol && a.relaxation == b.relaxation &&
           a.max_inner == b.max_inner && a.max_outer == b.max_outer && a.jacobian == b.jacobian && a.fd_step == b.fd_step;
  };
  return preset == o.preset && same_params(params, o.params) && kernel == o.kernel && kernel_radius == o.kernel_radius &&
         n == o.n && margin == o.margin && same_solver(solver, o.solver) && coercivity_scales == o.coercivity_scales &&
         suite == o.suite && samples == o.samples && seed == o.seed && mms_solution == o.mms_solution &&
         mms_meshes == o.mms_meshes && mms_p == o.mms_p && mms_a == o.mms_a && output_dir == o.output_dir;
}

int RunConfig::line_of(const std::string& key) const {
  const auto it = lines.find(key);
  return it == lines.end() ? 0 : it->second;
}

RunConfig parse_config(std::istream& in) {
  RunConfig cfg;
  std::string section;
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const auto hash = raw.find_first_of("#;");
    const std::string s = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (s.empty()) continue;
    if (s.front() == '[') {
      if (s.back() != ']') throw ConfigError(line, "unterminated section header");
      section = trim(s.substr(1, s.size() - 2));
      continue;
    }
    const auto eq = s.find('=');
    if (eq == std::string::npos) throw ConfigError(line, "expected key = value");
    if (section.empty()) throw ConfigError(line, "key outside any section");
    const std::string key = section + "." + trim(s.substr(0, eq));
    const std::string value = trim(s.substr(eq + 1));
    const auto it = setters().find(key);
    if (it == setters().end()) throw ConfigError(line, "unknown key '" + key + "'");
    if (cfg.lines.count(key)) throw ConfigError(line, "duplicate key '" + key + "'");
    if (value.empty()) throw ConfigError(line, key + ": missing value");
    it->second(cfg, value, line, key);
    cfg.lines[key] = line;
  }
  check_values(cfg);
  return cfg;
}

RunConfig parse_config_string(const std::string& text) {
  std::istringstream in(text);
  return parse_config(in);
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(0, "cannot open config '" + path + "'");
  return parse_config(in);
}

void serialize_config(std::ostream& out, const RunConfig& c) {
  const PresetParams& pp = c.params;
  auto opt = [&](const char* key, const std::optional<double>& v) {
    if (v) out << key << " = " << num(*v) << '\n';
  };
  out << "[problem]\n";
  out << "preset = " << c.preset << '\n';
  opt("p", pp.p);
  opt("a", pp.a);
  opt("mu", pp.mu);
  opt("q", pp.q);
  opt("lambda", pp.lambda);
  opt("forcing", pp.forcing);
  opt("forcing_wave", pp.forcing_wave);
  opt("gain_s", pp.gain_s);
  opt("gain_xi", pp.gain_xi);
  opt("alpha1", pp.alpha1);
  opt("alpha2", pp.alpha2);
  opt("alpha3", pp.alpha3);
  opt("r", pp.r);
  out << "\n[kernel]\nname = " << c.kernel << "\nradius = " << num(c.kernel_radius) << '\n';
  out << "\n[grid]\nn = " << c.n << "\nmargin = " << num(c.margin) << '\n';
  out << "\n[solver]\n";
  out << "inner_tol = " << num(c.solver.inner_tol) << '\n';
  out << "outer_tol = " << num(c.solver.outer_tol) << '\n';
  out << "relaxation = " << num(c.solver.relaxation) << '\n';
  out << "max_inner = " << c.solver.max_inner << '\n';
  out << "max_outer = " << c.solver.max_outer << '\n';
  out << "jacobian = " << (c.solver.jacobian == JacobianMode::analytic ? "analytic" : "finite_difference") << '\n';
  out << "fd_step = " << num(c.solver.fd_step) << '\n';
  out << "coercivity = " << (c.coercivity_scales.empty() ? std::string("none") : join(c.coercivity_scales)) << '\n';
  out << "\n[verify]\nsuite = " << c.suite << "\nsamples = " << c.samples << "\nseed = " << c.seed << '\n';
  out << "\n[mms]\nsolution = " << c.mms_solution << "\nmeshes = " << join(c.mms_meshes) << "\np = " << num(c.mms_p)
      << "\na = " << num(c.mms_a) << '\n';
  out << "\n[output]\ndir = " << c.output_dir << '\n';
}

std::string serialize_config_string(const RunConfig& cfg) {
  std::ostringstream out;
  serialize_config(out, cfg);
  return out.str();
}

std::vector<std::string> config_preset_names() {
  auto names = preset_names();
  for (const char* extra : {"counterexample_a1", "counterexample_a3", "counterexample_a4"}) names.emplace_back(extra);
  return names;
}

CoefficientSet build_coefficients(const RunConfig& cfg, const GridSpec& grid) {
  const int preset_line = cfg.line_of("problem.preset");
  CoefficientSet set;
  try {
    if (cfg.preset.rfind("counterexample_", 0) == 0) {
      bool found = false;
      for (auto& [clause, s] : counterexample_sets(grid))
        if (s.name == cfg.preset) {
          set = s;
          found = true;
        }
      if (!found) throw InvalidParameter("unknown preset '" + cfg.preset + "'");
    } else {
      set = preset(cfg.preset, grid, cfg.params);
    }
  } catch (const std::invalid_argument& e) {
    throw ConfigError(preset_line, e.what());
  }

  const Verdict v = validate_exponent_conditions(set, set.mode);
  if (!v.ok()) {
    const Violation& first = v.violations.front();
    int line = preset_line;
    for (const char* key : {"alpha1", "alpha2", "alpha3", "r", "p", "a"})
      if (first.detail.rfind(std::string(key) + " ", 0) == 0 && cfg.line_of(std::string("problem.") + key))
        line = cfg.line_of(std::string("problem.") + key);
    throw ConfigError(line, "exponent condition (" + first.clause + ") violated: " + first.detail);
  }
  return set;
}

Kernel build_kernel(const RunConfig& cfg, const GridSpec& grid) {
  try {
    return kernel_preset(parse_kernel_shape(cfg.kernel), cfg.kernel_radius, extended_grid(grid));
  } catch (const std::invalid_argument& e) {
    throw ConfigError(cfg.line_of("kernel.radius") ? cfg.line_of("kernel.radius") : cfg.line_of("kernel.name"), e.what());
  }
}

ExtensionOperator build_extension(const RunConfig& cfg, const GridSpec& grid) {
  CutoffSpec cutoff;
  cutoff.margin = cfg.margin;
  return ExtensionOperator(grid, cutoff);
}

}  // namespace nlq

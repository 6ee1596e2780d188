#include <gtest/gtest.h>

#include "nlq/config.hpp"

using namespace nlq;

namespace {

int error_line(const std::string& text) {
  try {
    parse_config_string(text);
  } catch (const ConfigError& e) {
    return e.line();
  }
  return -1;
}

}  // namespace

TEST(Config, DefaultsRoundTrip) {
  const RunConfig def;
  const RunConfig back = parse_config_string(serialize_config_string(def));
  EXPECT_TRUE(back == def);
  EXPECT_EQ(serialize_config_string(back), serialize_config_string(def));
}

TEST(Config, OverridesRoundTripExactly) {
  const std::string text =
      "# comment line\n"
      "[problem]\n"
      "preset = pq_laplacian\n"
      "p = 2.7\n"
      "q = 1.3000000000000000444\n"
      "mu = 0.1\n"
      "gain_s = 0.3 ; trailing comment\n"
      "[kernel]\n"
      "name = bump\n"
      "radius = 0.15\n"
      "[grid]\n"
      "n = 17\n"
      "margin = 0.2\n"
      "[solver]\n"
      "relaxation = 0.5\n"
      "jacobian = finite_difference\n"
      "coercivity = none\n"
      "[verify]\n"
      "suite = moser\n"
      "seed = 7\n"
      "[mms]\n"
      "meshes = 9, 17\n"
      "[output]\n"
      "dir = results\n";
  const RunConfig c = parse_config_string(text);
  EXPECT_EQ(c.preset, "pq_laplacian");
  EXPECT_DOUBLE_EQ(*c.params.p, 2.7);
  EXPECT_DOUBLE_EQ(*c.params.mu, 0.1);
  EXPECT_FALSE(c.params.lambda.has_value());
  EXPECT_EQ(c.kernel, "bump");
  EXPECT_EQ(c.n, 17);
  EXPECT_EQ(c.solver.jacobian, JacobianMode::finite_difference);
  EXPECT_TRUE(c.coercivity_scales.empty());
  EXPECT_EQ(c.mms_meshes, (std::vector<Index>{9, 17}));
  EXPECT_EQ(c.output_dir, "results");
  EXPECT_EQ(c.line_of("problem.p"), 4);
  EXPECT_EQ(c.line_of("problem.lambda"), 0);
  const RunConfig back = parse_config_string(serialize_config_string(c));
  EXPECT_TRUE(back == c);
  EXPECT_EQ(*back.params.q, *c.params.q);
}

TEST(Config, ErrorsCarryLineNumbers) {
  EXPECT_EQ(error_line("[problem]\n\npreset = x\np = abc\n"), 4);
  EXPECT_EQ(error_line("[grid]\nsize = 3\n"), 2);
  EXPECT_EQ(error_line("preset = a\n"), 1);
  EXPECT_EQ(error_line("[grid\n"), 1);
  EXPECT_EQ(error_line("[grid]\nn = 9\nn = 17\n"), 3);
  EXPECT_EQ(error_line("[grid]\nn 9\n"), 2);
  EXPECT_EQ(error_line("[grid]\nn = 2\n"), 2);
  EXPECT_EQ(error_line("[solver]\njacobian = exact\n"), 2);
  EXPECT_EQ(error_line("[mms]\nmeshes = 9, x\n"), 2);
  EXPECT_EQ(error_line("[problem]\npreset = nothing\n"), 2);
  EXPECT_EQ(error_line("[solver]\n\nrelaxation = 1.5\n"), 0);
  EXPECT_THROW(load_config("/nonexistent/path.ini"), ConfigError);
}

TEST(Config, ExponentViolationPointsAtItsKey) {
  const RunConfig c = parse_config_string("[problem]\npreset = p_laplacian_neumann\nalpha1 = 1\n");
  try {
    build_coefficients(c, GridSpec::unit_square(9));
    FAIL() << "expected ConfigError";
  } catch (const ConfigError& e) {
    EXPECT_EQ(e.line(), 3);
    EXPECT_STREQ(e.what(), "line 3: exponent condition (alpha-range) violated: alpha1 = 1 is outside [0, p-1) = [0, 1)");
  }
}

TEST(Config, BuildersHonourSettings) {
  const RunConfig c = parse_config_string("[kernel]\nname = box\nradius = 0.25\n[grid]\nn = 9\nmargin = 0.3\n");
  const GridSpec g = GridSpec::unit_square(c.n);
  const Kernel k = build_kernel(c, g);
  EXPECT_DOUBLE_EQ(k.hx(), g.hx());
  EXPECT_EQ(k.half_x(), 2);
  EXPECT_DOUBLE_EQ(build_extension(c, g).cutoff().margin, 0.3);
  EXPECT_EQ(build_coefficients(c, g).name, "p_laplacian_neumann");
  const RunConfig bad = parse_config_string("[kernel]\nname = box\nradius = 5\n");
  try {
    build_kernel(bad, GridSpec::unit_square(bad.n));
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_EQ(e.line(), 3);
  }
}

TEST(Config, CounterexamplePresetsAccepted) {
  for (const char* name : {"counterexample_a1", "counterexample_a3", "counterexample_a4"}) {
    const RunConfig c = parse_config_string(std::string("[problem]\npreset = ") + name + "\n");
    EXPECT_EQ(build_coefficients(c, GridSpec::unit_square(9)).name, name);
  }
}

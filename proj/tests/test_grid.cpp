#include <gtest/gtest.h>

#include <sstream>

#include "nlq/field_io.hpp"
#include "nlq/grid.hpp"
#include "test_support.hpp"

using namespace nlq;

TEST(GridSpec, DerivedSpacingAndCounts) {
  const GridSpec g(Rect{-1.0, 2.0, 3.0, 4.0}, 5, 3);
  EXPECT_DOUBLE_EQ(g.hx(), 1.0);
  EXPECT_DOUBLE_EQ(g.hy(), 1.0);
  EXPECT_EQ(g.num_nodes(), 15);
  EXPECT_EQ(g.num_triangles(), 2 * 4 * 2);
  EXPECT_THROW(GridSpec(Rect{}, 1, 4), InvalidParameter);
}

TEST(GridSpec, TrianglesSplitAlongRisingDiagonal) {
  const GridSpec g = GridSpec::unit_square(3);
  const auto lower = g.triangle(0);
  const auto upper = g.triangle(1);
  EXPECT_EQ(lower, (std::array<Index, 3>{0, 1, 4}));
  EXPECT_EQ(upper, (std::array<Index, 3>{0, 4, 3}));
  // Hat gradients sum to zero and reproduce the affine field x1.
  for (Index t = 0; t < g.num_triangles(); ++t) {
    const auto hg = g.hat_gradients(t);
    EXPECT_NEAR((hg[0] + hg[1] + hg[2]).norm(), 0.0, 1e-12);
    Vec2 grad = Vec2::Zero();
    const auto v = g.triangle(t);
    for (int k = 0; k < 3; ++k) grad += g.point(v[k]).x() * hg[k];
    EXPECT_NEAR((grad - Vec2(1.0, 0.0)).norm(), 0.0, 1e-12);
  }
}

TEST(DiscreteField, RejectsNonFiniteAndWrongSize) {
  const GridSpec g = GridSpec::unit_square(3);
  EXPECT_THROW(DiscreteField(g, Eigen::VectorXd::Zero(8)), InvalidParameter);
  Eigen::VectorXd v = Eigen::VectorXd::Zero(9);
  v[4] = std::nan("");
  EXPECT_THROW(DiscreteField(g, v), InvalidParameter);
}

TEST(Quadrature, InteriorWeightsSumToArea) {
  const GridSpec g(Rect{0.0, 0.0, 2.0, 3.0}, 9, 7);
  EXPECT_NEAR(interior_weights(g).sum(), 6.0, 1e-12);
}

TEST(Quadrature, BoundaryWeightsSumToPerimeter) {
  const GridSpec g(Rect{0.0, 0.0, 2.0, 3.0}, 9, 7);
  const BoundaryQuadrature q = boundary_quadrature(g);
  EXPECT_NEAR(q.weights.sum(), 10.0, 1e-12);
  double length = 0.0;
  for (const auto& e : q.edges) length += e.length;
  EXPECT_NEAR(length, 10.0, 1e-12);
  EXPECT_EQ(static_cast<Index>(q.edges.size()), 2 * (8 + 6));
  for (Index i = 0; i < g.num_nodes(); ++i) EXPECT_EQ(q.weights[i] > 0.0, g.is_boundary(i));
}

TEST(LpNorm, ConstantAndLinearExamples) {
  const GridSpec g = GridSpec::unit_square(65);
  EXPECT_NEAR(lp_norm(DiscreteField::constant(g, 1.0), 3.0), 1.0, 1e-12);
  const DiscreteField x1 = DiscreteField::sample(g, [](const Vec2& x) { return x.x(); });
  EXPECT_NEAR(lp_norm(x1, 2.0), 1.0 / std::sqrt(3.0), 1e-3);
  for (double p : {1.0, 2.0, 3.5})
    EXPECT_NEAR(lp_norm(DiscreteField::constant(g, 2.0), p, Region::boundary), 2.0 * std::pow(4.0, 1.0 / p), 1e-12);
  EXPECT_NEAR(lp_norm(x1, std::numeric_limits<double>::infinity()), 1.0, 0.0);
  EXPECT_THROW(lp_norm(x1, 0.5), InvalidExponent);
}

TEST(LpNorm, QuadratureConvergesAtLeastFirstOrder) {
  // int x1^2 x2 over the unit square = 1/6; L^1 norm of the product field.
  double prev = 0.0;
  for (Index n : {9, 17, 33, 65}) {
    const GridSpec g = GridSpec::unit_square(n);
    const DiscreteField u = DiscreteField::sample(g, [](const Vec2& x) { return x.x() * x.x() * x.y(); });
    const double err = std::abs(lp_norm(u, 1.0) - 1.0 / 6.0);
    if (prev > 0.0) {
      EXPECT_GT(std::log2(prev / err), 0.9);
    }
    prev = err;
  }
}

TEST(LpNorm, HomogeneityAndTriangleInequality) {
  std::mt19937 rng(7);
  const GridSpec g = GridSpec::unit_square(17);
  for (int k = 0; k < 50; ++k) {
    const DiscreteField u = oracle::random_field(g, rng);
    const DiscreteField v = oracle::random_field(g, rng);
    for (double p : {1.0, 1.5, 2.0, 4.0}) {
      EXPECT_NEAR(lp_norm(-3.5 * u, p), 3.5 * lp_norm(u, p), 1e-12);
      EXPECT_LE(lp_norm(u + v, p), lp_norm(u, p) + lp_norm(v, p) + 1e-12);
    }
  }
}

TEST(W1pNorm, Examples) {
  const GridSpec g = GridSpec::unit_square(65);
  EXPECT_NEAR(w1p_norm(DiscreteField::constant(g, -4.0), 2.0), 4.0, 1e-12);
  const DiscreteField x1 = DiscreteField::sample(g, [](const Vec2& x) { return x.x(); });
  EXPECT_NEAR(w1p_norm(x1, 2.0), 1.0 + 1.0 / std::sqrt(3.0), 1e-3);
  EXPECT_DOUBLE_EQ(w1p_norm(2.0 * x1, 3.0), 2.0 * w1p_norm(x1, 3.0));
}

TEST(Gradient, AffineAndConstantFields) {
  const GridSpec g(Rect{0.0, 0.0, 2.0, 1.0}, 7, 5);
  const VectorField ga = gradient(DiscreteField::sample(g, [](const Vec2& x) { return 3.0 * x.x() + 2.0 * x.y(); }));
  for (Index t = 0; t < g.num_triangles(); ++t) {
    EXPECT_NEAR(ga(t, 0), 3.0, 1e-12);
    EXPECT_NEAR(ga(t, 1), 2.0, 1e-12);
  }
  EXPECT_EQ(gradient(DiscreteField::constant(g, 5.0)).cwiseAbs().maxCoeff(), 0.0);
}

TEST(Gradient, HandComputedOnThreeByThree) {
  const GridSpec g = GridSpec::unit_square(3);  // h = 0.5
  Eigen::VectorXd v(9);
  v << 0.3, -1.2, 0.7, 2.0, 0.1, -0.4, 1.5, 0.9, -2.2;
  const VectorField grad = gradient(DiscreteField(g, v));
  // Cell (0,0): nodes u00 = v0, u10 = v1, u01 = v3, u11 = v4.
  EXPECT_NEAR(grad(0, 0), (v[1] - v[0]) / 0.5, 1e-12);
  EXPECT_NEAR(grad(0, 1), (v[4] - v[1]) / 0.5, 1e-12);
  EXPECT_NEAR(grad(1, 0), (v[4] - v[3]) / 0.5, 1e-12);
  EXPECT_NEAR(grad(1, 1), (v[3] - v[0]) / 0.5, 1e-12);
  // Cell (1,1): u00 = v4, u10 = v5, u01 = v7, u11 = v8.
  EXPECT_NEAR(grad(6, 0), (v[5] - v[4]) / 0.5, 1e-12);
  EXPECT_NEAR(grad(6, 1), (v[8] - v[5]) / 0.5, 1e-12);
  EXPECT_NEAR(grad(7, 0), (v[8] - v[7]) / 0.5, 1e-12);
  EXPECT_NEAR(grad(7, 1), (v[7] - v[4]) / 0.5, 1e-12);
}

TEST(Truncate, Examples) {
  const GridSpec g = GridSpec::unit_square(9);
  const DiscreteField x1 = DiscreteField::sample(g, [](const Vec2& x) { return x.x(); });
  const DiscreteField t = truncate(x1, 0.5);
  for (Index i = 0; i < g.num_nodes(); ++i) EXPECT_EQ(t[i], std::min(g.point(i).x(), 0.5));
  EXPECT_EQ(truncate(x1, 1.0).values, x1.values);
  EXPECT_EQ(truncate(t, 0.5).values, t.values);
  EXPECT_THROW(truncate(x1, 0.0), InvalidParameter);
}

TEST(Truncate, Monotone) {
  std::mt19937 rng(3);
  const GridSpec g = GridSpec::unit_square(9);
  for (int k = 0; k < 100; ++k) {
    const DiscreteField u = oracle::random_field(g, rng);
    const DiscreteField v(g, u.values.array() + oracle::random_field(g, rng, 0.0, 1.0).values.array());
    const Eigen::VectorXd d = truncate(v, 0.3).values - truncate(u, 0.3).values;
    EXPECT_GE(d.minCoeff(), 0.0);
  }
}

TEST(PosNegParts, Examples) {
  const GridSpec g = GridSpec::unit_square(9);
  const auto [p3, m3] = pos_neg_parts(DiscreteField::constant(g, -3.0));
  EXPECT_EQ(p3.values.cwiseAbs().maxCoeff(), 0.0);
  EXPECT_EQ(m3.values.minCoeff(), 3.0);
  const auto [pp, mm] = pos_neg_parts(DiscreteField::sample(g, [](const Vec2& x) { return x.x() - 0.5; }));
  for (Index i = 0; i < g.num_nodes(); ++i) EXPECT_EQ(pp[i], std::max(g.point(i).x() - 0.5, 0.0));
}

TEST(PosNegParts, ReconstructionIdentities) {
  std::mt19937 rng(11);
  const GridSpec g = GridSpec::unit_square(5);
  for (int k = 0; k < 1000; ++k) {
    const DiscreteField u = oracle::random_field(g, rng);
    const auto [p, m] = pos_neg_parts(u);
    EXPECT_EQ((p - m).values, u.values);
    EXPECT_EQ((p + m).values, u.values.cwiseAbs());
  }
}

TEST(FieldAlgebra, Examples) {
  const GridSpec g = GridSpec::unit_square(5);
  const DiscreteField four = DiscreteField::constant(g, 4.0);
  EXPECT_EQ(pointwise_power(four, 2.5).values, Eigen::VectorXd::Constant(25, 32.0));
  const DiscreteField x1 = DiscreteField::sample(g, [](const Vec2& x) { return x.x() - 0.3; });
  EXPECT_EQ((x1 + four).values, (x1.values.array() + 4.0).matrix());
  EXPECT_EQ(pointwise_multiply(x1, pointwise_power(truncate(four, 1.0), 0.0)).values, x1.values);
  EXPECT_THROW(pointwise_power(x1, 0.5), DomainError);
  EXPECT_NO_THROW(pointwise_power(x1, 3.0));
  EXPECT_THROW(x1 + DiscreteField::constant(GridSpec::unit_square(3), 1.0), AlignmentError);
}

TEST(Interpolate, ReproducesAffineFields) {
  const GridSpec g(Rect{-1.0, 0.0, 1.0, 2.0}, 6, 4);
  const DiscreteField u = DiscreteField::sample(g, [](const Vec2& x) { return 1.0 - 2.0 * x.x() + 0.5 * x.y(); });
  for (const Vec2& x : {Vec2(-0.93, 0.11), Vec2(0.37, 1.81), Vec2(1.0, 2.0), Vec2(-1.0, 0.0)})
    EXPECT_NEAR(interpolate(u, x), 1.0 - 2.0 * x.x() + 0.5 * x.y(), 1e-12);
}

TEST(FieldCsv, RoundTripIsExact) {
  std::mt19937 rng(5);
  const GridSpec g(Rect{-1.0, -1.0, 3.0, 3.0}, 9, 9);
  const DiscreteField u = oracle::random_field(g, rng);
  std::stringstream ss;
  write_field_csv(ss, u);
  const DiscreteField back = read_field_csv(ss);
  EXPECT_EQ(back.grid, g);
  EXPECT_EQ(back.values, u.values);
}

TEST(FieldCsv, MalformedHeaderRejected) {
  std::stringstream ss("# n 3 3\n1\n");
  EXPECT_THROW(read_field_csv(ss), InvalidParameter);
}

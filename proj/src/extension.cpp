#include "nlq/extension.hpp"

#include <cmath>

namespace nlq {

namespace {

double smoothstep(double s) { return s * s * (3.0 - 2.0 * s); }
double smoothstep_derivative(double s) { return 6.0 * s * (1.0 - s); }

// Folds a source-lattice coordinate in [-m, 3m] back into [0, m].
Index fold(Index s, Index m) {
  if (s > m) s = 2 * m - s;  // R4 / R3
  if (s < 0) s = -s;         // R2 / R1
  return s;
}

void require_unit_square(const GridSpec& g) {
  if (!(g.rect() == Rect{0.0, 0.0, 1.0, 1.0})) throw AlignmentError("extension source grid must be the unit square");
  if (g.nx() != g.ny()) throw AlignmentError("extension source grid must have equal spacing on both axes");
}

}  // namespace

double CutoffSpec::eta(double t) const {
  const double lo = -1.0 + margin;
  const double hi = 3.0 - margin;
  if (t <= lo || t >= hi) return 0.0;
  if (t < 0.0) return smoothstep((t - lo) / (0.0 - lo));
  if (t <= 1.0) return 1.0;
  return smoothstep((hi - t) / (hi - 1.0));
}

double CutoffSpec::eta_derivative(double t) const {
  const double lo = -1.0 + margin;
  const double hi = 3.0 - margin;
  if (t <= lo || t >= hi) return 0.0;
  if (t < 0.0) return smoothstep_derivative((t - lo) / (0.0 - lo)) / (0.0 - lo);
  if (t <= 1.0) return 0.0;
  return -smoothstep_derivative((hi - t) / (hi - 1.0)) / (hi - 1.0);
}

Vec2 CutoffSpec::psi_gradient(const Vec2& x) const {
  return {eta_derivative(x.x()) * eta(x.y()), eta(x.x()) * eta_derivative(x.y())};
}

GridSpec extended_grid(const GridSpec& source) {
  require_unit_square(source);
  const Index m = source.nx() - 1;
  return GridSpec(Rect{-1.0, -1.0, 3.0, 3.0}, 4 * m + 1, 4 * m + 1);
}

ExtensionOperator::ExtensionOperator(const GridSpec& source, CutoffSpec cutoff)
    : ExtensionOperator(source, extended_grid(source), cutoff) {}

ExtensionOperator::ExtensionOperator(const GridSpec& source, const GridSpec& target, CutoffSpec cutoff)
    : source_(source), target_(target), cutoff_(cutoff), m_(source.nx() - 1) {
  require_unit_square(source);
  if (!(target == extended_grid(source)))
    throw AlignmentError("extension target grid must be (-1,3)^2 with the source spacing");
  if (!(cutoff.margin > 0.0 && cutoff.margin < 1.0)) throw InvalidParameter("cutoff margin must lie in (0, 1)");
  // Nodes of the closed unit square get eta = 1 by index, not by coordinate round-off.
  Eigen::VectorXd eta_axis(target_.nx());
  for (Index i = 0; i < target_.nx(); ++i)
    eta_axis[i] = (i >= m_ && i <= 2 * m_) ? 1.0 : cutoff_.eta(target_.x(i));
  psi_.resize(target_.num_nodes());
  for (Index k = 0; k < target_.num_nodes(); ++k) psi_[k] = eta_axis[target_.node_i(k)] * eta_axis[target_.node_j(k)];
}

Index ExtensionOperator::preimage(Index target_node) const {
  const Index si = fold(target_.node_i(target_node) - m_, m_);
  const Index sj = fold(target_.node_j(target_node) - m_, m_);
  return source_.node(si, sj);
}

Index ExtensionOperator::embed(Index source_node) const {
  return target_.node(source_.node_i(source_node) + m_, source_.node_j(source_node) + m_);
}

DiscreteField ExtensionOperator::reflect_chain(const DiscreteField& u) const {
  require_same_grid(u.grid, source_, "reflect_chain");
  Eigen::VectorXd out(target_.num_nodes());
  for (Index k = 0; k < out.size(); ++k) out[k] = u[preimage(k)];
  return DiscreteField(target_, std::move(out));
}

ExtendedField ExtensionOperator::extend(const DiscreteField& u) const {
  DiscreteField reflected = reflect_chain(u);
  // psi is exactly 1 on the closed unit square, so source values are kept bit-for-bit.
  reflected.values.array() *= psi_.array();
  return ExtendedField{std::move(reflected)};
}

DiscreteField ExtensionOperator::restrict(const DiscreteField& on_target) const {
  require_same_grid(on_target.grid, target_, "restrict");
  Eigen::VectorXd out(source_.num_nodes());
  for (Index k = 0; k < out.size(); ++k) out[k] = on_target[embed(k)];
  return DiscreteField(source_, std::move(out));
}

double extension_norm_ratio(const ExtensionOperator& op, const DiscreteField& u, double p) {
  const double base = lp_norm(u, p);
  if (!(base > 0.0)) throw InvalidParameter("extension ratio of the zero field is undefined");
  return lp_norm(op.extend(u).field, p) / base;
}

double w1p_extension_ratio(const ExtensionOperator& op, const DiscreteField& u, double p) {
  const double base = w1p_norm(u, p);
  if (!(base > 0.0)) throw InvalidParameter("extension ratio of the zero field is undefined");
  return w1p_norm(op.extend(u).field, p) / base;
}

}  // namespace nlq

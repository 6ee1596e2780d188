#pragma once

#include "nlq/grid.hpp"

namespace nlq {

/// C^1 cutoff profile. eta = 1 on [0, 1], eta = 0 outside (-1 + margin, 3 - margin),
/// cubic smoothstep 3s^2 - 2s^3 on the two transition intervals.
struct CutoffSpec {
  double margin = 0.1;

  double eta(double t) const;
  double eta_derivative(double t) const;

  /// psi(x) = eta(x1) * eta(x2).
  double psi(const Vec2& x) const { return eta(x.x()) * eta(x.y()); }
  Vec2 psi_gradient(const Vec2& x) const;
};

/// A field on the extended square (-1, 3)^2. Values vanish on the outer ring of
/// nodes, and the field is read as zero on the rest of the plane.
struct ExtendedField {
  DiscreteField field;

  const GridSpec& grid() const { return field.grid; }
  const Eigen::VectorXd& values() const { return field.values; }
};

/// Reflection extension from (0,1)^2 to the plane:
/// E(u) = psi * (R4 R3 R2 R1 u) on (-1, 3)^2 and zero elsewhere, with
///   R1: x2 -> -x2 for x2 < 0,   R2: x1 -> -x1 for x1 < 0,
///   R3: x2 -> 2 - x2 for x2 > 1, R4: x1 -> 2 - x1 for x1 > 1.
/// Source and target grids share the spacing, so every reflected node is a node.
class ExtensionOperator {
 public:
  explicit ExtensionOperator(const GridSpec& source, CutoffSpec cutoff = {});
  ExtensionOperator(const GridSpec& source, const GridSpec& target, CutoffSpec cutoff = {});

  const GridSpec& source() const { return source_; }
  const GridSpec& target() const { return target_; }
  const CutoffSpec& cutoff() const { return cutoff_; }

  /// Source node whose value lands on target node `node` after the reflection chain.
  Index preimage(Index target_node) const;
  /// Target node coinciding with a source node.
  Index embed(Index source_node) const;

  DiscreteField reflect_chain(const DiscreteField& u) const;
  ExtendedField extend(const DiscreteField& u) const;
  /// Values of an extended field at the source nodes.
  DiscreteField restrict(const DiscreteField& on_target) const;

  /// psi sampled on the target nodes.
  const Eigen::VectorXd& cutoff_values() const { return psi_; }

 private:
  GridSpec source_;
  GridSpec target_;
  CutoffSpec cutoff_;
  Index m_;  // source cells per axis
  Eigen::VectorXd psi_;
};

/// The target grid on (-1, 3)^2 matching the spacing of a unit-square source.
GridSpec extended_grid(const GridSpec& source);

/// ||E u||_{L^p(extended)} / ||u||_{L^p(source)}.
double extension_norm_ratio(const ExtensionOperator& op, const DiscreteField& u, double p);
/// Same ratio for the W^{1,p} norm.
double w1p_extension_ratio(const ExtensionOperator& op, const DiscreteField& u, double p);

}  // namespace nlq

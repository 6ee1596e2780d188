#include "nlq/report_json.hpp"

namespace nlq {

using nlohmann::json;

json to_json(const FieldNorms& n) {
  return {{"lp", n.lp}, {"w1p", n.w1p}, {"linf", n.linf}, {"boundary_lp", n.boundary_lp}};
}

json to_json(const LocalReport& r) {
  json j = {{"converged", r.converged},
            {"iterations", r.iterations},
            {"regularized_steps", r.regularized_steps},
            {"residual_history", r.residual_history}};
  if (!r.message.empty()) j["message"] = r.message;
  return j;
}

json to_json(const SolveReport& r) {
  json steps = json::array();
  std::vector<int> inner;
  std::vector<double> updates;
  for (const auto& s : r.steps) {
    steps.push_back({{"inner", to_json(s.inner)}, {"update", s.update}, {"norms", to_json(s.norms)}});
    inner.push_back(s.inner.iterations);
    updates.push_back(s.update);
  }
  json j = {{"converged", r.converged},
            {"outer_iterations", r.outer_iterations},
            {"inner_iterations", inner},
            {"update_history", updates},
            {"final_residual", r.final_residual},
            {"norms", to_json(r.norms)},
            {"steps", steps}};
  if (!r.coercivity.empty()) {
    json rows = json::array();
    for (const auto& c : r.coercivity)
      rows.push_back({{"t", c.scale}, {"pairing", c.pairing}, {"norm", c.norm}, {"ratio", c.ratio}});
    j["coercivity"] = rows;
  }
  if (!r.message.empty()) j["message"] = r.message;
  return j;
}

json to_json(const EnergyCheck& c) {
  const EnergyTerms& t = c.terms;
  return {{"lhs", c.lhs},
          {"rhs", c.rhs},
          {"pass", c.pass},
          {"margin", c.margin},
          {"terms",
           {{"gradient", t.gradient},
            {"gradient_below", t.gradient_below},
            {"critical", t.critical},
            {"boundary", t.boundary},
            {"constant", t.constant},
            {"forcing", t.forcing},
            {"source_level", t.source_level},
            {"source_slope", t.source_slope}}}};
}

json to_json(const BoundednessReport& r) {
  json thresholds = json::array();
  for (const auto& t : r.sup_limit.thresholds)
    thresholds.push_back({{"t", t.t},
                          {"measure", t.measure},
                          {"skipped", t.skipped},
                          {"holds_every_r", t.holds_every_r},
                          {"limit_exceeds", t.limit_exceeds}});
  json energy = json::array();
  for (const auto& e : r.energy) energy.push_back(to_json(e));
  json probe = {{"kappa", r.probe.kappa},
                {"h", r.probe.h},
                {"q_ratio", r.probe.q_ratio},
                {"infinite_critical", r.probe.infinite_critical},
                {"ladder", r.probe.ladder},
                {"norms", r.probe.norms}};
  if (r.probe.q1) probe["q1"] = *r.probe.q1;
  if (r.probe.q2) probe["q2"] = *r.probe.q2;
  return {{"verdict", r.certified ? "bounded, certified at desk scale" : (r.bounded ? "bounded" : "unbounded")},
          {"bounded", r.bounded},
          {"certified", r.certified},
          {"anomaly", r.anomaly},
          {"nodal_max", r.nodal_max},
          {"boundary_max", r.boundary_max},
          {"probe", probe},
          {"boundary_norms", r.boundary_norms},
          {"sup_limit",
           {{"thresholds", thresholds},
            {"largest_r_norm", r.sup_limit.largest_r_norm},
            {"nodal_max", r.sup_limit.nodal_max},
            {"limit_matches_max", r.sup_limit.limit_matches_max},
            {"pass", r.sup_limit.pass}}},
          {"energy", energy},
          {"failures", r.failures}};
}

json to_json(const MmsStudy& s) {
  json rows = json::array();
  for (const auto& r : s.rows) {
    json row = {{"n", r.n},
                {"h", r.h},
                {"l2_error", r.l2_error},
                {"w1p_error", r.w1p_error},
                {"converged", r.converged},
                {"newton_iterations", r.newton_iterations}};
    row["l2_order"] = r.l2_order ? json(*r.l2_order) : json(nullptr);
    row["w1p_order"] = r.w1p_order ? json(*r.w1p_order) : json(nullptr);
    rows.push_back(row);
  }
  return {{"solution", s.solution}, {"p", s.p}, {"neumann_mismatch", s.neumann_mismatch}, {"rows", rows}, {"warnings", s.warnings}};
}

json to_json(const Verdict& v) {
  json violations = json::array();
  for (const auto& x : v.violations) violations.push_back({{"clause", x.clause}, {"detail", x.detail}});
  return {{"ok", v.ok()}, {"summary", v.summary()}, {"violations", violations}};
}

}  // namespace nlq

#pragma once

#include "json.hpp"

#include "nlq/moser.hpp"
#include "nlq/solver.hpp"
#include "nlq/structure.hpp"

namespace nlq {

nlohmann::json to_json(const FieldNorms& n);
nlohmann::json to_json(const LocalReport& r);
/// Convergence flag, outer/inner iteration counts, residual and update histories, norms.
nlohmann::json to_json(const SolveReport& r);
nlohmann::json to_json(const EnergyCheck& c);
nlohmann::json to_json(const BoundednessReport& r);
nlohmann::json to_json(const MmsStudy& s);
nlohmann::json to_json(const Verdict& v);

}  // namespace nlq

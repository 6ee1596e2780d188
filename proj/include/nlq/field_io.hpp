#pragma once

#include <iosfwd>
#include <string>

#include "nlq/grid.hpp"

namespace nlq {

/// Grid CSV: `# rect x_min y_min x_max y_max`, `# n nx ny`, then one value per
/// line in row-major node order. Values are written with 17 significant digits
/// so a write/read cycle reproduces every double exactly.
void write_field_csv(std::ostream& out, const DiscreteField& field);
DiscreteField read_field_csv(std::istream& in);

void save_field_csv(const std::string& path, const DiscreteField& field);
DiscreteField load_field_csv(const std::string& path);

}  // namespace nlq

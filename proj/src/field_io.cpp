#include "nlq/field_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace nlq {

namespace {

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string next_header(std::istream& in, const char* tag) {
  std::string line;
  if (!std::getline(in, line)) throw InvalidParameter(std::string("field csv: missing '# ") + tag + "' header");
  std::istringstream ls(line);
  std::string hash, key;
  ls >> hash >> key;
  if (hash != "#" || key != tag) throw InvalidParameter(std::string("field csv: expected '# ") + tag + "', got '" + line + "'");
  std::string rest;
  std::getline(ls, rest);
  return rest;
}

}  // namespace

void write_field_csv(std::ostream& out, const DiscreteField& field) {
  const Rect& r = field.grid.rect();
  out << "# rect " << format_double(r.x_min) << ' ' << format_double(r.y_min) << ' ' << format_double(r.x_max) << ' '
      << format_double(r.y_max) << '\n';
  out << "# n " << field.grid.nx() << ' ' << field.grid.ny() << '\n';
  for (Index k = 0; k < field.values.size(); ++k) out << format_double(field.values[k]) << '\n';
}

DiscreteField read_field_csv(std::istream& in) {
  Rect r;
  {
    std::istringstream ls(next_header(in, "rect"));
    if (!(ls >> r.x_min >> r.y_min >> r.x_max >> r.y_max)) throw InvalidParameter("field csv: malformed rect header");
  }
  Index nx = 0, ny = 0;
  {
    std::istringstream ls(next_header(in, "n"));
    if (!(ls >> nx >> ny)) throw InvalidParameter("field csv: malformed n header");
  }
  GridSpec grid(r, nx, ny);
  Eigen::VectorXd values(grid.num_nodes());
  std::string line;
  for (Index k = 0; k < grid.num_nodes(); ++k) {
    if (!std::getline(in, line)) throw InvalidParameter("field csv: expected " + std::to_string(grid.num_nodes()) + " values");
    values[k] = std::stod(line);
  }
  return DiscreteField(grid, std::move(values));
}

void save_field_csv(const std::string& path, const DiscreteField& field) {
  std::ofstream out(path);
  if (!out) throw InvalidParameter("cannot open " + path + " for writing");
  write_field_csv(out, field);
}

DiscreteField load_field_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidParameter("cannot open " + path);
  return read_field_csv(in);
}

}  // namespace nlq

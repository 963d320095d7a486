#include "capmax/io.hpp"

#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace capmax {

std::string format_double(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (std::isnan(v)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
    out << content;
    if (!out) throw std::runtime_error("write failed for " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

std::string field_csv(const ScalarField& field) {
  std::ostringstream os;
  os << (field.grid.dim == 1 ? "index,x,value\n" : "index,x,y,value\n");
  const std::int64_t count = field.grid.cell_count();
  for (std::int64_t id = 0; id < count; ++id) {
    const Point c = field.grid.cell_center(id);
    os << id << ',' << format_double(c[0]);
    if (field.grid.dim > 1) os << ',' << format_double(c[1]);
    os << ',' << format_double(field.samples[static_cast<std::size_t>(id)]) << '\n';
  }
  return os.str();
}

ScalarField read_field_csv(const std::filesystem::path& path, const Grid& grid) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read field CSV " + path.string());
  ScalarField field;
  field.grid = grid;
  field.samples.assign(static_cast<std::size_t>(grid.cell_count()), 0.0);
  field.descriptor = "csv:" + path.filename().string();
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("empty field CSV " + path.string());
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string tok;
    std::vector<std::string> cols;
    while (std::getline(ls, tok, ',')) cols.push_back(tok);
    if (cols.size() < 2) throw std::runtime_error("malformed field CSV row: " + line);
    const std::int64_t id = std::stoll(cols.front());
    if (id < 0 || id >= grid.cell_count())
      throw std::runtime_error("field CSV cell index out of range: " + cols.front());
    const double v = std::stod(cols.back());
    if (v < 0.0) throw std::runtime_error("field CSV sample must be nonnegative: " + cols.back());
    field.samples[static_cast<std::size_t>(id)] = v;
  }
  return field;
}

std::string maximal_field_csv(const MaximalField& mfield) {
  std::ostringstream os;
  const int dim = mfield.points.empty() ? 1 : mfield.points.front().dim;
  os << (dim == 1 ? "x,value\n" : "x,y,value\n");
  for (std::size_t i = 0; i < mfield.points.size(); ++i) {
    const Point& p = mfield.points[i];
    os << format_double(p[0]);
    if (dim > 1) os << ',' << format_double(p[1]);
    os << ',' << format_double(mfield.values[i]) << '\n';
  }
  return os.str();
}

std::string curve_csv(const WeakTypeCurve& curve) {
  std::ostringstream os;
  os << "lambda,h_lower,h_upper,set_mode,inscribed_radius,enclosing_radius\n";
  for (const CurveEntry& e : curve.entries) {
    os << format_double(e.lambda) << ',' << format_double(e.h_lower) << ','
       << format_double(e.h_upper) << ','
       << (e.set_mode == LevelSetApprox::Rep::cells ? "cells" : "rays") << ','
       << format_double(e.inscribed_radius) << ',' << format_double(e.enclosing_radius) << '\n';
  }
  return os.str();
}

std::string level_set_csv(const LevelSetApprox& set) {
  std::ostringstream os;
  if (set.rep == LevelSetApprox::Rep::cells) {
    os << (set.grid.dim == 1 ? "index,x\n" : "index,x,y\n");
    for (std::int64_t id : set.cell_ids) {
      const Point c = set.grid.cell_center(id);
      os << id << ',' << format_double(c[0]);
      if (set.grid.dim > 1) os << ',' << format_double(c[1]);
      os << '\n';
    }
    return os.str();
  }
  const int dim = set.center.dim;
  os << (dim == 1 ? "dir_x,r_in,r_out\n" : "dir_x,dir_y,r_in,r_out\n");
  for (const RayCrossing& c : set.crossings) {
    os << format_double(c.dir[0]);
    if (dim > 1) os << ',' << format_double(c.dir[1]);
    os << ',' << format_double(c.r_in) << ',' << format_double(c.r_out) << '\n';
  }
  return os.str();
}

std::string ball_family_csv(const BallFamily& family) {
  std::ostringstream os;
  const int dim = family.balls.empty() ? 1 : family.balls.front().center.dim;
  os << (dim == 1 ? "center_x,radius\n" : "center_x,center_y,radius\n");
  for (const Ball& b : family.balls) {
    os << format_double(b.center[0]);
    if (dim > 1) os << ',' << format_double(b.center[1]);
    os << ',' << format_double(b.radius) << '\n';
  }
  return os.str();
}

}  // namespace capmax

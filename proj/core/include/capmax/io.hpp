// CSV/JSON artifact writers.  Doubles are printed with 17 significant digits
// so downstream plots reproduce the computed values exactly; +infinity is
// serialized as "inf".  Files are written atomically (temp file + rename).

#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "capmax/maximal.hpp"
#include "capmax/sampling.hpp"
#include "capmax/setcap.hpp"
#include "capmax/weaktype.hpp"

namespace capmax {

std::string format_double(double v);

// Writes `content` to `path` via a sibling temp file and an atomic rename.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

std::string field_csv(const ScalarField& field);
ScalarField read_field_csv(const std::filesystem::path& path, const Grid& grid);

std::string maximal_field_csv(const MaximalField& mfield);
std::string curve_csv(const WeakTypeCurve& curve);
std::string level_set_csv(const LevelSetApprox& set);
std::string ball_family_csv(const BallFamily& family);

}  // namespace capmax

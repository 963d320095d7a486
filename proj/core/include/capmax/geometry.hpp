// Small fixed-capacity point/ball types shared by every module.
// The engine is written for runtime dimension dim <= kMaxDim; only
// dim in {1, 2} is constructed and exercised.

#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <stdexcept>

namespace capmax {

inline constexpr int kMaxDim = 2;

struct Point {
  std::array<double, kMaxDim> coord{};
  int dim = 1;

  Point() = default;
  explicit Point(double x) : coord{x, 0.0}, dim(1) {}
  Point(double x, double y) : coord{x, y}, dim(2) {}

  double operator[](int i) const { return coord[static_cast<std::size_t>(i)]; }
  double& operator[](int i) { return coord[static_cast<std::size_t>(i)]; }
};

inline Point make_point(int dim, double x, double y = 0.0) {
  if (dim < 1 || dim > kMaxDim) throw std::invalid_argument("point dimension must be 1 or 2");
  Point p;
  p.dim = dim;
  p.coord[0] = x;
  if (dim > 1) p.coord[1] = y;
  return p;
}

inline double squared_distance(const Point& a, const Point& b) {
  double s = 0.0;
  for (int i = 0; i < a.dim; ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return s;
}

inline double distance(const Point& a, const Point& b) { return std::sqrt(squared_distance(a, b)); }

inline double norm(const Point& a) {
  double s = 0.0;
  for (int i = 0; i < a.dim; ++i) s += a[i] * a[i];
  return std::sqrt(s);
}

inline Point add(const Point& a, const Point& b) {
  Point r = a;
  for (int i = 0; i < a.dim; ++i) r[i] = a[i] + b[i];
  return r;
}

inline Point sub(const Point& a, const Point& b) {
  Point r = a;
  for (int i = 0; i < a.dim; ++i) r[i] = a[i] - b[i];
  return r;
}

inline Point scale(const Point& a, double t) {
  Point r = a;
  for (int i = 0; i < a.dim; ++i) r[i] = t * a[i];
  return r;
}

// Unit direction; dim 1 directions are +1/-1, dim 2 come from an angle.
inline Point direction_from_angle(double theta) { return Point(std::cos(theta), std::sin(theta)); }

struct Ball {
  Point center;
  double radius = 0.0;
};

inline bool lexicographic_less(const Point& a, const Point& b) {
  for (int i = 0; i < a.dim; ++i) {
    if (a[i] < b[i]) return true;
    if (a[i] > b[i]) return false;
  }
  return false;
}

}  // namespace capmax

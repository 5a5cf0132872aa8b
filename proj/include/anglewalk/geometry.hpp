#pragma once

#include <cmath>

namespace anglewalk {

// Plain 2d vector. Doubles throughout; no tolerance magic here.
struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  friend Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
  friend Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
  friend Vec2 operator*(Vec2 a, double s) { return {a.x * s, a.y * s}; }
  friend Vec2 operator*(double s, Vec2 a) { return a * s; }
  Vec2& operator+=(Vec2 b) {
    x += b.x;
    y += b.y;
    return *this;
  }
};

inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }

// z-component of the 3d cross product; twice the signed triangle area.
inline double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }

inline double norm_sq(Vec2 a) { return a.x * a.x + a.y * a.y; }

inline double norm(Vec2 a) { return std::sqrt(norm_sq(a)); }

// Multiply by the unit complex number (c, s) = (cos t, sin t): rotation by t.
inline Vec2 rotated(Vec2 v, double c, double s) {
  return {v.x * c - v.y * s, v.x * s + v.y * c};
}

}  // namespace anglewalk

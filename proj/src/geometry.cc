// Copyright 2026 The postgen Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "postgen/geometry.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

#include "postgen/errors.h"

namespace postgen
{

double distance(const Point2 & a, const Point2 & b) { return std::hypot(a.x - b.x, a.y - b.y); }

double cross(const Point2 & a, const Point2 & b) { return a.x * b.y - a.y * b.x; }

double dot(const Point2 & a, const Point2 & b) { return a.x * b.x + a.y * b.y; }

double normalize_angle(double angle)
{
  constexpr double kTwoPi = 2.0 * std::numbers::pi;
  double a = std::fmod(angle, kTwoPi);
  if (a <= -std::numbers::pi) {
    a += kTwoPi;
  } else if (a > std::numbers::pi) {
    a -= kTwoPi;
  }
  return a;
}

Curve::Curve(std::vector<Point2> points) : points_(std::move(points))
{
  if (points_.size() < 2) {
    throw ValidationError("curve needs at least 2 vertices, got " + std::to_string(points_.size()));
  }
  cumulative_s_.reserve(points_.size());
  cumulative_s_.push_back(0.0);
  for (std::size_t i = 0; i < points_.size(); ++i) {
    const Point2 & p = points_[i];
    if (!std::isfinite(p.x) || !std::isfinite(p.y)) {
      throw ValidationError("curve vertex " + std::to_string(i) + " is not finite");
    }
    if (i == 0) {
      continue;
    }
    const double ds = distance(points_[i - 1], p);
    if (ds <= 0.0) {
      throw ValidationError("curve has duplicate consecutive vertices at index " + std::to_string(i));
    }
    cumulative_s_.push_back(cumulative_s_.back() + ds);
  }
}

std::size_t Curve::segment_index(double s) const
{
  // first vertex with cumulative_s > s, minus one
  const auto it = std::upper_bound(cumulative_s_.begin(), cumulative_s_.end(), s);
  if (it == cumulative_s_.begin()) {
    return 0;
  }
  const auto idx = static_cast<std::size_t>(std::distance(cumulative_s_.begin(), it)) - 1;
  return std::min(idx, points_.size() - 2);
}

double curve_length(const Curve & curve) { return curve.length(); }

Pose2 point_at_s(const Curve & curve, double s)
{
  if (!(s >= 0.0) || !std::isfinite(s)) {
    throw std::domain_error("point_at_s: arc length must be finite and >= 0");
  }
  const std::size_t k = curve.segment_index(s);
  const Point2 & a = curve.points()[k];
  const Point2 & b = curve.points()[k + 1];
  const double seg_len = curve.cumulative_s()[k + 1] - curve.cumulative_s()[k];
  const double u = (s - curve.cumulative_s()[k]) / seg_len;
  const Point2 delta = b - a;
  return {a + u * delta, std::atan2(delta.y, delta.x)};
}

double menger_curvature(const Point2 & a, const Point2 & b, const Point2 & c)
{
  const double ab = distance(a, b);
  const double bc = distance(b, c);
  const double ca = distance(c, a);
  const double denom = ab * bc * ca;
  if (denom <= 0.0) {
    return 0.0;
  }
  return 2.0 * cross(b - a, c - a) / denom;
}

double curvature_at_s(const Curve & curve, double s)
{
  const std::size_t n = curve.size();
  if (n < 3 || s > curve.length()) {
    return 0.0;
  }
  const std::size_t k = curve.segment_index(s);
  const auto & cs = curve.cumulative_s();
  std::size_t center = (s - cs[k] <= cs[k + 1] - s) ? k : k + 1;
  center = std::clamp<std::size_t>(center, 1, n - 2);
  const auto & pts = curve.points();
  return menger_curvature(pts[center - 1], pts[center], pts[center + 1]);
}

Projection project_point(const Curve & curve, const Point2 & p)
{
  const auto & pts = curve.points();
  const auto & cs = curve.cumulative_s();
  Projection best;
  best.distance = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k + 1 < pts.size(); ++k) {
    const Point2 ab = pts[k + 1] - pts[k];
    const Point2 ap = p - pts[k];
    const double len = cs[k + 1] - cs[k];
    const double u = std::clamp(dot(ap, ab) / (len * len), 0.0, 1.0);
    const Point2 foot = pts[k] + u * ab;
    const double d = distance(p, foot);
    if (d < best.distance) {
      best.distance = d;
      best.s = cs[k] + u * len;
      best.lateral = cross(ab, ap) / len;
    }
  }
  return best;
}

bool point_in_polygon(std::span<const Point2> polygon, const Point2 & p)
{
  bool inside = false;
  const std::size_t n = polygon.size();
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    const Point2 & a = polygon[i];
    const Point2 & b = polygon[j];
    if ((a.y > p.y) != (b.y > p.y)) {
      const double x_cross = a.x + (p.y - a.y) * (b.x - a.x) / (b.y - a.y);
      if (p.x < x_cross) {
        inside = !inside;
      }
    }
  }
  return inside;
}

double distance_to_polygon_boundary(std::span<const Point2> polygon, const Point2 & p)
{
  double best = std::numeric_limits<double>::infinity();
  const std::size_t n = polygon.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Point2 & a = polygon[i];
    const Point2 & b = polygon[(i + 1) % n];
    const Point2 ab = b - a;
    const double len2 = dot(ab, ab);
    const double u = len2 > 0.0 ? std::clamp(dot(p - a, ab) / len2, 0.0, 1.0) : 0.0;
    best = std::min(best, distance(p, a + u * ab));
  }
  return best;
}

}  // namespace postgen

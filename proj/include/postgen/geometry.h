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

#pragma once

#include <span>
#include <vector>

namespace postgen
{

struct Point2
{
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point2 &, const Point2 &) = default;
};

inline Point2 operator+(const Point2 & a, const Point2 & b) { return {a.x + b.x, a.y + b.y}; }
inline Point2 operator-(const Point2 & a, const Point2 & b) { return {a.x - b.x, a.y - b.y}; }
inline Point2 operator*(double k, const Point2 & p) { return {k * p.x, k * p.y}; }

double distance(const Point2 & a, const Point2 & b);
double cross(const Point2 & a, const Point2 & b);
double dot(const Point2 & a, const Point2 & b);

/// Wraps an angle into (-pi, pi].
double normalize_angle(double angle);

struct Pose2
{
  Point2 point;
  double heading = 0.0;
};

struct Projection
{
  double s = 0.0;
  /// Signed offset from the closest segment's supporting line, positive on the left.
  double lateral = 0.0;
  /// Euclidean distance to the closest point of the polyline.
  double distance = 0.0;
};

/// Planar polyline with cumulative arc length per vertex.
///
/// At least two vertices, all finite, no two consecutive vertices equal.
/// A vertex belongs to its outgoing segment; the end vertex belongs to the last segment.
class Curve
{
public:
  /// Throws ValidationError on fewer than two vertices, non-finite coordinates,
  /// or consecutive duplicates.
  explicit Curve(std::vector<Point2> points);

  const std::vector<Point2> & points() const { return points_; }
  const std::vector<double> & cumulative_s() const { return cumulative_s_; }
  std::size_t size() const { return points_.size(); }
  double length() const { return cumulative_s_.back(); }

  /// Index k of the segment [k, k+1] that owns arc length s (clamped to the valid range).
  std::size_t segment_index(double s) const;

private:
  std::vector<Point2> points_;
  std::vector<double> cumulative_s_;
};

double curve_length(const Curve & curve);

/// Linear interpolation along the curve. Past the end the final segment's tangent is
/// extended. Throws std::domain_error for negative or non-finite s.
Pose2 point_at_s(const Curve & curve, double s);

/// Signed Menger curvature of the vertex triple around s (positive for left turns).
/// Zero for two-vertex curves and beyond the end of the curve.
double curvature_at_s(const Curve & curve, double s);

/// Signed curvature of the circle through three points; zero if any two coincide or
/// the points are collinear.
double menger_curvature(const Point2 & a, const Point2 & b, const Point2 & c);

/// Closest point on the polyline. Ties resolve to the smaller s.
Projection project_point(const Curve & curve, const Point2 & p);

/// Even-odd containment test; the polygon is implicitly closed.
bool point_in_polygon(std::span<const Point2> polygon, const Point2 & p);

/// Distance from p to the closed polygon's boundary.
double distance_to_polygon_boundary(std::span<const Point2> polygon, const Point2 & p);

}  // namespace postgen

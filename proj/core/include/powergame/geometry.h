// Copyright 2026 The powergame Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef POWERGAME_GEOMETRY_H_
#define POWERGAME_GEOMETRY_H_

#include <span>
#include <vector>

namespace powergame {

struct Point2 {
  double x = 0.0;
  double y = 0.0;

  bool operator==(const Point2&) const = default;
};

inline Point2 operator+(Point2 a, Point2 b) { return {a.x + b.x, a.y + b.y}; }
inline Point2 operator*(double s, Point2 p) { return {s * p.x, s * p.y}; }

// Convex hull by monotone chain: counter-clockwise, starting at the
// lexicographically smallest point, collinear and duplicate points dropped.
std::vector<Point2> ConvexHull(std::vector<Point2> points);

// Convex hull of the Minkowski sum of two convex polygons.
std::vector<Point2> MinkowskiSum(std::span<const Point2> a,
                                 std::span<const Point2> b);

// Whether p lies in the closed convex polygon (counter-clockwise), allowing
// a distance of `tolerance` outside it.
bool ContainsPoint(std::span<const Point2> hull, Point2 p, double tolerance);

// Intersection of a convex polygon with {x >= x_min, y >= y_min}.
std::vector<Point2> ClipToQuadrant(std::span<const Point2> hull, double x_min,
                                   double y_min);

// Every vertex is a strict left turn (counter-clockwise, no collinear
// vertices).
bool IsStrictlyConvex(std::span<const Point2> hull);

}  // namespace powergame

#endif  // POWERGAME_GEOMETRY_H_

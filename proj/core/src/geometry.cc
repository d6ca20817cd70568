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

#include "powergame/geometry.h"

#include <algorithm>
#include <cmath>

namespace powergame {
namespace {

constexpr double kCollinearTolerance = 1e-13;

double Cross(Point2 o, Point2 a, Point2 b) {
  return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

bool LexLess(Point2 a, Point2 b) {
  return a.x < b.x || (a.x == b.x && a.y < b.y);
}

}  // namespace

std::vector<Point2> ConvexHull(std::vector<Point2> points) {
  std::sort(points.begin(), points.end(), LexLess);
  points.erase(std::unique(points.begin(), points.end()), points.end());
  if (points.size() < 3) return points;

  // Turns this close to zero, relative to the squared extent of the set,
  // count as collinear so rounding noise never creates spurious vertices.
  double extent = 0.0;
  for (const Point2& p : points) {
    extent = std::max({extent, std::abs(p.x - points.front().x),
                       std::abs(p.y - points.front().y)});
  }
  const double eps = kCollinearTolerance * extent * extent;

  std::vector<Point2> hull(2 * points.size());
  std::size_t k = 0;
  for (const Point2& p : points) {
    while (k >= 2 && Cross(hull[k - 2], hull[k - 1], p) <= eps) --k;
    hull[k++] = p;
  }
  for (std::size_t i = points.size() - 1, lower = k + 1; i-- > 0;) {
    while (k >= lower && Cross(hull[k - 2], hull[k - 1], points[i]) <= eps) --k;
    hull[k++] = points[i];
  }
  hull.resize(k - 1);
  return hull;
}

std::vector<Point2> MinkowskiSum(std::span<const Point2> a,
                                 std::span<const Point2> b) {
  if (a.empty()) return {b.begin(), b.end()};
  if (b.empty()) return {a.begin(), a.end()};
  std::vector<Point2> sums;
  sums.reserve(a.size() * b.size());
  for (const Point2& p : a) {
    for (const Point2& q : b) sums.push_back(p + q);
  }
  return ConvexHull(std::move(sums));
}

bool ContainsPoint(std::span<const Point2> hull, Point2 p, double tolerance) {
  if (hull.empty()) return false;
  if (hull.size() == 1) {
    return std::hypot(p.x - hull[0].x, p.y - hull[0].y) <= tolerance;
  }
  if (hull.size() == 2) {
    const Point2 a = hull[0];
    const Point2 b = hull[1];
    const double len = std::hypot(b.x - a.x, b.y - a.y);
    const double along =
        ((p.x - a.x) * (b.x - a.x) + (p.y - a.y) * (b.y - a.y)) / (len * len);
    const double t = std::clamp(along, 0.0, 1.0);
    return std::hypot(p.x - (a.x + t * (b.x - a.x)),
                      p.y - (a.y + t * (b.y - a.y))) <= tolerance;
  }
  for (std::size_t i = 0; i < hull.size(); ++i) {
    const Point2 a = hull[i];
    const Point2 b = hull[(i + 1) % hull.size()];
    const double len = std::hypot(b.x - a.x, b.y - a.y);
    // Signed distance to the edge line, positive inside.
    if (Cross(a, b, p) / len < -tolerance) return false;
  }
  return true;
}

std::vector<Point2> ClipToQuadrant(std::span<const Point2> hull, double x_min,
                                   double y_min) {
  // Sutherland-Hodgman against two half-planes.
  auto clip = [](const std::vector<Point2>& poly, auto inside, auto cut) {
    std::vector<Point2> out;
    for (std::size_t i = 0; i < poly.size(); ++i) {
      const Point2 cur = poly[i];
      const Point2 prev = poly[(i + poly.size() - 1) % poly.size()];
      const bool in_cur = inside(cur);
      const bool in_prev = inside(prev);
      if (in_cur) {
        if (!in_prev) out.push_back(cut(prev, cur));
        out.push_back(cur);
      } else if (in_prev) {
        out.push_back(cut(prev, cur));
      }
    }
    return out;
  };
  std::vector<Point2> poly(hull.begin(), hull.end());
  poly = clip(
      poly, [&](Point2 p) { return p.x >= x_min; },
      [&](Point2 a, Point2 b) {
        const double t = (x_min - a.x) / (b.x - a.x);
        return Point2{x_min, a.y + t * (b.y - a.y)};
      });
  poly = clip(
      poly, [&](Point2 p) { return p.y >= y_min; },
      [&](Point2 a, Point2 b) {
        const double t = (y_min - a.y) / (b.y - a.y);
        return Point2{a.x + t * (b.x - a.x), y_min};
      });
  return ConvexHull(std::move(poly));
}

bool IsStrictlyConvex(std::span<const Point2> hull) {
  if (hull.size() < 3) return true;
  for (std::size_t i = 0; i < hull.size(); ++i) {
    const Point2 a = hull[i];
    const Point2 b = hull[(i + 1) % hull.size()];
    const Point2 c = hull[(i + 2) % hull.size()];
    if (Cross(a, b, c) <= 0.0) return false;
  }
  return true;
}

}  // namespace powergame

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

// Reference computations written from the model definitions only. Nothing
// here calls into the library, so tests can cross-check it.

#ifndef POWERGAME_TESTS_ORACLES_H_
#define POWERGAME_TESTS_ORACLES_H_

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <utility>
#include <vector>

namespace oracle {

// Plain bisection; requires a sign change on [lo, hi].
inline double Bisect(const std::function<double(double)>& g, double lo,
                     double hi, int iterations = 200) {
  double glo = g(lo);
  for (int it = 0; it < iterations; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double gm = g(mid);
    if ((gm > 0) == (glo > 0)) {
      lo = mid;
      glo = gm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

inline double F(double a, double x) { return x > 0 ? std::exp(-a / x) : 0.0; }
inline double FPrime(double a, double x) {
  return x > 0 ? a / (x * x) * std::exp(-a / x) : 0.0;
}

// Root of x f'(x) - f(x).
inline double BetaStar(double a) {
  return Bisect([a](double x) { return x * FPrime(a, x) - F(a, x); },
                a / 600.0, 1e3);
}

// Root of x [1 - (K-1) x] f'(x) - f(x) on (0, 1/(K-1)).
inline double GammaTilde(double a, int k) {
  const double hi = k == 1 ? 1e3 : 1.0 / (k - 1);
  return Bisect(
      [a, k](double x) {
        return x * (1.0 - (k - 1) * x) * FPrime(a, x) - F(a, x);
      },
      a / 600.0, hi);
}

inline double Sinr(const std::vector<double>& eta, const std::vector<double>& p,
                   double noise, std::size_t i) {
  double interference = noise;
  for (std::size_t j = 0; j < eta.size(); ++j) {
    if (j != i) interference += p[j] * eta[j];
  }
  return p[i] * eta[i] / interference;
}

inline double Utility(double rate, double a, const std::vector<double>& eta,
                      const std::vector<double>& p, double noise,
                      std::size_t i) {
  if (p[i] == 0.0) return 0.0;
  return rate * F(a, Sinr(eta, p, noise, i)) / p[i];
}

// Powers giving every member of `active` the same SINR `target`, others 0:
// p_i eta_i = target (sum_{j != i} p_j eta_j + noise) solved as a linear
// system in the received powers q_i = p_i eta_i by Gauss-Jordan elimination.
inline std::vector<double> EqualSinrPowers(const std::vector<double>& eta,
                                           const std::vector<int>& active,
                                           double target, double noise) {
  const std::size_t n = active.size();
  std::vector<std::vector<double>> m(n, std::vector<double>(n + 1, 0.0));
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < n; ++c) m[r][c] = r == c ? 1.0 : -target;
    m[r][n] = target * noise;
  }
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    for (std::size_t r = c + 1; r < n; ++r) {
      if (std::abs(m[r][c]) > std::abs(m[piv][c])) piv = r;
    }
    std::swap(m[c], m[piv]);
    for (std::size_t r = 0; r < n; ++r) {
      if (r == c) continue;
      const double factor = m[r][c] / m[c][c];
      for (std::size_t k = c; k <= n; ++k) m[r][k] -= factor * m[c][k];
    }
  }
  std::vector<double> p(eta.size(), 0.0);
  for (std::size_t r = 0; r < n; ++r) {
    p[active[r]] = m[r][n] / m[r][r] / eta[active[r]];
  }
  return p;
}

// Welfare-maximizing subset among all 2^K - 1 nonempty subsets, each
// playing its equal-SINR operating point. Ascending indices.
inline std::vector<int> BruteForceBus(double rate, double a,
                                      const std::vector<double>& eta,
                                      double noise) {
  const int k = static_cast<int>(eta.size());
  double best = -1.0;
  std::vector<int> best_set;
  for (unsigned mask = 1; mask < (1u << k); ++mask) {
    std::vector<int> set;
    for (int i = 0; i < k; ++i) {
      if (mask & (1u << i)) set.push_back(i);
    }
    const double target = GammaTilde(a, static_cast<int>(set.size()));
    const auto p = EqualSinrPowers(eta, set, target, noise);
    double w = 0.0;
    for (int i : set) w += Utility(rate, a, eta, p, noise, i);
    if (w > best) {
      best = w;
      best_set = set;
    }
  }
  return best_set;
}

// Composite Simpson on [lo, hi].
inline double Simpson(const std::function<double(double)>& g, double lo,
                      double hi, int panels = 20000) {
  const double h = (hi - lo) / panels;
  double s = g(lo) + g(hi);
  for (int i = 1; i < panels; ++i) s += g(lo + i * h) * (i % 2 ? 4.0 : 2.0);
  return s * h / 3.0;
}

// Left eigenvector of a row-stochastic matrix for eigenvalue 1 by power
// iteration.
inline std::vector<double> StationaryByPowerIteration(
    const std::vector<std::vector<double>>& p, int iterations = 100000) {
  const std::size_t n = p.size();
  std::vector<double> mu(n, 1.0 / n);
  for (int it = 0; it < iterations; ++it) {
    std::vector<double> next(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) next[j] += mu[i] * p[i][j];
    }
    double diff = 0.0;
    for (std::size_t j = 0; j < n; ++j) diff += std::abs(next[j] - mu[j]);
    mu = next;
    if (diff < 1e-16) break;
  }
  return mu;
}

// Convex hull by gift wrapping. Extreme vertices only.
inline std::vector<std::pair<double, double>> GiftWrapHull(
    std::vector<std::pair<double, double>> pts, double eps) {
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  if (pts.size() < 3) return pts;
  auto cross = [](auto o, auto a, auto b) {
    return (a.first - o.first) * (b.second - o.second) -
           (a.second - o.second) * (b.first - o.first);
  };
  auto dist2 = [](auto a, auto b) {
    return (a.first - b.first) * (a.first - b.first) +
           (a.second - b.second) * (a.second - b.second);
  };
  std::vector<std::pair<double, double>> hull;
  std::size_t start = 0;
  std::size_t cur = start;
  do {
    hull.push_back(pts[cur]);
    std::size_t cand = (cur + 1) % pts.size();
    for (std::size_t j = 0; j < pts.size(); ++j) {
      if (j == cur) continue;
      const double c = cross(pts[cur], pts[cand], pts[j]);
      // Take the most clockwise point; on ties the farthest.
      if (c < -eps ||
          (std::abs(c) <= eps &&
           dist2(pts[cur], pts[j]) > dist2(pts[cur], pts[cand]))) {
        cand = j;
      }
    }
    cur = cand;
  } while (cur != start && hull.size() <= pts.size());
  return hull;
}

// Pool-adjacent-violators fit of a nondecreasing sequence with weights.
inline std::vector<double> IsotonicIncreasing(const std::vector<double>& y,
                                              const std::vector<double>& w) {
  struct Block {
    double value, weight;
    int count;
  };
  std::vector<Block> blocks;
  for (std::size_t i = 0; i < y.size(); ++i) {
    blocks.push_back({y[i], w[i], 1});
    while (blocks.size() > 1 &&
           blocks[blocks.size() - 2].value > blocks.back().value) {
      Block b = blocks.back();
      blocks.pop_back();
      Block& a = blocks.back();
      a.value = (a.value * a.weight + b.value * b.weight) / (a.weight + b.weight);
      a.weight += b.weight;
      a.count += b.count;
    }
  }
  std::vector<double> fit;
  for (const Block& b : blocks) fit.insert(fit.end(), b.count, b.value);
  return fit;
}

}  // namespace oracle

#endif  // POWERGAME_TESTS_ORACLES_H_

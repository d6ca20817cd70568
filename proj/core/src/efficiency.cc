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

#include "powergame/efficiency.h"

#include <cmath>
#include <limits>
#include <string>

#include "powergame/errors.h"

namespace powergame {
namespace {

constexpr double kInitialLowerBracket = 1e-12;
constexpr int kMaxBracketGrowth = 200;
constexpr int kMaxIterations = 200;
constexpr double kResidualTolerance = 1e-15;

// Solves x [1 - (K-1) x] f'(x) / f(x) - 1 = 0. Dividing by f keeps the
// residual well scaled near zero where f underflows. The residual is strictly
// decreasing for sigmoidal f, positive near 0+ and negative for large x.
double SolveElasticityRoot(const EfficiencyFunction& f, int num_players) {
  const double crowding = static_cast<double>(num_players - 1);
  auto residual = [&](double x) {
    return x * f.LogDerivative(x) * (1.0 - crowding * x) - 1.0;
  };
  auto slope = [&](double x) {
    const double log_d = f.LogDerivative(x);
    const double log_d_slope = f.LogDerivativeSlope(x);
    return (log_d + x * log_d_slope) * (1.0 - crowding * x) -
           crowding * x * log_d;
  };

  double lo = kInitialLowerBracket;
  for (int i = 0; residual(lo) <= 0.0; ++i) {
    if (i >= kMaxBracketGrowth || lo < std::numeric_limits<double>::min()) {
      throw SolverError("root bracket: no positive residual near 0+");
    }
    lo *= 0.5;
  }
  double hi = 1.0;
  for (int i = 0; residual(hi) >= 0.0; ++i) {
    if (i >= kMaxBracketGrowth) {
      throw SolverError("root bracket: residual never turns negative");
    }
    hi *= 2.0;
  }
  if (hi <= lo) hi = 2.0 * lo;

  // Safeguarded Newton: take the Newton step when it stays inside the
  // bracket and shrinks it fast enough, otherwise bisect.
  double x = 0.5 * (lo + hi);
  for (int iter = 0; iter < kMaxIterations; ++iter) {
    const double r = residual(x);
    if (std::abs(r) <= kResidualTolerance) return x;
    if (r > 0.0) {
      lo = x;
    } else {
      hi = x;
    }
    if (hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() * hi) {
      return x;
    }
    const double d = slope(x);
    double next = (d != 0.0 && std::isfinite(d)) ? x - r / d : lo;
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    x = next;
  }
  throw SolverError("efficiency root solver did not converge for K=" +
                    std::to_string(num_players));
}

}  // namespace

EfficiencyFunction EfficiencyFunction::Exponential(double a) {
  if (!(a > 0.0) || !std::isfinite(a)) {
    throw DomainError("efficiency parameter a must be positive and finite");
  }
  return EfficiencyFunction(Kind::kExponential, a);
}

EfficiencyFunction EfficiencyFunction::FromRate(double rate) {
  if (!(rate > 0.0) || !std::isfinite(rate)) {
    throw DomainError("transmission rate must be positive and finite");
  }
  return Exponential(std::exp2(rate) - 1.0);
}

double EfficiencyFunction::Value(double x) const {
  if (x < 0.0 || std::isnan(x)) throw DomainError("SINR must be >= 0");
  if (x == 0.0) return 0.0;
  return std::exp(-a_ / x);
}

double EfficiencyFunction::Derivative(double x) const {
  if (x < 0.0 || std::isnan(x)) throw DomainError("SINR must be >= 0");
  if (x == 0.0) return 0.0;
  return a_ / (x * x) * std::exp(-a_ / x);
}

double EfficiencyFunction::SecondDerivative(double x) const {
  if (x < 0.0 || std::isnan(x)) throw DomainError("SINR must be >= 0");
  if (x == 0.0) return 0.0;
  const double x2 = x * x;
  return (a_ * a_ / (x2 * x2) - 2.0 * a_ / (x2 * x)) * std::exp(-a_ / x);
}

double EfficiencyFunction::LogDerivative(double x) const {
  if (!(x > 0.0)) throw DomainError("log-derivative needs SINR > 0");
  return a_ / (x * x);
}

double EfficiencyFunction::LogDerivativeSlope(double x) const {
  if (!(x > 0.0)) throw DomainError("log-derivative needs SINR > 0");
  return -2.0 * a_ / (x * x * x);
}

double SolveBetaStar(const EfficiencyFunction& f) {
  return SolveElasticityRoot(f, 1);
}

double SolveGammaTilde(const EfficiencyFunction& f, int num_players) {
  if (num_players < 1) throw DomainError("player count must be >= 1");
  return SolveElasticityRoot(f, num_players);
}

}  // namespace powergame

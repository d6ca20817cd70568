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

#ifndef POWERGAME_EFFICIENCY_H_
#define POWERGAME_EFFICIENCY_H_

namespace powergame {

// Sigmoidal map from SINR to block success rate.
//
// Only the exponential form f(x) = exp(-a / x) is provided, but callers go
// through this type so other sigmoidal kinds can be added without touching
// the game code. f(0) is defined as 0 (continuous extension).
class EfficiencyFunction {
 public:
  enum class Kind { kExponential };

  // Throws DomainError unless a > 0 and finite.
  static EfficiencyFunction Exponential(double a);
  // a = 2^R - 1 for a transmission rate R in bit/s (per channel use).
  static EfficiencyFunction FromRate(double rate);

  Kind kind() const { return kind_; }
  double a() const { return a_; }

  // Throws DomainError for x < 0.
  double Value(double x) const;
  double operator()(double x) const { return Value(x); }
  double Derivative(double x) const;
  double SecondDerivative(double x) const;

  // f'(x) / f(x) and its derivative. Well scaled where f itself underflows,
  // which is what the root solvers work with. Require x > 0.
  double LogDerivative(double x) const;
  double LogDerivativeSlope(double x) const;

  bool operator==(const EfficiencyFunction&) const = default;

 private:
  EfficiencyFunction(Kind kind, double a) : kind_(kind), a_(a) {}

  Kind kind_;
  double a_;
};

// Unique positive root beta* of x f'(x) - f(x) = 0: the SINR that maximizes a
// single transmitter's energy efficiency.
double SolveBetaStar(const EfficiencyFunction& f);

// Unique positive root of x [1 - (K-1) x] f'(x) - f(x) = 0: the common SINR of
// the equal-received-power operating point with K transmitters. Equals
// SolveBetaStar(f) for K = 1. Throws DomainError for num_players < 1.
double SolveGammaTilde(const EfficiencyFunction& f, int num_players);

}  // namespace powergame

#endif  // POWERGAME_EFFICIENCY_H_

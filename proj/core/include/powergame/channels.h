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

#ifndef POWERGAME_CHANNELS_H_
#define POWERGAME_CHANNELS_H_

#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "powergame/random.h"

namespace powergame {

// Per-player quantization level indices; one entry per player.
using JointState = std::vector<int>;

// Finite per-player gain sets and their Cartesian product. Joint states are
// numbered row-major with player 0 most significant.
class ChannelStateSpace {
 public:
  // Throws ModelError for empty sets or non-positive gains.
  static ChannelStateSpace Create(std::vector<std::vector<double>> gains);

  int num_players() const { return static_cast<int>(gains_.size()); }
  const std::vector<double>& gains(int i) const { return gains_[i]; }
  int num_levels(int i) const { return static_cast<int>(gains_[i].size()); }
  double min_gain(int i) const;
  double max_gain(int i) const;
  // Largest gain any player can see.
  double max_gain() const;

  // Size of the joint space, saturated at SIZE_MAX on overflow.
  std::size_t num_joint_states() const;
  std::size_t JointIndex(std::span<const int> state) const;
  JointState StateAt(std::size_t index) const;
  void FillGains(std::span<const int> state, std::span<double> out) const;
  std::vector<double> GainsOf(std::span<const int> state) const;

 private:
  std::vector<std::vector<double>> gains_;
};

// Stochastic law of the joint state from one stage to the next.
class TransitionLaw {
 public:
  enum class Kind {
    kIndependentIid,  // per-player marginals, independent across players
    kJointIid,        // one pmf over joint states, redrawn every stage
    kMarkov,          // row-stochastic matrix over joint states
  };

  static TransitionLaw IndependentIid(std::vector<std::vector<double>> marginals);
  static TransitionLaw JointIid(std::vector<double> pmf);
  static TransitionLaw Markov(std::size_t num_states,
                              std::vector<double> row_major);

  Kind kind() const { return kind_; }
  bool is_iid() const { return kind_ != Kind::kMarkov; }
  const std::vector<std::vector<double>>& marginals() const {
    return marginals_;
  }
  const std::vector<double>& pmf() const { return pmf_; }
  const std::vector<double>& matrix() const { return matrix_; }
  std::size_t num_states() const { return num_states_; }

  // pi(eta' | eta) > 0 for every pair of joint states.
  bool IsIrreducible() const;
  // Transition probability between joint state indices; needs a joint space
  // small enough to index.
  double Probability(const ChannelStateSpace& space, std::size_t from,
                     std::size_t to) const;

 private:
  friend class ChannelModel;
  explicit TransitionLaw(Kind kind) : kind_(kind) {}
  void BuildCdfs();

  Kind kind_;
  std::vector<std::vector<double>> marginals_;
  std::vector<double> pmf_;
  std::vector<double> matrix_;
  std::size_t num_states_ = 0;
  std::vector<std::vector<double>> marginal_cdfs_;
  std::vector<double> pmf_cdf_;
  std::vector<std::vector<double>> row_cdfs_;
};

// A validated (state space, transition law) pair.
class ChannelModel {
 public:
  // Checks dimensions, row-stochasticity (1e-12) and irreducibility.
  static ChannelModel Create(ChannelStateSpace space, TransitionLaw law);

  const ChannelStateSpace& space() const { return space_; }
  const TransitionLaw& law() const { return law_; }
  int num_players() const { return space_.num_players(); }

  // Initial state drawn from the stationary law.
  JointState SampleInitial(Rng& rng) const;
  JointState SampleNext(std::span<const int> current, Rng& rng) const;
  void SampleNext(std::span<const int> current, JointState& next,
                  Rng& rng) const;

  // All joint states with their stationary probabilities. Throws
  // UnsupportedError when the joint space exceeds `max_states`.
  struct WeightedState {
    JointState state;
    double probability;
  };
  std::vector<WeightedState> EnumerateStationary(
      std::size_t max_states = 1u << 20) const;

 private:
  ChannelModel(ChannelStateSpace space, TransitionLaw law)
      : space_(std::move(space)), law_(std::move(law)) {}

  ChannelStateSpace space_;
  TransitionLaw law_;
  std::vector<double> stationary_cdf_;
};

// mu with mu pi = mu, sum 1. For IID laws this is the per-stage pmf
// (product of marginals). Throws ModelError for a reducible law and
// UnsupportedError when the joint space is too large to materialize.
std::vector<double> StationaryDistribution(const ChannelStateSpace& space,
                                           const TransitionLaw& law);

// Built-in model families.
struct TwoStateSpec {
  double eta_min = 1.0;
  double eta_max = 1.0;
  double p_high = 0.5;
};
// Rayleigh amplitude with scale `scale`, gain eta = x^2 truncated to
// [eta_min, eta_max] and cut into `bins` equal-probability cells, each
// represented by its conditional mean.
struct TruncatedRayleighSpec {
  double scale = 1.0;
  double eta_min = 0.1;
  double eta_max = 10.0;
  int bins = 16;
};
struct ExplicitSpec {
  ChannelStateSpace space;
  TransitionLaw law;
};
using ChannelModelSpec =
    std::variant<TwoStateSpec, TruncatedRayleighSpec, ExplicitSpec>;

// Builds a model for `num_players` players. Built-in families draw every
// player independently and IID across stages. A two-state spec with
// eta_min == eta_max collapses to a single deterministic level.
ChannelModel BuildModel(const ChannelModelSpec& spec, int num_players);

// Conditional-mean representatives of the truncated Rayleigh gain cells.
std::vector<double> TruncatedRayleighLevels(const TruncatedRayleighSpec& spec);

// Explicit model file (JSON):
//   {
//     "format": "powergame-channel-model/1",
//     "gains": [[g_00, g_01, ...], [g_10, ...], ...],
//     "law": "markov" | "iid_joint" | "iid_independent",
//     "transition": [...],      // markov: row-major joint matrix
//     "pmf": [...],             // iid_joint: joint pmf
//     "marginals": [[...], ...],// iid_independent
//     "row_sum_checksum": S     // sum of all row sums
//   }
// The checksum must match the data within 1e-9 (rows for markov, 1 for a
// pmf, K for marginals). Throws ModelError on any violation.
ExplicitSpec LoadExplicitModel(const std::filesystem::path& path);
ExplicitSpec ParseExplicitModel(const std::string& text);
std::string SerializeExplicitModel(const ExplicitSpec& spec);

}  // namespace powergame

#endif  // POWERGAME_CHANNELS_H_

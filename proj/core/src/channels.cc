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

#include "powergame/channels.h"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <optional>
#include <sstream>

#include "json.hpp"
#include "powergame/errors.h"

namespace powergame {
namespace {

constexpr double kRowSumTolerance = 1e-12;
constexpr double kChecksumTolerance = 1e-9;
constexpr double kMinTruncatedMass = 1e-6;
constexpr std::size_t kMaxMaterializedStates = std::size_t{1} << 22;
constexpr const char* kModelFormat = "powergame-channel-model/1";

std::vector<double> Cumulative(std::span<const double> p) {
  std::vector<double> cdf(p.size());
  std::partial_sum(p.begin(), p.end(), cdf.begin());
  return cdf;
}

void CheckDistribution(std::span<const double> p, const std::string& what) {
  if (p.empty()) throw ModelError(what + ": empty distribution");
  double sum = 0.0;
  for (double x : p) {
    if (!(x >= 0.0) || !std::isfinite(x)) {
      throw ModelError(what + ": probabilities must be finite and >= 0");
    }
    sum += x;
  }
  if (std::abs(sum - 1.0) > kRowSumTolerance) {
    std::ostringstream msg;
    msg.precision(17);
    msg << what << ": probabilities sum to " << sum << ", not 1";
    throw ModelError(msg.str());
  }
}

bool AllPositive(std::span<const double> p) {
  return std::all_of(p.begin(), p.end(), [](double x) { return x > 0.0; });
}

}  // namespace

// ---------------------------------------------------------------------------
// ChannelStateSpace

ChannelStateSpace ChannelStateSpace::Create(
    std::vector<std::vector<double>> gains) {
  if (gains.empty()) throw ModelError("state space needs at least one player");
  for (const auto& set : gains) {
    if (set.empty()) throw ModelError("per-player gain set is empty");
    for (double g : set) {
      if (!(g > 0.0) || !std::isfinite(g)) {
        throw ModelError("channel gains must be positive and finite");
      }
    }
  }
  ChannelStateSpace space;
  space.gains_ = std::move(gains);
  return space;
}

double ChannelStateSpace::min_gain(int i) const {
  return *std::min_element(gains_[i].begin(), gains_[i].end());
}

double ChannelStateSpace::max_gain(int i) const {
  return *std::max_element(gains_[i].begin(), gains_[i].end());
}

double ChannelStateSpace::max_gain() const {
  double best = 0.0;
  for (int i = 0; i < num_players(); ++i) best = std::max(best, max_gain(i));
  return best;
}

std::size_t ChannelStateSpace::num_joint_states() const {
  std::size_t n = 1;
  for (const auto& set : gains_) {
    if (n > std::numeric_limits<std::size_t>::max() / set.size()) {
      return std::numeric_limits<std::size_t>::max();
    }
    n *= set.size();
  }
  return n;
}

std::size_t ChannelStateSpace::JointIndex(std::span<const int> state) const {
  std::size_t index = 0;
  for (std::size_t i = 0; i < gains_.size(); ++i) {
    index = index * gains_[i].size() + static_cast<std::size_t>(state[i]);
  }
  return index;
}

JointState ChannelStateSpace::StateAt(std::size_t index) const {
  JointState state(gains_.size());
  for (std::size_t i = gains_.size(); i-- > 0;) {
    state[i] = static_cast<int>(index % gains_[i].size());
    index /= gains_[i].size();
  }
  return state;
}

void ChannelStateSpace::FillGains(std::span<const int> state,
                                  std::span<double> out) const {
  for (std::size_t i = 0; i < gains_.size(); ++i) {
    out[i] = gains_[i][static_cast<std::size_t>(state[i])];
  }
}

std::vector<double> ChannelStateSpace::GainsOf(
    std::span<const int> state) const {
  std::vector<double> out(gains_.size());
  FillGains(state, out);
  return out;
}

// ---------------------------------------------------------------------------
// TransitionLaw

TransitionLaw TransitionLaw::IndependentIid(
    std::vector<std::vector<double>> marginals) {
  if (marginals.empty()) throw ModelError("IID law needs marginals");
  for (const auto& m : marginals) CheckDistribution(m, "IID marginal");
  TransitionLaw law(Kind::kIndependentIid);
  law.marginals_ = std::move(marginals);
  law.BuildCdfs();
  return law;
}

TransitionLaw TransitionLaw::JointIid(std::vector<double> pmf) {
  CheckDistribution(pmf, "IID joint pmf");
  TransitionLaw law(Kind::kJointIid);
  law.num_states_ = pmf.size();
  law.pmf_ = std::move(pmf);
  law.BuildCdfs();
  return law;
}

TransitionLaw TransitionLaw::Markov(std::size_t num_states,
                                    std::vector<double> row_major) {
  if (num_states == 0 || row_major.size() != num_states * num_states) {
    throw ModelError("Markov matrix must be num_states x num_states");
  }
  for (std::size_t r = 0; r < num_states; ++r) {
    CheckDistribution(
        std::span<const double>(row_major).subspan(r * num_states, num_states),
        "Markov row " + std::to_string(r));
  }
  TransitionLaw law(Kind::kMarkov);
  law.num_states_ = num_states;
  law.matrix_ = std::move(row_major);
  law.BuildCdfs();
  return law;
}

void TransitionLaw::BuildCdfs() {
  marginal_cdfs_.clear();
  for (const auto& m : marginals_) marginal_cdfs_.push_back(Cumulative(m));
  pmf_cdf_ = Cumulative(pmf_);
  row_cdfs_.clear();
  for (std::size_t r = 0; r < num_states_ && !matrix_.empty(); ++r) {
    row_cdfs_.push_back(Cumulative(
        std::span<const double>(matrix_).subspan(r * num_states_, num_states_)));
  }
}

bool TransitionLaw::IsIrreducible() const {
  switch (kind_) {
    case Kind::kIndependentIid:
      return std::all_of(marginals_.begin(), marginals_.end(),
                         [](const auto& m) { return AllPositive(m); });
    case Kind::kJointIid:
      return AllPositive(pmf_);
    case Kind::kMarkov:
      return AllPositive(matrix_);
  }
  return false;
}

double TransitionLaw::Probability(const ChannelStateSpace& space,
                                  std::size_t from, std::size_t to) const {
  switch (kind_) {
    case Kind::kIndependentIid: {
      const JointState state = space.StateAt(to);
      double p = 1.0;
      for (std::size_t i = 0; i < state.size(); ++i) {
        p *= marginals_[i][static_cast<std::size_t>(state[i])];
      }
      return p;
    }
    case Kind::kJointIid:
      return pmf_[to];
    case Kind::kMarkov:
      return matrix_[from * num_states_ + to];
  }
  return 0.0;
}

// ---------------------------------------------------------------------------
// ChannelModel

ChannelModel ChannelModel::Create(ChannelStateSpace space, TransitionLaw law) {
  switch (law.kind()) {
    case TransitionLaw::Kind::kIndependentIid:
      if (law.marginals().size() !=
          static_cast<std::size_t>(space.num_players())) {
        throw ModelError("IID law needs one marginal per player");
      }
      for (int i = 0; i < space.num_players(); ++i) {
        if (law.marginals()[i].size() != space.gains(i).size()) {
          throw ModelError("marginal of player " + std::to_string(i) +
                           " does not match its gain set");
        }
      }
      break;
    case TransitionLaw::Kind::kJointIid:
    case TransitionLaw::Kind::kMarkov:
      if (law.num_states() != space.num_joint_states()) {
        throw ModelError("law dimension does not match the joint state space");
      }
      break;
  }
  if (!law.IsIrreducible()) {
    throw ModelError(
        "transition law is not irreducible: every pi(eta'|eta) must be > 0");
  }
  ChannelModel model(std::move(space), std::move(law));
  if (model.law_.kind() == TransitionLaw::Kind::kMarkov) {
    model.stationary_cdf_ =
        Cumulative(StationaryDistribution(model.space_, model.law_));
  }
  return model;
}

JointState ChannelModel::SampleInitial(Rng& rng) const {
  switch (law_.kind()) {
    case TransitionLaw::Kind::kMarkov:
      return space_.StateAt(rng.Discrete(stationary_cdf_));
    default: {
      JointState state(static_cast<std::size_t>(num_players()));
      SampleNext(state, state, rng);
      return state;
    }
  }
}

JointState ChannelModel::SampleNext(std::span<const int> current,
                                    Rng& rng) const {
  JointState next(current.size());
  SampleNext(current, next, rng);
  return next;
}

void ChannelModel::SampleNext(std::span<const int> current, JointState& next,
                              Rng& rng) const {
  next.resize(static_cast<std::size_t>(num_players()));
  switch (law_.kind()) {
    case TransitionLaw::Kind::kIndependentIid:
      for (std::size_t i = 0; i < next.size(); ++i) {
        next[i] = static_cast<int>(rng.Discrete(law_.marginal_cdfs_[i]));
      }
      return;
    case TransitionLaw::Kind::kJointIid:
      next = space_.StateAt(rng.Discrete(law_.pmf_cdf_));
      return;
    case TransitionLaw::Kind::kMarkov: {
      const std::size_t from = space_.JointIndex(current);
      next = space_.StateAt(rng.Discrete(law_.row_cdfs_[from]));
      return;
    }
  }
}

std::vector<ChannelModel::WeightedState> ChannelModel::EnumerateStationary(
    std::size_t max_states) const {
  const std::size_t n = space_.num_joint_states();
  if (n > max_states) {
    throw UnsupportedError("joint state space has " +
                           (n == std::numeric_limits<std::size_t>::max()
                                ? std::string("too many")
                                : std::to_string(n)) +
                           " states; exact enumeration is capped at " +
                           std::to_string(max_states));
  }
  const std::vector<double> mu = StationaryDistribution(space_, law_);
  std::vector<WeightedState> out;
  out.reserve(n);
  for (std::size_t s = 0; s < n; ++s) {
    out.push_back({space_.StateAt(s), mu[s]});
  }
  return out;
}

std::vector<double> StationaryDistribution(const ChannelStateSpace& space,
                                           const TransitionLaw& law) {
  switch (law.kind()) {
    case TransitionLaw::Kind::kIndependentIid: {
      const std::size_t n = space.num_joint_states();
      if (n > kMaxMaterializedStates) {
        throw UnsupportedError("joint state space too large to materialize");
      }
      std::vector<double> mu(n);
      for (std::size_t s = 0; s < n; ++s) {
        mu[s] = law.Probability(space, 0, s);
      }
      return mu;
    }
    case TransitionLaw::Kind::kJointIid:
      return law.pmf();
    case TransitionLaw::Kind::kMarkov:
      break;
  }
  if (!law.IsIrreducible()) {
    throw ModelError("stationary distribution requires an irreducible law");
  }
  // Solve mu (P - I) = 0 with the normalization replacing one equation.
  const auto n = static_cast<Eigen::Index>(law.num_states());
  Eigen::MatrixXd system(n, n);
  for (Eigen::Index r = 0; r < n; ++r) {
    for (Eigen::Index c = 0; c < n; ++c) {
      system(c, r) = law.matrix()[static_cast<std::size_t>(r * n + c)] -
                     (r == c ? 1.0 : 0.0);
    }
  }
  system.row(n - 1).setOnes();
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n);
  rhs(n - 1) = 1.0;
  const Eigen::VectorXd mu = system.fullPivLu().solve(rhs);
  std::vector<double> out(mu.data(), mu.data() + n);
  for (double& x : out) x = std::max(x, 0.0);
  const double total = std::accumulate(out.begin(), out.end(), 0.0);
  for (double& x : out) x /= total;
  return out;
}

// ---------------------------------------------------------------------------
// Built-in families

std::vector<double> TruncatedRayleighLevels(const TruncatedRayleighSpec& spec) {
  if (!(spec.scale > 0.0) || !std::isfinite(spec.scale)) {
    throw ModelError("Rayleigh scale must be positive");
  }
  if (spec.bins < 2) throw ModelError("Rayleigh discretization needs >= 2 bins");
  if (!(spec.eta_min >= 0.0) || !(spec.eta_min < spec.eta_max)) {
    throw ModelError("truncation needs 0 <= eta_min < eta_max");
  }
  // eta = x^2 with x ~ Rayleigh(scale) is exponential with rate 1/(2 scale^2).
  const double rate = 1.0 / (2.0 * spec.scale * spec.scale);
  auto survival = [&](double eta) {
    return std::isinf(eta) ? 0.0 : std::exp(-rate * eta);
  };
  const double top = survival(spec.eta_min);
  const double mass = top - survival(spec.eta_max);
  if (mass < kMinTruncatedMass) {
    throw ModelError("truncation interval carries negligible probability mass");
  }
  std::vector<double> edges(static_cast<std::size_t>(spec.bins) + 1);
  edges.front() = spec.eta_min;
  edges.back() = spec.eta_max;
  for (int j = 1; j < spec.bins; ++j) {
    const double q = static_cast<double>(j) / spec.bins;
    edges[j] = -std::log(top - q * mass) / rate;
  }
  std::vector<double> levels(static_cast<std::size_t>(spec.bins));
  for (std::size_t j = 0; j < levels.size(); ++j) {
    const double lo = edges[j];
    const double hi = edges[j + 1];
    // E[eta | lo <= eta <= hi] = lo + 1/rate - (hi - lo) S(hi) / (S(lo) - S(hi))
    double mean = lo + 1.0 / rate;
    if (!std::isinf(hi)) {
      const double s_lo = survival(lo);
      const double s_hi = survival(hi);
      mean -= (hi - lo) * s_hi / (s_lo - s_hi);
    }
    levels[j] = std::clamp(mean, lo, hi);
  }
  return levels;
}

ChannelModel BuildModel(const ChannelModelSpec& spec, int num_players) {
  if (num_players < 1) throw ModelError("player count must be >= 1");
  const auto k = static_cast<std::size_t>(num_players);
  if (const auto* two = std::get_if<TwoStateSpec>(&spec)) {
    if (!(two->eta_min > 0.0) || !(two->eta_min <= two->eta_max) ||
        !std::isfinite(two->eta_max)) {
      throw ModelError("two-state model needs 0 < eta_min <= eta_max");
    }
    if (!(two->p_high > 0.0 && two->p_high < 1.0)) {
      throw ModelError("two-state p_high must lie in (0, 1)");
    }
    if (two->eta_min == two->eta_max) {
      return ChannelModel::Create(
          ChannelStateSpace::Create(
              std::vector<std::vector<double>>(k, {two->eta_min})),
          TransitionLaw::IndependentIid(
              std::vector<std::vector<double>>(k, {1.0})));
    }
    return ChannelModel::Create(
        ChannelStateSpace::Create(std::vector<std::vector<double>>(
            k, {two->eta_min, two->eta_max})),
        TransitionLaw::IndependentIid(std::vector<std::vector<double>>(
            k, {1.0 - two->p_high, two->p_high})));
  }
  if (const auto* rayleigh = std::get_if<TruncatedRayleighSpec>(&spec)) {
    std::vector<double> levels = TruncatedRayleighLevels(*rayleigh);
    std::vector<double> uniform(levels.size(), 1.0 / rayleigh->bins);
    // Equal-probability cells; renormalize so the sum is exactly 1.
    const double total = std::accumulate(uniform.begin(), uniform.end(), 0.0);
    for (double& p : uniform) p /= total;
    return ChannelModel::Create(
        ChannelStateSpace::Create(std::vector<std::vector<double>>(k, levels)),
        TransitionLaw::IndependentIid(
            std::vector<std::vector<double>>(k, uniform)));
  }
  const auto& explicit_spec = std::get<ExplicitSpec>(spec);
  if (explicit_spec.space.num_players() != num_players) {
    throw ModelError("explicit model has " +
                     std::to_string(explicit_spec.space.num_players()) +
                     " players, game has " + std::to_string(num_players));
  }
  return ChannelModel::Create(explicit_spec.space, explicit_spec.law);
}

// ---------------------------------------------------------------------------
// Explicit model files

ExplicitSpec ParseExplicitModel(const std::string& text) {
  using nlohmann::json;
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ModelError(std::string("channel model file: ") + e.what());
  }
  try {
    if (doc.value("format", std::string()) != kModelFormat) {
      throw ModelError(std::string("channel model file: format must be \"") +
                       kModelFormat + "\"");
    }
    auto space = ChannelStateSpace::Create(
        doc.at("gains").get<std::vector<std::vector<double>>>());
    const std::string law_name = doc.at("law").get<std::string>();
    const double checksum = doc.at("row_sum_checksum").get<double>();
    double observed = 0.0;
    std::optional<TransitionLaw> law;
    if (law_name == "markov") {
      auto matrix = doc.at("transition").get<std::vector<double>>();
      observed = std::accumulate(matrix.begin(), matrix.end(), 0.0);
      law = TransitionLaw::Markov(space.num_joint_states(), std::move(matrix));
    } else if (law_name == "iid_joint") {
      auto pmf = doc.at("pmf").get<std::vector<double>>();
      observed = std::accumulate(pmf.begin(), pmf.end(), 0.0);
      law = TransitionLaw::JointIid(std::move(pmf));
    } else if (law_name == "iid_independent") {
      auto marginals = doc.at("marginals").get<std::vector<std::vector<double>>>();
      for (const auto& m : marginals) {
        observed += std::accumulate(m.begin(), m.end(), 0.0);
      }
      law = TransitionLaw::IndependentIid(std::move(marginals));
    } else {
      throw ModelError("channel model file: unknown law \"" + law_name + "\"");
    }
    if (std::abs(observed - checksum) > kChecksumTolerance) {
      std::ostringstream msg;
      msg.precision(17);
      msg << "channel model file: row_sum_checksum " << checksum
          << " does not match data (" << observed << ")";
      throw ModelError(msg.str());
    }
    // Validates dimensions and irreducibility.
    ChannelModel::Create(space, *law);
    return ExplicitSpec{std::move(space), std::move(*law)};
  } catch (const json::exception& e) {
    throw ModelError(std::string("channel model file: ") + e.what());
  }
}

ExplicitSpec LoadExplicitModel(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ModelError("cannot open channel model file " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return ParseExplicitModel(buffer.str());
}

std::string SerializeExplicitModel(const ExplicitSpec& spec) {
  using nlohmann::json;
  json doc;
  doc["format"] = kModelFormat;
  std::vector<std::vector<double>> gains;
  for (int i = 0; i < spec.space.num_players(); ++i) {
    gains.push_back(spec.space.gains(i));
  }
  doc["gains"] = gains;
  double checksum = 0.0;
  switch (spec.law.kind()) {
    case TransitionLaw::Kind::kMarkov:
      doc["law"] = "markov";
      doc["transition"] = spec.law.matrix();
      checksum = std::accumulate(spec.law.matrix().begin(),
                                 spec.law.matrix().end(), 0.0);
      break;
    case TransitionLaw::Kind::kJointIid:
      doc["law"] = "iid_joint";
      doc["pmf"] = spec.law.pmf();
      checksum =
          std::accumulate(spec.law.pmf().begin(), spec.law.pmf().end(), 0.0);
      break;
    case TransitionLaw::Kind::kIndependentIid:
      doc["law"] = "iid_independent";
      doc["marginals"] = spec.law.marginals();
      for (const auto& m : spec.law.marginals()) {
        checksum += std::accumulate(m.begin(), m.end(), 0.0);
      }
      break;
  }
  doc["row_sum_checksum"] = checksum;
  return doc.dump(2);
}

}  // namespace powergame

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

#ifndef POWERGAME_CLI_CONFIG_H_
#define POWERGAME_CLI_CONFIG_H_

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "powergame/channels.h"
#include "powergame/engine.h"
#include "powergame/oneshot.h"
#include "powergame/strategies.h"

namespace powergame::cli {

// Schema violation in an experiment config. The message names the field
// (dotted path) or the line of a syntax error.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr const char* kConfigFormat = "powergame-experiment/1";

struct ChannelConfig {
  enum class Kind { kTwoState, kRayleigh, kFile };
  Kind kind = Kind::kRayleigh;
  TwoStateSpec two_state;
  TruncatedRayleighSpec rayleigh;
  std::string path;

  bool operator==(const ChannelConfig& o) const;
};

struct SweepConfig {
  // players | ratio | alpha
  std::string axis;
  std::vector<double> values;

  bool operator==(const SweepConfig&) const = default;
};

struct ExperimentConfig {
  std::uint64_t seed = 0;

  int players = 1;
  // Exactly one of rate / a is given. With `rate`, a = 2^rate - 1; with `a`,
  // the utility rate is 1.
  std::optional<double> rate;
  std::optional<double> a;
  double noise_power = 1.0;
  double max_power = 1000.0;

  ChannelConfig channel;
  std::vector<StrategyKind> strategies;

  std::int64_t horizon = 100000;
  double lambda = 1e-3;
  int replicates = 16;
  double detection_tolerance = 1e-6;
  bool trace = false;
  std::optional<DeviationSpec> deviation;

  std::optional<SweepConfig> sweep;

  int region_grid = 48;
  std::int64_t partition_stages = 100000;
  int partition_player = 0;

  std::string output_dir;

  // Dotted paths of fields that were filled with defaults rather than given.
  std::vector<std::string> defaulted;

  double efficiency_a() const;
  double utility_rate() const;
  bool operator==(const ExperimentConfig& o) const;
};

// Parses and validates. Throws ConfigError.
ExperimentConfig ParseConfig(const std::string& text);
ExperimentConfig LoadConfig(const std::filesystem::path& path);
// Canonical JSON; ParseConfig(SerializeConfig(c)) == c.
std::string SerializeConfig(const ExperimentConfig& config);

// Defaulted fields with their values, for the manifest.
std::map<std::string, std::string> DefaultedValues(const ExperimentConfig& c);

// Game and channel model for one point (players may differ from the base
// config under a player sweep). Model-level errors propagate as
// powergame::Error.
GameParams BuildGame(const ExperimentConfig& config);
ChannelModel BuildChannel(const ExperimentConfig& config);

// Copy of `config` with the sweep axis set to `value`.
ExperimentConfig AtSweepPoint(const ExperimentConfig& config, double value);

// Named presets: fig2, fig3, fig4, fig5, partition. Throws ConfigError
// listing the valid names otherwise.
ExperimentConfig Preset(const std::string& name, std::uint64_t seed);
const std::vector<std::string>& PresetNames();

}  // namespace powergame::cli

#endif  // POWERGAME_CLI_CONFIG_H_

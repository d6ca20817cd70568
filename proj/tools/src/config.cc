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

#include "powergame/cli/config.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "powergame/errors.h"

namespace powergame::cli {
namespace {

using nlohmann::json;

// Reads fields of one JSON object, tracking the dotted path for diagnostics
// and which fields fell back to defaults.
class Reader {
 public:
  Reader(const json& object, std::string path, std::vector<std::string>* defaulted)
      : object_(object), path_(std::move(path)), defaulted_(defaulted) {
    if (!object_.is_object()) Fail(path_.empty() ? "<root>" : path_, "must be an object");
  }

  bool Has(const std::string& key) const { return object_.contains(key); }

  std::string Path(const std::string& key) const {
    return path_.empty() ? key : path_ + "." + key;
  }

  [[noreturn]] static void Fail(const std::string& field, const std::string& what) {
    throw ConfigError(fmt::format("config field '{}': {}", field, what));
  }

  const json& Get(const std::string& key) const {
    if (!Has(key)) Fail(Path(key), "is required");
    used_.insert(key);
    return object_.at(key);
  }

  double Number(const std::string& key, std::optional<double> fallback = {}) const {
    if (!Has(key)) {
      if (!fallback) Fail(Path(key), "is required");
      Default(key);
      return *fallback;
    }
    const json& v = Get(key);
    if (!v.is_number()) Fail(Path(key), "must be a number");
    return v.get<double>();
  }

  std::int64_t Integer(const std::string& key,
                       std::optional<std::int64_t> fallback = {}) const {
    if (!Has(key)) {
      if (!fallback) Fail(Path(key), "is required");
      Default(key);
      return *fallback;
    }
    const json& v = Get(key);
    if (!v.is_number_integer()) Fail(Path(key), "must be an integer");
    return v.get<std::int64_t>();
  }

  bool Bool(const std::string& key, bool fallback) const {
    if (!Has(key)) {
      Default(key);
      return fallback;
    }
    const json& v = Get(key);
    if (!v.is_boolean()) Fail(Path(key), "must be true or false");
    return v.get<bool>();
  }

  std::string String(const std::string& key,
                     std::optional<std::string> fallback = {}) const {
    if (!Has(key)) {
      if (!fallback) Fail(Path(key), "is required");
      Default(key);
      return *fallback;
    }
    const json& v = Get(key);
    if (!v.is_string()) Fail(Path(key), "must be a string");
    return v.get<std::string>();
  }

  void Default(const std::string& key) const {
    if (defaulted_ != nullptr) defaulted_->push_back(Path(key));
  }

  // Unknown keys are schema violations.
  void Finish() const {
    for (const auto& [key, value] : object_.items()) {
      if (!used_.contains(key)) Fail(Path(key), "is not a known field");
    }
  }

 private:
  const json& object_;
  std::string path_;
  std::vector<std::string>* defaulted_;
  mutable std::set<std::string> used_;
};

void Require(bool ok, const std::string& field, const std::string& what) {
  if (!ok) Reader::Fail(field, what);
}

StrategyKind ParseStrategy(const json& item, const std::string& path) {
  std::string name;
  std::optional<double> alpha;
  std::optional<std::int64_t> grid;
  if (item.is_string()) {
    name = item.get<std::string>();
  } else if (item.is_object()) {
    Reader r(item, path, nullptr);
    name = r.String("name");
    if (r.Has("alpha")) alpha = r.Number("alpha");
    if (r.Has("grid_size")) grid = r.Integer("grid_size");
    r.Finish();
  } else {
    Reader::Fail(path, "must be a strategy name or object");
  }
  StrategyType type;
  try {
    type = ParseStrategyType(name);
  } catch (const DomainError& e) {
    Reader::Fail(path, e.what());
  }
  StrategyKind kind{type};
  if (type == StrategyType::kThresholdUserSelection) {
    Require(alpha.has_value(), path + ".alpha", "is required for tus");
    Require(*alpha >= 0.0 && *alpha <= 1.0, path + ".alpha", "must lie in [0, 1]");
    kind.alpha = *alpha;
  } else if (alpha) {
    Reader::Fail(path + ".alpha", "only applies to tus");
  }
  if (grid) {
    Require(type == StrategyType::kSocialOptimum, path + ".grid_size",
            "only applies to social");
    Require(*grid >= 2, path + ".grid_size", "must be >= 2");
    kind.grid_size = static_cast<int>(*grid);
  }
  return kind;
}

json StrategyToJson(const StrategyKind& kind) {
  switch (kind.type) {
    case StrategyType::kThresholdUserSelection:
      return {{"name", kind.Name()}, {"alpha", kind.alpha}};
    case StrategyType::kSocialOptimum:
      return {{"name", kind.Name()}, {"grid_size", kind.grid_size}};
    default:
      return kind.Name();
  }
}

std::string ChannelKindName(ChannelConfig::Kind kind) {
  switch (kind) {
    case ChannelConfig::Kind::kTwoState:
      return "two_state";
    case ChannelConfig::Kind::kRayleigh:
      return "rayleigh";
    case ChannelConfig::Kind::kFile:
      return "file";
  }
  return "";
}

// JSON has no infinity; null stands for an untruncated upper tail.
json Finite(double x) {
  return std::isfinite(x) ? json(x) : json(nullptr);
}

void Validate(const ExperimentConfig& c) {
  Require(c.players >= 1, "game.players", "must be >= 1");
  Require(c.rate.has_value() != c.a.has_value(), "game",
          "exactly one of 'rate' and 'a' must be given");
  if (c.rate) {
    Require(std::isfinite(*c.rate) && *c.rate > 0, "game.rate", "must be > 0");
  }
  if (c.a) Require(std::isfinite(*c.a) && *c.a > 0, "game.a", "must be > 0");
  Require(c.noise_power > 0, "game.noise_power", "must be > 0");
  Require(c.max_power > 0, "game.max_power", "must be > 0");
  Require(!c.strategies.empty(), "strategies", "must be non-empty");
  Require(c.horizon >= 1, "engine.horizon", "must be >= 1");
  Require(c.lambda > 0 && c.lambda < 1, "engine.lambda", "must lie in (0, 1)");
  Require(c.replicates >= 1, "engine.replicates", "must be >= 1");
  Require(c.detection_tolerance > 0, "engine.detection_tolerance", "must be > 0");
  if (c.deviation) {
    Require(c.deviation->player >= 0 && c.deviation->player < c.players,
            "engine.deviation.player", "must index a player");
    Require(c.deviation->start_stage >= 1, "engine.deviation.start_stage",
            "must be >= 1");
  }
  if (c.sweep) {
    const auto& s = *c.sweep;
    Require(s.axis == "players" || s.axis == "ratio" || s.axis == "alpha",
            "sweep.axis", "must be one of players, ratio, alpha");
    Require(!s.values.empty(), "sweep.values", "must be non-empty");
    for (double v : s.values) {
      if (s.axis == "players") {
        Require(v >= 1 && v == std::floor(v) && v <= 64, "sweep.values",
                "player counts must be integers in [1, 64]");
      } else if (s.axis == "ratio") {
        Require(v >= 1, "sweep.values", "gain ratios must be >= 1");
      } else {
        Require(v >= 0 && v <= 1, "sweep.values", "alpha values must lie in [0, 1]");
      }
    }
    if (s.axis == "ratio") {
      Require(c.channel.kind == ChannelConfig::Kind::kTwoState, "sweep.axis",
              "a ratio sweep needs a two_state channel");
    }
    if (s.axis == "players") {
      Require(c.channel.kind != ChannelConfig::Kind::kFile, "sweep.axis",
              "a player sweep cannot use a channel model file");
    }
  }
  Require(c.region_grid >= 2, "region.grid_size", "must be >= 2");
  Require(c.partition_stages >= 1, "partition.stages", "must be >= 1");
  Require(c.partition_player >= 0 && c.partition_player < c.players,
          "partition.player", "must index a player");
}

}  // namespace

bool ChannelConfig::operator==(const ChannelConfig& o) const {
  if (kind != o.kind) return false;
  switch (kind) {
    case Kind::kTwoState:
      return two_state.eta_min == o.two_state.eta_min &&
             two_state.eta_max == o.two_state.eta_max &&
             two_state.p_high == o.two_state.p_high;
    case Kind::kRayleigh:
      return rayleigh.scale == o.rayleigh.scale &&
             rayleigh.eta_min == o.rayleigh.eta_min &&
             rayleigh.eta_max == o.rayleigh.eta_max &&
             rayleigh.bins == o.rayleigh.bins;
    case Kind::kFile:
      return path == o.path;
  }
  return false;
}

double ExperimentConfig::efficiency_a() const {
  return a ? *a : std::exp2(*rate) - 1.0;
}

double ExperimentConfig::utility_rate() const { return rate ? *rate : 1.0; }

bool ExperimentConfig::operator==(const ExperimentConfig& o) const {
  auto same_dev = [](const std::optional<DeviationSpec>& x,
                     const std::optional<DeviationSpec>& y) {
    if (x.has_value() != y.has_value()) return false;
    return !x || (x->player == y->player && x->start_stage == y->start_stage &&
                  x->mode == y->mode);
  };
  return seed == o.seed && players == o.players && rate == o.rate && a == o.a &&
         noise_power == o.noise_power && max_power == o.max_power &&
         channel == o.channel && strategies == o.strategies &&
         horizon == o.horizon && lambda == o.lambda &&
         replicates == o.replicates &&
         detection_tolerance == o.detection_tolerance && trace == o.trace &&
         same_dev(deviation, o.deviation) && sweep == o.sweep &&
         region_grid == o.region_grid &&
         partition_stages == o.partition_stages &&
         partition_player == o.partition_player &&
         output_dir == o.output_dir && defaulted == o.defaulted;
}

ExperimentConfig ParseConfig(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    const auto upto = std::min<std::size_t>(e.byte, text.size());
    const auto line = 1 + std::count(text.begin(), text.begin() + upto, '\n');
    throw ConfigError(fmt::format("config syntax error at line {}: {}", line, e.what()));
  }

  ExperimentConfig c;
  std::vector<std::string> defaulted;
  Reader top(root, "", &defaulted);
  if (top.Has("format")) {
    Require(top.String("format") == kConfigFormat, "format",
            fmt::format("must be \"{}\"", kConfigFormat));
  }
  const json& seed = top.Get("seed");
  Require(seed.is_number_unsigned() || (seed.is_number_integer() && seed.get<std::int64_t>() >= 0),
          "seed", "must be a non-negative integer");
  c.seed = seed.get<std::uint64_t>();

  {
    Reader g(top.Get("game"), "game", &defaulted);
    const std::int64_t players = g.Integer("players");
    Require(players >= 1 && players <= 64, "game.players", "must lie in [1, 64]");
    c.players = static_cast<int>(players);
    if (g.Has("rate")) c.rate = g.Number("rate");
    if (g.Has("a")) c.a = g.Number("a");
    c.noise_power = g.Number("noise_power", 1.0);
    c.max_power = g.Number("max_power", 1000.0);
    g.Finish();
  }

  if (top.Has("channel")) {
    Reader ch(top.Get("channel"), "channel", &defaulted);
    const std::string kind = ch.String("kind");
    if (kind == "two_state") {
      c.channel.kind = ChannelConfig::Kind::kTwoState;
      c.channel.two_state.eta_min = ch.Number("eta_min", 1.0);
      c.channel.two_state.eta_max = ch.Number("eta_max");
      c.channel.two_state.p_high = ch.Number("p_high", 0.5);
    } else if (kind == "rayleigh") {
      c.channel.kind = ChannelConfig::Kind::kRayleigh;
      c.channel.rayleigh.scale = ch.Number("scale", 1.0);
      c.channel.rayleigh.eta_min = ch.Number("eta_min", 0.1);
      if (ch.Has("eta_max") && ch.Get("eta_max").is_null()) {
        c.channel.rayleigh.eta_max = std::numeric_limits<double>::infinity();
      } else {
        c.channel.rayleigh.eta_max = ch.Number("eta_max", 10.0);
      }
      const std::int64_t bins = ch.Integer("bins", 16);
      Require(bins >= 2 && bins <= 4096, "channel.bins", "must lie in [2, 4096]");
      c.channel.rayleigh.bins = static_cast<int>(bins);
    } else if (kind == "file") {
      c.channel.kind = ChannelConfig::Kind::kFile;
      c.channel.path = ch.String("path");
    } else {
      Reader::Fail("channel.kind", "must be one of two_state, rayleigh, file");
    }
    ch.Finish();
  } else {
    top.Default("channel");
  }

  if (top.Has("strategies")) {
    const json& list = top.Get("strategies");
    Require(list.is_array(), "strategies", "must be an array");
    for (std::size_t s = 0; s < list.size(); ++s) {
      c.strategies.push_back(
          ParseStrategy(list[s], fmt::format("strategies[{}]", s)));
    }
  } else {
    top.Default("strategies");
    c.strategies = {StrategyKind::BestUserSelection()};
  }

  if (top.Has("engine")) {
    Reader e(top.Get("engine"), "engine", &defaulted);
    c.horizon = e.Integer("horizon", 100000);
    c.lambda = e.Number("lambda", 1e-3);
    c.replicates = static_cast<int>(e.Integer("replicates", 16));
    c.detection_tolerance = e.Number("detection_tolerance", 1e-6);
    c.trace = e.Bool("trace", false);
    if (e.Has("deviation")) {
      Reader d(e.Get("deviation"), "engine.deviation", nullptr);
      DeviationSpec dev;
      dev.player = static_cast<int>(d.Integer("player"));
      dev.start_stage = d.Integer("start_stage");
      const std::string mode = d.String("mode", "one_shot");
      Require(mode == "one_shot" || mode == "permanent", "engine.deviation.mode",
              "must be one_shot or permanent");
      dev.mode = mode == "permanent" ? DeviationSpec::Mode::kPermanent
                                     : DeviationSpec::Mode::kOneShot;
      d.Finish();
      c.deviation = dev;
    }
    e.Finish();
  } else {
    for (const char* key : {"engine.horizon", "engine.lambda", "engine.replicates",
                            "engine.detection_tolerance", "engine.trace"}) {
      defaulted.push_back(key);
    }
  }

  if (top.Has("sweep")) {
    Reader s(top.Get("sweep"), "sweep", nullptr);
    SweepConfig sweep;
    sweep.axis = s.String("axis");
    const json& values = s.Get("values");
    Require(values.is_array(), "sweep.values", "must be an array");
    for (const auto& v : values) {
      Require(v.is_number(), "sweep.values", "must hold numbers");
      sweep.values.push_back(v.get<double>());
    }
    s.Finish();
    c.sweep = sweep;
  }

  if (top.Has("region")) {
    Reader r(top.Get("region"), "region", &defaulted);
    c.region_grid = static_cast<int>(r.Integer("grid_size", 48));
    r.Finish();
  } else {
    defaulted.push_back("region.grid_size");
  }

  if (top.Has("partition")) {
    Reader p(top.Get("partition"), "partition", &defaulted);
    c.partition_stages = p.Integer("stages", c.horizon);
    c.partition_player = static_cast<int>(p.Integer("player", 0));
    p.Finish();
  } else {
    c.partition_stages = c.horizon;
    defaulted.push_back("partition.stages");
    defaulted.push_back("partition.player");
  }

  if (top.Has("outputs")) {
    Reader o(top.Get("outputs"), "outputs", nullptr);
    c.output_dir = o.String("dir", "");
    o.Finish();
  }

  // Provenance written by SerializeConfig: fields that were defaults when the
  // config was first resolved stay flagged.
  if (top.Has("provenance")) {
    Reader p(top.Get("provenance"), "provenance", nullptr);
    const json& list = p.Get("defaulted");
    Require(list.is_array(), "provenance.defaulted", "must be an array");
    for (const auto& item : list) {
      Require(item.is_string(), "provenance.defaulted", "must hold strings");
      defaulted.push_back(item.get<std::string>());
    }
    p.Finish();
  }
  top.Finish();

  std::sort(defaulted.begin(), defaulted.end());
  defaulted.erase(std::unique(defaulted.begin(), defaulted.end()), defaulted.end());
  c.defaulted = std::move(defaulted);
  Validate(c);
  return c;
}

ExperimentConfig LoadConfig(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return ParseConfig(buffer.str());
}

std::string SerializeConfig(const ExperimentConfig& c) {
  json root;
  root["format"] = kConfigFormat;
  root["seed"] = c.seed;
  json game = {{"players", c.players},
               {"noise_power", c.noise_power},
               {"max_power", c.max_power}};
  if (c.rate) game["rate"] = *c.rate;
  if (c.a) game["a"] = *c.a;
  root["game"] = game;

  json channel = {{"kind", ChannelKindName(c.channel.kind)}};
  switch (c.channel.kind) {
    case ChannelConfig::Kind::kTwoState:
      channel["eta_min"] = c.channel.two_state.eta_min;
      channel["eta_max"] = c.channel.two_state.eta_max;
      channel["p_high"] = c.channel.two_state.p_high;
      break;
    case ChannelConfig::Kind::kRayleigh:
      channel["scale"] = c.channel.rayleigh.scale;
      channel["eta_min"] = c.channel.rayleigh.eta_min;
      channel["eta_max"] = Finite(c.channel.rayleigh.eta_max);
      channel["bins"] = c.channel.rayleigh.bins;
      break;
    case ChannelConfig::Kind::kFile:
      channel["path"] = c.channel.path;
      break;
  }
  root["channel"] = channel;

  json strategies = json::array();
  for (const auto& kind : c.strategies) strategies.push_back(StrategyToJson(kind));
  root["strategies"] = strategies;

  json engine = {{"horizon", c.horizon},
                 {"lambda", c.lambda},
                 {"replicates", c.replicates},
                 {"detection_tolerance", c.detection_tolerance},
                 {"trace", c.trace}};
  if (c.deviation) {
    engine["deviation"] = {
        {"player", c.deviation->player},
        {"start_stage", c.deviation->start_stage},
        {"mode", c.deviation->mode == DeviationSpec::Mode::kPermanent
                     ? "permanent"
                     : "one_shot"}};
  }
  root["engine"] = engine;

  if (c.sweep) root["sweep"] = {{"axis", c.sweep->axis}, {"values", c.sweep->values}};
  root["region"] = {{"grid_size", c.region_grid}};
  root["partition"] = {{"stages", c.partition_stages},
                       {"player", c.partition_player}};
  if (!c.output_dir.empty()) root["outputs"] = {{"dir", c.output_dir}};
  root["provenance"] = {{"defaulted", c.defaulted}};
  return root.dump(2) + "\n";
}

std::map<std::string, std::string> DefaultedValues(const ExperimentConfig& c) {
  const json full = json::parse(SerializeConfig(c));
  std::map<std::string, std::string> out;
  for (const auto& field : c.defaulted) {
    // Dotted path into the serialized config.
    const json* node = &full;
    std::stringstream parts(field);
    std::string part;
    bool found = true;
    while (std::getline(parts, part, '.')) {
      if (!node->is_object() || !node->contains(part)) {
        found = false;
        break;
      }
      node = &node->at(part);
    }
    out[field] = found ? node->dump() : "null";
  }
  if (c.a) out["game.rate (utility scale)"] = "1";
  return out;
}

GameParams BuildGame(const ExperimentConfig& c) {
  return GameParams::Symmetric(c.players, c.utility_rate(), c.noise_power,
                               c.max_power,
                               EfficiencyFunction::Exponential(c.efficiency_a()));
}

ChannelModel BuildChannel(const ExperimentConfig& c) {
  switch (c.channel.kind) {
    case ChannelConfig::Kind::kTwoState:
      return BuildModel(c.channel.two_state, c.players);
    case ChannelConfig::Kind::kRayleigh:
      return BuildModel(c.channel.rayleigh, c.players);
    case ChannelConfig::Kind::kFile:
      return BuildModel(LoadExplicitModel(c.channel.path), c.players);
  }
  throw ModelError("unknown channel kind");
}

ExperimentConfig AtSweepPoint(const ExperimentConfig& config, double value) {
  ExperimentConfig c = config;
  if (!c.sweep) return c;
  if (c.sweep->axis == "players") {
    c.players = static_cast<int>(value);
    c.partition_player = std::min(c.partition_player, c.players - 1);
  } else if (c.sweep->axis == "ratio") {
    c.channel.two_state.eta_max = c.channel.two_state.eta_min * value;
  } else if (c.sweep->axis == "alpha") {
    for (auto& kind : c.strategies) {
      if (kind.type == StrategyType::kThresholdUserSelection) kind.alpha = value;
    }
  }
  c.sweep.reset();
  return c;
}

const std::vector<std::string>& PresetNames() {
  static const std::vector<std::string> names = {"fig2", "fig3", "fig4", "fig5",
                                                 "partition"};
  return names;
}

ExperimentConfig Preset(const std::string& name, std::uint64_t seed) {
  ExperimentConfig c;
  c.seed = seed;
  // Constants the experiments do not state.
  std::vector<std::string> defaulted = {
      "game.noise_power", "game.max_power", "engine.lambda",
      "engine.replicates", "engine.detection_tolerance", "engine.trace",
      "region.grid_size", "partition.player"};
  const std::vector<std::string> rayleigh_defaults = {"channel.scale", "channel.eta_min",
                                  "channel.eta_max", "channel.bins"};
  c.horizon = 100000;
  c.partition_stages = 100000;
  if (name == "fig2") {
    c.players = 10;
    c.a = 0.1;
    c.channel.kind = ChannelConfig::Kind::kTwoState;
    c.channel.two_state = {1.0, 1.0, 0.5};
    defaulted.push_back("channel.eta_min");
    c.strategies = {StrategyKind::BestUserSelection(), StrategyKind::OneShotNash(),
                    StrategyKind::OperatingPoint()};
    c.sweep = SweepConfig{"ratio", {1, 2, 4, 8}};
    defaulted.push_back("sweep.values");
  } else if (name == "fig3") {
    c.players = 2;
    c.a = 0.5;
    c.channel.kind = ChannelConfig::Kind::kTwoState;
    c.channel.two_state = {1.0, 4.0, 0.5};
    defaulted.push_back("channel.eta_min");
    c.strategies = {StrategyKind::OneShotNash(), StrategyKind::OperatingPoint(),
                    StrategyKind::BestUserSelection(), StrategyKind::PureTimeSharing()};
  } else if (name == "fig4") {
    c.players = 1;
    c.a = 0.1;
    defaulted.insert(defaulted.end(), rayleigh_defaults.begin(), rayleigh_defaults.end());
    c.strategies = {StrategyKind::OneShotNash(), StrategyKind::PureTimeSharing(),
                    StrategyKind::OperatingPoint(),
                    StrategyKind::ThresholdUserSelection(0.5),
                    StrategyKind::BestUserSelection()};
    c.sweep = SweepConfig{"players", {1, 2, 3, 4, 5, 6, 7, 8, 9, 10}};
  } else if (name == "fig5") {
    c.players = 2;
    c.a = 0.1;
    defaulted.push_back("game.a");
    defaulted.insert(defaulted.end(), rayleigh_defaults.begin(), rayleigh_defaults.end());
    c.strategies = {StrategyKind::BestUserSelection()};
    c.sweep = SweepConfig{"players", {2, 3, 4, 5, 6, 7, 8, 9, 10}};
  } else if (name == "partition") {
    c.players = 5;
    c.a = 0.2;
    defaulted.insert(defaulted.end(), rayleigh_defaults.begin(), rayleigh_defaults.end());
    c.strategies = {StrategyKind::BestUserSelection()};
  } else {
    std::string valid;
    for (const auto& n : PresetNames()) valid += (valid.empty() ? "" : ", ") + n;
    throw ConfigError(fmt::format("unknown preset '{}'; valid presets: {}", name, valid));
  }
  std::sort(defaulted.begin(), defaulted.end());
  c.defaulted = std::move(defaulted);
  Validate(c);
  return c;
}

}  // namespace powergame::cli

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

#include "powergame/cli/experiment.h"

#include <fstream>
#include <system_error>

#include <fmt/format.h>
#include <nlohmann/json.hpp>
#include <openssl/evp.h>

#include "powergame/analysis.h"
#include "powergame/engine.h"
#include "powergame/errors.h"
#include "powergame/random.h"

namespace powergame::cli {
namespace {

using nlohmann::ordered_json;

constexpr const char* kManifestFormat = "powergame-manifest/1";

class Csv {
 public:
  explicit Csv(std::string_view header) { out_ = std::string(header) + "\n"; }

  template <typename... Args>
  void Row(const Args&... cells) {
    bool first = true;
    ((out_ += (first ? "" : ","), out_ += Cell(cells), first = false), ...);
    out_ += "\n";
  }

  std::string Take() { return std::move(out_); }

 private:
  static std::string Cell(double x) { return FormatNumber(x); }
  static std::string Cell(int x) { return std::to_string(x); }
  static std::string Cell(std::int64_t x) { return std::to_string(x); }
  static std::string Cell(std::size_t x) { return std::to_string(x); }
  static std::string Cell(const std::string& s) { return s; }
  static std::string Cell(const char* s) { return s; }

  std::string out_;
};

std::string AxisLabel(const ExperimentConfig& c) {
  if (!c.sweep || c.sweep->axis == "players") return "K";
  return c.sweep->axis;
}

// The sweep points of a config: (value, config at that point, seed).
struct SweepPoint {
  double value;
  ExperimentConfig config;
  std::uint64_t seed;
};

std::vector<SweepPoint> SweepPoints(const ExperimentConfig& c) {
  if (!c.sweep) return {{static_cast<double>(c.players), c, c.seed}};
  std::vector<SweepPoint> points;
  for (std::size_t s = 0; s < c.sweep->values.size(); ++s) {
    const double v = c.sweep->values[s];
    points.push_back({v, AtSweepPoint(c, v), DeriveSeed(c.seed, s)});
  }
  return points;
}

std::vector<StrategyKind> Profile(const ExperimentConfig& c) {
  const auto k = static_cast<std::size_t>(c.players);
  if (c.strategies.size() == 1) return std::vector<StrategyKind>(k, c.strategies[0]);
  if (c.strategies.size() == k) return c.strategies;
  throw ConfigError(fmt::format(
      "config field 'strategies': simulate needs 1 entry or one per player ({})",
      k));
}

void RejectSweep(const ExperimentConfig& c, Verb verb) {
  if (c.sweep) {
    throw ConfigError(fmt::format("config field 'sweep': not supported by {}",
                                  VerbName(verb)));
  }
}

std::vector<Artifact> Simulate(const ExperimentConfig& c, const std::string& table) {
  RejectSweep(c, Verb::kSimulate);
  const GameParams params = BuildGame(c);
  const ChannelModel model = BuildChannel(c);
  const auto kinds = Profile(c);
  std::vector<RunResult> runs(static_cast<std::size_t>(c.replicates));
  ParallelFor(c.replicates, [&](int r) {
    EngineConfig cfg;
    cfg.horizon = c.horizon;
    cfg.lambda = c.lambda;
    cfg.seed = DeriveSeed(c.seed, static_cast<std::uint64_t>(r));
    cfg.deviation = c.deviation;
    cfg.detection_tolerance = c.detection_tolerance;
    cfg.record_trace = c.trace && r == 0;
    runs[static_cast<std::size_t>(r)] = RunGame(params, model, kinds, cfg);
  });

  Csv summary("player,v_discounted,u_avg,stderr");
  for (int i = 0; i < c.players; ++i) {
    std::vector<double> discounted, average;
    for (const auto& run : runs) {
      discounted.push_back(run.discounted[i]);
      average.push_back(run.average[i]);
    }
    const MeanAndError u = Summarize(average);
    summary.Row(i, Summarize(discounted).mean, u.mean, u.std_error);
  }
  std::vector<Artifact> out = {{table + ".csv", summary.Take()}};
  if (c.trace) {
    Csv trace("t,player,eta,power,sinr,utility,recommended,punishing");
    for (const auto& rec : runs[0].records) {
      for (int i = 0; i < c.players; ++i) {
        trace.Row(rec.t, i, rec.eta[i], rec.power[i], rec.sinr[i], rec.utility[i],
                  static_cast<int>(rec.recommended[i]),
                  static_cast<int>(rec.punishing[i]));
      }
    }
    out.push_back({"trace.csv", trace.Take()});
  }
  return out;
}

std::vector<Artifact> Region(const ExperimentConfig& c, const std::string& table) {
  RejectSweep(c, Verb::kRegion);
  const RegionResult r = FeasibleRegion2p(BuildGame(c), BuildChannel(c), c.region_grid);
  Csv hull("x,y");
  for (const auto& v : r.hull) hull.Row(v.x, v.y);
  Csv fstar("x,y");
  for (const auto& v : r.fstar_vertices) fstar.Row(v.x, v.y);
  Csv markers("name,u1,u2");
  for (const auto& m : r.markers) markers.Row(m.name, m.point.x, m.point.y);
  markers.Row("minmax", r.minmax[0], r.minmax[1]);
  return {{table + ".csv", hull.Take()},
          {"fstar.csv", fstar.Take()},
          {"markers.csv", markers.Take()}};
}

std::vector<Artifact> Dominance(const ExperimentConfig& c, const std::string& table,
                                std::vector<std::string>& warnings) {
  const std::string axis = AxisLabel(c);
  DominanceReport report;
  for (const auto& point : SweepPoints(c)) {
    const auto& pc = point.config;
    AppendDominance(BuildGame(pc), BuildChannel(pc), pc.strategies, pc.horizon,
                    point.seed, pc.replicates, point.value, report);
  }
  Csv rows(axis + ",strategy,mean,stderr");
  for (const auto& row : report.rows) {
    rows.Row(row.sweep_value, row.strategy, row.estimate.mean, row.estimate.std_error);
  }
  Csv checks(axis + ",versus,player,diff,stderr,holds");
  for (const auto& f : report.findings) {
    const std::string player = f.player < 0 ? "avg" : std::to_string(f.player);
    checks.Row(f.sweep_value, f.versus, player, f.difference.mean,
               f.difference.std_error, f.holds ? "true" : "false");
    if (!f.holds) {
      warnings.push_back(fmt::format(
          "{}={}: E[u_bus] - E[u_{}] = {} (se {}) for player {}", axis,
          FormatNumber(f.sweep_value), f.versus, FormatNumber(f.difference.mean),
          FormatNumber(f.difference.std_error), player));
    }
  }
  return {{table + ".csv", rows.Take()}, {table + "_checks.csv", checks.Take()}};
}

std::vector<Artifact> LambdaMaxTable(const ExperimentConfig& c,
                                     const std::string& table,
                                     std::vector<std::string>& warnings) {
  const std::string axis = AxisLabel(c);
  Csv rows(axis +
           ",lambda_max,stderr,delta,delta_stderr,penalty,hypothesis_violated");
  for (const auto& point : SweepPoints(c)) {
    const auto& pc = point.config;
    const LambdaBound b = LambdaMax(BuildGame(pc), BuildChannel(pc), pc.horizon,
                                    point.seed, pc.replicates);
    std::size_t arg = 0;
    for (std::size_t i = 1; i < b.per_player.size(); ++i) {
      if (b.per_player[i] < b.per_player[arg]) arg = i;
    }
    rows.Row(point.value, b.scheme, b.scheme_error, b.delta[arg].mean,
             b.delta[arg].std_error, b.penalty,
             b.hypothesis_violated ? "true" : "false");
    if (b.hypothesis_violated) {
      warnings.push_back(fmt::format("{}={}: {}", axis, FormatNumber(point.value),
                                     b.warning));
    }
  }
  return {{table + ".csv", rows.Take()}};
}

std::vector<Artifact> Partition(const ExperimentConfig& c, const std::string& table) {
  RejectSweep(c, Verb::kPartition);
  const PartitionTable t = ConfigPartition(BuildGame(c), BuildChannel(c),
                                           c.partition_stages, c.seed,
                                           c.partition_player);
  Csv rows("k,H1_freq,H2_freq");
  for (std::size_t k = 0; k < t.h1.size(); ++k) rows.Row(k + 1, t.h1[k], t.h2[k]);
  return {{table + ".csv", rows.Take()}};
}

std::string DefaultTable(Verb verb) {
  switch (verb) {
    case Verb::kSimulate:
      return "summary";
    case Verb::kRegion:
      return "region";
    case Verb::kDominance:
      return "dominance";
    case Verb::kLambdaMax:
      return "lambdamax";
    case Verb::kPartition:
      return "partition";
  }
  return "out";
}

void WriteFile(const std::filesystem::path& path, const std::string& content) {
  const auto tmp = std::filesystem::path(path).concat(".tmp");
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw Error("cannot write " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace

Verb ParseVerb(const std::string& name) {
  for (Verb v : {Verb::kSimulate, Verb::kRegion, Verb::kDominance,
                 Verb::kLambdaMax, Verb::kPartition}) {
    if (VerbName(v) == name) return v;
  }
  throw ConfigError("unknown verb '" + name + "'");
}

std::string VerbName(Verb verb) {
  switch (verb) {
    case Verb::kSimulate:
      return "simulate";
    case Verb::kRegion:
      return "region";
    case Verb::kDominance:
      return "dominance";
    case Verb::kLambdaMax:
      return "lambdamax";
    case Verb::kPartition:
      return "partition";
  }
  return "";
}

Verb PresetVerb(const std::string& preset) {
  if (preset == "fig2" || preset == "fig4") return Verb::kDominance;
  if (preset == "fig3") return Verb::kRegion;
  if (preset == "fig5") return Verb::kLambdaMax;
  if (preset == "partition") return Verb::kPartition;
  Preset(preset, 0);  // throws the list of valid names
  return Verb::kSimulate;
}

ExperimentOutput RunExperiment(Verb verb, const ExperimentConfig& config,
                               const RunOptions& options) {
  const std::string table =
      options.table_name.empty() ? DefaultTable(verb) : options.table_name;
  ExperimentOutput out;
  switch (verb) {
    case Verb::kSimulate:
      out.artifacts = Simulate(config, table);
      break;
    case Verb::kRegion:
      out.artifacts = Region(config, table);
      break;
    case Verb::kDominance:
      out.artifacts = Dominance(config, table, out.warnings);
      break;
    case Verb::kLambdaMax:
      out.artifacts = LambdaMaxTable(config, table, out.warnings);
      break;
    case Verb::kPartition:
      out.artifacts = Partition(config, table);
      break;
  }
  if (!options.preset.empty()) {
    out.artifacts.push_back({"config.json", SerializeConfig(config)});
  }

  ordered_json manifest;
  manifest["format"] = kManifestFormat;
  manifest["verb"] = VerbName(verb);
  if (!options.preset.empty()) manifest["preset"] = options.preset;
  manifest["seed"] = config.seed;
  manifest["config"] = ordered_json::parse(SerializeConfig(config));
  ordered_json defaults = ordered_json::object();
  for (const auto& [field, value] : DefaultedValues(config)) {
    defaults[field] = {{"value", ordered_json::parse(value)}, {"default", true}};
  }
  manifest["defaults"] = defaults;
  manifest["qualitative_reproduction"] = !config.defaulted.empty();
  ordered_json files = ordered_json::array();
  for (const auto& a : out.artifacts) {
    files.push_back({{"file", a.file},
                     {"bytes", a.content.size()},
                     {"sha256", Sha256Hex(a.content)}});
  }
  manifest["artifacts"] = files;
  out.manifest = manifest.dump(2) + "\n";
  return out;
}

void WriteOutput(const ExperimentOutput& output, const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error("cannot create output directory " + dir.string());
  for (const auto& a : output.artifacts) WriteFile(dir / a.file, a.content);
  WriteFile(dir / "manifest.json", output.manifest);
}

std::string Sha256Hex(std::string_view data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int length = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &length, EVP_sha256(),
                 nullptr) != 1) {
    throw Error("SHA-256 failed");
  }
  std::string hex;
  for (unsigned int i = 0; i < length; ++i) hex += fmt::format("{:02x}", digest[i]);
  return hex;
}

std::string FormatNumber(double x) { return fmt::format("{}", x); }

}  // namespace powergame::cli

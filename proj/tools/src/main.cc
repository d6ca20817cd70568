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

// powergame: experiment runner for the power-control stochastic game.
//
//   powergame simulate  --config run.json [--out DIR]
//   powergame preset    --name fig2|fig3|fig4|fig5|partition [--seed N] [--out DIR]
//   powergame region    --config run.json [--out DIR]
//   powergame dominance --config run.json [--out DIR]
//   powergame lambdamax --config run.json [--out DIR]
//   powergame partition --config run.json [--out DIR]
//
// DIR defaults to the config's outputs.dir, then $POWERGAME_OUT, then
// ./powergame-out. Exit status: 0 success, 2 config error, 3 model error.

#include <cstdlib>
#include <iostream>

#include <CLI11.hpp>

#include "powergame/cli/config.h"
#include "powergame/cli/experiment.h"
#include "powergame/errors.h"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitModel = 3;

std::filesystem::path OutputDir(const std::string& flag,
                                const powergame::cli::ExperimentConfig& config) {
  if (!flag.empty()) return flag;
  if (!config.output_dir.empty()) return config.output_dir;
  if (const char* env = std::getenv("POWERGAME_OUT"); env != nullptr && *env) {
    return env;
  }
  return "powergame-out";
}

}  // namespace

int main(int argc, char** argv) {
  namespace pc = powergame::cli;
  CLI::App app{"Energy-efficient power control stochastic game experiments"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  std::string preset_name;
  std::uint64_t seed = 1;

  auto* preset = app.add_subcommand("preset", "Run a named experiment preset");
  preset->add_option("--name", preset_name, "fig2, fig3, fig4, fig5 or partition")
      ->required();
  preset->add_option("--seed", seed, "Master seed");
  preset->add_option("--out", out_dir, "Output directory");

  for (const char* verb :
       {"simulate", "region", "dominance", "lambdamax", "partition"}) {
    auto* sub = app.add_subcommand(verb, std::string("Run the ") + verb + " experiment");
    sub->add_option("--config", config_path, "Experiment config (JSON)")
        ->required();
    sub->add_option("--out", out_dir, "Output directory");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    const CLI::App* chosen = app.get_subcommands().front();
    pc::ExperimentConfig config;
    pc::Verb verb;
    pc::RunOptions options;
    if (chosen->get_name() == "preset") {
      verb = pc::PresetVerb(preset_name);
      config = pc::Preset(preset_name, seed);
      options.preset = preset_name;
      if (verb != pc::Verb::kRegion) options.table_name = preset_name;
    } else {
      verb = pc::ParseVerb(chosen->get_name());
      config = pc::LoadConfig(config_path);
    }
    const auto output = pc::RunExperiment(verb, config, options);
    for (const auto& w : output.warnings) std::cerr << "warning: " << w << "\n";
    const auto dir = OutputDir(out_dir, config);
    pc::WriteOutput(output, dir);
    std::cout << "wrote " << output.artifacts.size() + 1 << " files to "
              << dir.string() << "\n";
    return 0;
  } catch (const pc::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const powergame::Error& e) {
    std::cerr << "model error: " << e.what() << "\n";
    return kExitModel;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

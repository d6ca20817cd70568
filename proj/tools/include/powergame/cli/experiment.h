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

#ifndef POWERGAME_CLI_EXPERIMENT_H_
#define POWERGAME_CLI_EXPERIMENT_H_

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "powergame/cli/config.h"

namespace powergame::cli {

enum class Verb { kSimulate, kRegion, kDominance, kLambdaMax, kPartition };

// simulate | region | dominance | lambdamax | partition.
Verb ParseVerb(const std::string& name);
std::string VerbName(Verb verb);

struct Artifact {
  std::string file;
  std::string content;
};

struct ExperimentOutput {
  std::vector<Artifact> artifacts;
  // manifest.json content: config echo, seed, defaulted constants and the
  // SHA-256 of every artifact.
  std::string manifest;
  // Hypothesis or dominance checks that did not hold. Not errors.
  std::vector<std::string> warnings;
};

struct RunOptions {
  // Base name of the main table; empty picks the verb's default
  // (summary, region, dominance, lambdamax, partition).
  std::string table_name;
  // Recorded in the manifest and adds config.json to the artifacts.
  std::string preset;
};

// Runs everything in memory; nothing touches the filesystem except reading
// a channel model file. Throws ConfigError or powergame::Error.
ExperimentOutput RunExperiment(Verb verb, const ExperimentConfig& config,
                               const RunOptions& options = {});

// Verb and table name a preset runs with.
Verb PresetVerb(const std::string& preset);

// Writes the artifacts and then the manifest into `dir` (created if needed).
// Each file is written to a temporary name and renamed into place.
void WriteOutput(const ExperimentOutput& output,
                 const std::filesystem::path& dir);

// Lowercase hex SHA-256.
std::string Sha256Hex(std::string_view data);

// Shortest round-trip decimal form used in every CSV.
std::string FormatNumber(double x);

}  // namespace powergame::cli

#endif  // POWERGAME_CLI_EXPERIMENT_H_

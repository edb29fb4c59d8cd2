// Copyright 2026 The oqs Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "oqs/integrators.hpp"
#include "oqs/io.hpp"
#include "oqs/models.hpp"

namespace oqs {

struct InitialSpec {
  std::string kind = "default";  // default | basis | coherent
  int index = 0;
  cplx alpha{0, 0};
};

struct NoiseTask {
  bool enabled = false;
  std::string kind = "white-gaussian";
  double gamma = 0;
  double tau = 0;
  std::string coupling;
  int n = 0;  // realizations; 0 selects the averaged OU master equation
};

struct ZenoTask {
  double tau = 0.1;
  int N = 10;
  std::string mode = "ensemble";      // ensemble | trajectory | post-selected
  std::string schedule = "fixed";     // fixed | rotating
  double axis_rate = 0;
  std::string observable;
};

struct SweepSpec {
  std::string param;
  std::vector<double> values;
  std::vector<std::string> metrics;  // gap | kernel-dim | purity | pt-order | density | steady:<expr>
  std::string method = "dense";      // dense | sparse
};

struct ExperimentConfig {
  ModelSpec model;
  std::string task;  // spectrum | evolve | trajectories | analyze | zeno | sweep
  bool has_grid = false;
  TimeGrid grid;
  std::vector<std::string> observables;
  InitialSpec initial;
  std::optional<std::uint64_t> seed;
  int n = 0;
  std::string scheme = "mcwf";
  std::vector<double> efficiencies;
  int records = 10;
  std::string method = "dense";
  bool eigenvectors = false;
  int krylov = 60;
  NoiseTask noise;
  ZenoTask zeno;
  SweepSpec sweep;
  int threads = 0;
  std::string out;
};

/// Strict parse; every violation is a ConfigError naming the offending field.
ExperimentConfig parse_config(const json& j);
ExperimentConfig parse_config_text(const std::string& text);
/// Canonical form: model parameters resolved, keys sorted, irrelevant sections omitted.
json config_to_json(const ExperimentConfig& cfg);
/// FNV-1a over the canonical form without "out" and "threads".
std::string config_hash(const ExperimentConfig& cfg);

struct RunManifest {
  std::string config_hash;
  std::string task;
  std::vector<std::string> artifacts;
  std::string version;
  double wall_time = 0;
  json to_json() const;
};

RunManifest run_experiment(const ExperimentConfig& cfg, const std::string& out_dir, int threads = 0);

json catalog_json();
std::string catalog_text();

std::string library_version();

/// Exit codes: 0 ok, 2 config or usage error, 3 capacity error, 4 numerical failure.
int cli_main(int argc, char** argv);

}  // namespace oqs

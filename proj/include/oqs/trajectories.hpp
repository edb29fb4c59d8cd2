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
#include <map>
#include <string>
#include <vector>

#include "oqs/core.hpp"
#include "oqs/generator.hpp"
#include "oqs/integrators.hpp"

namespace oqs {

enum class Scheme { Mcwf, SmeJump, Homodyne, Qsd };

std::string scheme_name(Scheme s);
Scheme parse_scheme(const std::string& s);

struct JumpEvent {
  double t = 0;
  int channel = 0;
};

struct TrajectoryRecord {
  std::uint64_t seed = 0;
  std::uint64_t index = 0;
  Scheme scheme = Scheme::Mcwf;
  std::vector<double> times;
  std::vector<std::vector<double>> obs;  // [observable][sample], real parts
  std::vector<Operator> states;          // density matrices (projectors for pure schemes)
  std::vector<JumpEvent> jumps;
  std::vector<std::vector<double>> signal;  // homodyne current per channel per step
  std::vector<double> norm_times, norm_values;  // MCWF norm record
  double max_norm_defect = 0;                   // diffusive schemes, after renormalization
};

struct TrajectoryOptions {
  bool store_states = false;
  bool record_norm = false;
  bool record_signal = false;
  double max_step_probability = 0.1;  // jump SME guard
  double crossing_rel_tol = 1e-10;    // MCWF bisection tolerance relative to dt
};

/// Random numbers per trajectory come from make_stream(seed, index). Draw order for MCWF:
/// one uniform for the norm threshold, then per jump one uniform for the channel and one for the
/// next threshold.
TrajectoryRecord mcwf_run(const LindbladModel& model, const PureState& psi0, const TimeGrid& grid,
                          std::uint64_t seed, const std::vector<Operator>& observables = {},
                          const TrajectoryOptions& opts = {}, std::uint64_t index = 0);

TrajectoryRecord sme_jump_run(const LindbladModel& model, const Operator& rho0,
                              const std::vector<double>& efficiencies, const TimeGrid& grid,
                              std::uint64_t seed, const std::vector<Operator>& observables = {},
                              const TrajectoryOptions& opts = {}, std::uint64_t index = 0);

TrajectoryRecord homodyne_run(const LindbladModel& model, const PureState& psi0,
                              const TimeGrid& grid, std::uint64_t seed,
                              const std::vector<Operator>& observables = {},
                              const TrajectoryOptions& opts = {}, std::uint64_t index = 0);

TrajectoryRecord qsd_run(const LindbladModel& model, const PureState& psi0, const TimeGrid& grid,
                         std::uint64_t seed, const std::vector<Operator>& observables = {},
                         const TrajectoryOptions& opts = {}, std::uint64_t index = 0);

/// 1e-3 / ||H_eff|| (spectral norm estimate).
double default_diffusive_dt(const LindbladModel& model);

struct EnsembleStats {
  int n = 0;
  Scheme scheme = Scheme::Mcwf;
  std::vector<double> times;
  std::vector<std::vector<double>> mean;     // [obs][sample]
  std::vector<std::vector<double>> stderr_;  // [obs][sample]
  std::vector<Operator> mean_states;
  std::vector<double> purity;
  std::map<int, int> jump_count_histogram;
  std::vector<double> waiting_times;
};

EnsembleStats ensemble_average(const std::vector<TrajectoryRecord>& records);

struct EnsembleRequest {
  Scheme scheme = Scheme::Mcwf;
  PureState psi0;
  Operator rho0;  // sme-jump only; defaults to the projector of psi0
  std::vector<double> efficiencies;
  TimeGrid grid;
  int n = 100;
  std::uint64_t seed = 0;
  std::vector<Operator> observables;
  TrajectoryOptions options;
  int threads = 0;
};

struct EnsembleResult {
  EnsembleStats stats;
  std::vector<TrajectoryRecord> records;
};

EnsembleResult run_ensemble(const LindbladModel& model, const EnsembleRequest& req,
                            bool keep_records = true);

struct JumpStatistics {
  std::vector<int> counts;                      // total counts per record in the window
  std::vector<std::vector<int>> channel_counts;  // [record][channel]
  double mean_count = 0;
  double variance = 0;
  double fano = 0;
  std::vector<double> waiting_times;
  double mean_waiting_time = 0;
  std::map<int, int> histogram;
};

/// Counts jumps with t in [t_start, t_end]; waiting times between consecutive jumps in the window.
JumpStatistics jump_statistics(const std::vector<TrajectoryRecord>& records, double t_start,
                               double t_end, int n_channels = 0);

}  // namespace oqs

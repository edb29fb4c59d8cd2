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

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "oqs/core.hpp"
#include "oqs/generator.hpp"

namespace oqs {

struct ModelSpec {
  std::string name;
  std::map<std::string, double> params;
};

struct ParamSchema {
  std::string name;
  double default_value = 0;
  std::string description;
  bool integer = false;
  double min_value = -1e300;
};

struct ModelInfo {
  std::string name;
  std::string description;
  std::vector<ParamSchema> params;
};

const std::vector<ModelInfo>& model_catalog();
const ModelInfo& model_info(const std::string& name);

/// Fills defaults and validates names, integrality and ranges.
ModelSpec resolve_spec(const ModelSpec& spec);

/// A model plus named operators (global and per site) and a default initial state.
struct BuiltModel {
  ModelSpec spec;
  LindbladModel model;
  std::map<std::string, Operator> ops;
  std::map<std::string, std::vector<Operator>> site_ops;
  PureState initial;
  std::vector<std::string> notes;
};

BuiltModel build_model_full(const ModelSpec& spec);
LindbladModel build_model(const ModelSpec& spec);

/// Jordan-Wigner annihilators on n_modes, local basis {empty, occupied}.
std::vector<Operator> fermion_annihilators(int n_modes);

enum class Stability { Stable, Unstable, Saddle };
std::string stability_name(Stability s);

struct KerrFixedPoint {
  cplx alpha{0, 0};
  double photon_density = 0;  // |alpha|^2
  Stability stability = Stability::Stable;
};

/// Fixed points of i d(alpha)/dt = (-Delta - i gamma/2 + U |alpha|^2) alpha + F.
std::vector<KerrFixedPoint> kerr_classical_fixed_points(double Delta, double gamma, double U,
                                                        double F);

struct SpinTrajectory {
  std::vector<double> times;
  std::vector<std::array<double, 3>> s;
  double max_norm_drift = 0;
  double terminal_speed = 0;  // |ds/dt| at the final time
};

SpinTrajectory collective_spin_classical(const std::array<double, 3>& s0, double gamma,
                                         double t1, double dt, int stride = 1);

/// Steady-state order parameter |<SA- SA+> - <SB- SB+>| / sum.
double pt_order_parameter(const Operator& rho, double S);

enum class ZenoSchedule { FixedObservable, RotatingAxis };
enum class ZenoMode { Ensemble, Trajectory, PostSelected };

struct ZenoProtocol {
  Operator H;
  ZenoSchedule schedule = ZenoSchedule::FixedObservable;
  Operator O;               // fixed observable (measured in its eigenbasis)
  double axis_rate = 0;     // theta(t) = axis_rate * t for the rotating spin-1/2 axis
  double tau = 0.1;
  int N = 10;
  PureState psi0;
  ZenoMode mode = ZenoMode::Ensemble;
  std::uint64_t seed = 0;
  void validate() const;
};

struct ZenoResult {
  std::vector<double> times;     // measurement times
  std::vector<double> survival;  // probability of the initial (or tracked) outcome at each measurement
  std::vector<int> outcomes;     // trajectory mode
  Operator final_state;
  double final_survival = 0;     // probability that every outcome hit the target (0/1 in trajectory mode)
};

ZenoResult zeno_protocol_run(const ZenoProtocol& p);

struct ZenoSubspaceComparison {
  std::vector<double> times;
  std::vector<std::vector<double>> measured, strong_field, projected;  // [sample][level] populations
  double max_dev_measured_projected = 0;
  double max_dev_field_projected = 0;
  double max_dev_measured_field = 0;
};

/// Computational-basis populations under frequent measurement of O (period tau), under H + K O and
/// under the block-diagonal H_Z = sum_n P_n H P_n.
ZenoSubspaceComparison zeno_subspace_check(const Operator& H, const Operator& O, double K,
                                           double tau, double T, const PureState& psi0,
                                           ZenoMode mode = ZenoMode::Ensemble, int samples = 200);

/// H = |0><1| + |1><0| + K(|1><2| + |2><1|).
Operator qutrit_ladder_hamiltonian(double K);
/// Maximum over t of |<1|exp(-iHt)|0>|^2.
double qutrit_max_occupation(double K, double t_max = 20);

}  // namespace oqs

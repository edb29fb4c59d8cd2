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
#include <string>
#include <vector>

#include "oqs/core.hpp"
#include "oqs/generator.hpp"

namespace oqs {

struct TimeGrid {
  double t0 = 0;
  double t1 = 1;
  double dt = 1e-3;
  int stride = 1;  // record every stride steps

  void validate() const;
  int steps() const;
  /// Step indices at which samples are recorded (always includes 0 and the last step).
  std::vector<int> sample_steps() const;
  std::vector<double> sample_times() const;
};

/// Observable series: values[k][s] is observable k at sample s.
struct Series {
  std::vector<double> times;
  std::vector<std::vector<cplx>> values;
  std::vector<Operator> states;
  double worst_eigenvalue = 0;
  std::vector<std::string> warnings;
};

Series evolve_rk4(const LindbladModel& model, const Operator& rho0, const TimeGrid& grid,
                  const std::vector<Operator>& observables = {}, bool store_states = false);

Operator evolve_expm(const Superoperator& S, const Operator& rho0, double t);
std::vector<Operator> evolve_expm(const Superoperator& S, const Operator& rho0,
                                  const std::vector<double>& times);

enum class NoiseKind { WhiteGaussian, DiscretePm1, OrnsteinUhlenbeck };

struct NoiseSpec {
  NoiseKind kind = NoiseKind::WhiteGaussian;
  double gamma = 0;
  double tau = 0;  // OU correlation time
  void validate() const;
};

NoiseKind parse_noise_kind(const std::string& s);

/// dt = 1e-3 / max(||H||, gamma ||V||^2), spectral norms.
double default_noise_dt(const Operator& H0, const std::vector<Operator>& V, double gamma);

struct NoiseEnsemble {
  std::vector<double> times;
  std::vector<std::vector<double>> mean;    // [obs][sample], real parts
  std::vector<std::vector<double>> stderr_;  // [obs][sample]
  std::vector<Operator> mean_states;
  std::vector<std::vector<std::vector<double>>> per_realization;  // [r][obs][sample] when kept
  int n = 0;
  std::uint64_t seed = 0;
};

/// Piecewise-constant noise per step: Gaussian with variance 1/dt, or +-1/sqrt(dt).
/// OU noise is sampled exactly on the grid with stationary variance 1/(2 tau).
NoiseEnsemble noisy_hamiltonian_ensemble(const Operator& H0, const std::vector<Operator>& V,
                                         const NoiseSpec& noise, int n_realizations,
                                         const TimeGrid& grid, std::uint64_t seed,
                                         const Operator& rho0,
                                         const std::vector<Operator>& observables,
                                         bool keep_realizations = false, bool keep_states = false,
                                         int threads = 0);

/// Coupled (rho, zeta) equations for Ornstein-Uhlenbeck noise, integrated with RK4.
Series ou_noise_evolve(const Operator& H0, const Operator& V, double gamma, double tau,
                       const Operator& rho0, const TimeGrid& grid,
                       const std::vector<Operator>& observables = {}, bool store_states = false);

}  // namespace oqs

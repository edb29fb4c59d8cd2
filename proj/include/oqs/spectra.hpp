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

#include <string>
#include <vector>

#include "oqs/core.hpp"
#include "oqs/generator.hpp"

namespace oqs {

struct SpectralOptions {
  double cluster_rel = 1e-8;   // eigenvalue clustering radius, relative to the spectral norm
  double kernel_rel = 1e-9;    // |lambda| below this (relative) counts as zero
  double max_condition = 1e8;  // Gram conditioning beyond this marks a defective cluster
};

/// Eigenvalues with biorthonormal right/left eigen-operators: Tr(l_k^dag r_j) = delta_kj.
/// Within the kernel the left basis starts with the identity, so Tr r = 1 for the first
/// steady mode and 0 for every other right eigen-operator.
struct SpectralDecomposition {
  int D = 0;
  double norm = 0;
  std::vector<cplx> eigenvalues;
  std::vector<Mat> right;
  std::vector<Mat> left;
  std::vector<int> cluster;
  std::vector<bool> kernel;
  int kernel_dim = 0;
  double max_gram_condition = 1;
  double kernel_tol = 0;
  std::vector<std::string> warnings;

  /// c_k = Tr(l_k^dag rho).
  Vec coefficients(const Mat& rho) const;
};

SpectralDecomposition spectral_decomposition(const Superoperator& S,
                                             const SpectralOptions& opts = {});
SpectralDecomposition spectral_decomposition(const LindbladModel& model,
                                             const SpectralOptions& opts = {});

struct SteadyStateSet {
  std::vector<Operator> states;
  double clipped_weight = 0;  // negative eigenvalue weight removed from the first representative
};

/// Hermitian, trace-one representatives spanning the kernel.
SteadyStateSet steady_states(const SpectralDecomposition& dec, const HilbertDims& dims,
                             double tol = 1e-10);

/// Kernel of the adjoint generator; the first element is the identity.
std::vector<Operator> conserved_operators(const LindbladModel& model,
                                          const SpectralOptions& opts = {});

struct GapReport {
  double gap = 0;
  cplx slowest{0, 0};
  int kernel_dim = 0;
  std::vector<cplx> oscillating;  // purely imaginary, nonzero eigenvalues
};

GapReport liouvillian_gap(const SpectralDecomposition& dec);

std::vector<Operator> evolve_spectral(const SpectralDecomposition& dec, const Operator& rho0,
                                      const std::vector<double>& times);

double spectral_norm_estimate(const Mat& S, int iterations = 40);

}  // namespace oqs

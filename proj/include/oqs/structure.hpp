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

#include <map>
#include <string>
#include <vector>

#include "oqs/core.hpp"
#include "oqs/generator.hpp"

namespace oqs {

struct AlgebraClosure {
  std::vector<Vec> basis;  // orthonormal, vectorized
  int dimension = 0;
  int generations = 0;
};

/// Identity is not seeded; products are orthonormalized with a relative cutoff of tol.
AlgebraClosure algebra_closure(const std::vector<Operator>& generators, double tol = 1e-10,
                               int max_generations = 64);

struct IrreducibilityReport {
  bool irreducible = false;
  int algebra_dim = 0;
  int d2 = 0;
  int kernel_dim = -1;             // from the spectral kernel, -1 when not computed
  double steady_min_eigenvalue = 0;
  bool consistent = true;          // irreducible implies unique full-rank steady state
};

IrreducibilityReport davies_irreducible(const LindbladModel& model, double tol = 1e-10);

struct DarkState {
  PureState psi;
  std::vector<cplx> jump_eigenvalues;
  cplx heff_eigenvalue{0, 0};
  double generator_residual = 0;
};

struct DarkStateResult {
  std::vector<DarkState> states;
  std::vector<std::string> warnings;
};

DarkStateResult dark_states(const LindbladModel& model, double tol = 1e-9);

enum class SymmetryKind { Strong, Weak, Dynamical, None };
std::string symmetry_kind_name(SymmetryKind k);

struct SymmetryReport {
  SymmetryKind kind = SymmetryKind::None;
  bool verdict = false;
  std::map<std::string, double> residuals;
  cplx omega{0, 0};
  std::vector<cplx> sector_phases;      // U eigenvalues (strong/weak)
  std::vector<Operator> sector_projectors;
  int kernel_dim = -1;
  double steady_state_invariance = -1;  // ||U rho U^dag - rho||
  std::vector<cplx> ladder;             // predicted +-i omega eigenvalues (dynamical)
  double ladder_residual = -1;          // min distance to the spectrum
  std::vector<std::string> notes;
};

SymmetryReport check_strong_symmetry(const LindbladModel& model, const Operator& U,
                                     double tol = 1e-9);
SymmetryReport check_weak_symmetry(const LindbladModel& model, const Operator& U,
                                   double tol = 1e-9);
SymmetryReport check_dynamical_symmetry(const LindbladModel& model, const Operator& A,
                                        double tol = 1e-9, bool spectrum_check = true);

struct WeakBlock {
  cplx label{1, 0};  // e^{i(theta_a - theta_b)}
  int size = 0;
};

struct WeakBlocks {
  std::vector<WeakBlock> blocks;
  std::vector<int> labels;  // block index for each vectorized basis element |a><b| of U's eigenbasis
  double off_block_norm = 0;
  bool certified = false;
};

WeakBlocks weak_symmetry_blocks(const LindbladModel& model, const Operator& U, double tol = 1e-9);

struct DecoherenceFreeSubspace {
  std::string kind;  // "null-space" or "eigen"
  Mat basis;         // D x k, orthonormal columns (H eigenvectors)
  std::vector<double> energies;
  std::vector<cplx> jump_eigenvalues;  // eigen kind only
  std::vector<cplx> predicted_eigenvalues;  // -i(E_j - E_k)
};

std::vector<DecoherenceFreeSubspace> dfs_detect(const LindbladModel& model, double tol = 1e-9);

struct NoiselessReport {
  bool verdict = false;
  double jump_residual = 0;     // max ||L' - I_A (x) M||
  double coupling_residual = 0;  // ||H' - H_A (x) I - I (x) H_B||
};

/// Checks a proposed factorization: after the optional basis change V, the first split factors
/// form the protected subsystem A and jumps act on the remaining factors only.
NoiselessReport check_noiseless_subsystem(const LindbladModel& model, int split,
                                          const Mat& V = Mat(), double tol = 1e-9);

struct CandidateSymmetry {
  std::string name;
  Operator U;
};

/// Products of local flips, parity, reflections and phase rotations e^{i phi N}.
std::vector<CandidateSymmetry> candidate_symmetries(const HilbertDims& dims, double phi = 0.7);

struct ScanEntry {
  std::string name;
  bool strong = false;
  bool weak = false;
};

std::vector<ScanEntry> scan_symmetries(const LindbladModel& model, double tol = 1e-9);

Operator reflection_operator(const HilbertDims& dims);
Operator number_phase_operator(const HilbertDims& dims, double phi);

}  // namespace oqs

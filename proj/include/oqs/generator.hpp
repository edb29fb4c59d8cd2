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

namespace oqs {

struct Jump {
  Operator L;
  double gamma = 1.0;
  std::string label;
};

/// Generator data (H, {L_mu, gamma_mu}). Rates are kept apart from the jump operators and
/// folded in as sqrt(gamma) L whenever the generator is assembled.
struct LindbladModel {
  Operator H;
  std::vector<Jump> jumps;

  LindbladModel() = default;
  LindbladModel(Operator h, std::vector<Jump> j, double herm_tol = 1e-10);

  const HilbertDims& dims() const { return H.dims; }
  int dim() const { return H.dim(); }
  /// sqrt(gamma_mu) L_mu for every channel.
  std::vector<Operator> scaled_jumps() const;
};

Operator effective_hamiltonian(const LindbladModel& model);
Operator dissipator(const Operator& L, const Operator& rho);
/// Forward generator L(rho), or the adjoint L^dag(O) when `adjoint` is set.
Operator apply_generator(const LindbladModel& model, const Operator& rho, bool adjoint = false);

/// Row-major flattening: entry (i, j) goes to k = i * D + j.
Vec vectorize(const Mat& rho);
Vec vectorize(const Operator& rho);
Mat devectorize(const Vec& v);

struct Superoperator {
  Mat matrix;
  int D = 0;
  bool row_major = true;

  Vec apply(const Vec& v) const { return matrix * v; }
  Operator apply(const Operator& rho) const;
};

/// Upper bound on D^2 for dense superoperators.
void set_superoperator_capacity(int max_d2);
int superoperator_capacity();
void check_capacity(int D, const char* where);

Superoperator superoperator_matrix(const LindbladModel& model);
/// Matrix of the adjoint generator acting on vectorized observables.
Superoperator adjoint_superoperator_matrix(const LindbladModel& model);

struct KossakowskiForm {
  Mat C;
  std::vector<Operator> M;
};

/// Sum_ij C_ij (M_i rho M_j^dag - 1/2 {M_j^dag M_i, rho}).
Operator apply_kossakowski(const KossakowskiForm& form, const Operator& rho);
/// Diagonal channels: L'_mu = sum_nu U_{nu mu} M_nu with rate d_mu, where C = U diag(d) U^dag.
std::vector<Jump> diagonalize_kossakowski(const KossakowskiForm& form, double tol = 1e-10);

/// L_mu -> sqrt(gamma_mu) L_mu + a_mu, H -> H + (1/2i) sum (a* L - a L^dag).
/// Returned jumps carry gamma = 1.
LindbladModel shift_gauge(const LindbladModel& model, const std::vector<cplx>& shifts);

}  // namespace oqs

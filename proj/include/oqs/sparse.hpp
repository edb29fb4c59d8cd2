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

#include <vector>

#include <Eigen/Sparse>

#include "oqs/core.hpp"
#include "oqs/generator.hpp"

namespace oqs {

using SpMat = Eigen::SparseMatrix<cplx>;

/// Row-major vectorized generator in sparse storage; same convention as superoperator_matrix.
SpMat sparse_superoperator(const LindbladModel& model, double drop_tol = 0.0);

/// Unique steady state from a trace-constrained sparse LU solve.
Operator steady_state_sparse(const LindbladModel& model);

struct SlowModes {
  std::vector<cplx> eigenvalues;  // converged, sorted by decreasing real part
  std::vector<double> residuals;
  double gap = 0;
  cplx slowest{0, 0};
  int krylov_dim = 0;
};

/// Shift-invert Arnoldi on the traceless subspace (steady state deflated).
SlowModes slowest_modes_sparse(const LindbladModel& model, int krylov_dim = 60,
                               double shift = 1e-2, double conv_tol = 1e-8);

}  // namespace oqs

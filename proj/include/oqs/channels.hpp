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

#include <functional>
#include <vector>

#include "oqs/core.hpp"
#include "oqs/generator.hpp"

namespace oqs {

struct KrausChannel {
  std::vector<Operator> kraus;
  const HilbertDims& dims() const { return kraus.front().dims; }
};

/// Choi matrix C = sum_ij Phi(|i><j|) (x) |i><j| with the unnormalized |Omega> = sum_i |i>|i>,
/// so Tr C = D for trace-preserving maps. Entry C[a*D+i, b*D+j] = Phi(|i><j|)[a, b].
struct ChoiMatrix {
  Mat C;
  HilbertDims dims;
};

Operator apply_channel(const KrausChannel& ch, const Operator& rho);

ChoiMatrix choi_of(const KrausChannel& ch);
/// Choi matrix of a map given as a row-major D^2 x D^2 superoperator matrix.
ChoiMatrix choi_of(const Mat& superop, const HilbertDims& dims);
ChoiMatrix choi_of(const std::function<Mat(const Mat&)>& map, const HilbertDims& dims);

/// Transposition map rho -> rho^T as a superoperator (positive, not completely positive).
Mat transpose_superoperator(int D);

/// Smallest eigenvalue of the normalized Choi state C / D; negative iff the map is not CP.
double cp_witness(const ChoiMatrix& c);

/// Kraus operators from scaled Choi eigenvectors; eigenvalues below tol * max are dropped.
/// Throws NotCompletelyPositiveError carrying cp_witness when C is not PSD.
KrausChannel kraus_from_choi(const ChoiMatrix& c, double tol = 1e-12);

struct CptpReport {
  bool cp = false;
  bool tp = false;
  double cp_witness = 0;
  double tp_defect = 0;
};

CptpReport cptp_check(const KrausChannel& ch, double tol = 1e-10);
CptpReport cptp_check(const ChoiMatrix& c, double tol = 1e-10);

/// K0 = 1 - i H_eff dt, K_mu = sqrt(gamma_mu dt) L_mu. Throws if the TP defect exceeds tp_bound.
KrausChannel lindblad_step_channel(const LindbladModel& model, double dt, double tp_bound = 1e-3);

}  // namespace oqs

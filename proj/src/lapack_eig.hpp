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

#include <complex>

#define lapack_complex_float std::complex<float>
#define lapack_complex_double std::complex<double>
#include <lapacke.h>

#include "oqs/core.hpp"

namespace oqs::detail {

/// General complex eigenproblem via zgeev: A VR = VR diag(w), VL^H A = diag(w) VL^H.
/// Columns of VL and VR are paired by index and have unit norm.
inline void dense_eig(const Mat& A, Vec& w, Mat& VL, Mat& VR) {
  const lapack_int n = static_cast<lapack_int>(A.rows());
  Mat a = A;
  w.resize(n);
  VL.resize(n, n);
  VR.resize(n, n);
  lapack_int info = LAPACKE_zgeev(LAPACK_COL_MAJOR, 'V', 'V', n, a.data(), n, w.data(), VL.data(), n,
                                  VR.data(), n);
  if (info != 0) throw NumericalError("dense_eig: zgeev failed with info " + std::to_string(info));
}

}  // namespace oqs::detail

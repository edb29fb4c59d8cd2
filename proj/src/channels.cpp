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

#include "oqs/channels.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/Eigenvalues>

namespace oqs {

Operator apply_channel(const KrausChannel& ch, const Operator& rho) {
  if (ch.kraus.empty()) throw Error("apply_channel: empty Kraus list");
  Mat out = Mat::Zero(rho.dim(), rho.dim());
  for (const auto& K : ch.kraus) {
    if (K.dim() != rho.dim()) throw DimensionError("apply_channel: dimension mismatch");
    out += K.m * rho.m * K.m.adjoint();
  }
  return {rho.dims, out};
}

ChoiMatrix choi_of(const KrausChannel& ch) {
  const int D = ch.kraus.front().dim();
  Mat C = Mat::Zero(D * D, D * D);
  for (const auto& K : ch.kraus) {
    Vec k = vectorize(K.m);
    C += k * k.adjoint();
  }
  return {C, ch.dims()};
}

ChoiMatrix choi_of(const Mat& S, const HilbertDims& dims) {
  const int D = dims.total();
  if (S.rows() != D * D || S.cols() != D * D) throw DimensionError("choi_of: bad superoperator");
  // Phi(|i><j|)[a,b] = S[a*D+b, i*D+j].
  Mat C(D * D, D * D);
  for (int a = 0; a < D; ++a)
    for (int i = 0; i < D; ++i)
      for (int b = 0; b < D; ++b)
        for (int j = 0; j < D; ++j) C(a * D + i, b * D + j) = S(a * D + b, i * D + j);
  return {C, dims};
}

ChoiMatrix choi_of(const std::function<Mat(const Mat&)>& map, const HilbertDims& dims) {
  const int D = dims.total();
  Mat C(D * D, D * D);
  for (int i = 0; i < D; ++i)
    for (int j = 0; j < D; ++j) {
      Mat e = Mat::Zero(D, D);
      e(i, j) = 1.0;
      Mat out = map(e);
      for (int a = 0; a < D; ++a)
        for (int b = 0; b < D; ++b) C(a * D + i, b * D + j) = out(a, b);
    }
  return {C, dims};
}

Mat transpose_superoperator(int D) {
  Mat S = Mat::Zero(D * D, D * D);
  for (int i = 0; i < D; ++i)
    for (int j = 0; j < D; ++j) S(j * D + i, i * D + j) = 1.0;
  return S;
}

double cp_witness(const ChoiMatrix& c) {
  return min_hermitian_eigenvalue(c.C) / static_cast<double>(c.dims.total());
}

KrausChannel kraus_from_choi(const ChoiMatrix& c, double tol) {
  const int D = c.dims.total();
  Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (c.C + c.C.adjoint()));
  const auto& ev = es.eigenvalues();
  double lmax = std::max(ev.maxCoeff(), 0.0);
  double scale = std::max(1.0, lmax);
  if (ev.minCoeff() < -std::max(tol, 1e-12) * scale * 10) {
    double w = ev.minCoeff() / D;
    std::ostringstream os;
    os << "kraus_from_choi: Choi matrix is not positive semidefinite (witness " << w << ")";
    throw NotCompletelyPositiveError(os.str(), w);
  }
  KrausChannel ch;
  for (Eigen::Index k = ev.size() - 1; k >= 0; --k) {
    if (ev(k) <= tol * lmax) continue;
    Vec v = std::sqrt(ev(k)) * es.eigenvectors().col(k);
    ch.kraus.emplace_back(c.dims, devectorize(v));
  }
  if (ch.kraus.empty()) ch.kraus.emplace_back(c.dims, Mat::Zero(D, D));
  return ch;
}

static double tp_defect_of(const KrausChannel& ch) {
  const int D = ch.kraus.front().dim();
  Mat s = Mat::Zero(D, D);
  for (const auto& K : ch.kraus) s += K.m.adjoint() * K.m;
  return (s - Mat::Identity(D, D)).norm();
}

CptpReport cptp_check(const KrausChannel& ch, double tol) {
  CptpReport r = cptp_check(choi_of(ch), tol);
  r.tp_defect = tp_defect_of(ch);
  r.tp = r.tp_defect <= tol;
  return r;
}

CptpReport cptp_check(const ChoiMatrix& c, double tol) {
  const int D = c.dims.total();
  CptpReport r;
  r.cp_witness = cp_witness(c);
  double scale = std::max(1.0, c.C.norm() / D);
  r.cp = r.cp_witness >= -tol * scale;
  // Tracing out the output factor gives sum_a Phi(|i><j|)[a,a] = Tr Phi(|i><j|).
  Mat tr = Mat::Zero(D, D);
  for (int i = 0; i < D; ++i)
    for (int j = 0; j < D; ++j)
      for (int a = 0; a < D; ++a) tr(i, j) += c.C(a * D + i, a * D + j);
  r.tp_defect = (tr - Mat::Identity(D, D)).norm();
  r.tp = r.tp_defect <= tol;
  return r;
}

KrausChannel lindblad_step_channel(const LindbladModel& model, double dt, double tp_bound) {
  if (!(dt > 0)) throw Error("lindblad_step_channel: dt must be positive");
  const int D = model.dim();
  KrausChannel ch;
  Mat heff = effective_hamiltonian(model).m;
  ch.kraus.emplace_back(model.dims(), Mat(Mat::Identity(D, D) - kI * dt * heff));
  for (const auto& L : model.scaled_jumps()) ch.kraus.push_back(std::sqrt(dt) * L);
  double defect = tp_defect_of(ch);
  if (defect > tp_bound) {
    std::ostringstream os;
    os << "lindblad_step_channel: trace-preservation defect " << defect << " exceeds " << tp_bound
       << "; reduce dt";
    throw NumericalError(os.str());
  }
  return ch;
}

}  // namespace oqs

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

#include "oqs/generator.hpp"

#include <atomic>
#include <cmath>
#include <sstream>

#include <Eigen/Eigenvalues>

namespace oqs {

LindbladModel::LindbladModel(Operator h, std::vector<Jump> j, double herm_tol)
    : H(std::move(h)), jumps(std::move(j)) {
  double scale = std::max(1.0, H.m.norm());
  if ((H.m - H.m.adjoint()).norm() > herm_tol * scale)
    throw Error("LindbladModel: Hamiltonian is not Hermitian");
  for (const auto& jp : jumps) {
    if (jp.gamma < 0) throw Error("LindbladModel: negative rate");
    if (jp.L.dim() != H.dim()) throw DimensionError("LindbladModel: jump dimension mismatch");
  }
}

std::vector<Operator> LindbladModel::scaled_jumps() const {
  std::vector<Operator> out;
  out.reserve(jumps.size());
  for (const auto& jp : jumps) out.push_back(std::sqrt(jp.gamma) * jp.L);
  return out;
}

Operator effective_hamiltonian(const LindbladModel& model) {
  Mat h = model.H.m;
  for (const auto& jp : model.jumps) h -= cplx(0, 0.5 * jp.gamma) * (jp.L.m.adjoint() * jp.L.m);
  return {model.dims(), h};
}

Operator dissipator(const Operator& L, const Operator& rho) {
  Mat ll = L.m.adjoint() * L.m;
  return {rho.dims, L.m * rho.m * L.m.adjoint() - 0.5 * (ll * rho.m + rho.m * ll)};
}

Operator apply_generator(const LindbladModel& model, const Operator& rho, bool adjoint) {
  require_same_dims(model.H, rho, "apply_generator");
  const Mat& h = model.H.m;
  Mat out;
  if (!adjoint) {
    out = cplx(0, -1) * (h * rho.m - rho.m * h);
  } else {
    out = cplx(0, 1) * (h * rho.m - rho.m * h);
  }
  for (const auto& jp : model.jumps) {
    if (jp.gamma == 0.0) continue;
    const Mat& L = jp.L.m;
    Mat ll = L.adjoint() * L;
    if (!adjoint)
      out += jp.gamma * (L * rho.m * L.adjoint() - 0.5 * (ll * rho.m + rho.m * ll));
    else
      out += jp.gamma * (L.adjoint() * rho.m * L - 0.5 * (ll * rho.m + rho.m * ll));
  }
  return {rho.dims, out};
}

Vec vectorize(const Mat& rho) {
  const auto D = rho.rows();
  Vec v(D * rho.cols());
  for (Eigen::Index i = 0; i < D; ++i)
    for (Eigen::Index j = 0; j < rho.cols(); ++j) v(i * rho.cols() + j) = rho(i, j);
  return v;
}

Vec vectorize(const Operator& rho) { return vectorize(rho.m); }

Mat devectorize(const Vec& v) {
  auto D = static_cast<Eigen::Index>(std::llround(std::sqrt(static_cast<double>(v.size()))));
  if (D * D != v.size()) throw DimensionError("devectorize: length is not a perfect square");
  Mat m(D, D);
  for (Eigen::Index i = 0; i < D; ++i)
    for (Eigen::Index j = 0; j < D; ++j) m(i, j) = v(i * D + j);
  return m;
}

Operator Superoperator::apply(const Operator& rho) const {
  if (rho.dim() != D) throw DimensionError("Superoperator::apply: dimension mismatch");
  return {rho.dims, devectorize(matrix * vectorize(rho.m))};
}

static std::atomic<int> g_capacity{4096};

void set_superoperator_capacity(int max_d2) { g_capacity = max_d2; }
int superoperator_capacity() { return g_capacity.load(); }

void check_capacity(int D, const char* where) {
  long long d2 = static_cast<long long>(D) * D;
  if (d2 > g_capacity.load()) {
    std::ostringstream os;
    os << where << ": D^2 = " << d2 << " exceeds the dense superoperator capacity "
       << g_capacity.load();
    throw CapacityError(os.str());
  }
}

// Kronecker product for square blocks; A (x) B.
static void add_kron(Mat& out, cplx s, const Mat& A, const Mat& B) {
  const auto n = B.rows();
  for (Eigen::Index i = 0; i < A.rows(); ++i)
    for (Eigen::Index j = 0; j < A.cols(); ++j) {
      cplx a = s * A(i, j);
      if (a == cplx(0)) continue;
      out.block(i * n, j * n, n, n) += a * B;
    }
}

Superoperator superoperator_matrix(const LindbladModel& model) {
  const int D = model.dim();
  check_capacity(D, "superoperator_matrix");
  Mat heff = effective_hamiltonian(model).m;
  Mat id = Mat::Identity(D, D);
  Mat S = Mat::Zero(D * D, D * D);
  add_kron(S, kI, id, heff.conjugate());
  add_kron(S, -kI, heff, id);
  for (const auto& L : model.scaled_jumps()) add_kron(S, 1.0, L.m, L.m.conjugate());
  return {S, D, true};
}

Superoperator adjoint_superoperator_matrix(const LindbladModel& model) {
  // vec(A O B) = (A (x) B^T) vec(O); L^dag(O) = i H_eff^dag O - i O H_eff + sum L^dag O L.
  const int D = model.dim();
  check_capacity(D, "adjoint_superoperator_matrix");
  Mat heff = effective_hamiltonian(model).m;
  Mat id = Mat::Identity(D, D);
  Mat S = Mat::Zero(D * D, D * D);
  add_kron(S, kI, heff.adjoint(), id);
  add_kron(S, -kI, id, heff.transpose());
  for (const auto& L : model.scaled_jumps()) add_kron(S, 1.0, L.m.adjoint(), L.m.transpose());
  return {S, D, true};
}

Operator apply_kossakowski(const KossakowskiForm& form, const Operator& rho) {
  const auto n = static_cast<Eigen::Index>(form.M.size());
  if (form.C.rows() != n || form.C.cols() != n)
    throw DimensionError("apply_kossakowski: C does not match basis size");
  Mat out = Mat::Zero(rho.dim(), rho.dim());
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) {
      cplx c = form.C(i, j);
      if (c == cplx(0)) continue;
      const Mat& Mi = form.M[i].m;
      const Mat& Mj = form.M[j].m;
      Mat mm = Mj.adjoint() * Mi;
      out += c * (Mi * rho.m * Mj.adjoint() - 0.5 * (mm * rho.m + rho.m * mm));
    }
  return {rho.dims, out};
}

std::vector<Jump> diagonalize_kossakowski(const KossakowskiForm& form, double tol) {
  const auto n = static_cast<Eigen::Index>(form.M.size());
  if (n == 0 || form.C.rows() != n || form.C.cols() != n)
    throw DimensionError("diagonalize_kossakowski: C does not match basis size");
  double scale = std::max(1.0, form.C.norm());
  if ((form.C - form.C.adjoint()).norm() > tol * scale)
    throw Error("diagonalize_kossakowski: C is not Hermitian");
  Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (form.C + form.C.adjoint()));
  const auto& d = es.eigenvalues();
  const auto& U = es.eigenvectors();
  if (d.minCoeff() < -tol * scale) {
    std::ostringstream os;
    os << "diagonalize_kossakowski: C has negative eigenvalue " << d.minCoeff();
    throw Error(os.str());
  }
  std::vector<Jump> out;
  // Largest rates first.
  for (Eigen::Index mu = n - 1; mu >= 0; --mu) {
    Mat L = Mat::Zero(form.M[0].dim(), form.M[0].dim());
    for (Eigen::Index nu = 0; nu < n; ++nu) L += U(nu, mu) * form.M[nu].m;
    out.push_back({Operator(form.M[0].dims, L), std::max(0.0, d(mu)), ""});
  }
  return out;
}

LindbladModel shift_gauge(const LindbladModel& model, const std::vector<cplx>& shifts) {
  if (shifts.size() != model.jumps.size())
    throw DimensionError("shift_gauge: one shift per jump operator is required");
  Mat h = model.H.m;
  std::vector<Jump> jumps;
  const int D = model.dim();
  for (size_t k = 0; k < shifts.size(); ++k) {
    const auto& jp = model.jumps[k];
    Mat L = std::sqrt(jp.gamma) * jp.L.m;
    cplx a = shifts[k];
    h += (std::conj(a) * L - a * L.adjoint()) / cplx(0, 2);
    Mat Ls = L + a * Mat::Identity(D, D);
    jumps.push_back({Operator(model.dims(), Ls), 1.0, jp.label});
  }
  h = 0.5 * (h + h.adjoint());
  return LindbladModel(Operator(model.dims(), h), jumps);
}

}  // namespace oqs

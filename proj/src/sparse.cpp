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

#include "oqs/sparse.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>
#include <Eigen/SparseLU>

namespace oqs {

namespace {

using Trip = Eigen::Triplet<cplx>;

void add_kron(std::vector<Trip>& t, const Mat& A, const Mat& B, cplx scale, double drop) {
  const int D = static_cast<int>(A.rows());
  for (int ai = 0; ai < D; ++ai)
    for (int aj = 0; aj < D; ++aj) {
      cplx a = A(ai, aj);
      if (std::abs(a) <= drop) continue;
      for (int bi = 0; bi < D; ++bi)
        for (int bj = 0; bj < D; ++bj) {
          cplx b = B(bi, bj);
          if (std::abs(b) <= drop) continue;
          t.emplace_back(ai * D + bi, aj * D + bj, scale * a * b);
        }
    }
}

void add_identity_kron(std::vector<Trip>& t, const Mat& X, bool identity_left, cplx scale,
                       double drop) {
  const int D = static_cast<int>(X.rows());
  for (int i = 0; i < D; ++i)
    for (int j = 0; j < D; ++j) {
      cplx x = X(i, j);
      if (std::abs(x) <= drop) continue;
      for (int k = 0; k < D; ++k) {
        if (identity_left) t.emplace_back(k * D + i, k * D + j, scale * x);
        else t.emplace_back(i * D + k, j * D + k, scale * x);
      }
    }
}

}  // namespace

SpMat sparse_superoperator(const LindbladModel& model, double drop_tol) {
  const int D = model.dim();
  const int n = D * D;
  Mat Heff = effective_hamiltonian(model).m;
  std::vector<Trip> t;
  add_identity_kron(t, Heff.conjugate(), true, kI, drop_tol);
  add_identity_kron(t, Heff, false, -kI, drop_tol);
  for (const auto& L : model.scaled_jumps()) add_kron(t, L.m, L.m.conjugate(), 1.0, drop_tol);
  SpMat S(n, n);
  S.setFromTriplets(t.begin(), t.end());
  S.makeCompressed();
  return S;
}

Operator steady_state_sparse(const LindbladModel& model) {
  const int D = model.dim();
  const int n = D * D;
  SpMat S = sparse_superoperator(model);
  // Replace row 0 by the trace functional.
  std::vector<Trip> t;
  for (int k = 0; k < S.outerSize(); ++k)
    for (SpMat::InnerIterator it(S, k); it; ++it)
      if (it.row() != 0) t.emplace_back(static_cast<int>(it.row()), static_cast<int>(it.col()), it.value());
  for (int i = 0; i < D; ++i) t.emplace_back(0, i * D + i, 1.0);
  SpMat A(n, n);
  A.setFromTriplets(t.begin(), t.end());
  A.makeCompressed();
  Eigen::SparseLU<SpMat> lu;
  lu.analyzePattern(A);
  lu.factorize(A);
  if (lu.info() != Eigen::Success) throw NumericalError("steady_state_sparse: factorization failed (non-unique steady state?)");
  Vec rhs = Vec::Zero(n);
  rhs(0) = 1.0;
  Vec x = lu.solve(rhs);
  if (lu.info() != Eigen::Success || !x.allFinite()) throw NumericalError("steady_state_sparse: solve failed");
  Mat rho = devectorize(x);
  rho = 0.5 * (rho + rho.adjoint());
  rho /= rho.trace();
  return Operator(model.dims(), rho);
}

SlowModes slowest_modes_sparse(const LindbladModel& model, int krylov_dim, double shift,
                               double conv_tol) {
  const int D = model.dim();
  const int n = D * D;
  krylov_dim = std::min(krylov_dim, n - 2);
  if (krylov_dim < 2) throw DimensionError("slowest_modes_sparse: system too small");
  SpMat S = sparse_superoperator(model);
  SpMat Id(n, n);
  Id.setIdentity();
  SpMat A = S - cplx(shift) * Id;
  A.makeCompressed();
  Eigen::SparseLU<SpMat> lu;
  lu.analyzePattern(A);
  lu.factorize(A);
  if (lu.info() != Eigen::Success) throw NumericalError("slowest_modes_sparse: factorization failed");

  Vec rss = vectorize(steady_state_sparse(model).m);
  Vec trace_row = vectorize(Mat(Mat::Identity(D, D)));
  auto deflate = [&](Vec& v) { v -= rss * trace_row.dot(v); };

  const int m = krylov_dim;
  Mat V = Mat::Zero(n, m + 1);
  Mat H = Mat::Zero(m + 1, m);
  Vec v0(n);
  for (int k = 0; k < n; ++k) v0(k) = cplx(std::cos(0.7 * k + 0.3), std::sin(1.3 * k));
  deflate(v0);
  V.col(0) = v0 / v0.norm();
  int steps = m;
  for (int j = 0; j < m; ++j) {
    Vec w = lu.solve(V.col(j));
    deflate(w);
    for (int pass = 0; pass < 2; ++pass)
      for (int i = 0; i <= j; ++i) {
        cplx h = V.col(i).dot(w);
        H(i, j) += h;
        w -= h * V.col(i);
      }
    double hn = w.norm();
    H(j + 1, j) = hn;
    if (hn < 1e-14) {
      steps = j + 1;
      break;
    }
    V.col(j + 1) = w / hn;
  }
  Mat Hm = H.topLeftCorner(steps, steps);
  Eigen::ComplexEigenSolver<Mat> es(Hm, true);
  SlowModes out;
  out.krylov_dim = steps;
  double beta = std::abs(H(steps, steps - 1));
  std::vector<std::pair<cplx, double>> found;
  for (int k = 0; k < steps; ++k) {
    cplx theta = es.eigenvalues()(k);
    if (std::abs(theta) < 1e-300) continue;
    Vec y = es.eigenvectors().col(k);
    double res = beta * std::abs(y(steps - 1)) / std::abs(theta);
    if (res > conv_tol) continue;
    cplx lam = cplx(shift) + 1.0 / theta;
    found.emplace_back(lam, res);
  }
  std::sort(found.begin(), found.end(),
            [](const auto& a, const auto& b) { return a.first.real() > b.first.real(); });
  out.gap = std::numeric_limits<double>::infinity();
  for (const auto& [lam, res] : found) {
    out.eigenvalues.push_back(lam);
    out.residuals.push_back(res);
    if (-lam.real() < out.gap) {
      out.gap = -lam.real();
      out.slowest = lam;
    }
  }
  if (found.empty()) throw NumericalError("slowest_modes_sparse: no converged Ritz values");
  return out;
}

}  // namespace oqs

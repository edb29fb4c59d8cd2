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

#include "oqs/structure.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <unsupported/Eigen/KroneckerProduct>

#include "oqs/spectra.hpp"

namespace oqs {

namespace {

Mat null_space(const Mat& M, double abs_tol) {
  const int cols = static_cast<int>(M.cols());
  if (M.rows() == 0) return Mat::Identity(cols, cols);
  Eigen::BDCSVD<Mat> svd(M, Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  int rank = 0;
  for (Eigen::Index k = 0; k < s.size(); ++k)
    if (s(k) > abs_tol) ++rank;
  return svd.matrixV().rightCols(cols - rank);
}

Mat orthonormal_columns(const Mat& E, double rel_tol) {
  if (E.cols() == 0) return E;
  Eigen::BDCSVD<Mat> svd(E, Eigen::ComputeThinU);
  const auto& s = svd.singularValues();
  int rank = 0;
  for (Eigen::Index k = 0; k < s.size(); ++k)
    if (s(k) > rel_tol * s(0)) ++rank;
  return svd.matrixU().leftCols(rank);
}

double model_scale(const LindbladModel& model) {
  double s = model.H.m.norm();
  for (const auto& l : model.scaled_jumps()) s += l.m.squaredNorm();
  return std::max(1.0, s);
}

bool within_capacity(int D) { return static_cast<long long>(D) * D <= superoperator_capacity(); }

struct JointEigen {
  Vec psi;
  std::vector<cplx> op_eigs;
  cplx base_eig;
};

// Simultaneous eigenvectors of base and every operator in ops.
std::vector<JointEigen> joint_eigenvectors(const Mat& base, const std::vector<Mat>& ops, double tol,
                                           std::vector<std::string>& warnings) {
  const int D = static_cast<int>(base.rows());
  Eigen::ComplexEigenSolver<Mat> es(base, true);
  const Vec& ev = es.eigenvalues();
  double scale = std::max(1.0, base.norm());
  for (const auto& X : ops) scale = std::max(scale, X.norm());
  double radius = 1e-8 * std::max(1.0, base.norm());
  std::vector<int> cl(D, -1);
  int ncl = 0;
  for (int i = 0; i < D; ++i) {
    if (cl[i] >= 0) continue;
    cl[i] = ncl;
    std::vector<int> stack{i};
    while (!stack.empty()) {
      int a = stack.back();
      stack.pop_back();
      for (int b = 0; b < D; ++b)
        if (cl[b] < 0 && std::abs(ev(a) - ev(b)) <= radius) {
          cl[b] = ncl;
          stack.push_back(b);
        }
    }
    ++ncl;
  }
  const double sub_tol = std::max(tol, 1e-8) * scale;
  std::vector<JointEigen> out;
  for (int c = 0; c < ncl; ++c) {
    std::vector<int> mem;
    for (int i = 0; i < D; ++i)
      if (cl[i] == c) mem.push_back(i);
    Mat E(D, static_cast<int>(mem.size()));
    cplx center = 0;
    for (size_t k = 0; k < mem.size(); ++k) {
      E.col(static_cast<int>(k)) = es.eigenvectors().col(mem[k]);
      center += ev(mem[k]);
    }
    center /= static_cast<double>(mem.size());
    Mat W = orthonormal_columns(E, 1e-8);
    for (int it = 0; it < D + 1 && W.cols() > 0; ++it) {
      Mat P = Mat::Identity(D, D) - W * W.adjoint();
      Mat stacked(static_cast<int>(ops.size()) * D, W.cols());
      for (size_t k = 0; k < ops.size(); ++k) stacked.middleRows(static_cast<int>(k) * D, D) = P * ops[k] * W;
      Mat N = null_space(stacked, sub_tol);
      if (N.cols() == W.cols()) break;
      W = orthonormal_columns(Mat(W * N), 1e-10);
    }
    if (W.cols() == 0) continue;
    std::vector<Vec> cands;
    if (W.cols() == 1) {
      cands.push_back(W.col(0));
    } else {
      Mat mix = Mat::Zero(W.cols(), W.cols());
      for (size_t k = 0; k < ops.size(); ++k) {
        double w = std::cos(1.7 * static_cast<double>(k) + 0.4) + 1.3;
        mix += cplx(w, 0.37 * w) * (W.adjoint() * ops[k] * W);
      }
      Eigen::ComplexEigenSolver<Mat> ms(mix, true);
      for (int k = 0; k < W.cols(); ++k) cands.push_back(W * ms.eigenvectors().col(k));
    }
    int resolved = 0;
    for (auto& v : cands) {
      v /= v.norm();
      bool ok = true;
      std::vector<cplx> eigs;
      for (const auto& X : ops) {
        Vec xv = X * v;
        cplx l = v.dot(xv);
        if ((xv - l * v).norm() > sub_tol) ok = false;
        eigs.push_back(l);
      }
      if (!ok) continue;
      ++resolved;
      out.push_back({v, eigs, center});
    }
    if (resolved < W.cols()) {
      std::ostringstream os;
      os << "joint invariant subspace of dimension " << W.cols() << " at eigenvalue " << center
         << " resolved only " << resolved << " simultaneous eigenvectors";
      warnings.push_back(os.str());
    }
  }
  return out;
}

Mat unitary_eigenbasis(const Mat& U, std::vector<cplx>& phases) {
  // Normal matrix: Hermitian and anti-Hermitian parts commute, so diagonalize a generic mix.
  const int D = static_cast<int>(U.rows());
  Mat K = 0.5 * (U + U.adjoint());
  Mat S = (U - U.adjoint()) / cplx(0, 2);
  Eigen::SelfAdjointEigenSolver<Mat> es(K + 0.6180339887 * S);
  Mat V = es.eigenvectors();
  phases.resize(D);
  for (int k = 0; k < D; ++k) {
    cplx p = V.col(k).dot(U * V.col(k));
    phases[k] = p / std::abs(p);
  }
  return V;
}

void require_unitary(const Operator& U, const char* where) {
  const int D = U.dim();
  if ((U.m.adjoint() * U.m - Mat::Identity(D, D)).norm() > 1e-8 * D)
    throw Error(std::string(where) + ": U is not unitary");
}

double comm_norm(const Mat& a, const Mat& b) { return (a * b - b * a).norm(); }

}  // namespace

AlgebraClosure algebra_closure(const std::vector<Operator>& generators, double tol,
                               int max_generations) {
  if (generators.empty()) throw Error("algebra_closure: empty generator list");
  const int D = generators.front().dim();
  const int d2 = D * D;
  AlgebraClosure ac;
  auto try_add = [&](const Mat& m) -> bool {
    if (static_cast<int>(ac.basis.size()) >= d2) return false;
    Vec v = vectorize(m);
    double n0 = v.norm();
    if (n0 == 0) return false;
    v /= n0;
    for (int pass = 0; pass < 2; ++pass)
      for (const auto& b : ac.basis) v -= b * b.dot(v);
    double n = v.norm();
    if (n <= tol) return false;
    ac.basis.push_back(v / n);
    return true;
  };
  for (const auto& g : generators) {
    if (g.dim() != D) throw DimensionError("algebra_closure: generators differ in dimension");
    try_add(g.m);
  }
  size_t old_end = 0;
  for (int gen = 0; gen < max_generations; ++gen) {
    size_t end = ac.basis.size();
    std::vector<Mat> mats;
    for (size_t i = 0; i < end; ++i) mats.push_back(devectorize(ac.basis[i]));
    bool added = false;
    for (size_t i = 0; i < end; ++i)
      for (size_t j = 0; j < end; ++j) {
        if (i < old_end && j < old_end) continue;
        if (try_add(mats[i] * mats[j])) added = true;
      }
    ac.generations = gen + 1;
    old_end = end;
    if (!added || static_cast<int>(ac.basis.size()) >= d2) break;
  }
  ac.dimension = static_cast<int>(ac.basis.size());
  return ac;
}

IrreducibilityReport davies_irreducible(const LindbladModel& model, double tol) {
  std::vector<Operator> gens = model.scaled_jumps();
  gens.push_back(effective_hamiltonian(model));
  AlgebraClosure ac = algebra_closure(gens, tol);
  IrreducibilityReport r;
  r.d2 = model.dim() * model.dim();
  r.algebra_dim = ac.dimension;
  r.irreducible = ac.dimension == r.d2;
  if (within_capacity(model.dim())) {
    SpectralDecomposition dec = spectral_decomposition(model);
    r.kernel_dim = dec.kernel_dim;
    SteadyStateSet ss = steady_states(dec, model.dims());
    if (!ss.states.empty()) r.steady_min_eigenvalue = min_hermitian_eigenvalue(ss.states.front().m);
    if (r.irreducible) r.consistent = r.kernel_dim == 1 && r.steady_min_eigenvalue > 0;
  }
  return r;
}

DarkStateResult dark_states(const LindbladModel& model, double tol) {
  DarkStateResult res;
  std::vector<Mat> ops;
  for (const auto& l : model.scaled_jumps()) ops.push_back(l.m);
  Mat heff = effective_hamiltonian(model).m;
  auto found = joint_eigenvectors(heff, ops, tol, res.warnings);
  const double scale = model_scale(model);
  for (auto& f : found) {
    Operator proj(model.dims(), Mat(f.psi * f.psi.adjoint()));
    double resid = apply_generator(model, proj).m.norm();
    if (resid > 10 * tol * scale) continue;
    // Fix the global phase on the largest component.
    Eigen::Index idx;
    f.psi.cwiseAbs().maxCoeff(&idx);
    Vec psi = f.psi * (std::abs(f.psi(idx)) / f.psi(idx));
    res.states.push_back({PureState(model.dims(), psi), f.op_eigs, f.base_eig, resid});
  }
  return res;
}

std::string symmetry_kind_name(SymmetryKind k) {
  switch (k) {
    case SymmetryKind::Strong: return "strong";
    case SymmetryKind::Weak: return "weak";
    case SymmetryKind::Dynamical: return "dynamical";
    case SymmetryKind::None: return "none";
  }
  return "none";
}

SymmetryReport check_strong_symmetry(const LindbladModel& model, const Operator& U, double tol) {
  require_same_dims(model.H, U, "check_strong_symmetry");
  require_unitary(U, "check_strong_symmetry");
  SymmetryReport rep;
  const double su = std::max(1.0, U.m.norm());
  rep.residuals["H"] = comm_norm(U.m, model.H.m) / (su * std::max(1.0, model.H.m.norm()));
  bool ok = rep.residuals["H"] < tol;
  auto jumps = model.scaled_jumps();
  for (size_t k = 0; k < jumps.size(); ++k) {
    double r = comm_norm(U.m, jumps[k].m) / (su * std::max(1.0, jumps[k].m.norm()));
    rep.residuals["L" + std::to_string(k)] = r;
    ok = ok && r < tol;
  }
  rep.verdict = ok;
  rep.kind = ok ? SymmetryKind::Strong : SymmetryKind::None;
  if (!ok) return rep;
  std::vector<cplx> phases;
  Mat V = unitary_eigenbasis(U.m, phases);
  std::vector<int> group(phases.size(), -1);
  for (size_t i = 0; i < phases.size(); ++i) {
    if (group[i] >= 0) continue;
    int g = static_cast<int>(rep.sector_phases.size());
    rep.sector_phases.push_back(phases[i]);
    for (size_t j = i; j < phases.size(); ++j)
      if (group[j] < 0 && std::abs(phases[j] - phases[i]) < 1e-8) group[j] = g;
  }
  for (size_t g = 0; g < rep.sector_phases.size(); ++g) {
    Mat P = Mat::Zero(U.dim(), U.dim());
    for (size_t i = 0; i < phases.size(); ++i)
      if (group[i] == static_cast<int>(g)) P += V.col(static_cast<int>(i)) * V.col(static_cast<int>(i)).adjoint();
    rep.sector_projectors.emplace_back(model.dims(), P);
  }
  if (within_capacity(model.dim())) {
    try {
      SpectralDecomposition dec = spectral_decomposition(model);
      rep.kernel_dim = dec.kernel_dim;
      if (rep.kernel_dim < static_cast<int>(rep.sector_phases.size()))
        rep.notes.push_back("steady-state count below sector count");
    } catch (const NumericalError& e) {
      rep.notes.push_back(std::string("spectrum unavailable: ") + e.what());
    }
  }
  return rep;
}

SymmetryReport check_weak_symmetry(const LindbladModel& model, const Operator& U, double tol) {
  require_same_dims(model.H, U, "check_weak_symmetry");
  require_unitary(U, "check_weak_symmetry");
  check_capacity(model.dim(), "check_weak_symmetry");
  SymmetryReport rep;
  Superoperator S = superoperator_matrix(model);
  Mat W = Eigen::kroneckerProduct(U.m, U.m.conjugate());
  double r = (S.matrix * W - W * S.matrix).norm() / std::max(1.0, S.matrix.norm());
  rep.residuals["superoperator"] = r;
  rep.verdict = r < tol;
  rep.kind = rep.verdict ? SymmetryKind::Weak : SymmetryKind::None;
  try {
    SpectralDecomposition dec = spectral_decomposition(S);
    rep.kernel_dim = dec.kernel_dim;
    SteadyStateSet ss = steady_states(dec, model.dims());
    if (!ss.states.empty()) {
      const Mat& rho = ss.states.front().m;
      rep.steady_state_invariance = (U.m * rho * U.m.adjoint() - rho).norm();
    }
  } catch (const NumericalError& e) {
    rep.notes.push_back(std::string("steady state unavailable: ") + e.what());
  }
  return rep;
}

WeakBlocks weak_symmetry_blocks(const LindbladModel& model, const Operator& U, double tol) {
  SymmetryReport wk = check_weak_symmetry(model, U, tol);
  if (!wk.verdict) throw Error("weak_symmetry_blocks: U is not a weak symmetry");
  const int D = model.dim();
  std::vector<cplx> ph;
  Mat V = unitary_eigenbasis(U.m, ph);
  Superoperator S = superoperator_matrix(model);
  Mat T = Eigen::kroneckerProduct(V, V.conjugate());
  Mat Sp = T.adjoint() * S.matrix * T;
  WeakBlocks wb;
  wb.labels.assign(D * D, -1);
  for (int a = 0; a < D; ++a)
    for (int b = 0; b < D; ++b) {
      cplx lab = ph[a] * std::conj(ph[b]);
      int found = -1;
      for (size_t k = 0; k < wb.blocks.size(); ++k)
        if (std::abs(wb.blocks[k].label - lab) < 1e-8) {
          found = static_cast<int>(k);
          break;
        }
      if (found < 0) {
        found = static_cast<int>(wb.blocks.size());
        wb.blocks.push_back({lab, 0});
      }
      wb.blocks[found].size++;
      wb.labels[a * D + b] = found;
    }
  double off = 0;
  for (int i = 0; i < D * D; ++i)
    for (int j = 0; j < D * D; ++j)
      if (wb.labels[i] != wb.labels[j]) off += std::norm(Sp(i, j));
  wb.off_block_norm = std::sqrt(off);
  wb.certified = wb.off_block_norm < tol * std::max(1.0, S.matrix.norm());
  return wb;
}

SymmetryReport check_dynamical_symmetry(const LindbladModel& model, const Operator& A, double tol,
                                        bool spectrum_check) {
  require_same_dims(model.H, A, "check_dynamical_symmetry");
  SymmetryReport rep;
  const double na = A.m.norm();
  if (na == 0) throw Error("check_dynamical_symmetry: A must be nonzero");
  bool ok = true;
  auto jumps = model.scaled_jumps();
  for (size_t k = 0; k < jumps.size(); ++k) {
    double s = na * std::max(1.0, jumps[k].m.norm());
    double r1 = comm_norm(A.m, jumps[k].m) / s;
    double r2 = comm_norm(A.m, jumps[k].m.adjoint()) / s;
    rep.residuals["L" + std::to_string(k)] = r1;
    rep.residuals["Ldag" + std::to_string(k)] = r2;
    ok = ok && r1 < tol && r2 < tol;
  }
  Mat AH = A.m * model.H.m - model.H.m * A.m;
  cplx omega = (A.m.adjoint() * AH).trace() / (A.m.adjoint() * A.m).trace();
  rep.omega = omega;
  double scale = na * std::max(1.0, model.H.m.norm());
  rep.residuals["H"] = (AH - omega * A.m).norm() / scale;
  rep.residuals["omega_imag"] = std::abs(omega.imag());
  ok = ok && rep.residuals["H"] < tol && std::abs(omega.imag()) < tol * std::max(1.0, std::abs(omega));
  if (ok && std::abs(omega) <= tol * std::max(1.0, model.H.m.norm())) {
    ok = false;
    rep.notes.push_back("omega = 0: ordinary symmetry, not dynamical");
  }
  rep.verdict = ok;
  rep.kind = ok ? SymmetryKind::Dynamical : SymmetryKind::None;
  if (!ok) return rep;
  double w = omega.real();
  rep.ladder = {cplx(0, w), cplx(0, -w)};
  if (spectrum_check && within_capacity(model.dim())) {
    SpectralDecomposition dec = spectral_decomposition(model);
    double worst = 0;
    for (cplx target : rep.ladder) {
      double best = std::numeric_limits<double>::infinity();
      for (cplx l : dec.eigenvalues) best = std::min(best, std::abs(l - target));
      worst = std::max(worst, best);
    }
    rep.ladder_residual = worst;
    rep.kernel_dim = dec.kernel_dim;
  }
  return rep;
}

std::vector<DecoherenceFreeSubspace> dfs_detect(const LindbladModel& model, double tol) {
  const int D = model.dim();
  auto jumps = model.scaled_jumps();
  const double scale = model_scale(model);
  std::vector<DecoherenceFreeSubspace> out;

  Mat stacked(static_cast<int>(jumps.size()) * D, D);
  for (size_t k = 0; k < jumps.size(); ++k) stacked.middleRows(static_cast<int>(k) * D, D) = jumps[k].m;
  Mat W = jumps.empty() ? Mat(Mat::Identity(D, D)) : null_space(stacked, tol * scale);
  const Mat& H = model.H.m;
  for (int it = 0; it < D + 1 && W.cols() > 0; ++it) {
    Mat P = Mat::Identity(D, D) - W * W.adjoint();
    Mat N = null_space(P * H * W, tol * scale);
    if (N.cols() == W.cols()) break;
    W = orthonormal_columns(Mat(W * N), 1e-10);
  }
  if (W.cols() > 0) {
    // Split into components that H does not connect (support graph in the computational basis).
    Mat PW = W * W.adjoint();
    Mat HW = PW * H * PW;
    std::vector<int> comp(D, -1);
    int nc = 0;
    double thr = 1e-10 * scale;
    for (int i = 0; i < D; ++i) {
      if (comp[i] >= 0 || std::abs(PW(i, i)) <= thr) continue;
      comp[i] = nc;
      std::vector<int> stack{i};
      while (!stack.empty()) {
        int a = stack.back();
        stack.pop_back();
        for (int b = 0; b < D; ++b)
          if (comp[b] < 0 && (std::abs(PW(a, b)) > thr || std::abs(HW(a, b)) > thr)) {
            comp[b] = nc;
            stack.push_back(b);
          }
      }
      ++nc;
    }
    for (int c = 0; c < nc; ++c) {
      Mat Pc = Mat::Zero(D, D);
      for (int i = 0; i < D; ++i)
        for (int j = 0; j < D; ++j)
          if (comp[i] == c && comp[j] == c) Pc(i, j) = PW(i, j);
      Mat B = orthonormal_columns(Pc, 1e-8);
      if (B.cols() == 0) continue;
      Mat Hr = B.adjoint() * H * B;
      Hr = 0.5 * (Hr + Hr.adjoint());
      Eigen::SelfAdjointEigenSolver<Mat> es(Hr);
      DecoherenceFreeSubspace d;
      d.kind = "null-space";
      d.basis = B * es.eigenvectors();
      for (int k = 0; k < es.eigenvalues().size(); ++k) d.energies.push_back(es.eigenvalues()(k));
      for (double a : d.energies)
        for (double b : d.energies) d.predicted_eigenvalues.push_back(cplx(0, -(a - b)));
      out.push_back(d);
    }
  }

  // One-dimensional constant-eigenvalue subspaces: L psi = c psi, L^dag psi = c* psi, H psi = E psi.
  std::vector<Mat> ops;
  for (const auto& j : jumps) {
    ops.push_back(j.m);
    ops.push_back(j.m.adjoint());
  }
  std::vector<std::string> warn;
  auto found = joint_eigenvectors(H, ops, tol, warn);
  for (auto& f : found) {
    bool all_zero = true;
    for (cplx e : f.op_eigs) all_zero = all_zero && std::abs(e) < tol * scale;
    if (all_zero) continue;
    bool consistent = true;
    for (size_t k = 0; k + 1 < f.op_eigs.size(); k += 2)
      consistent = consistent && std::abs(f.op_eigs[k + 1] - std::conj(f.op_eigs[k])) < 1e-8 * scale;
    if (!consistent) continue;
    DecoherenceFreeSubspace d;
    d.kind = "eigen";
    d.basis = f.psi;
    d.energies = {f.psi.dot(H * f.psi).real()};
    for (size_t k = 0; k < f.op_eigs.size(); k += 2) d.jump_eigenvalues.push_back(f.op_eigs[k]);
    d.predicted_eigenvalues = {cplx(0, 0)};
    out.push_back(d);
  }
  return out;
}

NoiselessReport check_noiseless_subsystem(const LindbladModel& model, int split, const Mat& V,
                                          double tol) {
  const auto& f = model.dims().factors();
  if (split < 1 || split >= static_cast<int>(f.size()))
    throw DimensionError("check_noiseless_subsystem: split must separate two nonempty factor groups");
  int dA = 1, dB = 1;
  for (int k = 0; k < static_cast<int>(f.size()); ++k) (k < split ? dA : dB) *= f[k];
  const int D = dA * dB;
  Mat B = V.size() == 0 ? Mat(Mat::Identity(D, D)) : V;
  if (B.rows() != D || B.cols() != D) throw DimensionError("check_noiseless_subsystem: basis change has wrong size");
  auto traceA = [&](const Mat& X) {
    Mat M = Mat::Zero(dB, dB);
    for (int a = 0; a < dA; ++a) M += X.block(a * dB, a * dB, dB, dB);
    return Mat(M / static_cast<double>(dA));
  };
  auto traceB = [&](const Mat& X) {
    Mat M(dA, dA);
    for (int a = 0; a < dA; ++a)
      for (int b = 0; b < dA; ++b) M(a, b) = X.block(a * dB, b * dB, dB, dB).trace() / static_cast<double>(dB);
    return M;
  };
  NoiselessReport rep;
  const double scale = model_scale(model);
  Mat IA = Mat::Identity(dA, dA), IB = Mat::Identity(dB, dB);
  for (const auto& l : model.scaled_jumps()) {
    Mat Lp = B.adjoint() * l.m * B;
    Mat M = traceA(Lp);
    rep.jump_residual = std::max(rep.jump_residual, (Lp - Mat(Eigen::kroneckerProduct(IA, M))).norm());
  }
  Mat Hp = B.adjoint() * model.H.m * B;
  Mat HA = traceB(Hp), HB = traceA(Hp);
  cplx t = Hp.trace() / static_cast<double>(D);
  Mat rest = Hp - Mat(Eigen::kroneckerProduct(HA, IB)) - Mat(Eigen::kroneckerProduct(IA, HB)) +
             t * Mat::Identity(D, D);
  rep.coupling_residual = rest.norm();
  rep.verdict = rep.jump_residual < tol * scale && rep.coupling_residual < tol * scale;
  return rep;
}

Operator reflection_operator(const HilbertDims& dims) {
  const auto& f = dims.factors();
  for (int d : f)
    if (d != f.front()) throw DimensionError("reflection_operator: factors must be equal");
  const int n = static_cast<int>(f.size()), d = f.front(), D = dims.total();
  Mat R = Mat::Zero(D, D);
  std::vector<int> digits(n);
  for (int idx = 0; idx < D; ++idx) {
    int rem = idx;
    for (int k = n - 1; k >= 0; --k) {
      digits[k] = rem % d;
      rem /= d;
    }
    int target = 0;
    for (int k = 0; k < n; ++k) target = target * d + digits[n - 1 - k];
    R(target, idx) = 1;
  }
  return Operator(dims, R);
}

Operator number_phase_operator(const HilbertDims& dims, double phi) {
  const auto& f = dims.factors();
  const int D = dims.total();
  Mat U = Mat::Zero(D, D);
  for (int idx = 0; idx < D; ++idx) {
    int rem = idx, total = 0;
    for (int k = static_cast<int>(f.size()) - 1; k >= 0; --k) {
      total += rem % f[k];
      rem /= f[k];
    }
    U(idx, idx) = std::exp(kI * (phi * total));
  }
  return Operator(dims, U);
}

std::vector<CandidateSymmetry> candidate_symmetries(const HilbertDims& dims, double phi) {
  std::vector<CandidateSymmetry> out;
  const auto& f = dims.factors();
  const int n = static_cast<int>(f.size());
  bool qubits = std::all_of(f.begin(), f.end(), [](int d) { return d == 2; });
  bool equal = std::all_of(f.begin(), f.end(), [&](int d) { return d == f.front(); });
  if (qubits) {
    Pauli p = pauli();
    std::vector<Operator> xs(n, p.x), zs(n, p.z);
    Operator X = n == 1 ? p.x : kron(xs);
    Operator Z = n == 1 ? p.z : kron(zs);
    out.push_back({"global-flip", Operator(dims, X.m)});
    out.push_back({"parity", Operator(dims, Z.m)});
    if (n > 1)
      for (int k = 0; k < n; ++k) out.push_back({"flip[" + std::to_string(k) + "]", embed(p.x, k, dims)});
  }
  if (n > 1 && equal) {
    Operator R = reflection_operator(dims);
    out.push_back({"reflection", R});
    if (qubits) out.push_back({"reflection*global-flip", Operator(dims, Mat(R.m * out.front().U.m))});
  }
  out.push_back({"phase-rotation", number_phase_operator(dims, phi)});
  return out;
}

std::vector<ScanEntry> scan_symmetries(const LindbladModel& model, double tol) {
  std::vector<ScanEntry> out;
  for (const auto& c : candidate_symmetries(model.dims())) {
    ScanEntry e;
    e.name = c.name;
    e.strong = check_strong_symmetry(model, c.U, tol).verdict;
    e.weak = within_capacity(model.dim()) ? check_weak_symmetry(model, c.U, tol).verdict : false;
    out.push_back(e);
  }
  return out;
}

}  // namespace oqs

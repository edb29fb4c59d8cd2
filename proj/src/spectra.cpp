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

#include "oqs/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <sstream>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "lapack_eig.hpp"

namespace oqs {

Vec SpectralDecomposition::coefficients(const Mat& rho) const {
  Vec c(eigenvalues.size());
  for (size_t k = 0; k < eigenvalues.size(); ++k)
    c(static_cast<Eigen::Index>(k)) = (left[k].adjoint() * rho).trace();
  return c;
}

double spectral_norm_estimate(const Mat& S, int iterations) {
  Vec v = Vec::Ones(S.cols()) / std::sqrt(static_cast<double>(S.cols()));
  double sigma = 0;
  for (int it = 0; it < iterations; ++it) {
    Vec w = S.adjoint() * (S * v);
    double n = w.norm();
    if (n == 0) return 0;
    sigma = std::sqrt(n);
    v = w / n;
  }
  return std::max(sigma, (S * v).norm());
}

namespace {

struct UnionFind {
  std::vector<int> p;
  explicit UnionFind(int n) : p(n) { std::iota(p.begin(), p.end(), 0); }
  int find(int x) { return p[x] == x ? x : p[x] = find(p[x]); }
  void unite(int a, int b) { p[find(a)] = find(b); }
};

double condition_of(const Mat& G) {
  Eigen::JacobiSVD<Mat> svd(G);
  const auto& s = svd.singularValues();
  if (s.size() == 0) return 1;
  double smin = s(s.size() - 1);
  return smin > 0 ? s(0) / smin : std::numeric_limits<double>::infinity();
}

}  // namespace

SpectralDecomposition spectral_decomposition(const Superoperator& S, const SpectralOptions& opts) {
  const int D = S.D;
  const int n = D * D;
  check_capacity(D, "spectral_decomposition");
  SpectralDecomposition dec;
  dec.D = D;
  dec.norm = spectral_norm_estimate(S.matrix);
  const double scale = std::max(dec.norm, 1e-300);
  const double radius = opts.cluster_rel * scale;
  dec.kernel_tol = opts.kernel_rel * scale;

  Vec lam;
  Mat VL, VR;
  detail::dense_eig(S.matrix, lam, VL, VR);

  UnionFind uf(n);
  {
    // Sort by real part so that neighbours are close; compare within a window.
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) { return lam(a).real() < lam(b).real(); });
    for (int a = 0; a < n; ++a)
      for (int b = a + 1; b < n; ++b) {
        if (lam(order[b]).real() - lam(order[a]).real() > radius) break;
        if (std::abs(lam(order[a]) - lam(order[b])) <= radius) uf.unite(order[a], order[b]);
      }
  }
  std::map<int, std::vector<int>> members;
  for (int k = 0; k < n; ++k) members[uf.find(k)].push_back(k);

  Vec vecI = vectorize(Mat(Mat::Identity(D, D)));
  struct Entry {
    cplx lambda;
    Vec r, l;
    int cluster;
    bool kernel;
  };
  std::vector<Entry> entries;
  entries.reserve(n);
  int cluster_id = 0;
  for (auto& [root, rmem] : members) {
    const int m = static_cast<int>(rmem.size());
    Mat R(n, m), L(n, m);
    cplx center = 0;
    for (int k = 0; k < m; ++k) {
      R.col(k) = VR.col(rmem[k]);
      L.col(k) = VL.col(rmem[k]);
      center += lam(rmem[k]);
    }
    center /= static_cast<double>(m);
    bool is_kernel = std::abs(center) < dec.kernel_tol;

    if (is_kernel) {
      // Left basis that starts with the identity.
      Eigen::HouseholderQR<Mat> qr(L);
      Mat Q = qr.householderQ() * Mat::Identity(n, m);
      Vec v = vecI / std::sqrt(static_cast<double>(D));
      Vec resid = v - Q * (Q.adjoint() * v);
      if (resid.norm() < 1e-6) {
        std::vector<Vec> basis{v};
        for (int k = 0; k < m && static_cast<int>(basis.size()) < m; ++k) {
          Vec w = Q.col(k);
          for (int pass = 0; pass < 2; ++pass)
            for (const auto& b : basis) w -= b * b.dot(w);
          double wn = w.norm();
          if (wn > 1e-8) basis.push_back(w / wn);
        }
        if (static_cast<int>(basis.size()) == m) {
          L.col(0) = vecI;
          for (int k = 1; k < m; ++k) L.col(k) = basis[k];
        }
      }
      Mat G = L.adjoint() * R;
      double cond = condition_of(G);
      dec.max_gram_condition = std::max(dec.max_gram_condition, cond);
      if (!(cond < opts.max_condition)) {
        std::ostringstream os;
        os << "kernel cluster of size " << m << ", Gram condition " << cond;
        throw DefectiveLiouvillianError("spectral_decomposition: defective kernel", os.str());
      }
      R = R * G.inverse();
    } else {
      Mat G = L.adjoint() * R;
      double cond = condition_of(G);
      dec.max_gram_condition = std::max(dec.max_gram_condition, cond);
      if (!(cond < opts.max_condition)) {
        std::ostringstream os;
        os << "cluster at " << center << " of size " << m << ", Gram condition " << cond;
        throw DefectiveLiouvillianError("spectral_decomposition: defective Liouvillian", os.str());
      }
      L = L * G.inverse().adjoint();
    }
    for (int k = 0; k < m; ++k) {
      cplx lk = is_kernel ? cplx(0, 0) : lam(rmem[k]);
      if (is_kernel) lk = lam(rmem[k]);
      entries.push_back({lk, R.col(k), L.col(k), cluster_id, is_kernel});
      if (lk.real() > dec.kernel_tol) {
        std::ostringstream os;
        os << "eigenvalue with positive real part " << lk;
        dec.warnings.push_back(os.str());
      }
    }
    ++cluster_id;
  }
  std::stable_sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
    if (a.kernel != b.kernel) return a.kernel;
    if (a.lambda.real() != b.lambda.real()) return a.lambda.real() > b.lambda.real();
    return a.lambda.imag() > b.lambda.imag();
  });
  // Keep the identity-dual steady mode first within the kernel.
  for (auto& e : entries) {
    dec.eigenvalues.push_back(e.lambda);
    dec.right.push_back(devectorize(e.r));
    dec.left.push_back(devectorize(e.l));
    dec.cluster.push_back(e.cluster);
    dec.kernel.push_back(e.kernel);
    if (e.kernel) ++dec.kernel_dim;
  }
  return dec;
}

SpectralDecomposition spectral_decomposition(const LindbladModel& model, const SpectralOptions& opts) {
  return spectral_decomposition(superoperator_matrix(model), opts);
}

SteadyStateSet steady_states(const SpectralDecomposition& dec, const HilbertDims& dims, double tol) {
  SteadyStateSet out;
  const int D = dec.D;
  std::vector<Mat> ker;
  for (size_t k = 0; k < dec.eigenvalues.size(); ++k)
    if (dec.kernel[k]) ker.push_back(dec.right[k]);
  if (ker.empty()) return out;

  // First representative: the mode dual to the identity, made a proper density matrix.
  int first = 0;
  double best = -1;
  for (size_t k = 0; k < ker.size(); ++k) {
    double t = std::abs(ker[k].trace());
    if (t > best) {
      best = t;
      first = static_cast<int>(k);
    }
  }
  Mat r0 = ker[first] / ker[first].trace();
  r0 = 0.5 * (r0 + r0.adjoint());
  Eigen::SelfAdjointEigenSolver<Mat> es(r0);
  Eigen::VectorXd ev = es.eigenvalues();
  for (Eigen::Index k = 0; k < ev.size(); ++k)
    if (ev(k) < 0) {
      out.clipped_weight += -ev(k);
      ev(k) = 0;
    }
  Mat rho0 = es.eigenvectors() * ev.cast<cplx>().asDiagonal() * es.eigenvectors().adjoint();
  rho0 /= rho0.trace();
  out.states.emplace_back(dims, rho0);

  // Traceless Hermitian directions spanning the rest of the kernel (real span).
  std::vector<Vec> herm;
  Vec vI = vectorize(Mat(Mat::Identity(D, D))) / std::sqrt(static_cast<double>(D));
  std::vector<Vec> basis{vectorize(rho0)};
  basis[0] /= basis[0].norm();
  auto add_candidate = [&](const Mat& h) {
    Mat hh = 0.5 * (h + h.adjoint());
    hh -= (hh.trace() / static_cast<double>(D)) * Mat::Identity(D, D);
    Vec w = vectorize(hh);
    (void)vI;
    for (int pass = 0; pass < 2; ++pass)
      for (const auto& b : basis) w -= b * b.dot(w);
    // Project onto Hermitian again to stay in the real span.
    Mat wm = devectorize(w);
    wm = 0.5 * (wm + wm.adjoint());
    Vec wv = vectorize(wm);
    double n = wv.norm();
    if (n > 1e-7) {
      basis.push_back(wv / n);
      herm.push_back(wv / n);
    }
  };
  for (size_t k = 0; k < ker.size(); ++k) {
    if (static_cast<int>(k) == first) continue;
    add_candidate(ker[k]);
    add_candidate(cplx(0, 1) * ker[k]);
  }
  for (const auto& hv : herm) {
    if (static_cast<int>(out.states.size()) >= static_cast<int>(ker.size())) break;
    Mat h = devectorize(hv);
    double hmin = hermitian_eigenvalues(h).minCoeff();
    double hi = hmin < 0 ? 1.0 / -hmin : 1.0;
    double lo = 0;
    for (int it = 0; it < 80; ++it) {
      double mid = 0.5 * (lo + hi);
      if (min_hermitian_eigenvalue(rho0 + mid * h) >= -tol) lo = mid;
      else hi = mid;
    }
    Mat rep = rho0 + lo * h;
    rep = 0.5 * (rep + rep.adjoint());
    rep /= rep.trace();
    out.states.emplace_back(dims, rep);
  }
  return out;
}

std::vector<Operator> conserved_operators(const LindbladModel& model, const SpectralOptions& opts) {
  SpectralDecomposition dec = spectral_decomposition(model, opts);
  std::vector<Operator> out;
  for (size_t k = 0; k < dec.eigenvalues.size(); ++k)
    if (dec.kernel[k]) out.emplace_back(model.dims(), Mat(dec.left[k].adjoint()));
  return out;
}

GapReport liouvillian_gap(const SpectralDecomposition& dec) {
  GapReport g;
  g.kernel_dim = dec.kernel_dim;
  double best = std::numeric_limits<double>::infinity();
  for (size_t k = 0; k < dec.eigenvalues.size(); ++k) {
    if (dec.kernel[k]) continue;
    cplx l = dec.eigenvalues[k];
    if (std::abs(l.real()) < dec.kernel_tol) {
      g.oscillating.push_back(l);
      continue;
    }
    if (-l.real() < best) {
      best = -l.real();
      g.slowest = l;
    }
  }
  g.gap = std::isfinite(best) ? best : 0.0;
  return g;
}

std::vector<Operator> evolve_spectral(const SpectralDecomposition& dec, const Operator& rho0,
                                      const std::vector<double>& times) {
  if (rho0.dim() != dec.D) throw DimensionError("evolve_spectral: dimension mismatch");
  Vec c = dec.coefficients(rho0.m);
  std::vector<Operator> out;
  out.reserve(times.size());
  for (double t : times) {
    Mat r = Mat::Zero(dec.D, dec.D);
    for (size_t k = 0; k < dec.eigenvalues.size(); ++k)
      r += c(static_cast<Eigen::Index>(k)) * std::exp(dec.eigenvalues[k] * t) * dec.right[k];
    out.emplace_back(rho0.dims, r);
  }
  return out;
}

}  // namespace oqs

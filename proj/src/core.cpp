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

#include "oqs/core.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include <Eigen/Eigenvalues>

namespace oqs {

HilbertDims::HilbertDims(std::vector<int> factors) : factors_(std::move(factors)) {
  if (factors_.empty()) throw DimensionError("HilbertDims: empty factor list");
  total_ = 1;
  for (int f : factors_) {
    if (f < 1) throw DimensionError("HilbertDims: factor must be >= 1");
    total_ *= f;
  }
}

HilbertDims HilbertDims::concat(const HilbertDims& other) const {
  std::vector<int> f = factors_;
  f.insert(f.end(), other.factors_.begin(), other.factors_.end());
  return HilbertDims(f);
}

Operator::Operator(Mat mat) : m(std::move(mat)) {
  if (m.rows() != m.cols()) throw DimensionError("Operator: matrix not square");
  dims = HilbertDims::single(static_cast<int>(m.rows()));
}

Operator::Operator(HilbertDims d, Mat mat) : dims(std::move(d)), m(std::move(mat)) {
  if (m.rows() != m.cols() || m.rows() != dims.total()) {
    std::ostringstream os;
    os << "Operator: matrix " << m.rows() << "x" << m.cols() << " does not match dims total "
       << dims.total();
    throw DimensionError(os.str());
  }
}

void require_same_dims(const Operator& a, const Operator& b, const char* where) {
  if (a.dim() != b.dim()) {
    std::ostringstream os;
    os << where << ": dimension mismatch " << a.dim() << " vs " << b.dim();
    throw DimensionError(os.str());
  }
}

static const HilbertDims& richer(const Operator& a, const Operator& b) {
  return a.dims.count() >= b.dims.count() ? a.dims : b.dims;
}

Operator& Operator::operator+=(const Operator& o) {
  require_same_dims(*this, o, "operator+=");
  m += o.m;
  return *this;
}

Operator& Operator::operator-=(const Operator& o) {
  require_same_dims(*this, o, "operator-=");
  m -= o.m;
  return *this;
}

Operator operator+(const Operator& a, const Operator& b) {
  require_same_dims(a, b, "operator+");
  return {richer(a, b), a.m + b.m};
}

Operator operator-(const Operator& a, const Operator& b) {
  require_same_dims(a, b, "operator-");
  return {richer(a, b), a.m - b.m};
}

Operator operator-(const Operator& a) { return {a.dims, -a.m}; }

Operator operator*(const Operator& a, const Operator& b) {
  require_same_dims(a, b, "operator*");
  return {richer(a, b), a.m * b.m};
}

Operator operator*(cplx s, const Operator& a) { return {a.dims, s * a.m}; }
Operator operator*(const Operator& a, cplx s) { return {a.dims, a.m * s}; }

PureState::PureState(Vec v, bool is_normalized)
    : dims(HilbertDims::single(static_cast<int>(v.size()))), amp(std::move(v)),
      normalized(is_normalized) {}

PureState::PureState(HilbertDims d, Vec v, bool is_normalized)
    : dims(std::move(d)), amp(std::move(v)), normalized(is_normalized) {
  if (amp.size() != dims.total()) throw DimensionError("PureState: length does not match dims");
}

PureState PureState::normalized_copy() const {
  double n = amp.norm();
  if (n == 0.0) throw NumericalError("PureState: cannot normalize zero vector");
  return {dims, amp / n, true};
}

Operator PureState::projector() const { return {dims, amp * amp.adjoint()}; }

SpinOps build_spin_operators(double S) {
  double twoS = 2.0 * S;
  if (S < 0 || std::abs(twoS - std::round(twoS)) > 1e-12)
    throw Error("build_spin_operators: S must be a nonnegative half-integer");
  int d = static_cast<int>(std::lround(twoS)) + 1;
  Mat sz = Mat::Zero(d, d), sp = Mat::Zero(d, d);
  for (int k = 0; k < d; ++k) {
    double m = S - k;
    sz(k, k) = m;
    if (k > 0) {
      // S+ |m> = sqrt(S(S+1) - m(m+1)) |m+1>
      sp(k - 1, k) = std::sqrt(S * (S + 1) - m * (m + 1));
    }
  }
  Mat sm = sp.adjoint();
  SpinOps ops;
  ops.Sz = Operator(sz);
  ops.Splus = Operator(sp);
  ops.Sminus = Operator(sm);
  ops.Sx = Operator(0.5 * (sp + sm));
  ops.Sy = Operator(cplx(0, -0.5) * (sp - sm));
  return ops;
}

BosonOps build_boson_operators(int cutoff) {
  if (cutoff < 2) throw Error("build_boson_operators: cutoff must be >= 2");
  Mat a = Mat::Zero(cutoff, cutoff);
  for (int k = 1; k < cutoff; ++k) a(k - 1, k) = std::sqrt(static_cast<double>(k));
  BosonOps b;
  b.a = Operator(a);
  b.adag = Operator(Mat(a.adjoint()));
  b.n = Operator(Mat(a.adjoint() * a));
  return b;
}

Pauli pauli() {
  Pauli p;
  Mat x(2, 2), y(2, 2), z(2, 2), pl(2, 2);
  x << 0, 1, 1, 0;
  y << 0, cplx(0, -1), cplx(0, 1), 0;
  z << 1, 0, 0, -1;
  pl << 0, 1, 0, 0;
  p.x = Operator(x);
  p.y = Operator(y);
  p.z = Operator(z);
  p.plus = Operator(pl);
  p.minus = Operator(Mat(pl.adjoint()));
  return p;
}

Operator identity(const HilbertDims& dims) { return {dims, Mat::Identity(dims.total(), dims.total())}; }
Operator identity(int d) { return identity(HilbertDims::single(d)); }

static Mat kron_mat(const Mat& a, const Mat& b) {
  Mat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

Operator kron(const Operator& a, const Operator& b) {
  return {a.dims.concat(b.dims), kron_mat(a.m, b.m)};
}

Operator kron(const std::vector<Operator>& ops) {
  if (ops.empty()) throw DimensionError("kron: empty list");
  Operator out = ops.front();
  for (size_t k = 1; k < ops.size(); ++k) out = kron(out, ops[k]);
  return out;
}

Operator embed(const Operator& local, int site, const HilbertDims& dims) {
  if (site < 0 || site >= dims.count()) throw DimensionError("embed: site out of range");
  if (local.dim() != dims.factors()[site]) throw DimensionError("embed: local dimension mismatch");
  int left = 1, right = 1;
  for (int k = 0; k < site; ++k) left *= dims.factors()[k];
  for (int k = site + 1; k < dims.count(); ++k) right *= dims.factors()[k];
  Mat m = kron_mat(kron_mat(Mat::Identity(left, left), local.m), Mat::Identity(right, right));
  return {dims, m};
}

Operator commutator(const Operator& a, const Operator& b) { return a * b - b * a; }
Operator anticommutator(const Operator& a, const Operator& b) { return a * b + b * a; }
Operator hermitize(const Operator& a) { return {a.dims, 0.5 * (a.m + a.m.adjoint())}; }

Operator partial_trace(const Operator& rho, const std::vector<int>& keep_in) {
  const auto& f = rho.dims.factors();
  const int n = rho.dims.count();
  std::vector<int> keep = keep_in;
  std::sort(keep.begin(), keep.end());
  keep.erase(std::unique(keep.begin(), keep.end()), keep.end());
  for (int k : keep)
    if (k < 0 || k >= n) throw DimensionError("partial_trace: invalid factor index");
  std::vector<bool> kept(n, false);
  for (int k : keep) kept[k] = true;

  std::vector<int> kept_f;
  for (int k : keep) kept_f.push_back(f[k]);
  if (kept_f.empty()) kept_f.push_back(1);
  HilbertDims out_dims(kept_f);
  const int D = rho.dim();
  const int Dk = out_dims.total();

  // For every full index precompute its kept-part index and traced-part index.
  std::vector<int> kidx(D), tidx(D);
  for (int i = 0; i < D; ++i) {
    int rem = i, ki = 0, ti = 0, kstride = 1, tstride = 1;
    for (int k = n - 1; k >= 0; --k) {
      int digit = rem % f[k];
      rem /= f[k];
      if (kept[k]) {
        ki += digit * kstride;
        kstride *= f[k];
      } else {
        ti += digit * tstride;
        tstride *= f[k];
      }
    }
    kidx[i] = ki;
    tidx[i] = ti;
  }
  Mat out = Mat::Zero(Dk, Dk);
  for (int i = 0; i < D; ++i)
    for (int j = 0; j < D; ++j)
      if (tidx[i] == tidx[j]) out(kidx[i], kidx[j]) += rho.m(i, j);
  return {out_dims, out};
}

Eigen::VectorXd hermitian_eigenvalues(const Mat& h) {
  Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (h + h.adjoint()), Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

double min_hermitian_eigenvalue(const Mat& h) { return hermitian_eigenvalues(h).minCoeff(); }

DensityReport validate_density(const Operator& op, double tol) {
  DensityReport r;
  r.hermiticity_defect = (op.m - op.m.adjoint()).norm();
  r.trace_defect = std::abs(op.m.trace() - cplx(1.0));
  r.min_eigenvalue = min_hermitian_eigenvalue(op.m);
  double scale = std::max(1.0, op.m.norm());
  r.valid = r.hermiticity_defect <= tol * scale && r.trace_defect <= tol &&
            r.min_eigenvalue >= -tol * scale;
  return r;
}

double purity(const Operator& rho) { return (rho.m * rho.m).trace().real(); }

double entropy(const Operator& rho) {
  Eigen::VectorXd ev = hermitian_eigenvalues(rho.m);
  double s = 0;
  for (Eigen::Index k = 0; k < ev.size(); ++k)
    if (ev(k) > 0) s -= ev(k) * std::log(ev(k));
  return s;
}

StateMetrics state_metrics(const Operator& rho) { return {purity(rho), entropy(rho)}; }

cplx expectation(const Operator& O, const Operator& rho) {
  require_same_dims(O, rho, "expectation");
  // Tr(O rho) without forming the product.
  return (O.m.transpose().cwiseProduct(rho.m)).sum();
}

cplx expectation(const Operator& O, const PureState& psi) {
  if (O.dim() != psi.amp.size()) throw DimensionError("expectation: dimension mismatch");
  return psi.amp.dot(O.m * psi.amp);
}

PureState basis_state(const HilbertDims& dims, int index) {
  if (index < 0 || index >= dims.total()) throw DimensionError("basis_state: index out of range");
  Vec v = Vec::Zero(dims.total());
  v(index) = 1.0;
  return {dims, v};
}

PureState fock_state(int cutoff, int n) { return basis_state(HilbertDims::single(cutoff), n); }

PureState coherent_state(int cutoff, cplx alpha) {
  Vec v(cutoff);
  v(0) = 1.0;
  for (int k = 1; k < cutoff; ++k) v(k) = v(k - 1) * alpha / std::sqrt(static_cast<double>(k));
  v /= v.norm();
  return {HilbertDims::single(cutoff), v};
}

double fidelity(const Operator& rho, const PureState& psi) {
  return psi.amp.dot(rho.m * psi.amp).real() / psi.amp.squaredNorm();
}

static Mat psd_sqrt(const Mat& h) {
  Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (h + h.adjoint()));
  Eigen::VectorXd ev = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  return es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().adjoint();
}

double fidelity(const Operator& rho, const Operator& sigma) {
  require_same_dims(rho, sigma, "fidelity");
  Mat s = psd_sqrt(rho.m);
  Mat inner = s * sigma.m * s;
  double t = hermitian_eigenvalues(inner).cwiseMax(0.0).cwiseSqrt().sum();
  return t * t;
}

double guard_band_population(const Operator& rho, int factor) {
  const auto& f = rho.dims.factors();
  if (factor < 0 || factor >= rho.dims.count()) throw DimensionError("guard_band: bad factor");
  int nc = f[factor];
  if (nc < 2) return 0.0;
  Operator red = rho.dims.count() == 1 ? rho : partial_trace(rho, {factor});
  return red.m(nc - 1, nc - 1).real() + red.m(nc - 2, nc - 2).real();
}

double guard_band_population(const PureState& psi, int factor) {
  return guard_band_population(psi.projector(), factor);
}

Mat random_complex(int rows, int cols, Rng& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  Mat m(rows, cols);
  for (int j = 0; j < cols; ++j)
    for (int i = 0; i < rows; ++i) {
      double re = g(rng);
      double im = g(rng);
      m(i, j) = cplx(re, im);
    }
  return m;
}

Mat random_unitary(int d, Rng& rng) {
  Mat z = random_complex(d, d, rng);
  Eigen::HouseholderQR<Mat> qr(z);
  Mat q = qr.householderQ() * Mat::Identity(d, d);
  Mat r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int k = 0; k < d; ++k) {
    cplx ph = r(k, k) / std::abs(r(k, k));
    q.col(k) *= ph;
  }
  return q;
}

Operator random_hermitian(const HilbertDims& dims, Rng& rng) {
  Mat z = random_complex(dims.total(), dims.total(), rng);
  return {dims, 0.5 * (z + z.adjoint())};
}

Operator random_density(const HilbertDims& dims, Rng& rng, int rank) {
  int d = dims.total();
  if (rank < 1 || rank > d) rank = d;
  Mat g = random_complex(d, rank, rng);
  Mat rho = g * g.adjoint();
  rho /= rho.trace();
  return {dims, rho};
}

PureState random_pure(const HilbertDims& dims, Rng& rng) {
  Vec v = random_complex(dims.total(), 1, rng).col(0);
  return {dims, v / v.norm()};
}

}  // namespace oqs

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
#include <cstdint>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "oqs/errors.hpp"

namespace oqs {

using cplx = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;
using Rng = std::mt19937_64;

inline constexpr cplx kI{0.0, 1.0};

/// Ordered tensor-factor dimensions of a composite Hilbert space.
class HilbertDims {
 public:
  HilbertDims() : factors_{1} {}
  explicit HilbertDims(std::vector<int> factors);
  static HilbertDims single(int d) { return HilbertDims({d}); }

  const std::vector<int>& factors() const { return factors_; }
  int total() const { return total_; }
  int count() const { return static_cast<int>(factors_.size()); }
  HilbertDims concat(const HilbertDims& other) const;

  bool operator==(const HilbertDims& o) const { return factors_ == o.factors_; }
  bool operator!=(const HilbertDims& o) const { return !(*this == o); }

 private:
  std::vector<int> factors_;
  int total_ = 1;
};

/// Dense square matrix tagged with its tensor-factor structure.
struct Operator {
  HilbertDims dims;
  Mat m;

  Operator() : m(Mat::Zero(1, 1)) {}
  explicit Operator(Mat mat);
  Operator(HilbertDims d, Mat mat);

  int dim() const { return static_cast<int>(m.rows()); }
  Operator adjoint() const { return {dims, m.adjoint()}; }
  cplx trace() const { return m.trace(); }
  double norm() const { return m.norm(); }

  Operator& operator+=(const Operator& o);
  Operator& operator-=(const Operator& o);
  Operator& operator*=(cplx s) {
    m *= s;
    return *this;
  }
};

Operator operator+(const Operator& a, const Operator& b);
Operator operator-(const Operator& a, const Operator& b);
Operator operator-(const Operator& a);
Operator operator*(const Operator& a, const Operator& b);
Operator operator*(cplx s, const Operator& a);
Operator operator*(const Operator& a, cplx s);
inline Operator operator*(double s, const Operator& a) { return cplx(s) * a; }

/// Density matrices share the operator carrier; validity is checked by validate_density.
using DensityMatrix = Operator;

struct PureState {
  HilbertDims dims;
  Vec amp;
  bool normalized = true;

  PureState() = default;
  explicit PureState(Vec v, bool is_normalized = true);
  PureState(HilbertDims d, Vec v, bool is_normalized = true);

  double norm() const { return amp.norm(); }
  PureState normalized_copy() const;
  Operator projector() const;
};

struct SpinOps {
  Operator Sx, Sy, Sz, Splus, Sminus;
};

/// Spin-S matrices in the basis m = S, S-1, ..., -S (index 0 is the highest weight).
SpinOps build_spin_operators(double S);

struct BosonOps {
  Operator a, adag, n;
};

/// Truncated ladder operators on Fock levels 0..cutoff-1. [a, a^dag] = 1 fails on the top level.
BosonOps build_boson_operators(int cutoff);

struct Pauli {
  Operator x, y, z, plus, minus;
};

/// Pauli matrices with index 0 = up; plus = |up><down|, minus = |down><up|.
Pauli pauli();

Operator identity(const HilbertDims& dims);
Operator identity(int d);
Operator kron(const Operator& a, const Operator& b);
Operator kron(const std::vector<Operator>& ops);
/// Places a single-factor operator on factor `site` of `dims`.
Operator embed(const Operator& local, int site, const HilbertDims& dims);
Operator commutator(const Operator& a, const Operator& b);
Operator anticommutator(const Operator& a, const Operator& b);
Operator hermitize(const Operator& a);

Operator partial_trace(const Operator& rho, const std::vector<int>& keep);

struct DensityReport {
  double hermiticity_defect = 0;
  double trace_defect = 0;
  double min_eigenvalue = 0;
  bool valid = false;
};

DensityReport validate_density(const Operator& op, double tol = 1e-10);

struct StateMetrics {
  double purity = 0;
  double entropy = 0;
};

/// Purity Tr(rho^2) and von Neumann entropy with the natural logarithm.
StateMetrics state_metrics(const Operator& rho);
double purity(const Operator& rho);
double entropy(const Operator& rho);

cplx expectation(const Operator& O, const Operator& rho);
cplx expectation(const Operator& O, const PureState& psi);

PureState basis_state(const HilbertDims& dims, int index);
PureState fock_state(int cutoff, int n);
/// Normalized truncated coherent state.
PureState coherent_state(int cutoff, cplx alpha);

double fidelity(const Operator& rho, const PureState& psi);
/// Uhlmann fidelity (Tr sqrt(sqrt(rho) sigma sqrt(rho)))^2.
double fidelity(const Operator& rho, const Operator& sigma);
/// Population of the two highest Fock levels of factor `factor`.
double guard_band_population(const Operator& rho, int factor = 0);
double guard_band_population(const PureState& psi, int factor = 0);

double min_hermitian_eigenvalue(const Mat& h);
Eigen::VectorXd hermitian_eigenvalues(const Mat& h);

Mat random_complex(int rows, int cols, Rng& rng);
Mat random_unitary(int d, Rng& rng);
Operator random_hermitian(const HilbertDims& dims, Rng& rng);
Operator random_density(const HilbertDims& dims, Rng& rng, int rank = -1);
PureState random_pure(const HilbertDims& dims, Rng& rng);

void require_same_dims(const Operator& a, const Operator& b, const char* where);

}  // namespace oqs

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

#include "oqs/integrators.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/MatrixFunctions>

#include "oqs/parallel.hpp"
#include "oqs/rng.hpp"

namespace oqs {

void TimeGrid::validate() const {
  if (!(t1 > t0)) throw ConfigError("TimeGrid: t1 must exceed t0");
  if (!(dt > 0)) throw ConfigError("TimeGrid: dt must be positive");
  if (dt > (t1 - t0) * (1 + 1e-12)) throw ConfigError("TimeGrid: dt exceeds the interval");
  if (stride < 1) throw ConfigError("TimeGrid: stride must be >= 1");
}

int TimeGrid::steps() const {
  validate();
  return static_cast<int>(std::llround((t1 - t0) / dt));
}

std::vector<int> TimeGrid::sample_steps() const {
  int n = steps();
  std::vector<int> s;
  for (int k = 0; k <= n; k += stride) s.push_back(k);
  if (s.back() != n) s.push_back(n);
  return s;
}

std::vector<double> TimeGrid::sample_times() const {
  std::vector<double> t;
  for (int k : sample_steps()) t.push_back(t0 + k * dt);
  return t;
}

namespace {

struct GeneratorKernel {
  Mat A;  // -i H_eff
  std::vector<Mat> L;
  explicit GeneratorKernel(const LindbladModel& model) {
    A = -kI * effective_hamiltonian(model).m;
    for (const auto& j : model.scaled_jumps()) L.push_back(j.m);
  }
  Mat operator()(const Mat& rho) const {
    Mat out = A * rho;
    out += out.adjoint().eval();
    for (const auto& l : L) out.noalias() += l * rho * l.adjoint();
    return out;
  }
};

void record(Series& s, const std::vector<Operator>& obs, const Mat& rho, const HilbertDims& dims,
            bool store) {
  for (size_t k = 0; k < obs.size(); ++k)
    s.values[k].push_back(obs[k].m.transpose().cwiseProduct(rho).sum());
  if (store) s.states.emplace_back(dims, rho);
}

}  // namespace

Series evolve_rk4(const LindbladModel& model, const Operator& rho0, const TimeGrid& grid,
                  const std::vector<Operator>& observables, bool store_states) {
  require_same_dims(model.H, rho0, "evolve_rk4");
  for (const auto& o : observables) require_same_dims(model.H, o, "evolve_rk4 observable");
  const int n = grid.steps();
  auto samples = grid.sample_steps();
  GeneratorKernel f(model);
  Series s;
  s.values.resize(observables.size());
  Mat rho = rho0.m;
  const double dt = grid.dt;
  const double tol = 1e-10 * std::max(1.0, rho0.m.norm());
  size_t next = 0;
  for (int step = 0; step <= n; ++step) {
    if (next < samples.size() && samples[next] == step) {
      rho = 0.5 * (rho + rho.adjoint());
      s.times.push_back(grid.t0 + step * dt);
      double mn = min_hermitian_eigenvalue(rho);
      s.worst_eigenvalue = std::min(s.worst_eigenvalue, mn);
      record(s, observables, rho, rho0.dims, store_states);
      ++next;
    }
    if (step == n) break;
    Mat k1 = f(rho);
    Mat k2 = f(rho + 0.5 * dt * k1);
    Mat k3 = f(rho + 0.5 * dt * k2);
    Mat k4 = f(rho + dt * k3);
    rho += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  if (s.worst_eigenvalue < -tol) {
    std::ostringstream os;
    os << "positivity violated: worst eigenvalue " << s.worst_eigenvalue << " (reduce dt)";
    s.warnings.push_back(os.str());
  }
  return s;
}

Operator evolve_expm(const Superoperator& S, const Operator& rho0, double t) {
  check_capacity(S.D, "evolve_expm");
  if (rho0.dim() != S.D) throw DimensionError("evolve_expm: dimension mismatch");
  if (t == 0) return rho0;
  Mat E = (S.matrix * t).exp();
  return Operator(rho0.dims, devectorize(E * vectorize(rho0.m)));
}

std::vector<Operator> evolve_expm(const Superoperator& S, const Operator& rho0,
                                  const std::vector<double>& times) {
  std::vector<Operator> out;
  for (double t : times) out.push_back(evolve_expm(S, rho0, t));
  return out;
}

void NoiseSpec::validate() const {
  if (!(gamma >= 0)) throw ConfigError("NoiseSpec: gamma must be nonnegative");
  if (kind == NoiseKind::OrnsteinUhlenbeck && !(tau > 0))
    throw ConfigError("NoiseSpec: Ornstein-Uhlenbeck noise requires tau > 0");
}

NoiseKind parse_noise_kind(const std::string& s) {
  if (s == "white-gaussian") return NoiseKind::WhiteGaussian;
  if (s == "discrete-pm1") return NoiseKind::DiscretePm1;
  if (s == "ornstein-uhlenbeck") return NoiseKind::OrnsteinUhlenbeck;
  throw ConfigError("unknown noise kind: " + s);
}

double default_noise_dt(const Operator& H0, const std::vector<Operator>& V, double gamma) {
  auto spec = [](const Mat& m) { return hermitian_eigenvalues(m).cwiseAbs().maxCoeff(); };
  double scale = spec(H0.m);
  for (const auto& v : V) scale = std::max(scale, gamma * std::pow(spec(v.m), 2));
  return scale > 0 ? 1e-3 / scale : 1e-3;
}

namespace {

Mat unitary_step(const Mat& H, double dt) {
  const int D = static_cast<int>(H.rows());
  if (D == 2) {
    // H = a0 I + a.sigma
    cplx a0 = 0.5 * (H(0, 0) + H(1, 1));
    double az = 0.5 * (H(0, 0) - H(1, 1)).real();
    double ax = H(0, 1).real(), ay = -H(0, 1).imag();
    double a = std::sqrt(ax * ax + ay * ay + az * az);
    double c = std::cos(a * dt);
    cplx sn = a > 0 ? cplx(0, -std::sin(a * dt) / a) : cplx(0, -dt);
    Mat U(2, 2);
    U(0, 0) = c + sn * az;
    U(1, 1) = c - sn * az;
    U(0, 1) = sn * cplx(ax, -ay);
    U(1, 0) = sn * cplx(ax, ay);
    return std::exp(-kI * a0.real() * dt) * U;
  }
  Eigen::SelfAdjointEigenSolver<Mat> es(H);
  Vec ph = (-kI * dt * es.eigenvalues().cast<cplx>()).array().exp();
  return es.eigenvectors() * ph.asDiagonal() * es.eigenvectors().adjoint();
}

}  // namespace

NoiseEnsemble noisy_hamiltonian_ensemble(const Operator& H0, const std::vector<Operator>& V,
                                         const NoiseSpec& noise, int n_realizations,
                                         const TimeGrid& grid, std::uint64_t seed,
                                         const Operator& rho0,
                                         const std::vector<Operator>& observables,
                                         bool keep_realizations, bool keep_states, int threads) {
  noise.validate();
  if (n_realizations < 1) throw ConfigError("noisy_hamiltonian_ensemble: n must be >= 1");
  if ((H0.m - H0.m.adjoint()).norm() > 1e-10 * std::max(1.0, H0.m.norm()))
    throw Error("noisy_hamiltonian_ensemble: H0 not Hermitian");
  for (const auto& v : V) {
    require_same_dims(H0, v, "noisy_hamiltonian_ensemble");
    if ((v.m - v.m.adjoint()).norm() > 1e-10 * std::max(1.0, v.m.norm()))
      throw Error("noisy_hamiltonian_ensemble: noise operator V must be Hermitian");
  }
  require_same_dims(H0, rho0, "noisy_hamiltonian_ensemble");
  const int nsteps = grid.steps();
  const auto samples = grid.sample_steps();
  const double dt = grid.dt;
  const int m = static_cast<int>(V.size());
  const double sg = std::sqrt(noise.gamma);

  // Discrete +-1 noise has only 2^m distinct step propagators.
  std::vector<Mat> cache;
  if (noise.kind == NoiseKind::DiscretePm1 && m <= 12) {
    for (int mask = 0; mask < (1 << m); ++mask) {
      Mat H = H0.m;
      for (int j = 0; j < m; ++j) H += ((mask >> j) & 1 ? 1.0 : -1.0) * sg / std::sqrt(dt) * V[j].m;
      cache.push_back(unitary_step(H, dt));
    }
  }

  const size_t ns = samples.size(), no = observables.size();
  std::vector<std::vector<std::vector<double>>> per(n_realizations);
  std::vector<std::vector<Mat>> states(keep_states ? n_realizations : 0);
  parallel_for(static_cast<size_t>(n_realizations), threads, [&](size_t r) {
    Rng rng = make_stream(seed, r);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::vector<double> eta(m, 0.0);
    if (noise.kind == NoiseKind::OrnsteinUhlenbeck)
      for (int j = 0; j < m; ++j) eta[j] = gauss(rng) / std::sqrt(2 * noise.tau);
    Mat rho = rho0.m;
    auto& out = per[r];
    out.assign(no, std::vector<double>());
    size_t next = 0;
    for (int step = 0; step <= nsteps; ++step) {
      if (next < ns && samples[next] == step) {
        for (size_t k = 0; k < no; ++k)
          out[k].push_back(observables[k].m.transpose().cwiseProduct(rho).sum().real());
        if (keep_states) states[r].push_back(rho);
        ++next;
      }
      if (step == nsteps) break;
      Mat U;
      if (!cache.empty()) {
        int mask = 0;
        for (int j = 0; j < m; ++j)
          if (rng() & 1ULL) mask |= 1 << j;
        U = cache[mask];
      } else {
        Mat H = H0.m;
        for (int j = 0; j < m; ++j) {
          double e = 0;
          switch (noise.kind) {
            case NoiseKind::WhiteGaussian: e = gauss(rng) / std::sqrt(dt); break;
            case NoiseKind::DiscretePm1: e = (rng() & 1ULL ? 1.0 : -1.0) / std::sqrt(dt); break;
            case NoiseKind::OrnsteinUhlenbeck: {
              double a = std::exp(-dt / noise.tau);
              e = eta[j];
              eta[j] = a * eta[j] + std::sqrt((1 - a * a) / (2 * noise.tau)) * gauss(rng);
              break;
            }
          }
          H += sg * e * V[j].m;
        }
        U = unitary_step(H, dt);
      }
      rho = U * rho * U.adjoint();
    }
  });

  NoiseEnsemble ens;
  ens.n = n_realizations;
  ens.seed = seed;
  ens.times = grid.sample_times();
  ens.mean.assign(no, std::vector<double>(ns, 0.0));
  ens.stderr_.assign(no, std::vector<double>(ns, 0.0));
  for (size_t k = 0; k < no; ++k)
    for (size_t s = 0; s < ns; ++s) {
      double sum = 0, sq = 0;
      for (int r = 0; r < n_realizations; ++r) sum += per[r][k][s];
      double mean = sum / n_realizations;
      for (int r = 0; r < n_realizations; ++r) sq += std::pow(per[r][k][s] - mean, 2);
      ens.mean[k][s] = mean;
      ens.stderr_[k][s] = n_realizations > 1 ? std::sqrt(sq / (n_realizations - 1) / n_realizations) : 0.0;
    }
  if (keep_states) {
    for (size_t s = 0; s < ns; ++s) {
      Mat acc = Mat::Zero(rho0.dim(), rho0.dim());
      for (int r = 0; r < n_realizations; ++r) acc += states[r][s];
      ens.mean_states.emplace_back(rho0.dims, Mat(acc / static_cast<double>(n_realizations)));
    }
  }
  if (keep_realizations) ens.per_realization = std::move(per);
  return ens;
}

Series ou_noise_evolve(const Operator& H0, const Operator& V, double gamma, double tau,
                       const Operator& rho0, const TimeGrid& grid,
                       const std::vector<Operator>& observables, bool store_states) {
  if ((V.m - V.m.adjoint()).norm() > 1e-10 * std::max(1.0, V.m.norm()))
    throw Error("ou_noise_evolve: V must be Hermitian");
  if (!(tau > 0)) throw ConfigError("ou_noise_evolve: tau must be positive");
  if (!(gamma >= 0)) throw ConfigError("ou_noise_evolve: gamma must be nonnegative");
  require_same_dims(H0, V, "ou_noise_evolve");
  require_same_dims(H0, rho0, "ou_noise_evolve");
  const Mat& H = H0.m;
  const Mat& v = V.m;
  auto frho = [&](const Mat& r, const Mat& z) -> Mat {
    return -kI * (H * r - r * H) - (v * z - z * v);
  };
  auto fz = [&](const Mat& r, const Mat& z) -> Mat {
    return -z / tau + (gamma / (2 * tau)) * (v * r - r * v);
  };
  const int n = grid.steps();
  auto samples = grid.sample_steps();
  const double dt = grid.dt;
  Series s;
  s.values.resize(observables.size());
  Mat rho = rho0.m;
  Mat zeta = Mat::Zero(rho.rows(), rho.cols());
  size_t next = 0;
  for (int step = 0; step <= n; ++step) {
    if (next < samples.size() && samples[next] == step) {
      s.times.push_back(grid.t0 + step * dt);
      record(s, observables, rho, rho0.dims, store_states);
      ++next;
    }
    if (step == n) break;
    Mat r1 = frho(rho, zeta), z1 = fz(rho, zeta);
    Mat r2 = frho(rho + 0.5 * dt * r1, zeta + 0.5 * dt * z1), z2 = fz(rho + 0.5 * dt * r1, zeta + 0.5 * dt * z1);
    Mat r3 = frho(rho + 0.5 * dt * r2, zeta + 0.5 * dt * z2), z3 = fz(rho + 0.5 * dt * r2, zeta + 0.5 * dt * z2);
    Mat r4 = frho(rho + dt * r3, zeta + dt * z3), z4 = fz(rho + dt * r3, zeta + dt * z3);
    rho += (dt / 6.0) * (r1 + 2.0 * r2 + 2.0 * r3 + r4);
    zeta += (dt / 6.0) * (z1 + 2.0 * z2 + 2.0 * z3 + z4);
  }
  return s;
}

}  // namespace oqs

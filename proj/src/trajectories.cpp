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

#include "oqs/trajectories.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "oqs/parallel.hpp"
#include "oqs/rng.hpp"
#include "oqs/spectra.hpp"

namespace oqs {

std::string scheme_name(Scheme s) {
  switch (s) {
    case Scheme::Mcwf: return "mcwf";
    case Scheme::SmeJump: return "sme-jump";
    case Scheme::Homodyne: return "homodyne";
    case Scheme::Qsd: return "qsd";
  }
  return "?";
}

Scheme parse_scheme(const std::string& s) {
  if (s == "mcwf") return Scheme::Mcwf;
  if (s == "sme-jump") return Scheme::SmeJump;
  if (s == "homodyne") return Scheme::Homodyne;
  if (s == "qsd") return Scheme::Qsd;
  throw ConfigError("unknown trajectory scheme: " + s);
}

namespace {

void check_pure_input(const LindbladModel& model, const PureState& psi0, const char* where) {
  if (psi0.amp.size() != model.dim()) throw DimensionError(std::string(where) + ": state dimension mismatch");
  if (std::abs(psi0.amp.norm() - 1.0) > 1e-8)
    throw Error(std::string(where) + ": initial state must be normalized");
}

void init_record(TrajectoryRecord& rec, Scheme s, std::uint64_t seed, std::uint64_t index,
                 size_t nobs) {
  rec.scheme = s;
  rec.seed = seed;
  rec.index = index;
  rec.obs.assign(nobs, {});
}

void sample_pure(TrajectoryRecord& rec, const std::vector<Operator>& obs, const Vec& psi,
                 double t, const HilbertDims& dims, bool store) {
  Vec u = psi / psi.norm();
  rec.times.push_back(t);
  for (size_t k = 0; k < obs.size(); ++k) rec.obs[k].push_back(u.dot(obs[k].m * u).real());
  if (store) rec.states.emplace_back(dims, Mat(u * u.adjoint()));
}

// Applies P(s) = sum_{k<=4} (A s)^k / k! to phi using precomputed A^k phi.
struct Taylor4 {
  Vec p[5];
  Taylor4(const Mat& A, const Vec& phi) {
    p[0] = phi;
    for (int k = 1; k < 5; ++k) p[k] = A * p[k - 1];
  }
  Vec at(double s) const {
    return p[0] + s * p[1] + (s * s / 2.0) * p[2] + (s * s * s / 6.0) * p[3] +
           (s * s * s * s / 24.0) * p[4];
  }
};

}  // namespace

TrajectoryRecord mcwf_run(const LindbladModel& model, const PureState& psi0, const TimeGrid& grid,
                          std::uint64_t seed, const std::vector<Operator>& observables,
                          const TrajectoryOptions& opts, std::uint64_t index) {
  check_pure_input(model, psi0, "mcwf_run");
  const int n = grid.steps();
  const auto samples = grid.sample_steps();
  const double dt = grid.dt;
  const int D = model.dim();
  Mat A = -kI * effective_hamiltonian(model).m;
  std::vector<Mat> L;
  for (const auto& j : model.scaled_jumps()) L.push_back(j.m);
  // One RK4 step of a linear system is exactly the 4th-order Taylor propagator.
  Mat Adt = A * dt;
  Mat P = Mat::Identity(D, D);
  Mat term = Mat::Identity(D, D);
  for (int k = 1; k <= 4; ++k) {
    term = term * Adt / static_cast<double>(k);
    P += term;
  }

  Rng rng = make_stream(seed, index);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  TrajectoryRecord rec;
  init_record(rec, Scheme::Mcwf, seed, index, observables.size());
  Vec phi = psi0.amp;
  double r = uni(rng);
  size_t next = 0;
  if (opts.record_norm) {
    rec.norm_times.push_back(grid.t0);
    rec.norm_values.push_back(1.0);
  }
  for (int step = 0; step <= n; ++step) {
    double t = grid.t0 + step * dt;
    if (next < samples.size() && samples[next] == step) {
      sample_pure(rec, observables, phi, t, psi0.dims, opts.store_states);
      ++next;
    }
    if (step == n) break;
    double done = 0;
    Vec trial = P * phi;
    while (trial.squaredNorm() < r) {
      // Bisection for the norm crossing inside [done, dt].
      Taylor4 tp(A, phi);
      double lo = 0, hi = dt - done;
      while (hi - lo > opts.crossing_rel_tol * dt) {
        double mid = 0.5 * (lo + hi);
        if (tp.at(mid).squaredNorm() < r) hi = mid;
        else lo = mid;
      }
      Vec pc = tp.at(hi);
      std::vector<double> w(L.size());
      double total = 0;
      for (size_t mu = 0; mu < L.size(); ++mu) {
        w[mu] = (L[mu] * pc).squaredNorm();
        total += w[mu];
      }
      if (!(total > 0)) {
        std::ostringstream os;
        os << "mcwf_run: norm crossing at t=" << t + done + hi << " with zero jump probability (norm "
           << pc.squaredNorm() << ", threshold " << r << ")";
        throw NumericalError(os.str());
      }
      double u = uni(rng) * total;
      int chosen = static_cast<int>(L.size()) - 1;
      double acc = 0;
      for (size_t mu = 0; mu < L.size(); ++mu) {
        acc += w[mu];
        if (u < acc) {
          chosen = static_cast<int>(mu);
          break;
        }
      }
      double tj = t + done + hi;
      if (opts.record_norm) {
        rec.norm_times.push_back(tj);
        rec.norm_values.push_back(pc.squaredNorm());
        rec.norm_times.push_back(tj);
        rec.norm_values.push_back(1.0);
      }
      rec.jumps.push_back({tj, chosen});
      phi = L[chosen] * pc;
      phi /= phi.norm();
      r = uni(rng);
      done += hi;
      double rest = dt - done;
      if (rest <= 0) {
        trial = phi;
        break;
      }
      trial = Taylor4(A, phi).at(rest);
    }
    phi = trial;
    if (opts.record_norm) {
      rec.norm_times.push_back(t + dt);
      rec.norm_values.push_back(phi.squaredNorm());
    }
  }
  return rec;
}

TrajectoryRecord sme_jump_run(const LindbladModel& model, const Operator& rho0,
                              const std::vector<double>& efficiencies, const TimeGrid& grid,
                              std::uint64_t seed, const std::vector<Operator>& observables,
                              const TrajectoryOptions& opts, std::uint64_t index) {
  require_same_dims(model.H, rho0, "sme_jump_run");
  auto rep = validate_density(rho0, 1e-8);
  if (!rep.valid) throw Error("sme_jump_run: initial state is not a valid density matrix");
  std::vector<Mat> L;
  for (const auto& j : model.scaled_jumps()) L.push_back(j.m);
  std::vector<double> eta = efficiencies;
  if (eta.empty()) eta.assign(L.size(), 1.0);
  if (eta.size() != L.size()) throw ConfigError("sme_jump_run: one efficiency per channel required");
  for (double e : eta)
    if (!(e >= 0 && e <= 1)) throw ConfigError("sme_jump_run: efficiencies must lie in [0,1]");
  const int D = model.dim();
  std::vector<Mat> LdL;
  for (size_t mu = 0; mu < L.size(); ++mu) LdL.push_back(L[mu].adjoint() * L[mu]);
  const int n = grid.steps();
  const auto samples = grid.sample_steps();
  const double dt = grid.dt;
  // No-jump update in Kraus form; pure states stay pure when every channel is monitored.
  Mat K = Mat::Identity(D, D) - (kI * dt) * model.H.m;
  for (const auto& ldl : LdL) K -= (0.5 * dt) * ldl;
  Rng rng = make_stream(seed, index);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  TrajectoryRecord rec;
  init_record(rec, Scheme::SmeJump, seed, index, observables.size());
  Mat rho = rho0.m;
  size_t next = 0;
  std::vector<double> p(L.size());
  for (int step = 0; step <= n; ++step) {
    double t = grid.t0 + step * dt;
    if (next < samples.size() && samples[next] == step) {
      rec.times.push_back(t);
      for (size_t k = 0; k < observables.size(); ++k)
        rec.obs[k].push_back(observables[k].m.transpose().cwiseProduct(rho).sum().real());
      if (opts.store_states) rec.states.emplace_back(rho0.dims, rho);
      ++next;
    }
    if (step == n) break;
    double ptot = 0;
    for (size_t mu = 0; mu < L.size(); ++mu) {
      p[mu] = eta[mu] * LdL[mu].cwiseProduct(rho.transpose()).sum().real() * dt;
      if (p[mu] > opts.max_step_probability) {
        std::ostringstream os;
        os << "sme_jump_run: jump probability " << p[mu] << " per step exceeds "
           << opts.max_step_probability << "; use a smaller dt";
        throw NumericalError(os.str());
      }
      ptot += std::max(p[mu], 0.0);
    }
    double u = uni(rng);
    int jumped = -1;
    if (u < ptot) {
      double acc = 0;
      for (size_t mu = 0; mu < L.size(); ++mu) {
        acc += std::max(p[mu], 0.0);
        if (u < acc) {
          jumped = static_cast<int>(mu);
          break;
        }
      }
      if (jumped < 0) jumped = static_cast<int>(L.size()) - 1;
    }
    if (jumped >= 0) {
      rho = L[jumped] * rho * L[jumped].adjoint();
      rec.jumps.push_back({t + dt, jumped});
    } else {
      Mat next_rho = K * rho * K.adjoint();
      for (size_t mu = 0; mu < L.size(); ++mu)
        if (eta[mu] < 1) next_rho += ((1 - eta[mu]) * dt) * (L[mu] * rho * L[mu].adjoint());
      rho = next_rho;
    }
    rho = 0.5 * (rho + rho.adjoint());
    cplx tr = rho.trace();
    if (!(std::abs(tr) > 0)) throw NumericalError("sme_jump_run: trace vanished");
    rho /= tr.real();
  }
  return rec;
}

double default_diffusive_dt(const LindbladModel& model) {
  double nrm = spectral_norm_estimate(effective_hamiltonian(model).m, 60);
  return nrm > 0 ? 1e-3 / nrm : 1e-3;
}

TrajectoryRecord homodyne_run(const LindbladModel& model, const PureState& psi0,
                              const TimeGrid& grid, std::uint64_t seed,
                              const std::vector<Operator>& observables,
                              const TrajectoryOptions& opts, std::uint64_t index) {
  check_pure_input(model, psi0, "homodyne_run");
  Mat A = -kI * effective_hamiltonian(model).m;
  std::vector<Mat> L;
  for (const auto& j : model.scaled_jumps()) L.push_back(j.m);
  const int n = grid.steps();
  const auto samples = grid.sample_steps();
  const double dt = grid.dt, sdt = std::sqrt(dt);
  Rng rng = make_stream(seed, index);
  std::normal_distribution<double> gauss(0.0, 1.0);
  TrajectoryRecord rec;
  init_record(rec, Scheme::Homodyne, seed, index, observables.size());
  if (opts.record_signal) rec.signal.assign(L.size(), {});
  Vec psi = psi0.amp;
  size_t next = 0;
  std::vector<double> x(L.size());
  std::vector<Vec> Lpsi(L.size());
  for (int step = 0; step <= n; ++step) {
    double t = grid.t0 + step * dt;
    if (next < samples.size() && samples[next] == step) {
      sample_pure(rec, observables, psi, t, psi0.dims, opts.store_states);
      ++next;
    }
    if (step == n) break;
    Vec d = A * psi;
    Vec noise = Vec::Zero(psi.size());
    for (size_t mu = 0; mu < L.size(); ++mu) {
      Lpsi[mu] = L[mu] * psi;
      x[mu] = psi.dot(Lpsi[mu]).real();
      double dW = gauss(rng) * sdt;
      d += x[mu] * Lpsi[mu] - 0.5 * x[mu] * x[mu] * psi;
      noise += (Lpsi[mu] - x[mu] * psi) * dW;
      if (opts.record_signal) rec.signal[mu].push_back(2 * x[mu] + dW / dt);
    }
    psi += dt * d + noise;
    double nr = psi.norm();
    if (!(nr > 0) || !std::isfinite(nr)) throw NumericalError("homodyne_run: state diverged; reduce dt");
    psi /= nr;
    rec.max_norm_defect = std::max(rec.max_norm_defect, std::abs(psi.norm() - 1.0));
  }
  return rec;
}

TrajectoryRecord qsd_run(const LindbladModel& model, const PureState& psi0, const TimeGrid& grid,
                         std::uint64_t seed, const std::vector<Operator>& observables,
                         const TrajectoryOptions& opts, std::uint64_t index) {
  check_pure_input(model, psi0, "qsd_run");
  Mat A = -kI * effective_hamiltonian(model).m;
  std::vector<Mat> L;
  for (const auto& j : model.scaled_jumps()) L.push_back(j.m);
  const int n = grid.steps();
  const auto samples = grid.sample_steps();
  const double dt = grid.dt, h = std::sqrt(dt / 2);
  Rng rng = make_stream(seed, index);
  std::normal_distribution<double> gauss(0.0, 1.0);
  TrajectoryRecord rec;
  init_record(rec, Scheme::Qsd, seed, index, observables.size());
  Vec psi = psi0.amp;
  size_t next = 0;
  for (int step = 0; step <= n; ++step) {
    double t = grid.t0 + step * dt;
    if (next < samples.size() && samples[next] == step) {
      sample_pure(rec, observables, psi, t, psi0.dims, opts.store_states);
      ++next;
    }
    if (step == n) break;
    Vec d = A * psi;
    Vec noise = Vec::Zero(psi.size());
    for (const auto& l : L) {
      Vec lp = l * psi;
      cplx ex = psi.dot(lp);
      double x1 = gauss(rng), x2 = gauss(rng);
      cplx dZ = cplx(x1, x2) * h;
      d += std::conj(ex) * lp - 0.5 * std::norm(ex) * psi;
      noise += (lp - ex * psi) * dZ;
    }
    psi += dt * d + noise;
    double nr = psi.norm();
    if (!(nr > 0) || !std::isfinite(nr)) throw NumericalError("qsd_run: state diverged; reduce dt");
    psi /= nr;
    rec.max_norm_defect = std::max(rec.max_norm_defect, std::abs(psi.norm() - 1.0));
  }
  return rec;
}

EnsembleStats ensemble_average(const std::vector<TrajectoryRecord>& records) {
  if (records.empty()) throw Error("ensemble_average: no records");
  EnsembleStats st;
  st.n = static_cast<int>(records.size());
  st.scheme = records.front().scheme;
  st.times = records.front().times;
  const size_t no = records.front().obs.size(), ns = st.times.size();
  for (const auto& r : records) {
    if (r.scheme != st.scheme) throw Error("ensemble_average: mixed schemes");
    if (r.times.size() != ns || r.obs.size() != no) throw Error("ensemble_average: inhomogeneous grids");
  }
  st.mean.assign(no, std::vector<double>(ns, 0));
  st.stderr_.assign(no, std::vector<double>(ns, 0));
  const double n = static_cast<double>(records.size());
  for (size_t k = 0; k < no; ++k)
    for (size_t s = 0; s < ns; ++s) {
      double sum = 0;
      for (const auto& r : records) sum += r.obs[k][s];
      double mean = sum / n, sq = 0;
      for (const auto& r : records) sq += (r.obs[k][s] - mean) * (r.obs[k][s] - mean);
      st.mean[k][s] = mean;
      st.stderr_[k][s] = records.size() > 1 ? std::sqrt(sq / (n - 1) / n) : 0.0;
    }
  bool have_states = true;
  for (const auto& r : records) have_states = have_states && r.states.size() == ns;
  if (have_states && ns > 0) {
    const int D = records.front().states.front().dim();
    for (size_t s = 0; s < ns; ++s) {
      Mat acc = Mat::Zero(D, D);
      for (const auto& r : records) acc += r.states[s].m;
      acc /= n;
      st.mean_states.emplace_back(records.front().states[s].dims, acc);
      st.purity.push_back((acc * acc).trace().real());
    }
  }
  for (const auto& r : records) {
    st.jump_count_histogram[static_cast<int>(r.jumps.size())]++;
    for (size_t j = 1; j < r.jumps.size(); ++j) st.waiting_times.push_back(r.jumps[j].t - r.jumps[j - 1].t);
  }
  return st;
}

EnsembleResult run_ensemble(const LindbladModel& model, const EnsembleRequest& req,
                            bool keep_records) {
  if (req.n < 1) throw ConfigError("run_ensemble: n must be >= 1");
  std::vector<TrajectoryRecord> recs(static_cast<size_t>(req.n));
  Operator rho0 = req.rho0;
  if (req.scheme == Scheme::SmeJump && rho0.dim() != model.dim()) rho0 = req.psi0.projector();
  parallel_for(recs.size(), req.threads, [&](size_t i) {
    switch (req.scheme) {
      case Scheme::Mcwf:
        recs[i] = mcwf_run(model, req.psi0, req.grid, req.seed, req.observables, req.options, i);
        break;
      case Scheme::SmeJump:
        recs[i] = sme_jump_run(model, rho0, req.efficiencies, req.grid, req.seed, req.observables,
                               req.options, i);
        break;
      case Scheme::Homodyne:
        recs[i] = homodyne_run(model, req.psi0, req.grid, req.seed, req.observables, req.options, i);
        break;
      case Scheme::Qsd:
        recs[i] = qsd_run(model, req.psi0, req.grid, req.seed, req.observables, req.options, i);
        break;
    }
  });
  EnsembleResult out;
  out.stats = ensemble_average(recs);
  if (keep_records) out.records = std::move(recs);
  return out;
}

JumpStatistics jump_statistics(const std::vector<TrajectoryRecord>& records, double t_start,
                               double t_end, int n_channels) {
  JumpStatistics js;
  int nch = n_channels;
  for (const auto& r : records)
    for (const auto& j : r.jumps) nch = std::max(nch, j.channel + 1);
  for (const auto& r : records) {
    int c = 0;
    std::vector<int> per(nch, 0);
    double last = -1;
    bool have_last = false;
    for (const auto& j : r.jumps) {
      if (j.t < t_start || j.t > t_end) continue;
      ++c;
      per[j.channel]++;
      if (have_last) js.waiting_times.push_back(j.t - last);
      last = j.t;
      have_last = true;
    }
    js.counts.push_back(c);
    js.channel_counts.push_back(per);
    js.histogram[c]++;
  }
  const double n = static_cast<double>(js.counts.size());
  if (n > 0) {
    double sum = 0;
    for (int c : js.counts) sum += c;
    js.mean_count = sum / n;
    double sq = 0;
    for (int c : js.counts) sq += (c - js.mean_count) * (c - js.mean_count);
    js.variance = n > 1 ? sq / (n - 1) : 0.0;
    js.fano = js.mean_count > 0 ? js.variance / js.mean_count : 0.0;
  }
  if (!js.waiting_times.empty()) {
    double s = 0;
    for (double w : js.waiting_times) s += w;
    js.mean_waiting_time = s / static_cast<double>(js.waiting_times.size());
  }
  return js;
}

}  // namespace oqs

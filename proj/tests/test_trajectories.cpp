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

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "oqs/core.hpp"
#include "oqs/generator.hpp"
#include "oqs/integrators.hpp"
#include "oqs/models.hpp"
#include "oqs/spectra.hpp"
#include "oqs/trajectories.hpp"

using namespace oqs;

namespace {

LindbladModel qubit_decay() {
  return LindbladModel(Operator(Mat::Zero(2, 2)), {{pauli().minus, 1.0, ""}});
}

PureState plus_state() {
  Vec v(2);
  v << 1 / std::sqrt(2.0), 1 / std::sqrt(2.0);
  return PureState(v);
}

// Largest |mean - reference| in units of the standard error. The error is floored at the
// ensemble resolution (eigenvalue range)/n, since identical records give a zero sample error.
double max_sigma(const EnsembleStats& st, const Series& ref, const Operator& O, int obs = 0) {
  auto ev = hermitian_eigenvalues(O.m);
  double floor = (ev.maxCoeff() - ev.minCoeff()) / st.n;
  double worst = 0;
  for (size_t k = 0; k < st.times.size(); ++k) {
    double diff = std::abs(st.mean[obs][k] - ref.values[obs][k].real());
    worst = std::max(worst, diff / std::max(st.stderr_[obs][k], floor));
  }
  return worst;
}

}  // namespace

TEST(Mcwf, DarkStateNoJumps) {
  auto r = mcwf_run(qubit_decay(), basis_state(HilbertDims::single(2), 1), {0, 5, 1e-3, 500}, 3,
                    {pauli().z});
  EXPECT_TRUE(r.jumps.empty());
  for (double v : r.obs[0]) EXPECT_NEAR(v, -1.0, 1e-14);
  auto js = jump_statistics({r}, 0, 5);
  EXPECT_EQ(js.counts.at(0), 0);
}

TEST(Mcwf, SpinOneJumpHistogram) {
  auto s = build_spin_operators(1.0);
  LindbladModel m(Operator(Mat::Zero(3, 3)), {{s.Sminus, 1.0, ""}});
  Vec v(3);
  v << 0.5, 1 / std::sqrt(2.0), 0.5;
  EnsembleRequest rq;
  rq.psi0 = PureState(v);
  rq.grid = {0, 25, 1e-3, 25000};
  rq.n = 1000;
  rq.seed = 4;
  auto res = run_ensemble(m, rq, true);
  const auto& h = res.stats.jump_count_histogram;
  int mass = 0;
  for (const auto& [k, c] : h) {
    EXPECT_LE(k, 2);
    mass += c;
  }
  EXPECT_EQ(mass, 1000);
  auto freq = [&](int k) { return h.count(k) ? h.at(k) / 1000.0 : 0.0; };
  EXPECT_NEAR(freq(0), 0.25, 0.05);
  EXPECT_NEAR(freq(1), 0.50, 0.05);
  EXPECT_NEAR(freq(2), 0.25, 0.05);
}

TEST(Mcwf, NormRecordShape) {
  TrajectoryOptions o;
  o.record_norm = true;
  LindbladModel m(0.5 * pauli().x, {{pauli().minus, 1.0, ""}});
  auto r = mcwf_run(m, basis_state(HilbertDims::single(2), 0), {0, 20, 1e-3, 100}, 8, {}, o);
  ASSERT_GT(r.jumps.size(), 2u);
  ASSERT_GT(r.norm_values.size(), 10u);
  EXPECT_NEAR(r.norm_values.front(), 1.0, 1e-12);
  size_t resets = 0;
  for (size_t k = 1; k < r.norm_values.size(); ++k) {
    EXPECT_GT(r.norm_values[k], 0.0);
    EXPECT_LE(r.norm_values[k], 1.0 + 1e-12);
    if (r.norm_values[k] > r.norm_values[k - 1] + 1e-12) {
      EXPECT_NEAR(r.norm_values[k], 1.0, 1e-12);
      ++resets;
    }
  }
  EXPECT_EQ(resets, r.jumps.size());
  for (size_t k = 1; k < r.jumps.size(); ++k) EXPECT_GT(r.jumps[k].t, r.jumps[k - 1].t);
}

TEST(Mcwf, NoJumpNormLaw) {
  TrajectoryOptions o;
  o.record_norm = true;
  auto r = mcwf_run(qubit_decay(), basis_state(HilbertDims::single(2), 0), {0, 5, 1e-3, 10}, 21,
                    {}, o);
  double t_first = r.jumps.empty() ? 5.0 : r.jumps.front().t;
  int checked = 0;
  for (size_t k = 0; k < r.norm_times.size(); ++k) {
    if (r.norm_times[k] >= t_first) break;
    EXPECT_NEAR(r.norm_values[k], std::exp(-r.norm_times[k]), 1e-9);
    ++checked;
  }
  EXPECT_GT(checked, 0);
  if (!r.jumps.empty()) {
    // The crossing time solves exp(-t) = r for the drawn threshold, so the pre-jump norm is above it.
    EXPECT_GT(t_first, 0.0);
  }
}

TEST(Mcwf, MatchesLindblad) {
  auto bm = build_model_full({"spin-half-driven", {}});
  EnsembleRequest rq;
  rq.psi0 = basis_state(bm.model.dims(), 1);
  rq.grid = {0, 8, 1e-3, 200};
  rq.n = 1000;
  rq.seed = 5;
  rq.observables = {pauli().z};
  auto res = run_ensemble(bm.model, rq, false);
  auto ref = evolve_rk4(bm.model, rq.psi0.projector(), rq.grid, rq.observables);
  EXPECT_LE(max_sigma(res.stats, ref, pauli().z), 3.0);
}

TEST(Mcwf, SnapshotsArePure) {
  TrajectoryOptions o;
  o.store_states = true;
  LindbladModel m(0.5 * pauli().x, {{pauli().minus, 1.0, ""}});
  auto r = mcwf_run(m, basis_state(HilbertDims::single(2), 0), {0, 10, 1e-3, 100}, 2, {}, o);
  for (const auto& s : r.states) EXPECT_NEAR(purity(s), 1.0, 1e-8);
}

TEST(Mcwf, Deterministic) {
  LindbladModel m(0.5 * pauli().x, {{pauli().minus, 1.0, ""}});
  TimeGrid g{0, 10, 1e-3, 100};
  auto a = mcwf_run(m, basis_state(m.dims(), 0), g, 77, {pauli().z});
  auto b = mcwf_run(m, basis_state(m.dims(), 0), g, 77, {pauli().z});
  ASSERT_EQ(a.jumps.size(), b.jumps.size());
  for (size_t k = 0; k < a.jumps.size(); ++k) {
    EXPECT_EQ(a.jumps[k].t, b.jumps[k].t);
    EXPECT_EQ(a.jumps[k].channel, b.jumps[k].channel);
  }
  EXPECT_EQ(a.obs, b.obs);
  auto h1 = homodyne_run(m, basis_state(m.dims(), 0), g, 77, {}, {false, false, true});
  auto h2 = homodyne_run(m, basis_state(m.dims(), 0), g, 77, {}, {false, false, true});
  EXPECT_EQ(h1.signal, h2.signal);
}

TEST(Ensemble, ThreadCountIndependent) {
  LindbladModel m(0.5 * pauli().x, {{pauli().minus, 1.0, ""}});
  EnsembleRequest rq;
  rq.psi0 = basis_state(m.dims(), 0);
  rq.grid = {0, 3, 1e-3, 100};
  rq.n = 40;
  rq.seed = 8;
  rq.observables = {pauli().z};
  rq.threads = 1;
  auto a = run_ensemble(m, rq, false);
  rq.threads = 3;
  auto b = run_ensemble(m, rq, false);
  EXPECT_EQ(a.stats.mean, b.stats.mean);
  EXPECT_EQ(a.stats.stderr_, b.stats.stderr_);
}

TEST(Ensemble, SingleRecord) {
  LindbladModel m(0.5 * pauli().x, {{pauli().minus, 1.0, ""}});
  auto r = mcwf_run(m, basis_state(m.dims(), 0), {0, 3, 1e-3, 100}, 1, {pauli().z});
  auto st = ensemble_average({r});
  EXPECT_EQ(st.n, 1);
  EXPECT_EQ(st.mean[0], r.obs[0]);
  for (double s : st.stderr_[0]) EXPECT_GE(s, 0.0);
  EXPECT_EQ(st.jump_count_histogram.at(static_cast<int>(r.jumps.size())), 1);
}

TEST(Ensemble, RejectsMixedSchemes) {
  LindbladModel m(0.5 * pauli().x, {{pauli().minus, 1.0, ""}});
  TimeGrid g{0, 1, 1e-3, 100};
  auto a = mcwf_run(m, basis_state(m.dims(), 0), g, 1, {pauli().z});
  auto b = qsd_run(m, basis_state(m.dims(), 0), g, 1, {pauli().z});
  EXPECT_THROW(ensemble_average({a, b}), Error);
}

TEST(SmeJump, ZeroEfficiencyIsLindblad) {
  LindbladModel m(0.5 * pauli().x, {{pauli().minus, 1.0, ""}});
  TimeGrid g{0, 3, 1e-4, 1000};
  auto rho0 = basis_state(m.dims(), 0).projector();
  auto r = sme_jump_run(m, rho0, {0.0}, g, 3, {pauli().z});
  auto ref = evolve_rk4(m, rho0, g, {pauli().z});
  EXPECT_TRUE(r.jumps.empty());
  for (size_t k = 0; k < r.times.size(); ++k)
    EXPECT_NEAR(r.obs[0][k], ref.values[0][k].real(), 1e-3);
}

TEST(SmeJump, UnitEfficiencyStaysPure) {
  TrajectoryOptions o;
  o.store_states = true;
  LindbladModel m(0.5 * pauli().x, {{pauli().minus, 1.0, ""}});
  auto r = sme_jump_run(m, basis_state(m.dims(), 0).projector(), {1.0}, {0, 10, 1e-4, 500}, 6, {},
                        o);
  for (const auto& s : r.states) EXPECT_NEAR(purity(s), 1.0, 1e-6);
}

TEST(SmeJump, EnsembleMatchesLindblad) {
  LindbladModel m(0.5 * pauli().x, {{pauli().minus, 1.0, ""}});
  EnsembleRequest rq;
  rq.scheme = Scheme::SmeJump;
  rq.psi0 = basis_state(m.dims(), 0);
  rq.rho0 = rq.psi0.projector();
  rq.efficiencies = {0.5};
  rq.grid = {0, 4, 1e-3, 100};
  rq.n = 1000;
  rq.seed = 10;
  rq.observables = {pauli().z};
  auto res = run_ensemble(m, rq, false);
  // Euler bias of the jump SME is O(dt); the reference uses the same grid.
  auto ref = evolve_rk4(m, rq.rho0, rq.grid, rq.observables);
  EXPECT_LE(max_sigma(res.stats, ref, pauli().z), 3.0);
}

TEST(SmeJump, LargeStepRejected) {
  LindbladModel m(Operator(Mat::Zero(2, 2)), {{pauli().minus, 100.0, ""}});
  EXPECT_THROW(sme_jump_run(m, basis_state(m.dims(), 0).projector(), {1.0}, {0, 1, 0.01, 1}, 1),
               Error);
  EXPECT_THROW(sme_jump_run(m, basis_state(m.dims(), 0).projector(), {1.5}, {0, 1, 1e-4, 1}, 1),
               Error);
}

TEST(Homodyne, LocalizesOnSigmaZ) {
  LindbladModel m(Operator(Mat::Zero(2, 2)), {{pauli().z, 1.0, ""}});
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    auto r = homodyne_run(m, plus_state(), {0, 8, 1e-3, 8000}, seed, {pauli().z});
    EXPECT_GT(std::abs(r.obs[0].back()), 0.999) << seed;
  }
}

TEST(Homodyne, EnsembleMatchesLindblad) {
  auto bm = build_model_full({"spin-half-driven", {}});
  EnsembleRequest rq;
  rq.scheme = Scheme::Homodyne;
  rq.psi0 = basis_state(bm.model.dims(), 1);
  rq.grid = {0, 6, 1e-3, 200};
  rq.n = 1000;
  rq.seed = 12;
  rq.observables = {pauli().z, pauli().x};
  auto res = run_ensemble(bm.model, rq, false);
  auto ref = evolve_rk4(bm.model, rq.psi0.projector(), rq.grid, rq.observables);
  EXPECT_LE(max_sigma(res.stats, ref, pauli().z, 0), 3.0);
  EXPECT_LE(max_sigma(res.stats, ref, pauli().x, 1), 3.0);
}

TEST(Homodyne, NoDissipationSignal) {
  LindbladModel m(0.5 * pauli().x, {{pauli().minus, 0.0, ""}});
  TrajectoryOptions o;
  o.record_signal = true;
  TimeGrid g{0, 2, 1e-3, 100};
  auto r = homodyne_run(m, basis_state(m.dims(), 0), g, 4, {pauli().z}, o);
  auto r2 = homodyne_run(m, basis_state(m.dims(), 0), g, 5, {pauli().z}, o);
  auto ref = evolve_rk4(LindbladModel(0.5 * pauli().x, {}), basis_state(m.dims(), 0).projector(),
                        g, {pauli().z});
  for (size_t k = 0; k < r.times.size(); ++k) {
    EXPECT_NEAR(r.obs[0][k], ref.values[0][k].real(), 1e-3);
    EXPECT_EQ(r.obs[0][k], r2.obs[0][k]);
  }
  ASSERT_EQ(r.signal.size(), 1u);
  const auto& J = r.signal[0];
  ASSERT_EQ(static_cast<int>(J.size()), g.steps());
  double mean = 0;
  for (double j : J) mean += j;
  mean /= J.size();
  // Shot noise dW/dt has variance 1/dt per step; the mean current is 2<x> = 0.
  double se = 1.0 / std::sqrt(g.dt * J.size());
  EXPECT_LT(std::abs(mean), 4 * se);
}

TEST(Homodyne, MultiChannelSignals) {
  LindbladModel m(0.5 * pauli().x, {{pauli().minus, 1.0, ""}, {pauli().z, 0.5, ""}});
  TrajectoryOptions o;
  o.record_signal = true;
  TimeGrid g{0, 1, 1e-3, 100};
  auto r = homodyne_run(m, plus_state(), g, 1, {}, o);
  ASSERT_EQ(r.signal.size(), 2u);
  EXPECT_EQ(static_cast<int>(r.signal[1].size()), g.steps());
  EnsembleRequest rq;
  rq.scheme = Scheme::Homodyne;
  rq.psi0 = plus_state();
  rq.grid = {0, 3, 1e-3, 100};
  rq.n = 1000;
  rq.seed = 13;
  rq.observables = {pauli().x};
  auto res = run_ensemble(m, rq, false);
  auto ref = evolve_rk4(m, rq.psi0.projector(), rq.grid, rq.observables);
  EXPECT_LE(max_sigma(res.stats, ref, pauli().x), 3.0);
}

TEST(Qsd, DephasingReachesEigenstate) {
  LindbladModel m(Operator(Mat::Zero(2, 2)), {{pauli().z, 1.0, ""}});
  for (std::uint64_t seed : {5u, 6u, 7u}) {
    auto r = qsd_run(m, plus_state(), {0, 8, 1e-3, 8000}, seed, {pauli().z});
    EXPECT_GT(std::abs(r.obs[0].back()), 0.999) << seed;
    EXPECT_LT(r.max_norm_defect, 1e-8);
  }
}

TEST(Qsd, CavityReachesCoherentState) {
  const int cutoff = 24;
  auto bm = build_model_full(
      {"driven-cavity", {{"omega_re", 0}, {"omega_im", 2}, {"cutoff", cutoff}, {"n0", 8}}});
  Vec target = coherent_state(cutoff, 2.0).amp;
  TrajectoryOptions o;
  o.store_states = true;
  for (std::uint64_t seed : {1u, 2u}) {
    auto r = qsd_run(bm.model, fock_state(cutoff, 8), {0, 10, 1e-3, 1000}, seed, {}, o);
    Eigen::SelfAdjointEigenSolver<Mat> es(r.states.back().m);
    Vec psi = es.eigenvectors().col(cutoff - 1);
    double dist = std::sqrt(std::max(0.0, 2 - 2 * std::abs(target.dot(psi))));
    EXPECT_LT(dist, 0.05) << seed;
    for (const auto& s : r.states) EXPECT_NEAR(purity(s), 1.0, 1e-8);
  }
}

TEST(JumpStats, DrivenAtomRateAndFano) {
  auto bm = build_model_full({"spin-half-driven", {{"omega", 1}, {"gamma", 2}}});
  auto ss = steady_states(spectral_decomposition(bm.model), bm.model.dims()).states.at(0);
  const auto& J = bm.model.jumps.front();
  double rate = J.gamma * expectation(J.L.adjoint() * J.L, ss).real();
  EnsembleRequest rq;
  rq.psi0 = basis_state(bm.model.dims(), 1);
  rq.grid = {0, 100, 1e-3, 100000};
  rq.n = 100;
  rq.seed = 23;
  auto res = run_ensemble(bm.model, rq, true);
  auto js = jump_statistics(res.records, 0, 100);
  EXPECT_NEAR(1.0 / js.mean_waiting_time / rate, 1.0, 0.05);
  EXPECT_LT(js.fano, 1.0);
  EXPECT_EQ(static_cast<int>(js.counts.size()), 100);
}

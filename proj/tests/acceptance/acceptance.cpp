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

// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include <unsupported/Eigen/MatrixFunctions>

#include "oqs/channels.hpp"
#include "oqs/core.hpp"
#include "oqs/generator.hpp"
#include "oqs/integrators.hpp"
#include "oqs/models.hpp"
#include "oqs/rng.hpp"
#include "oqs/sparse.hpp"
#include "oqs/spectra.hpp"
#include "oqs/structure.hpp"
#include "oqs/trajectories.hpp"

using namespace oqs;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double a) {
  char b[64];
  std::snprintf(b, sizeof b, f, a);
  return b;
}

class Detail {
 public:
  template <class T>
  Detail& operator<<(const T& v) {
    os_ << v;
    return *this;
  }
  std::string str() const { return os_.str(); }

 private:
  std::ostringstream os_;
};

BuiltModel model(const std::string& name, std::map<std::string, double> p = {}) {
  return build_model_full({name, std::move(p)});
}

Operator steady(const LindbladModel& m) {
  auto dec = spectral_decomposition(m);
  return steady_states(dec, m.dims()).states.front();
}

// 1. Qubit decay against the closed forms.
Outcome c1() {
  auto t0 = std::chrono::steady_clock::now();
  auto bm = model("qubit-decay");
  Pauli p = pauli();
  TimeGrid g{0, 10, 1e-3, 1};
  Series up = evolve_rk4(bm.model, basis_state(bm.model.dims(), 0).projector(), g, {p.z});
  PureState plus(bm.model.dims(), Vec::Constant(2, 1 / std::sqrt(2.0)));
  Series px = evolve_rk4(bm.model, plus.projector(), g, {p.x});
  double ez = 0, ex = 0;
  for (size_t i = 0; i < up.times.size(); ++i) {
    double t = up.times[i];
    ez = std::max(ez, std::abs(up.values[0][i].real() - (2 * std::exp(-t) - 1)));
    ex = std::max(ex, std::abs(px.values[0][i].real() - std::exp(-t / 2) * 1.0));
  }
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  Detail d;
  d << "max|sz err|=" << fmt("%.2e", ez) << " max|sx err|=" << fmt("%.2e", ex) << " runtime=" << fmt("%.3f", secs) << "s";
  return {ez < 1e-6 && ex < 1e-6 && secs < 1.0, d.str()};
}

// 2. Dephasing: coherence decays as exp(-2 gamma t); two-dimensional kernel.
Outcome c2() {
  auto bm = model("qubit-dephasing");
  PureState plus(bm.model.dims(), Vec::Constant(2, 1 / std::sqrt(2.0)));
  Mat coh = Mat::Zero(2, 2);
  coh(0, 1) = 1;  // <sigma_-> style readout: Tr(|0><1| rho) = rho_10
  Operator C(bm.model.dims(), coh);
  Series s = evolve_rk4(bm.model, plus.projector(), {0, 10, 1e-3, 1}, {C});
  double e = 0;
  for (size_t i = 0; i < s.times.size(); ++i)
    e = std::max(e, std::abs(s.values[0][i] - 0.5 * std::exp(-2 * s.times[i])));
  auto dec = spectral_decomposition(bm.model);
  Detail d;
  d << "max coherence err=" << fmt("%.2e", e) << " kernel_dim=" << dec.kernel_dim;
  return {e < 1e-6 && dec.kernel_dim == 2, d.str()};
}

// 3. Driven cavity relaxes to the coherent state alpha = -i Omega / kappa.
Outcome c3() {
  auto bm = model("driven-cavity", {{"omega_re", 2}, {"cutoff", 24}});
  Operator rho = steady(bm.model);
  double f = fidelity(rho, coherent_state(24, cplx(0, -2)));
  Detail d;
  d << "fidelity=1-" << fmt("%.2e", 1 - f) << " guard=" << fmt("%.1e", guard_band_population(rho));
  return {f > 1 - 1e-6, d.str()};
}

// 4. Damped oscillator spectrum wedge.
Outcome c4() {
  auto bm = model("damped-cavity", {{"cutoff", 16}});
  auto dec = spectral_decomposition(bm.model);
  double worst = 0;
  int count = 0;
  for (int m = 0; m <= 6; ++m)
    for (int n = 0; m + n <= 6; ++n) {
      cplx lam(-(m + n) / 2.0, -(m - n) * 1.0);
      double best = 1e300;
      for (auto z : dec.eigenvalues) best = std::min(best, std::abs(z - lam));
      worst = std::max(worst, best);
      ++count;
    }
  Detail d;
  d << count << " eigenvalues, worst distance=" << fmt("%.2e", worst);
  return {worst < 1e-8, d.str()};
}

double max_sigma_excess(const EnsembleStats& st, const Series& ref, size_t obs = 0) {
  double worst = 0;
  for (size_t i = 0; i < st.times.size(); ++i) {
    double diff = std::abs(st.mean[obs][i] - ref.values[obs][i].real());
    worst = std::max(worst, diff / std::max(st.stderr_[obs][i], 1e-9));
  }
  return worst;
}

// 5. Unravelings reproduce the master equation within three standard errors.
Outcome c5() {
  auto t0 = std::chrono::steady_clock::now();
  Pauli p = pauli();
  auto drv = model("spin-half-driven");
  TimeGrid g{0, 10, 1e-3, 200};
  EnsembleRequest rq;
  rq.scheme = Scheme::Mcwf;
  rq.psi0 = basis_state(drv.model.dims(), 0);
  rq.grid = g;
  rq.n = 1000;
  rq.seed = 20240611;
  rq.observables = {p.z};
  auto mc = run_ensemble(drv.model, rq, false);
  Series ref = evolve_rk4(drv.model, rq.psi0.projector(), g, {p.z});
  double s_mc = max_sigma_excess(mc.stats, ref);

  auto deph = model("qubit-dephasing");
  TimeGrid gd{0, 2, 1e-3, 40};
  PureState plus(deph.model.dims(), Vec::Constant(2, 1 / std::sqrt(2.0)));
  Series refd = evolve_rk4(deph.model, plus.projector(), gd, {p.x});
  EnsembleRequest rd = rq;
  rd.psi0 = plus;
  rd.grid = gd;
  rd.observables = {p.x};
  rd.scheme = Scheme::Qsd;
  double s_qsd = max_sigma_excess(run_ensemble(deph.model, rd, false).stats, refd);
  rd.scheme = Scheme::Homodyne;
  double s_hom = max_sigma_excess(run_ensemble(deph.model, rd, false).stats, refd);
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  Detail d;
  d << "max |mean-ref|/SE: mcwf=" << fmt("%.2f", s_mc) << " qsd=" << fmt("%.2f", s_qsd) << " homodyne="
    << fmt("%.2f", s_hom) << " over " << mc.stats.times.size() << " samples, runtime=" << fmt("%.1f", secs) << "s";
  return {s_mc <= 3 && s_qsd <= 3 && s_hom <= 3 && mc.stats.times.size() >= 50 && secs < 60, d.str()};
}

// Phase-optimized distance min_phi || psi - e^{i phi} target ||.
double phase_distance(const Vec& psi, const Vec& target) {
  double ov = std::abs(target.dot(psi));
  return std::sqrt(std::max(0.0, psi.squaredNorm() + target.squaredNorm() - 2 * ov));
}

// 6. QSD localization of a damped, driven cavity from |8> onto |alpha = 2>.
Outcome c6() {
  const int cutoff = 24;
  auto bm = model("driven-cavity", {{"omega_re", 0}, {"omega_im", 2}, {"cutoff", cutoff}, {"n0", 8}});
  Vec target = coherent_state(cutoff, 2.0).amp;
  EnsembleRequest rq;
  rq.scheme = Scheme::Qsd;
  rq.psi0 = fock_state(cutoff, 8);
  rq.grid = {0, 10, 1e-3, 100};
  rq.n = 50;
  rq.seed = 99;
  rq.options.store_states = true;
  auto res = run_ensemble(bm.model, rq, true);
  int ok = 0;
  double worst = 0;
  for (const auto& r : res.records) {
    const Mat& rho = r.states.back().m;
    Eigen::SelfAdjointEigenSolver<Mat> es(rho);
    Vec psi = es.eigenvectors().col(es.eigenvalues().size() - 1);
    double dist = phase_distance(psi, target);
    worst = std::max(worst, dist);
    if (dist < 0.05) ++ok;
  }
  const auto& pur = res.stats.purity;
  size_t imin = std::min_element(pur.begin(), pur.end()) - pur.begin();
  double pmin = pur[imin];
  double pend = pur.back();
  Detail d;
  d << ok << "/50 seeds within 0.05 (worst " << fmt("%.3g", worst) << "); ensemble purity min=" << fmt("%.3f", pmin)
    << " at t=" << fmt("%.2f", res.stats.times[imin]) << " final=" << fmt("%.4f", pend);
  return {ok >= 45 && pmin < 0.9 && pend > 0.99 && imin + 1 < pur.size(), d.str()};
}

// 7. Photon counting statistics of the driven atom.
Outcome c7() {
  auto bm = model("spin-half-driven", {{"omega", 1}, {"gamma", 2}});
  Operator rho = steady(bm.model);
  const auto& J = bm.model.jumps.front();
  double rate = J.gamma * expectation(J.L.adjoint() * J.L, rho).real();
  EnsembleRequest rq;
  rq.scheme = Scheme::Mcwf;
  rq.psi0 = basis_state(bm.model.dims(), 1);
  rq.grid = {0, 100, 1e-3, 100000};
  rq.n = 400;
  rq.seed = 17;
  auto res = run_ensemble(bm.model, rq, true);
  JumpStatistics js = jump_statistics(res.records, 0, 100);
  std::vector<double> counts(js.counts.begin(), js.counts.end());
  double total = 0;
  for (double c : counts) total += c;
  double q99 = bootstrap_fano_quantile(counts, 4000, 0.99, 5);
  double rel = std::abs(1 / js.mean_waiting_time - rate) / rate;
  Detail d;
  d << "jumps=" << total << " <L+L>_ss=" << fmt("%.5f", rate) << " 1/<tau>=" << fmt("%.5f", 1 / js.mean_waiting_time)
    << " rel.err=" << fmt("%.4f", rel) << " Fano=" << fmt("%.3f", js.fano) << " (99% bootstrap upper " << fmt("%.3f", q99)
    << ")";
  return {total >= 1e4 && js.waiting_times.size() >= 10000 && rel < 0.05 && q99 < 1, d.str()};
}

Mat random_kraus_isometry(int D, int r, Rng& rng) {
  Mat U = random_unitary(D * r, rng);
  return U.leftCols(D);
}

// 8. Choi witness of the transpose and Kraus/Choi round trips.
Outcome c8() {
  HilbertDims q({2});
  double w = cp_witness(choi_of(transpose_superoperator(2), q));
  Rng rng = make_stream(8, 0);
  double worst = 0;
  for (int k = 0; k < 100; ++k) {
    int D = 2 + k % 3, r = 1 + k % 4;
    HilbertDims d({D});
    Mat V = random_kraus_isometry(D, r, rng);
    KrausChannel ch;
    for (int a = 0; a < r; ++a) ch.kraus.emplace_back(d, V.middleRows(a * D, D));
    ChoiMatrix c1 = choi_of(ch);
    ChoiMatrix c2 = choi_of(kraus_from_choi(c1));
    worst = std::max(worst, (c1.C - c2.C).norm());
  }
  Detail d;
  d << "witness=" << fmt("%.12f", w) << " worst roundtrip=" << fmt("%.2e", worst);
  return {std::abs(w + 0.5) < 1e-10 && worst < 1e-9, d.str()};
}

// 9. Davies irreducibility.
Outcome c9() {
  auto tfi = model("tfi-boundary", {{"n", 3}});
  auto ir = davies_irreducible(tfi.model);
  Pauli p = pauli();
  LindbladModel pump(p.z, {{p.plus, 1.0, "pump"}});
  auto ir2 = davies_irreducible(pump);
  Operator rho = steady(pump);
  double f = fidelity(rho, basis_state(pump.dims(), 0));
  Detail d;
  d << "TFI: algebra=" << ir.algebra_dim << " kernel=" << ir.kernel_dim << " min eig=" << fmt("%.3e", ir.steady_min_eigenvalue)
    << "; pump: irreducible=" << ir2.irreducible << " fidelity=1-" << fmt("%.1e", 1 - f);
  return {ir.irreducible && ir.algebra_dim == 64 && ir.kernel_dim == 1 && ir.steady_min_eigenvalue > 0 &&
              !ir2.irreducible && f > 1 - 1e-10,
          d.str()};
}

// 10. Hubbard dynamical symmetry: eigenvalues at +-iB and synchronized sites.
Outcome c10() {
  const double B = 1.1;
  auto bm = model("hubbard-dephasing", {{"sites", 2}, {"b", B}});
  auto dec = spectral_decomposition(bm.model);
  double dp = 1e300, dm = 1e300;
  for (auto z : dec.eigenvalues) {
    dp = std::min(dp, std::abs(z - cplx(0, B)));
    dm = std::min(dm, std::abs(z - cplx(0, -B)));
  }
  auto gap = liouvillian_gap(dec);
  double T = 40 / gap.gap;
  std::vector<double> ts;
  for (int k = 0; k < 64; ++k) ts.push_back(T + k * (2 * std::numbers::pi / B) / 64);
  auto states = evolve_spectral(dec, bm.initial.projector(), ts);
  const auto& sx = bm.site_ops.at("Sx");
  double amp = 0, diff = 0;
  for (const auto& r : states) {
    double a = expectation(sx[0], r).real(), b = expectation(sx[1], r).real();
    amp = std::max(amp, std::abs(a));
    diff = std::max(diff, std::abs(a - b));
  }
  Detail d;
  d << "dist to +iB=" << fmt("%.1e", dp) << " -iB=" << fmt("%.1e", dm) << "; late-time amplitude=" << fmt("%.4f", amp)
    << " max site mismatch/amplitude=" << fmt("%.2e", diff / amp) << " at t>=" << fmt("%.1f", T);
  return {dp < 1e-7 && dm < 1e-7 && amp > 1e-3 && diff / amp < 0.01, d.str()};
}

// 11. Zeno: measurement formula, strong-dephasing gap, qutrit bound.
Outcome c11() {
  SpinOps so = build_spin_operators(0.5);
  Pauli p = pauli();
  double worst = 0;
  for (int N = 1; N <= 200; ++N) {
    ZenoProtocol z;
    z.H = so.Sx;
    z.O = p.z;
    z.tau = std::numbers::pi / N;
    z.N = N;
    z.psi0 = basis_state(HilbertDims({2}), 0);
    auto r = zeno_protocol_run(z);
    worst = std::max(worst, std::abs(expectation(p.z, r.final_state).real() - std::pow(std::cos(std::numbers::pi / N), N)));
  }
  auto zs = model("zeno-spin", {{"gamma", 50}});
  double g = liouvillian_gap(spectral_decomposition(zs.model)).gap;
  double rel = std::abs(g - 2.0 / 50) / (2.0 / 50);
  double occ = qutrit_max_occupation(10);
  double oerr = std::abs(occ - 1.0 / 101);
  Detail d;
  d << "cos^N err=" << fmt("%.1e", worst) << "; gap=" << fmt("%.5f", g) << " vs 2/gamma rel=" << fmt("%.3f", rel)
    << "; qutrit max=" << fmt("%.8f", occ) << " err=" << fmt("%.1e", oerr);
  return {worst < 1e-12 && rel < 0.05 && oerr < 1e-6, d.str()};
}

// 12. Kerr bistability: classical roots, quantum interpolation, gap closing.
Outcome c12() {
  const double Delta = 3, gamma = 1, U = 1;
  auto fps = kerr_classical_fixed_points(Delta, gamma, U, 1.5);
  int stable = 0, saddle = 0;
  for (const auto& f : fps) {
    stable += f.stability == Stability::Stable;
    saddle += f.stability == Stability::Saddle;
  }
  // Bistable window in F: scan for three roots.
  double lo = 1e300, hi = -1e300;
  for (int k = 1; k <= 4000; ++k) {
    double F = 3.0 * k / 4000;
    if (kerr_classical_fixed_points(Delta, gamma, U, F).size() == 3) {
      lo = std::min(lo, F);
      hi = std::max(hi, F);
    }
  }
  const std::vector<double> Fs = {1.0, 1.2, 1.4, 1.45, 1.5};
  bool between = true;
  Detail d;
  d << "roots=" << fps.size() << " (stable " << stable << ", saddle " << saddle << "); window F in [" << fmt("%.4f", lo) << ", "
    << fmt("%.4f", hi) << "];";
  for (double N : {3.0, 10.0}) {
    d << " N=" << N << ":";
    for (double F : Fs) {
      auto f2 = kerr_classical_fixed_points(Delta, gamma, U, F);
      double low = 1e300, high = -1e300;
      for (const auto& f : f2)
        if (f.stability == Stability::Stable) {
          low = std::min(low, f.photon_density);
          high = std::max(high, f.photon_density);
        }
      auto bm = model("kerr", {{"delta", Delta}, {"u", U}, {"f", F}, {"gamma", gamma}, {"n", N}});
      Operator rho = steady_state_sparse(bm.model);
      double x = expectation(bm.ops.at("n"), rho).real() / N;
      bool in = x >= low && x <= high;
      between = between && in;
      d << " " << fmt("%.3f", x) << (in ? "" : "!");
    }
  }
  double Fc = 0.5 * (lo + hi);
  std::vector<double> gaps;
  for (double N : {1.0, 3.0, 10.0}) {
    auto bm = model("kerr", {{"delta", Delta}, {"u", U}, {"f", Fc}, {"gamma", gamma}, {"n", N}});
    gaps.push_back(slowest_modes_sparse(bm.model).gap);
  }
  auto bm1 = model("kerr", {{"delta", Delta}, {"u", U}, {"f", Fc}, {"gamma", gamma}, {"n", 1}});
  double dense_gap = liouvillian_gap(spectral_decomposition(bm1.model)).gap;
  bool cross = std::abs(dense_gap - gaps[0]) < 1e-6 * std::max(1.0, dense_gap);
  d << "; gaps at F=" << fmt("%.4f", Fc) << ": " << fmt("%.3e", gaps[0]) << ", " << fmt("%.3e", gaps[1]) << ", "
    << fmt("%.3e", gaps[2]) << " (dense N=1 " << fmt("%.3e", dense_gap) << ")";
  bool decreasing = gaps[0] > gaps[1] && gaps[1] > gaps[2];
  return {fps.size() == 3 && stable == 2 && saddle == 1 && between && decreasing && cross, d.str()};
}

// 13. PT-symmetric spins: purity limits and a growing order parameter.
Outcome c13() {
  auto at = [](double G) {
    auto bm = model("pt-spins", {{"s", 1}, {"g", 1}, {"gamma", G}});
    return steady(bm.model);
  };
  double p_lo = purity(at(0.05)), p_hi = purity(at(20));
  std::vector<double> del;
  for (double G : {0.25, 1.0, 4.0}) del.push_back(pt_order_parameter(at(G), 1));
  Detail d;
  d << "purity(0.05)=" << fmt("%.4f", p_lo) << " purity(20)=" << fmt("%.4f", p_hi) << " Delta=" << fmt("%.4f", del[0])
    << "," << fmt("%.4f", del[1]) << "," << fmt("%.4f", del[2]);
  return {p_lo < 0.15 && p_hi > 0.95 && del[0] < del[1] && del[1] < del[2], d.str()};
}

// 14. Rainbow dark state.
Outcome c14() {
  auto bm = model("rainbow", {{"l", 2}, {"u", 1}, {"v", 0.5}});
  Operator P = bm.initial.projector();
  double res = apply_generator(bm.model, P).norm();
  auto S = superoperator_matrix(bm.model);
  double gap = liouvillian_gap(spectral_decomposition(S)).gap;
  double T = 200 / gap;
  Rng rng = make_stream(14, 0);
  double worst = 1;
  for (int k = 0; k < 5; ++k) {
    Operator rho0 = random_pure(bm.model.dims(), rng).projector();
    worst = std::min(worst, fidelity(evolve_expm(S, rho0, T), bm.initial));
  }
  Detail d;
  d << "residual=" << fmt("%.1e", res) << " gamma_eff(gap)=" << fmt("%.4f", gap) << " worst fidelity at t=" << fmt("%.1f", T)
    << ": 1-" << fmt("%.1e", 1 - worst);
  return {res < 1e-10 && worst > 0.999, d.str()};
}

LindbladModel random_model(Rng& rng, int k, bool hermitian_jumps) {
  std::uniform_int_distribution<int> dd(2, 4), nj(1, 3);
  std::uniform_real_distribution<double> rate(0.1, 2.0);
  int D = dd(rng);
  HilbertDims d({D});
  if (k % 5 == 4 && !hermitian_jumps) {
    // Direct sum of two blocks: a strong symmetry forces a two-dimensional kernel.
    int a = 1 + D / 2, b = D - a + 1;
    D = a + b;
    d = HilbertDims({D});
    Mat H = Mat::Zero(D, D), L = Mat::Zero(D, D);
    H.topLeftCorner(a, a) = random_hermitian(HilbertDims({a}), rng).m;
    H.bottomRightCorner(b, b) = random_hermitian(HilbertDims({b}), rng).m;
    L.topLeftCorner(a, a) = random_complex(a, a, rng);
    L.bottomRightCorner(b, b) = random_complex(b, b, rng);
    return LindbladModel(Operator(d, H), {{Operator(d, L), rate(rng), "block"}});
  }
  Operator H = random_hermitian(d, rng);
  std::vector<Jump> js;
  int n = nj(rng);
  for (int j = 0; j < n; ++j) {
    Operator L = hermitian_jumps ? random_hermitian(d, rng) : Operator(d, random_complex(D, D, rng));
    js.push_back({L, rate(rng), "L" + std::to_string(j)});
  }
  return LindbladModel(H, js);
}

// 15. Property suites on random models.
Outcome c15() {
  Rng rng = make_stream(15, 0);
  int fail_trace = 0, fail_herm = 0, fail_bio = 0, fail_conj = 0, fail_count = 0, fail_purity = 0;
  const int M = 120;
  for (int k = 0; k < M; ++k) {
    LindbladModel m = random_model(rng, k, false);
    HilbertDims d = m.dims();
    Operator rho = random_density(d, rng);
    Operator Lr = apply_generator(m, rho);
    double scale = std::max(1.0, Lr.norm());
    if (std::abs(Lr.trace()) > 1e-12 * scale) ++fail_trace;
    if ((Lr.m - Lr.m.adjoint()).norm() > 1e-12 * scale) ++fail_herm;
    Series s = evolve_rk4(m, rho, {0, 1, 1e-3, 100}, {}, true);
    for (const auto& r : s.states) {
      if (std::abs(r.trace() - 1.0) > 1e-10) {
        ++fail_trace;
        break;
      }
    }
    auto dec = spectral_decomposition(m);
    const int n = static_cast<int>(dec.eigenvalues.size());
    double bio = 0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        cplx ov = (dec.left[i].adjoint() * dec.right[j]).trace();
        bio = std::max(bio, std::abs(ov - (i == j ? 1.0 : 0.0)));
      }
    Vec c = dec.coefficients(rho.m);
    Mat rec = Mat::Zero(d.total(), d.total());
    for (int i = 0; i < n; ++i) rec += c(i) * dec.right[i];
    if (bio > 1e-8 || (rec - rho.m).norm() > 1e-8) ++fail_bio;
    double tol = 1e-8 * dec.norm;
    for (auto z : dec.eigenvalues) {
      double best = 1e300;
      for (auto w : dec.eigenvalues) best = std::min(best, std::abs(w - std::conj(z)));
      if (best > tol) {
        ++fail_conj;
        break;
      }
    }
    if (static_cast<int>(conserved_operators(m).size()) != dec.kernel_dim) ++fail_count;
    if (k % 5 == 4 && dec.kernel_dim != 2) ++fail_count;

    LindbladModel mh = random_model(rng, k, true);
    Series sh = evolve_rk4(mh, random_pure(mh.dims(), rng).projector(), {0, 2, 1e-3, 10}, {}, true);
    for (size_t i = 1; i < sh.states.size(); ++i)
      if (purity(sh.states[i]) > purity(sh.states[i - 1]) + 1e-12) {
        ++fail_purity;
        break;
      }
  }
  Detail d;
  d << M << " models; failures: trace=" << fail_trace << " hermiticity=" << fail_herm << " biorthogonality=" << fail_bio
    << " conjugate-pairs=" << fail_conj << " conserved/steady=" << fail_count << " purity=" << fail_purity;
  return {fail_trace + fail_herm + fail_bio + fail_conj + fail_count + fail_purity == 0, d.str()};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"1 qubit decay", c1},
      {"2 dephasing", c2},
      {"3 driven cavity coherent steady state", c3},
      {"4 damped oscillator spectrum", c4},
      {"5 unraveling consistency", c5},
      {"6 QSD cavity localization", c6},
      {"7 jump statistics", c7},
      {"8 Choi and Kraus", c8},
      {"9 Davies irreducibility", c9},
      {"10 dynamical symmetry ladder", c10},
      {"11 Zeno", c11},
      {"12 Kerr transition", c12},
      {"13 PT spins", c13},
      {"14 rainbow dark state", c14},
      {"15 property suites", c15},
  };
  int failed = 0;
  for (const auto& [name, fn] : criteria) {
    auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (!o.pass) ++failed;
    std::printf("%s [%s] %s (%.2fs)\n", o.pass ? "PASS" : "FAIL", name.c_str(), o.detail.c_str(), secs);
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}

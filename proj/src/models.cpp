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

#include "oqs/models.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "oqs/rng.hpp"

namespace oqs {

namespace {

ParamSchema P(const std::string& n, double d, const std::string& desc, bool integer = false,
              double mn = -1e300) {
  return {n, d, desc, integer, mn};
}

}  // namespace

const std::vector<ModelInfo>& model_catalog() {
  static const std::vector<ModelInfo> cat = {
      {"qubit-decay", "H = (omega/2) sz, L = sqrt(gamma) s-",
       {P("gamma", 1, "decay rate", false, 0), P("omega", 0, "level splitting")}},
      {"qubit-dephasing", "H = (omega/2) sz, L = sqrt(gamma) sz",
       {P("gamma", 1, "dephasing rate", false, 0), P("omega", 0, "level splitting")}},
      {"qubit-thermal", "H = (omega/2) sz, L1 = sqrt(gamma (nbar+1)) s-, L2 = sqrt(gamma nbar) s+",
       {P("gamma", 1, "emission rate", false, 0), P("nbar", 0.5, "thermal occupation", false, 0),
        P("omega", 1, "level splitting")}},
      {"eit-atom", "Lambda atom {g,e,r}: H = Omega_p|e><g| + Omega_c|e><r| + h.c., L = sqrt(gamma)|g><e|",
       {P("omega_p", 1, "probe coupling"), P("omega_c", 1.5, "control coupling"),
        P("gamma", 1, "decay rate", false, 0)}},
      {"damped-cavity", "H = omega a^dag a, L = sqrt(kappa) a",
       {P("omega", 1, "cavity frequency"), P("kappa", 1, "loss rate", false, 0),
        P("cutoff", 16, "Fock cutoff", true, 2), P("n0", 3, "initial Fock state", true, 0)}},
      {"driven-cavity",
       "H = -detuning a^dag a + (Omega/2) a^dag + (Omega*/2) a, L = sqrt(kappa) a; coherent steady state alpha = -i Omega / kappa",
       {P("omega_re", 2, "Re Omega"), P("omega_im", 0, "Im Omega"), P("kappa", 1, "loss rate", false, 0),
        P("detuning", 0, "drive detuning"), P("cutoff", 0, "Fock cutoff (0 = automatic)", true, 0),
        P("n0", 0, "initial Fock state", true, 0)}},
      {"kerr",
       "H = -Delta a^dag a + (U/2) a^dag a^dag a a + F (a^dag + a), L = sqrt(gamma) a, U = Ut/N, F = Ft sqrt(N)",
       {P("delta", 3, "detuning"), P("u", 1, "rescaled nonlinearity Ut"), P("f", 1.5, "rescaled drive Ft"),
        P("gamma", 1, "loss rate", false, 0), P("n", 1, "scaling parameter N", false, 1e-12),
        P("cutoff", 0, "Fock cutoff (0 = automatic)", true, 0)}},
      {"spin-half-driven", "spin-1/2: H = omega Sx, L = sqrt(gamma) S-",
       {P("omega", 1, "Rabi frequency"), P("gamma", 1, "emission rate", false, 0)}},
      {"collective-spin", "spin-S: H = Sx, L = sqrt(gamma/S) S-",
       {P("s", 1, "total spin S (half-integer)", false, 0.5), P("gamma", 1, "collective emission rate", false, 0)}},
      {"pt-spins", "two spin-S: H = g (SA+ SB- + h.c.), LA = sqrt(2 Gamma) SA+, LB = sqrt(2 Gamma) SB-",
       {P("s", 1, "spin S", false, 0.5), P("g", 1, "exchange coupling"), P("gamma", 1, "gain/loss rate Gamma", false, 0)}},
      {"zeno-spin", "spin-1/2: H = omega Sx, L = sqrt(gamma) Sz",
       {P("omega", 1, "drive"), P("gamma", 20, "dephasing rate", false, 0)}},
      {"two-qubit-correlated", "H = s1+ s2- + h.c., L = u s1- + v s2+",
       {P("u", 1, "loss amplitude on qubit 1"), P("v", 1, "gain amplitude on qubit 2")}},
      {"exchange-dephasing", "H = J (s1+ s2- + h.c.), L = sqrt(gamma) (sz1 + sz2)",
       {P("j", 1, "exchange"), P("gamma", 1, "collective dephasing rate", false, 0)}},
      {"qutrit-pair",
       "two spin-1: H = S1+ S2- + h.c. + Delta S1z S2z + omega (S1z + S2z), L_i = sqrt(gamma) (S_iz)^2",
       {P("delta", 0.5, "anisotropy"), P("omega", 0.3, "field"), P("gamma", 1, "dephasing rate", false, 0)}},
      {"rainbow",
       "2l qubits ordered a1,b1,a2,b2,...: H = sa1+ sb1- + h.c. + J sum_i (sa_i+ sa_i+1- + sb_i+ sb_i+1- + h.c.), L = u sa1- + v sb1+",
       {P("l", 2, "pairs", true, 1), P("u", 1, "loss amplitude"), P("v", 0.5, "gain amplitude"), P("j", 1, "chain hopping")}},
      {"bose-hubbard-dimer",
       "H = -J (a^dag b + b^dag a) + (U/2) sum n(n-1), L1 = sqrt(gamma_l) a^dag b, L2 = sqrt(gamma_r) b^dag a",
       {P("j", 1, "hopping"), P("u", 0.5, "interaction"), P("gamma_l", 0.3, "incoherent hopping b->a", false, 0),
        P("gamma_r", 0.2, "incoherent hopping a->b", false, 0), P("cutoff", 4, "local Fock cutoff", true, 2)}},
      {"hubbard-dephasing",
       "spinful chain (Jordan-Wigner, modes j-up, j-down): H = -sum hop + sum [U n_up n_dn + eps_j n_j - (B/2)(n_up - n_dn)], L_j = sqrt(gamma) n_j",
       {P("sites", 2, "sites", true, 2), P("u", 1.4, "on-site interaction"), P("b", 1.1, "magnetic field"),
        P("gamma", 1, "dephasing rate", false, 0), P("eps", 0.3, "disorder spread: eps_j uniform in [-eps, eps]"),
        P("t", 1, "hopping")}},
      {"xxz-boundary",
       "H = sum (sx sx + sy sy + Delta sz sz), L1 = sqrt(gamma_plus) s1+, L2 = sqrt(gamma_minus) sN-",
       {P("n", 3, "sites", true, 2), P("delta", 0.5, "anisotropy"), P("gamma_plus", 1, "pump rate", false, 0),
        P("gamma_minus", 1, "loss rate", false, 0)}},
      {"tfi-boundary",
       "H = sum h sz_i + sum J sx_i sx_i+1, L1 = sqrt(gamma_plus) s1+, L2 = sqrt(gamma_minus) s1-",
       {P("n", 3, "sites", true, 2), P("h", 1, "transverse field"), P("j", 0.7, "coupling"),
        P("gamma_plus", 0.5, "pump rate", false, 0), P("gamma_minus", 1, "loss rate", false, 0)}},
      {"tight-binding-loss",
       "vacuum plus single-particle sector of an open chain: H = -J sum (|j><j+1| + h.c.), L = sqrt(gamma)|vac><center|",
       {P("sites", 5, "sites (odd)", true, 3), P("j", 1, "hopping"), P("gamma", 1, "loss rate", false, 0)}},
  };
  return cat;
}

const ModelInfo& model_info(const std::string& name) {
  for (const auto& m : model_catalog())
    if (m.name == name) return m;
  throw ConfigError("unknown model: " + name);
}

ModelSpec resolve_spec(const ModelSpec& spec) {
  const ModelInfo& info = model_info(spec.name);
  ModelSpec out;
  out.name = spec.name;
  for (const auto& p : info.params) out.params[p.name] = p.default_value;
  for (const auto& [k, v] : spec.params) {
    auto it = std::find_if(info.params.begin(), info.params.end(), [&](const ParamSchema& p) { return p.name == k; });
    if (it == info.params.end()) throw ConfigError("model " + spec.name + ": unknown parameter '" + k + "'");
    if (!std::isfinite(v)) throw ConfigError("model " + spec.name + ": parameter '" + k + "' is not finite");
    if (it->integer && std::abs(v - std::round(v)) > 1e-12)
      throw ConfigError("model " + spec.name + ": parameter '" + k + "' must be an integer");
    if (v < it->min_value) {
      std::ostringstream os;
      os << "model " << spec.name << ": parameter '" << k << "' must be >= " << it->min_value;
      throw ConfigError(os.str());
    }
    out.params[k] = v;
  }
  return out;
}

std::vector<Operator> fermion_annihilators(int n_modes) {
  if (n_modes < 1 || n_modes > 8) throw CapacityError("fermion_annihilators: 1..8 modes supported");
  Mat c(2, 2), Z(2, 2), I2 = Mat::Identity(2, 2);
  c << 0, 1, 0, 0;
  Z << 1, 0, 0, -1;
  std::vector<Operator> out;
  HilbertDims dims(std::vector<int>(n_modes, 2));
  for (int k = 0; k < n_modes; ++k) {
    std::vector<Operator> f;
    for (int j = 0; j < n_modes; ++j) f.emplace_back(j < k ? Z : (j == k ? c : I2));
    out.emplace_back(dims, kron(f).m);
  }
  return out;
}

namespace {

Operator spin_site(const Operator& local, int site, const HilbertDims& dims) {
  return embed(local, site, dims);
}

void add_spin_site_ops(BuiltModel& b, const HilbertDims& dims, double S, const std::string& prefix = "") {
  SpinOps so = build_spin_operators(S);
  const int n = dims.count();
  std::map<std::string, Operator> loc = {{"Sx", so.Sx}, {"Sy", so.Sy}, {"Sz", so.Sz}, {"Sp", so.Splus}, {"Sm", so.Sminus}};
  for (auto& [name, op] : loc) {
    std::vector<Operator> v;
    Operator total(dims, Mat::Zero(dims.total(), dims.total()));
    for (int k = 0; k < n; ++k) {
      v.push_back(spin_site(op, k, dims));
      total += v.back();
    }
    b.site_ops[prefix + name] = v;
    b.ops[prefix + name] = total;
  }
  if (S == 0.5) {
    Pauli p = pauli();
    std::map<std::string, Operator> ps = {{"sx", p.x}, {"sy", p.y}, {"sz", p.z}, {"sp", p.plus}, {"sm", p.minus}};
    for (auto& [name, op] : ps) {
      std::vector<Operator> v;
      Operator total(dims, Mat::Zero(dims.total(), dims.total()));
      for (int k = 0; k < n; ++k) {
        v.push_back(spin_site(op, k, dims));
        total += v.back();
      }
      b.site_ops[name] = v;
      b.ops[name] = total;
    }
  }
}

void add_boson_ops(BuiltModel& b, int cutoff) {
  BosonOps bo = build_boson_operators(cutoff);
  b.ops["a"] = bo.a;
  b.ops["adag"] = bo.adag;
  b.ops["n"] = bo.n;
  b.ops["x"] = 0.5 * (bo.a + bo.adag);
  b.ops["p"] = cplx(0, -0.5) * (bo.a - bo.adag);
  b.ops["n2"] = bo.n * bo.n;
}

Operator zero_op(const HilbertDims& d) { return Operator(d, Mat::Zero(d.total(), d.total())); }

int auto_cutoff(double expected_n) {
  return std::max(16, static_cast<int>(std::ceil(4 * expected_n)));
}

}  // namespace

BuiltModel build_model_full(const ModelSpec& raw) {
  BuiltModel b;
  b.spec = resolve_spec(raw);
  const auto& p = b.spec.params;
  auto g = [&](const char* k) { return p.at(k); };
  const std::string& name = b.spec.name;
  Pauli pa = pauli();

  if (name == "qubit-decay" || name == "qubit-dephasing" || name == "qubit-thermal") {
    HilbertDims d({2});
    add_spin_site_ops(b, d, 0.5);
    Operator H = (0.5 * g("omega")) * pa.z;
    std::vector<Jump> J;
    if (name == "qubit-decay") {
      J.push_back({pa.minus, g("gamma"), "decay"});
      b.initial = basis_state(d, 0);
    } else if (name == "qubit-dephasing") {
      J.push_back({pa.z, g("gamma"), "dephasing"});
      b.initial = PureState(d, Vec::Constant(2, 1 / std::sqrt(2.0)));
    } else {
      J.push_back({pa.minus, g("gamma") * (g("nbar") + 1), "emission"});
      J.push_back({pa.plus, g("gamma") * g("nbar"), "absorption"});
      b.initial = basis_state(d, 0);
    }
    b.model = LindbladModel(H, J);
  } else if (name == "eit-atom") {
    HilbertDims d({3});
    Mat H = Mat::Zero(3, 3), L = Mat::Zero(3, 3);
    // levels: 0 = g, 1 = e, 2 = r
    H(1, 0) = g("omega_p");
    H(1, 2) = g("omega_c");
    H = (H + H.adjoint()).eval();
    L(0, 1) = 1;
    b.model = LindbladModel(Operator(d, H), {{Operator(d, L), g("gamma"), "decay"}});
    for (int k = 0; k < 3; ++k) {
      Mat Pk = Mat::Zero(3, 3);
      Pk(k, k) = 1;
      b.ops[std::string("p") + "ger"[k]] = Operator(d, Pk);
    }
    b.initial = basis_state(d, 0);
  } else if (name == "damped-cavity") {
    int c = static_cast<int>(g("cutoff"));
    if (g("n0") >= c) throw ConfigError("damped-cavity: n0 must be below the cutoff");
    add_boson_ops(b, c);
    b.model = LindbladModel(g("omega") * b.ops["n"], {{b.ops["a"], g("kappa"), "loss"}});
    b.initial = fock_state(c, static_cast<int>(g("n0")));
  } else if (name == "driven-cavity") {
    cplx Om(g("omega_re"), g("omega_im"));
    double kap = g("kappa");
    double n_exp = kap > 0 ? std::norm(Om / kap) : std::norm(Om);
    int c = static_cast<int>(g("cutoff"));
    if (c == 0) c = auto_cutoff(std::max(n_exp, g("n0")));
    if (c < 2) throw ConfigError("driven-cavity: cutoff must be >= 2");
    if (g("n0") >= c) throw ConfigError("driven-cavity: n0 must be below the cutoff");
    add_boson_ops(b, c);
    Operator H = (-g("detuning")) * b.ops["n"] + (0.5 * Om) * b.ops["adag"] + (0.5 * std::conj(Om)) * b.ops["a"];
    b.model = LindbladModel(hermitize(H), {{b.ops["a"], kap, "loss"}});
    b.initial = fock_state(c, static_cast<int>(g("n0")));
    b.notes.push_back("cutoff " + std::to_string(c));
  } else if (name == "kerr") {
    double N = g("n");
    double U = g("u") / N, F = g("f") * std::sqrt(N);
    int c = static_cast<int>(g("cutoff"));
    if (c == 0) {
      double xmax = 0;
      for (const auto& fp : kerr_classical_fixed_points(g("delta"), g("gamma"), g("u"), g("f")))
        xmax = std::max(xmax, fp.photon_density);
      c = auto_cutoff(N * xmax);
    }
    if (c < 2) throw ConfigError("kerr: cutoff must be >= 2");
    add_boson_ops(b, c);
    const Operator& a = b.ops["a"];
    const Operator& ad = b.ops["adag"];
    Operator H = (-g("delta")) * b.ops["n"] + (0.5 * U) * (ad * ad * a * a) + F * (ad + a);
    b.model = LindbladModel(hermitize(H), {{a, g("gamma"), "loss"}});
    b.initial = fock_state(c, 0);
    b.notes.push_back("cutoff " + std::to_string(c));
  } else if (name == "spin-half-driven" || name == "zeno-spin") {
    HilbertDims d({2});
    add_spin_site_ops(b, d, 0.5);
    SpinOps so = build_spin_operators(0.5);
    Operator L = name == "zeno-spin" ? so.Sz : so.Sminus;
    b.model = LindbladModel(g("omega") * so.Sx, {{L, g("gamma"), name == "zeno-spin" ? "dephasing" : "emission"}});
    b.initial = basis_state(d, 0);
  } else if (name == "collective-spin") {
    double S = g("s");
    SpinOps so = build_spin_operators(S);
    HilbertDims d({static_cast<int>(std::lround(2 * S + 1))});
    add_spin_site_ops(b, d, S);
    b.model = LindbladModel(Operator(d, so.Sx.m), {{Operator(d, so.Sminus.m), g("gamma") / S, "collective emission"}});
    b.initial = basis_state(d, 0);
  } else if (name == "pt-spins") {
    double S = g("s");
    int ds = static_cast<int>(std::lround(2 * S + 1));
    HilbertDims d({ds, ds});
    add_spin_site_ops(b, d, S);
    const auto& sp = b.site_ops["Sp"];
    const auto& sm = b.site_ops["Sm"];
    Operator H = g("g") * (sp[0] * sm[1] + sm[0] * sp[1]);
    b.model = LindbladModel(hermitize(H), {{sp[0], 2 * g("gamma"), "gain A"}, {sm[1], 2 * g("gamma"), "loss B"}});
    b.initial = basis_state(d, 0);
  } else if (name == "two-qubit-correlated" || name == "exchange-dephasing") {
    HilbertDims d({2, 2});
    add_spin_site_ops(b, d, 0.5);
    const auto& sp = b.site_ops["sp"];
    const auto& sm = b.site_ops["sm"];
    const auto& sz = b.site_ops["sz"];
    if (name == "two-qubit-correlated") {
      Operator H = sp[0] * sm[1] + sm[0] * sp[1];
      Operator L = g("u") * sm[0] + g("v") * sp[1];
      b.model = LindbladModel(H, {{L, 1.0, "correlated"}});
    } else {
      Operator H = g("j") * (sp[0] * sm[1] + sm[0] * sp[1]);
      b.model = LindbladModel(H, {{sz[0] + sz[1], g("gamma"), "collective dephasing"}});
    }
    b.initial = basis_state(d, 1);
  } else if (name == "qutrit-pair") {
    HilbertDims d({3, 3});
    add_spin_site_ops(b, d, 1.0);
    const auto& sp = b.site_ops["Sp"];
    const auto& sm = b.site_ops["Sm"];
    const auto& sz = b.site_ops["Sz"];
    Operator H = sp[0] * sm[1] + sm[0] * sp[1] + g("delta") * (sz[0] * sz[1]) + g("omega") * (sz[0] + sz[1]);
    b.model = LindbladModel(hermitize(H), {{sz[0] * sz[0], g("gamma"), "L1"}, {sz[1] * sz[1], g("gamma"), "L2"}});
    b.initial = basis_state(d, 1);
  } else if (name == "rainbow") {
    int l = static_cast<int>(g("l"));
    if (2 * l > 12) throw CapacityError("rainbow: at most 6 pairs");
    HilbertDims d(std::vector<int>(2 * l, 2));
    add_spin_site_ops(b, d, 0.5);
    const auto& sp = b.site_ops["sp"];
    const auto& sm = b.site_ops["sm"];
    auto A = [](int i) { return 2 * i; };
    auto B = [](int i) { return 2 * i + 1; };
    Operator H = sp[A(0)] * sm[B(0)] + sm[A(0)] * sp[B(0)];
    for (int i = 0; i + 1 < l; ++i) {
      Operator hop = sp[A(i)] * sm[A(i + 1)] + sp[B(i)] * sm[B(i + 1)];
      H += g("j") * (hop + hop.adjoint());
    }
    Operator L = g("u") * sm[A(0)] + g("v") * sp[B(0)];
    b.model = LindbladModel(hermitize(H), {{L, 1.0, "correlated"}});
    // paired state: prod_i [v |up up> + (-1)^i u |dn dn>], i = 1..l
    Vec pair(4);
    Vec psi = Vec::Ones(1);
    for (int i = 1; i <= l; ++i) {
      pair << g("v"), 0, 0, (i % 2 ? -1.0 : 1.0) * g("u");
      Vec nxt(psi.size() * 4);
      for (Eigen::Index x = 0; x < psi.size(); ++x) nxt.segment(x * 4, 4) = psi(x) * pair;
      psi = nxt;
    }
    b.initial = PureState(d, psi / psi.norm());
    b.notes.push_back("initial state is the paired rainbow state");
  } else if (name == "bose-hubbard-dimer") {
    int c = static_cast<int>(g("cutoff"));
    HilbertDims d({c, c});
    BosonOps bo = build_boson_operators(c);
    Operator a = embed(bo.a, 0, d), bb = embed(bo.a, 1, d);
    Operator na = a.adjoint() * a, nb = bb.adjoint() * bb;
    Operator I = identity(d);
    Operator H = (-g("j")) * (a.adjoint() * bb + bb.adjoint() * a) + (0.5 * g("u")) * (na * (na - I) + nb * (nb - I));
    b.model = LindbladModel(hermitize(H), {{a.adjoint() * bb, g("gamma_l"), "b->a"}, {bb.adjoint() * a, g("gamma_r"), "a->b"}});
    b.ops["na"] = na;
    b.ops["nb"] = nb;
    b.ops["N"] = na + nb;
    b.site_ops["n"] = {na, nb};
    b.initial = basis_state(d, 1 * c + 1);
  } else if (name == "hubbard-dephasing") {
    int L = static_cast<int>(g("sites"));
    if (2 * L > 8) throw CapacityError("hubbard-dephasing: at most 4 sites");
    auto c = fermion_annihilators(2 * L);
    HilbertDims d = c.front().dims;
    auto up = [&](int j) { return c[2 * j]; };
    auto dn = [&](int j) { return c[2 * j + 1]; };
    Operator H = zero_op(d);
    for (int j = 0; j + 1 < L; ++j)
      for (int s = 0; s < 2; ++s) {
        const Operator& ci = c[2 * j + s];
        const Operator& cj = c[2 * (j + 1) + s];
        H -= g("t") * (ci.adjoint() * cj + cj.adjoint() * ci);
      }
    std::vector<Jump> jumps;
    std::vector<Operator> nsite, sx, sy, sz;
    Operator Sp = zero_op(d);
    for (int j = 0; j < L; ++j) {
      Operator nu = up(j).adjoint() * up(j), nd = dn(j).adjoint() * dn(j);
      double eps = L > 1 ? -g("eps") + 2 * g("eps") * j / (L - 1) : 0.0;
      H += g("u") * (nu * nd) + eps * (nu + nd) - (0.5 * g("b")) * (nu - nd);
      jumps.push_back({nu + nd, g("gamma"), "n[" + std::to_string(j) + "]"});
      nsite.push_back(nu + nd);
      Operator spj = up(j).adjoint() * dn(j);
      Sp += spj;
      sx.push_back(0.5 * (spj + spj.adjoint()));
      sy.push_back(cplx(0, -0.5) * (spj - spj.adjoint()));
      sz.push_back(0.5 * (nu - nd));
    }
    b.model = LindbladModel(hermitize(H), jumps);
    b.site_ops["n"] = nsite;
    b.site_ops["Sx"] = sx;
    b.site_ops["Sy"] = sy;
    b.site_ops["Sz"] = sz;
    Operator N = zero_op(d), Sz = zero_op(d);
    for (int j = 0; j < L; ++j) {
      N += nsite[j];
      Sz += sz[j];
    }
    b.ops["N"] = N;
    b.ops["Sz"] = Sz;
    b.ops["Sp"] = Sp;
    b.ops["Sm"] = Sp.adjoint();
    b.ops["Sx"] = 0.5 * (Sp + Sp.adjoint());
    // one fermion per site: site 0 spin along +x, others up
    Vec vac = Vec::Zero(d.total());
    vac(0) = 1;
    Vec psi = vac;
    for (int j = L - 1; j >= 0; --j) {
      if (j == 0) psi = ((up(j).adjoint().m + dn(j).adjoint().m) * psi / std::sqrt(2.0)).eval();
      else psi = (up(j).adjoint().m * psi).eval();
    }
    b.initial = PureState(d, psi / psi.norm());
  } else if (name == "xxz-boundary" || name == "tfi-boundary") {
    int n = static_cast<int>(g("n"));
    if (n > 6) throw CapacityError(name + ": at most 6 sites");
    HilbertDims d(std::vector<int>(n, 2));
    add_spin_site_ops(b, d, 0.5);
    const auto& sx = b.site_ops["sx"];
    const auto& sy = b.site_ops["sy"];
    const auto& sz = b.site_ops["sz"];
    const auto& sp = b.site_ops["sp"];
    const auto& sm = b.site_ops["sm"];
    Operator H = zero_op(d);
    std::vector<Jump> jumps;
    if (name == "xxz-boundary") {
      for (int i = 0; i + 1 < n; ++i) H += sx[i] * sx[i + 1] + sy[i] * sy[i + 1] + g("delta") * (sz[i] * sz[i + 1]);
      jumps = {{sp[0], g("gamma_plus"), "pump 1"}, {sm[n - 1], g("gamma_minus"), "loss N"}};
    } else {
      for (int i = 0; i < n; ++i) H += g("h") * sz[i];
      for (int i = 0; i + 1 < n; ++i) H += g("j") * (sx[i] * sx[i + 1]);
      jumps = {{sp[0], g("gamma_plus"), "pump 1"}, {sm[0], g("gamma_minus"), "loss 1"}};
    }
    b.model = LindbladModel(hermitize(H), jumps);
    b.initial = basis_state(d, 0);
  } else if (name == "tight-binding-loss") {
    int L = static_cast<int>(g("sites"));
    int D = L + 1;
    HilbertDims d({D});
    Mat H = Mat::Zero(D, D), Lm = Mat::Zero(D, D);
    for (int j = 1; j < L; ++j) H(j, j + 1) = H(j + 1, j) = -g("j");
    int center = (L + 1) / 2;  // sites are 1..L
    Lm(0, center) = 1;
    b.model = LindbladModel(Operator(d, H), {{Operator(d, Lm), g("gamma"), "center loss"}});
    std::vector<Operator> ns;
    for (int j = 1; j <= L; ++j) {
      Mat Pj = Mat::Zero(D, D);
      Pj(j, j) = 1;
      ns.emplace_back(d, Pj);
    }
    b.site_ops["n"] = ns;
    b.initial = basis_state(d, 1);
    b.notes.push_back("basis: index 0 = vacuum, index j = particle on site j");
  } else {
    throw ConfigError("unknown model: " + name);
  }
  return b;
}

LindbladModel build_model(const ModelSpec& spec) { return build_model_full(spec).model; }

std::string stability_name(Stability s) {
  switch (s) {
    case Stability::Stable: return "stable";
    case Stability::Unstable: return "unstable";
    case Stability::Saddle: return "saddle";
  }
  return "?";
}

std::vector<KerrFixedPoint> kerr_classical_fixed_points(double Delta, double gamma, double U,
                                                        double F) {
  if (!(gamma > 0)) throw ConfigError("kerr_classical_fixed_points: gamma must be positive");
  std::vector<double> xs;
  if (F == 0) {
    xs.push_back(0);
  } else if (U == 0) {
    xs.push_back(F * F / (Delta * Delta + gamma * gamma / 4));
  } else {
    // U^2 x^3 - 2 U Delta x^2 + (Delta^2 + gamma^2/4) x - F^2 = 0
    double a3 = U * U, a2 = -2 * U * Delta, a1 = Delta * Delta + gamma * gamma / 4, a0 = -F * F;
    Eigen::Matrix3d C = Eigen::Matrix3d::Zero();
    C(0, 0) = -a2 / a3;
    C(0, 1) = -a1 / a3;
    C(0, 2) = -a0 / a3;
    C(1, 0) = 1;
    C(2, 1) = 1;
    Eigen::EigenSolver<Eigen::Matrix3d> es(C);
    for (int k = 0; k < 3; ++k) {
      std::complex<double> r = es.eigenvalues()(k);
      if (std::abs(r.imag()) > 1e-7 * std::max(1.0, std::abs(r))) continue;
      double x = r.real();
      for (int it = 0; it < 50; ++it) {
        double f = ((a3 * x + a2) * x + a1) * x + a0;
        double df = (3 * a3 * x + 2 * a2) * x + a1;
        if (df == 0) break;
        double step = f / df;
        x -= step;
        if (std::abs(step) < 1e-16 * std::max(1.0, std::abs(x))) break;
      }
      if (x < 0) continue;
      bool dup = false;
      for (double y : xs) dup = dup || std::abs(y - x) < 1e-10 * std::max(1.0, x);
      if (!dup) xs.push_back(x);
    }
  }
  std::sort(xs.begin(), xs.end());
  std::vector<KerrFixedPoint> out;
  for (double X : xs) {
    KerrFixedPoint fp;
    fp.photon_density = X;
    fp.alpha = -F / cplx(-Delta + U * X, -gamma / 2);
    double x = fp.alpha.real(), p = fp.alpha.imag();
    double r2 = x * x + p * p;
    double k = -Delta + U * r2;
    // xdot = k p - (gamma/2) x ; pdot = -k x - (gamma/2) p - F
    double j11 = 2 * U * x * p - gamma / 2, j12 = k + 2 * U * p * p;
    double j21 = -k - 2 * U * x * x, j22 = -2 * U * x * p - gamma / 2;
    double det = j11 * j22 - j12 * j21, tr = j11 + j22;
    if (det < 0) fp.stability = Stability::Saddle;
    else fp.stability = tr < 0 ? Stability::Stable : Stability::Unstable;
    out.push_back(fp);
  }
  return out;
}

SpinTrajectory collective_spin_classical(const std::array<double, 3>& s0, double gamma, double t1,
                                         double dt, int stride) {
  double n0 = std::sqrt(s0[0] * s0[0] + s0[1] * s0[1] + s0[2] * s0[2]);
  if (std::abs(n0 - 1) > 1e-8) throw ConfigError("collective_spin_classical: |s0| must be 1");
  if (!(dt > 0) || !(t1 > 0)) throw ConfigError("collective_spin_classical: invalid grid");
  if (stride < 1) stride = 1;
  using V3 = std::array<double, 3>;
  auto f = [gamma](const V3& s) -> V3 {
    return {gamma * s[0] * s[2], -s[2] + gamma * s[1] * s[2], s[1] - gamma * (s[0] * s[0] + s[1] * s[1])};
  };
  auto axpy = [](const V3& a, double h, const V3& b) -> V3 { return {a[0] + h * b[0], a[1] + h * b[1], a[2] + h * b[2]}; };
  SpinTrajectory tr;
  V3 s = s0;
  int n = static_cast<int>(std::llround(t1 / dt));
  for (int k = 0; k <= n; ++k) {
    if (k % stride == 0 || k == n) {
      tr.times.push_back(k * dt);
      tr.s.push_back(s);
      double nr = std::sqrt(s[0] * s[0] + s[1] * s[1] + s[2] * s[2]);
      tr.max_norm_drift = std::max(tr.max_norm_drift, std::abs(nr - 1));
    }
    if (k == n) break;
    V3 k1 = f(s), k2 = f(axpy(s, dt / 2, k1)), k3 = f(axpy(s, dt / 2, k2)), k4 = f(axpy(s, dt, k3));
    for (int i = 0; i < 3; ++i) s[i] += dt / 6 * (k1[i] + 2 * k2[i] + 2 * k3[i] + k4[i]);
  }
  V3 v = f(s);
  tr.terminal_speed = std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
  return tr;
}

double pt_order_parameter(const Operator& rho, double S) {
  SpinOps so = build_spin_operators(S);
  int ds = so.Sz.dim();
  HilbertDims d({ds, ds});
  if (rho.dim() != ds * ds) throw DimensionError("pt_order_parameter: state dimension mismatch");
  Operator mp = so.Sminus * so.Splus;
  double a = expectation(embed(mp, 0, d), rho).real();
  double b = expectation(embed(mp, 1, d), rho).real();
  return (a + b) > 0 ? std::abs(a - b) / (a + b) : 0.0;
}

namespace {

Mat hermitian_propagator(const Mat& H, double t) {
  Eigen::SelfAdjointEigenSolver<Mat> es(H);
  Vec ph = (-kI * t * es.eigenvalues().cast<cplx>()).array().exp();
  return es.eigenvectors() * ph.asDiagonal() * es.eigenvectors().adjoint();
}

// Spectral projectors of a Hermitian operator, grouped by eigenvalue.
std::vector<Mat> eigen_projectors(const Mat& O) {
  Eigen::SelfAdjointEigenSolver<Mat> es(O);
  const auto& ev = es.eigenvalues();
  std::vector<Mat> out;
  double tol = 1e-9 * std::max(1.0, ev.cwiseAbs().maxCoeff());
  int i = 0;
  const int D = static_cast<int>(O.rows());
  while (i < D) {
    int j = i;
    Mat P = Mat::Zero(D, D);
    while (j < D && std::abs(ev(j) - ev(i)) <= tol) {
      P += es.eigenvectors().col(j) * es.eigenvectors().col(j).adjoint();
      ++j;
    }
    out.push_back(P);
    i = j;
  }
  return out;
}

}  // namespace

void ZenoProtocol::validate() const {
  if (!(tau > 0)) throw ConfigError("ZenoProtocol: tau must be positive");
  if (N < 1) throw ConfigError("ZenoProtocol: N must be >= 1");
  if (psi0.amp.size() != H.dim()) throw DimensionError("ZenoProtocol: initial state dimension mismatch");
  if (schedule == ZenoSchedule::RotatingAxis && H.dim() != 2)
    throw DimensionError("ZenoProtocol: rotating axis schedule is defined for spin-1/2");
  if (schedule == ZenoSchedule::FixedObservable && O.dim() != H.dim())
    throw DimensionError("ZenoProtocol: observable dimension mismatch");
}

ZenoResult zeno_protocol_run(const ZenoProtocol& p) {
  p.validate();
  const int D = p.H.dim();
  Mat U = hermitian_propagator(p.H.m, p.tau);
  Mat rho = p.psi0.normalized_copy().projector().m;
  Rng rng = make_stream(p.seed, 0);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  ZenoResult res;
  std::vector<Mat> fixed;
  int tracked = 0;
  if (p.schedule == ZenoSchedule::FixedObservable) {
    fixed = eigen_projectors(p.O.m);
    double best = -1;
    for (size_t k = 0; k < fixed.size(); ++k) {
      double w = (fixed[k] * rho).trace().real();
      if (w > best) {
        best = w;
        tracked = static_cast<int>(k);
      }
    }
  }
  double surv = 1;
  Mat branch = rho;  // unnormalized state conditioned on every outcome hitting the target
  Pauli pa = pauli();
  for (int n = 1; n <= p.N; ++n) {
    rho = U * rho * U.adjoint();
    branch = U * branch * U.adjoint();
    std::vector<Mat> projs;
    int target = tracked;
    if (p.schedule == ZenoSchedule::FixedObservable) {
      projs = fixed;
    } else {
      double th = p.axis_rate * n * p.tau;
      Mat A = std::cos(th) * pa.z.m - std::sin(th) * pa.y.m;
      Mat Pp = 0.5 * (Mat::Identity(2, 2) + A);
      projs = {Pp, Mat(Mat::Identity(2, 2) - Pp)};
      target = 0;
    }
    double pt = (projs[target] * rho).trace().real();
    res.times.push_back(n * p.tau);
    if (p.mode == ZenoMode::Ensemble) {
      Mat r2 = Mat::Zero(D, D);
      for (const auto& Pk : projs) r2 += Pk * rho * Pk;
      rho = r2;
      res.survival.push_back(pt);
      branch = projs[target] * branch * projs[target];
      surv = branch.trace().real();
    } else if (p.mode == ZenoMode::PostSelected) {
      rho = projs[target] * rho * projs[target];
      double tr = rho.trace().real();
      if (!(tr > 0)) throw NumericalError("zeno_protocol_run: post-selected outcome has zero probability");
      rho /= tr;
      res.survival.push_back(pt);
      surv *= pt;
    } else {
      double u = uni(rng), acc = 0;
      int outcome = static_cast<int>(projs.size()) - 1;
      for (size_t k = 0; k < projs.size(); ++k) {
        acc += (projs[k] * rho).trace().real();
        if (u < acc) {
          outcome = static_cast<int>(k);
          break;
        }
      }
      rho = projs[outcome] * rho * projs[outcome];
      rho /= rho.trace().real();
      res.outcomes.push_back(outcome);
      if (outcome != target) surv = 0;
      res.survival.push_back(surv);
    }
  }
  res.final_state = Operator(p.H.dims, rho);
  res.final_survival = surv;
  return res;
}

ZenoSubspaceComparison zeno_subspace_check(const Operator& H, const Operator& O, double K,
                                           double tau, double T, const PureState& psi0,
                                           ZenoMode mode, int samples) {
  require_same_dims(H, O, "zeno_subspace_check");
  if ((O.m - O.m.adjoint()).norm() > 1e-10 * std::max(1.0, O.m.norm()))
    throw Error("zeno_subspace_check: O must be Hermitian");
  if (!(tau > 0) || !(T > 0)) throw ConfigError("zeno_subspace_check: tau and T must be positive");
  const int D = H.dim();
  auto projs = eigen_projectors(O.m);
  Mat HZ = Mat::Zero(D, D);
  for (const auto& Pn : projs) HZ += Pn * H.m * Pn;
  Mat rho0 = psi0.normalized_copy().projector().m;
  int sector = 0;
  double best = -1;
  for (size_t k = 0; k < projs.size(); ++k) {
    double w = (projs[k] * rho0).trace().real();
    if (w > best) {
      best = w;
      sector = static_cast<int>(k);
    }
  }
  const int N = std::max(1, static_cast<int>(std::llround(T / tau)));
  const int every = std::max(1, N / std::max(1, samples));
  Mat U = hermitian_propagator(H.m, tau);
  Mat Hf = H.m + K * O.m;
  ZenoSubspaceComparison out;
  Mat rho = rho0;
  auto pops = [&](const Mat& r) {
    std::vector<double> v(D);
    for (int i = 0; i < D; ++i) v[i] = r(i, i).real();
    return v;
  };
  auto dev = [](const std::vector<double>& a, const std::vector<double>& b) {
    double m = 0;
    for (size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
  };
  for (int n = 0; n <= N; ++n) {
    if (n > 0) {
      rho = U * rho * U.adjoint();
      if (mode == ZenoMode::PostSelected) {
        rho = projs[sector] * rho * projs[sector];
        double tr = rho.trace().real();
        if (!(tr > 0)) throw NumericalError("zeno_subspace_check: post-selection failed");
        rho /= tr;
      } else {
        Mat r2 = Mat::Zero(D, D);
        for (const auto& Pk : projs) r2 += Pk * rho * Pk;
        rho = r2;
      }
    }
    if (n % every != 0 && n != N) continue;
    double t = n * tau;
    Mat Uf = hermitian_propagator(Hf, t), Uz = hermitian_propagator(HZ, t);
    auto pm = pops(rho), pf = pops(Mat(Uf * rho0 * Uf.adjoint())), pz = pops(Mat(Uz * rho0 * Uz.adjoint()));
    out.times.push_back(t);
    out.measured.push_back(pm);
    out.strong_field.push_back(pf);
    out.projected.push_back(pz);
    out.max_dev_measured_projected = std::max(out.max_dev_measured_projected, dev(pm, pz));
    out.max_dev_field_projected = std::max(out.max_dev_field_projected, dev(pf, pz));
    out.max_dev_measured_field = std::max(out.max_dev_measured_field, dev(pm, pf));
  }
  return out;
}

Operator qutrit_ladder_hamiltonian(double K) {
  Mat H = Mat::Zero(3, 3);
  H(0, 1) = H(1, 0) = 1;
  H(1, 2) = H(2, 1) = K;
  return Operator(HilbertDims({3}), H);
}

double qutrit_max_occupation(double K, double t_max) {
  Mat H = qutrit_ladder_hamiltonian(K).m;
  Eigen::SelfAdjointEigenSolver<Mat> es(H);
  Vec c0 = es.eigenvectors().adjoint().col(0);  // <k|0>
  Vec r1 = es.eigenvectors().row(1).transpose();  // <1|k>
  auto occ = [&](double t) {
    cplx a = 0;
    for (int k = 0; k < 3; ++k) a += r1(k) * std::exp(-kI * es.eigenvalues()(k) * t) * c0(k);
    return std::norm(a);
  };
  const int n = 20000;
  double h = t_max / n, best_t = 0, best = -1;
  for (int i = 0; i <= n; ++i) {
    double v = occ(i * h);
    if (v > best) {
      best = v;
      best_t = i * h;
    }
  }
  // Golden-section refinement around the best grid point.
  double a = std::max(0.0, best_t - h), b = std::min(t_max, best_t + h);
  const double gr = (std::sqrt(5.0) - 1) / 2;
  double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
  double f1 = occ(x1), f2 = occ(x2);
  for (int it = 0; it < 100; ++it) {
    if (f1 > f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - gr * (b - a);
      f1 = occ(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + gr * (b - a);
      f2 = occ(x2);
    }
  }
  return std::max(best, std::max(f1, f2));
}

}  // namespace oqs

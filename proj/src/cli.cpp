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

#include "oqs/cli.hpp"

#include <chrono>
#include <filesystem>
#include <iostream>
#include <set>
#include <sstream>

#include <CLI11.hpp>

#include "oqs/errors.hpp"
#include "oqs/parallel.hpp"
#include "oqs/sparse.hpp"
#include "oqs/spectra.hpp"
#include "oqs/structure.hpp"
#include "oqs/trajectories.hpp"

namespace oqs {

namespace fs = std::filesystem;

std::string library_version() { return "0.1.0"; }

namespace {

const std::set<std::string> kTasks = {"spectrum", "evolve", "trajectories", "analyze", "zeno", "sweep"};

const std::set<std::string>& task_fields(const std::string& task) {
  static const std::map<std::string, std::set<std::string>> m = {
      {"spectrum", {"method", "eigenvectors", "krylov"}},
      {"evolve", {"grid", "stride", "noise"}},
      {"trajectories", {"grid", "stride", "n", "scheme", "efficiencies", "records"}},
      {"analyze", {}},
      {"zeno", {"zeno"}},
      {"sweep", {"sweep", "krylov"}},
  };
  return m.at(task);
}

const std::set<std::string> kCommonFields = {"model", "task", "observables", "initial", "seed", "threads", "out"};

[[noreturn]] void bad(const std::string& path, const std::string& why) {
  throw ConfigError("config." + path + ": " + why);
}

void check_keys(const json& o, const std::string& path, const std::set<std::string>& allowed) {
  for (auto it = o.begin(); it != o.end(); ++it)
    if (!allowed.count(it.key())) bad(path.empty() ? it.key() : path + "." + it.key(), "unknown field");
}

double num(const json& v, const std::string& path) {
  if (!v.is_number()) bad(path, "expected a number");
  double x = v.get<double>();
  if (!std::isfinite(x)) bad(path, "must be finite");
  return x;
}

long long integer(const json& v, const std::string& path) {
  if (v.is_number_integer()) return v.get<long long>();
  if (v.is_number_float()) {
    double x = v.get<double>();
    if (std::isfinite(x) && x == std::floor(x) && std::abs(x) < 9e15) return static_cast<long long>(x);
  }
  bad(path, "expected an integer");
}

std::string str(const json& v, const std::string& path) {
  if (!v.is_string()) bad(path, "expected a string");
  return v.get<std::string>();
}

bool boolean(const json& v, const std::string& path) {
  if (!v.is_boolean()) bad(path, "expected true or false");
  return v.get<bool>();
}

ModelSpec parse_model(const json& v) {
  ModelSpec s;
  if (v.is_string()) {
    s.name = v.get<std::string>();
  } else if (v.is_object()) {
    check_keys(v, "model", {"name", "params"});
    if (!v.contains("name")) bad("model.name", "missing");
    s.name = str(v["name"], "model.name");
    if (v.contains("params")) {
      if (!v["params"].is_object()) bad("model.params", "expected an object");
      for (auto it = v["params"].begin(); it != v["params"].end(); ++it)
        s.params[it.key()] = num(it.value(), "model.params." + it.key());
    }
  } else {
    bad("model", "expected a name or {name, params}");
  }
  try {
    return resolve_spec(s);
  } catch (const ConfigError& e) {
    bad("model", e.what());
  }
}

}  // namespace

ExperimentConfig parse_config(const json& j) {
  if (!j.is_object()) throw ConfigError("config: top level must be a JSON object");
  ExperimentConfig c;
  if (!j.contains("task")) bad("task", "missing");
  c.task = str(j["task"], "task");
  if (!kTasks.count(c.task)) bad("task", "unknown task '" + c.task + "'");
  std::set<std::string> allowed = kCommonFields;
  for (const auto& f : task_fields(c.task)) allowed.insert(f);
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!allowed.count(it.key())) bad(it.key(), "not a field of task '" + c.task + "'");
  if (!j.contains("model")) bad("model", "missing");
  c.model = parse_model(j["model"]);

  if (j.contains("grid")) {
    const json& g = j["grid"];
    if (!g.is_array() || g.size() != 3) bad("grid", "expected [t0, t1, dt]");
    c.grid.t0 = num(g[0], "grid[0]");
    c.grid.t1 = num(g[1], "grid[1]");
    c.grid.dt = num(g[2], "grid[2]");
    c.has_grid = true;
  }
  if (j.contains("stride")) {
    long long s = integer(j["stride"], "stride");
    if (s < 1) bad("stride", "must be >= 1");
    c.grid.stride = static_cast<int>(s);
  }
  if (c.has_grid) {
    try {
      c.grid.validate();
    } catch (const Error& e) {
      bad("grid", e.what());
    }
  }
  if (j.contains("observables")) {
    if (!j["observables"].is_array()) bad("observables", "expected an array of expressions");
    for (size_t k = 0; k < j["observables"].size(); ++k)
      c.observables.push_back(str(j["observables"][k], "observables[" + std::to_string(k) + "]"));
  }
  if (j.contains("initial")) {
    const json& v = j["initial"];
    if (v.is_string()) {
      if (v.get<std::string>() != "default") bad("initial", "expected \"default\", {basis} or {coherent}");
    } else if (v.is_object()) {
      check_keys(v, "initial", {"basis", "coherent"});
      if (v.size() != 1) bad("initial", "exactly one of basis, coherent");
      if (v.contains("basis")) {
        c.initial.kind = "basis";
        long long k = integer(v["basis"], "initial.basis");
        if (k < 0) bad("initial.basis", "must be >= 0");
        c.initial.index = static_cast<int>(k);
      } else {
        const json& a = v["coherent"];
        if (!a.is_array() || a.size() != 2) bad("initial.coherent", "expected [re, im]");
        c.initial.kind = "coherent";
        c.initial.alpha = cplx(num(a[0], "initial.coherent[0]"), num(a[1], "initial.coherent[1]"));
      }
    } else {
      bad("initial", "expected \"default\", {basis} or {coherent}");
    }
  }
  if (j.contains("seed")) {
    const json& s = j["seed"];
    if (!(s.is_number_unsigned() || (s.is_number_integer() && s.get<long long>() >= 0)))
      bad("seed", "expected a non-negative integer");
    c.seed = s.get<std::uint64_t>();
  }
  if (j.contains("threads")) {
    long long t = integer(j["threads"], "threads");
    if (t < 0) bad("threads", "must be >= 0");
    c.threads = static_cast<int>(t);
  }
  if (j.contains("out")) c.out = str(j["out"], "out");
  if (j.contains("n")) {
    long long n = integer(j["n"], "n");
    if (n < 1) bad("n", "must be >= 1");
    c.n = static_cast<int>(n);
  }
  if (j.contains("scheme")) {
    c.scheme = str(j["scheme"], "scheme");
    try {
      parse_scheme(c.scheme);
    } catch (const Error& e) {
      bad("scheme", e.what());
    }
  }
  if (j.contains("efficiencies")) {
    if (!j["efficiencies"].is_array()) bad("efficiencies", "expected an array");
    for (size_t k = 0; k < j["efficiencies"].size(); ++k) {
      double e = num(j["efficiencies"][k], "efficiencies[" + std::to_string(k) + "]");
      if (e < 0 || e > 1) bad("efficiencies[" + std::to_string(k) + "]", "must lie in [0, 1]");
      c.efficiencies.push_back(e);
    }
  }
  if (j.contains("records")) {
    long long r = integer(j["records"], "records");
    if (r < 0) bad("records", "must be >= 0");
    c.records = static_cast<int>(r);
  }
  if (j.contains("method")) {
    c.method = str(j["method"], "method");
    if (c.method != "dense" && c.method != "sparse") bad("method", "expected dense or sparse");
  }
  if (j.contains("eigenvectors")) c.eigenvectors = boolean(j["eigenvectors"], "eigenvectors");
  if (j.contains("krylov")) {
    long long k = integer(j["krylov"], "krylov");
    if (k < 4) bad("krylov", "must be >= 4");
    c.krylov = static_cast<int>(k);
  }
  if (j.contains("noise")) {
    const json& v = j["noise"];
    if (!v.is_object()) bad("noise", "expected an object");
    check_keys(v, "noise", {"kind", "gamma", "tau", "coupling", "n"});
    c.noise.enabled = true;
    if (v.contains("kind")) c.noise.kind = str(v["kind"], "noise.kind");
    try {
      parse_noise_kind(c.noise.kind);
    } catch (const Error& e) {
      bad("noise.kind", e.what());
    }
    if (!v.contains("gamma")) bad("noise.gamma", "missing");
    c.noise.gamma = num(v["gamma"], "noise.gamma");
    if (c.noise.gamma < 0) bad("noise.gamma", "must be >= 0");
    if (v.contains("tau")) c.noise.tau = num(v["tau"], "noise.tau");
    if (c.noise.kind == "ornstein-uhlenbeck" && !(c.noise.tau > 0)) bad("noise.tau", "must be positive for OU noise");
    if (!v.contains("coupling")) bad("noise.coupling", "missing");
    c.noise.coupling = str(v["coupling"], "noise.coupling");
    if (v.contains("n")) {
      long long n = integer(v["n"], "noise.n");
      if (n < 0) bad("noise.n", "must be >= 0");
      c.noise.n = static_cast<int>(n);
    }
    if (c.noise.n == 0 && c.noise.kind != "ornstein-uhlenbeck")
      bad("noise.n", "realization count required for " + c.noise.kind + " noise");
    if (c.noise.n > 0 && !c.seed) bad("seed", "required for stochastic noise ensembles");
  }
  if (c.task == "zeno") {
    if (!j.contains("zeno")) bad("zeno", "missing");
    const json& v = j["zeno"];
    if (!v.is_object()) bad("zeno", "expected an object");
    check_keys(v, "zeno", {"tau", "N", "mode", "schedule", "axis_rate", "observable"});
    if (!v.contains("tau")) bad("zeno.tau", "missing");
    c.zeno.tau = num(v["tau"], "zeno.tau");
    if (!(c.zeno.tau > 0)) bad("zeno.tau", "must be positive");
    if (!v.contains("N")) bad("zeno.N", "missing");
    long long N = integer(v["N"], "zeno.N");
    if (N < 1) bad("zeno.N", "must be >= 1");
    c.zeno.N = static_cast<int>(N);
    if (v.contains("mode")) c.zeno.mode = str(v["mode"], "zeno.mode");
    if (c.zeno.mode != "ensemble" && c.zeno.mode != "trajectory" && c.zeno.mode != "post-selected")
      bad("zeno.mode", "expected ensemble, trajectory or post-selected");
    if (v.contains("schedule")) c.zeno.schedule = str(v["schedule"], "zeno.schedule");
    if (c.zeno.schedule != "fixed" && c.zeno.schedule != "rotating")
      bad("zeno.schedule", "expected fixed or rotating");
    if (v.contains("axis_rate")) c.zeno.axis_rate = num(v["axis_rate"], "zeno.axis_rate");
    if (v.contains("observable")) c.zeno.observable = str(v["observable"], "zeno.observable");
    if (c.zeno.schedule == "fixed" && c.zeno.observable.empty())
      bad("zeno.observable", "required for the fixed schedule");
    if (c.zeno.mode == "trajectory" && !c.seed) bad("seed", "required for trajectory-mode measurements");
  }
  if (c.task == "sweep") {
    if (!j.contains("sweep")) bad("sweep", "missing");
    const json& v = j["sweep"];
    if (!v.is_object()) bad("sweep", "expected an object");
    check_keys(v, "sweep", {"param", "values", "metrics", "method"});
    if (!v.contains("param")) bad("sweep.param", "missing");
    c.sweep.param = str(v["param"], "sweep.param");
    const auto& info = model_info(c.model.name);
    bool found = false;
    for (const auto& p : info.params) found = found || p.name == c.sweep.param;
    if (!found) bad("sweep.param", "'" + c.sweep.param + "' is not a numeric parameter of " + c.model.name);
    if (!v.contains("values") || !v["values"].is_array()) bad("sweep.values", "expected an array of numbers");
    if (v["values"].empty()) bad("sweep.values", "empty axis list");
    for (size_t k = 0; k < v["values"].size(); ++k)
      c.sweep.values.push_back(num(v["values"][k], "sweep.values[" + std::to_string(k) + "]"));
    for (double x : c.sweep.values) {
      ModelSpec probe = c.model;
      probe.params[c.sweep.param] = x;
      try {
        resolve_spec(probe);
      } catch (const ConfigError& e) {
        bad("sweep.values", e.what());
      }
    }
    if (v.contains("metrics")) {
      if (!v["metrics"].is_array()) bad("sweep.metrics", "expected an array");
      for (size_t k = 0; k < v["metrics"].size(); ++k)
        c.sweep.metrics.push_back(str(v["metrics"][k], "sweep.metrics[" + std::to_string(k) + "]"));
    } else {
      c.sweep.metrics = {"gap"};
    }
    if (c.sweep.metrics.empty()) bad("sweep.metrics", "empty metric list");
    static const std::set<std::string> known = {"gap", "kernel-dim", "purity", "pt-order", "density"};
    for (const auto& m : c.sweep.metrics)
      if (!known.count(m) && m.rfind("steady:", 0) != 0) bad("sweep.metrics", "unknown metric '" + m + "'");
    if (v.contains("method")) c.sweep.method = str(v["method"], "sweep.method");
    if (c.sweep.method != "dense" && c.sweep.method != "sparse") bad("sweep.method", "expected dense or sparse");
  }
  if ((c.task == "evolve" || c.task == "trajectories") && !c.has_grid) bad("grid", "required for task " + c.task);
  if (c.task == "trajectories") {
    if (c.n < 1) bad("n", "required for task trajectories");
    if (!c.seed) bad("seed", "required for stochastic tasks");
  }
  return c;
}

ExperimentConfig parse_config_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config: invalid JSON: ") + e.what());
  }
  return parse_config(j);
}

json config_to_json(const ExperimentConfig& c) {
  json j;
  j["task"] = c.task;
  json params = json::object();
  for (const auto& [k, v] : c.model.params) params[k] = v;
  j["model"] = {{"name", c.model.name}, {"params", params}};
  j["observables"] = c.observables;
  if (c.initial.kind == "basis") j["initial"] = {{"basis", c.initial.index}};
  else if (c.initial.kind == "coherent") j["initial"] = {{"coherent", {c.initial.alpha.real(), c.initial.alpha.imag()}}};
  else j["initial"] = "default";
  if (c.seed) j["seed"] = *c.seed;
  if (c.threads != 0) j["threads"] = c.threads;
  if (!c.out.empty()) j["out"] = c.out;
  const auto& tf = task_fields(c.task);
  if (tf.count("grid") && c.has_grid) {
    j["grid"] = {c.grid.t0, c.grid.t1, c.grid.dt};
    j["stride"] = c.grid.stride;
  }
  if (c.task == "trajectories") {
    j["n"] = c.n;
    j["scheme"] = c.scheme;
    j["efficiencies"] = c.efficiencies;
    j["records"] = c.records;
  }
  if (c.task == "spectrum") {
    j["method"] = c.method;
    j["eigenvectors"] = c.eigenvectors;
    j["krylov"] = c.krylov;
  }
  if (c.task == "evolve" && c.noise.enabled) {
    j["noise"] = {{"kind", c.noise.kind}, {"gamma", c.noise.gamma}, {"tau", c.noise.tau},
                  {"coupling", c.noise.coupling}, {"n", c.noise.n}};
  }
  if (c.task == "zeno") {
    j["zeno"] = {{"tau", c.zeno.tau}, {"N", c.zeno.N}, {"mode", c.zeno.mode}, {"schedule", c.zeno.schedule},
                 {"axis_rate", c.zeno.axis_rate}, {"observable", c.zeno.observable}};
  }
  if (c.task == "sweep") {
    j["sweep"] = {{"param", c.sweep.param}, {"values", c.sweep.values}, {"metrics", c.sweep.metrics},
                  {"method", c.sweep.method}};
    j["krylov"] = c.krylov;
  }
  return j;
}

std::string config_hash(const ExperimentConfig& cfg) {
  json j = config_to_json(cfg);
  j.erase("out");
  j.erase("threads");
  return hex64(fnv1a64(j.dump()));
}

json RunManifest::to_json() const {
  return {{"config_hash", config_hash}, {"task", task}, {"artifacts", artifacts},
          {"version", version}, {"wall_time_s", wall_time}};
}

json catalog_json() {
  json out = json::array();
  for (const auto& m : model_catalog()) {
    json params = json::array();
    for (const auto& p : m.params) {
      json e = {{"name", p.name}, {"default", p.default_value}, {"description", p.description},
                {"type", p.integer ? "integer" : "number"}};
      if (p.min_value > -1e299) e["minimum"] = p.min_value;
      params.push_back(e);
    }
    out.push_back({{"name", m.name}, {"description", m.description}, {"params", params}});
  }
  return out;
}

std::string catalog_text() {
  std::ostringstream os;
  for (const auto& m : model_catalog()) {
    os << m.name << "\n  " << m.description << "\n";
    for (const auto& p : m.params)
      os << "    " << p.name << " = " << format_double(p.default_value) << (p.integer ? " (integer)" : "") << "  "
         << p.description << "\n";
  }
  return os.str();
}

namespace {

struct Context {
  const ExperimentConfig& cfg;
  BuiltModel bm;
  std::string dir;
  std::vector<std::string> artifacts;
  int threads = 0;

  void write(const std::string& name, const std::string& content) {
    write_text_file((fs::path(dir) / name).string(), content);
    artifacts.push_back(name);
  }
  void write_json(const std::string& name, const json& j) { write(name, j.dump(2) + "\n"); }
};

PureState initial_state(const ExperimentConfig& cfg, const BuiltModel& bm) {
  const HilbertDims& d = bm.model.dims();
  if (cfg.initial.kind == "basis") {
    if (cfg.initial.index >= d.total()) bad("initial.basis", "index beyond the Hilbert space dimension");
    return basis_state(d, cfg.initial.index);
  }
  if (cfg.initial.kind == "coherent") {
    if (d.count() != 1 || !bm.ops.count("a")) bad("initial.coherent", "requires a single bosonic mode");
    return coherent_state(d.total(), cfg.initial.alpha);
  }
  return bm.initial;
}

std::vector<std::string> observable_names(const ExperimentConfig& cfg, const BuiltModel& bm) {
  if (!cfg.observables.empty()) return cfg.observables;
  for (const char* n : {"sz", "Sz", "n", "N"})
    if (bm.ops.count(n)) return {n};
  if (!bm.ops.empty()) return {bm.ops.begin()->first};
  bad("observables", "model has no named operators; list observables explicitly");
}

struct ObsSet {
  std::vector<std::string> names;
  std::vector<Operator> ops;
  std::vector<bool> hermitian;
};

ObsSet observables(const ExperimentConfig& cfg, const BuiltModel& bm) {
  ObsSet s;
  s.names = observable_names(cfg, bm);
  for (const auto& n : s.names) {
    s.ops.push_back(parse_observable(n, bm));
    const Mat& m = s.ops.back().m;
    s.hermitian.push_back((m - m.adjoint()).norm() <= 1e-12 * std::max(1.0, m.norm()));
  }
  return s;
}

void task_spectrum(Context& cx) {
  const auto& model = cx.bm.model;
  if (cx.cfg.method == "sparse") {
    SlowModes sm = slowest_modes_sparse(model, cx.cfg.krylov);
    CsvTable t{{"re", "im", "residual"}, {}};
    for (size_t k = 0; k < sm.eigenvalues.size(); ++k)
      t.rows.push_back({sm.eigenvalues[k].real(), sm.eigenvalues[k].imag(), sm.residuals[k]});
    cx.write("spectrum.csv", t.to_string());
    Operator rho = steady_state_sparse(model);
    cx.write_json("steady_state.json", json::array({operator_to_json(rho)}));
    cx.write_json("summary.json", {{"method", "sparse"}, {"gap", sm.gap},
                                   {"slowest", {sm.slowest.real(), sm.slowest.imag()}},
                                   {"krylov_dim", sm.krylov_dim}, {"converged", sm.eigenvalues.size()}});
    return;
  }
  SpectralDecomposition dec = spectral_decomposition(model);
  CsvTable t{{"re", "im", "is_kernel", "trace_of_right"}, {}};
  for (size_t k = 0; k < dec.eigenvalues.size(); ++k)
    t.rows.push_back({dec.eigenvalues[k].real(), dec.eigenvalues[k].imag(), dec.kernel[k] ? 1.0 : 0.0,
                      dec.right[k].trace().real()});
  cx.write("spectrum.csv", t.to_string());
  SteadyStateSet ss = steady_states(dec, model.dims());
  json sj = json::array();
  for (const auto& r : ss.states) sj.push_back(operator_to_json(r));
  cx.write_json("steady_state.json", sj);
  GapReport g = liouvillian_gap(dec);
  json osc = json::array();
  for (const auto& z : g.oscillating) osc.push_back({z.real(), z.imag()});
  cx.write_json("summary.json", {{"method", "dense"}, {"kernel_dim", dec.kernel_dim}, {"gap", g.gap},
                                 {"slowest", {g.slowest.real(), g.slowest.imag()}}, {"oscillating", osc},
                                 {"max_gram_condition", dec.max_gram_condition},
                                 {"clipped_weight", ss.clipped_weight}, {"warnings", dec.warnings}});
  if (cx.cfg.eigenvectors) {
    json ev = json::array();
    for (size_t k = 0; k < dec.eigenvalues.size(); ++k)
      ev.push_back({{"eigenvalue", {dec.eigenvalues[k].real(), dec.eigenvalues[k].imag()}},
                    {"right", operator_to_json(Operator(model.dims(), dec.right[k]))},
                    {"left", operator_to_json(Operator(model.dims(), dec.left[k]))}});
    cx.write_json("eigenvectors.json", ev);
  }
}

void add_obs_columns(CsvTable& t, const ObsSet& o) {
  for (size_t k = 0; k < o.names.size(); ++k) {
    t.header.push_back(o.names[k]);
    if (!o.hermitian[k]) t.header.push_back("Im[" + o.names[k] + "]");
  }
}

void task_evolve(Context& cx) {
  const auto& cfg = cx.cfg;
  ObsSet o = observables(cfg, cx.bm);
  Operator rho0 = initial_state(cfg, cx.bm).normalized_copy().projector();
  json meta = {{"t0", cfg.grid.t0}, {"t1", cfg.grid.t1}, {"dt", cfg.grid.dt}, {"stride", cfg.grid.stride}};
  if (cfg.noise.enabled) {
    Operator V = parse_observable(cfg.noise.coupling, cx.bm);
    meta["noise"] = {{"kind", cfg.noise.kind}, {"gamma", cfg.noise.gamma}, {"tau", cfg.noise.tau}, {"n", cfg.noise.n}};
    meta["note"] = "noise acts on the Hamiltonian only; jump operators are not used";
    if (cfg.noise.n == 0) {
      Series s = ou_noise_evolve(cx.bm.model.H, V, cfg.noise.gamma, cfg.noise.tau, rho0, cfg.grid, o.ops);
      CsvTable t{{"t"}, {}};
      add_obs_columns(t, o);
      for (size_t i = 0; i < s.times.size(); ++i) {
        std::vector<double> row{s.times[i]};
        for (size_t k = 0; k < o.ops.size(); ++k) {
          row.push_back(s.values[k][i].real());
          if (!o.hermitian[k]) row.push_back(s.values[k][i].imag());
        }
        t.rows.push_back(row);
      }
      cx.write("series.csv", t.to_string());
      meta["warnings"] = s.warnings;
    } else {
      for (size_t k = 0; k < o.ops.size(); ++k)
        if (!o.hermitian[k]) bad("observables", "noise ensembles record Hermitian observables only");
      NoiseSpec ns;
      ns.kind = parse_noise_kind(cfg.noise.kind);
      ns.gamma = cfg.noise.gamma;
      ns.tau = cfg.noise.tau;
      NoiseEnsemble e = noisy_hamiltonian_ensemble(cx.bm.model.H, {V}, ns, cfg.noise.n, cfg.grid, *cfg.seed, rho0,
                                                   o.ops, false, false, cx.threads);
      CsvTable t{{"t"}, {}};
      for (const auto& n : o.names) {
        t.header.push_back(n);
        t.header.push_back("stderr[" + n + "]");
      }
      for (size_t i = 0; i < e.times.size(); ++i) {
        std::vector<double> row{e.times[i]};
        for (size_t k = 0; k < o.ops.size(); ++k) {
          row.push_back(e.mean[k][i]);
          row.push_back(e.stderr_[k][i]);
        }
        t.rows.push_back(row);
      }
      cx.write("series.csv", t.to_string());
      meta["seed"] = *cfg.seed;
    }
    cx.write_json("metadata.json", meta);
    return;
  }
  Series s = evolve_rk4(cx.bm.model, rho0, cfg.grid, o.ops);
  CsvTable t{{"t"}, {}};
  add_obs_columns(t, o);
  for (size_t i = 0; i < s.times.size(); ++i) {
    std::vector<double> row{s.times[i]};
    for (size_t k = 0; k < o.ops.size(); ++k) {
      row.push_back(s.values[k][i].real());
      if (!o.hermitian[k]) row.push_back(s.values[k][i].imag());
    }
    t.rows.push_back(row);
  }
  cx.write("series.csv", t.to_string());
  meta["worst_eigenvalue"] = s.worst_eigenvalue;
  meta["warnings"] = s.warnings;
  cx.write_json("metadata.json", meta);
}

void task_trajectories(Context& cx) {
  const auto& cfg = cx.cfg;
  ObsSet o = observables(cfg, cx.bm);
  for (size_t k = 0; k < o.ops.size(); ++k)
    if (!o.hermitian[k]) bad("observables", "trajectory records hold Hermitian observables only");
  EnsembleRequest rq;
  rq.scheme = parse_scheme(cfg.scheme);
  rq.psi0 = initial_state(cfg, cx.bm).normalized_copy();
  rq.rho0 = rq.psi0.projector();
  rq.efficiencies = cfg.efficiencies;
  rq.grid = cfg.grid;
  rq.n = cfg.n;
  rq.seed = *cfg.seed;
  rq.observables = o.ops;
  rq.threads = cx.threads;
  EnsembleResult res = run_ensemble(cx.bm.model, rq, true);
  const auto& st = res.stats;

  CsvTable t{{"t"}, {}};
  for (const auto& n : o.names) {
    t.header.push_back("mean[" + n + "]");
    t.header.push_back("stderr[" + n + "]");
  }
  bool with_purity = !st.purity.empty();
  if (with_purity) t.header.push_back("purity");
  for (size_t i = 0; i < st.times.size(); ++i) {
    std::vector<double> row{st.times[i]};
    for (size_t k = 0; k < o.ops.size(); ++k) {
      row.push_back(st.mean[k][i]);
      row.push_back(st.stderr_[k][i]);
    }
    if (with_purity) row.push_back(st.purity[i]);
    t.rows.push_back(row);
  }
  cx.write("ensemble.csv", t.to_string());

  CsvTable jl{{"trajectory", "t", "channel"}, {}};
  for (const auto& r : res.records)
    for (const auto& e : r.jumps) jl.rows.push_back({static_cast<double>(r.index), e.t, static_cast<double>(e.channel)});
  cx.write("jumps.csv", jl.to_string());

  int nrec = std::min<int>(cfg.records, static_cast<int>(res.records.size()));
  for (int i = 0; i < nrec; ++i) {
    const auto& r = res.records[i];
    CsvTable tr{{"t"}, {}};
    for (const auto& n : o.names) tr.header.push_back(n);
    tr.header.push_back("jumps");
    size_t next = 0;
    for (size_t s = 0; s < r.times.size(); ++s) {
      while (next < r.jumps.size() && r.jumps[next].t <= r.times[s]) ++next;
      std::vector<double> row{r.times[s]};
      for (size_t k = 0; k < o.ops.size(); ++k) row.push_back(r.obs[k][s]);
      row.push_back(static_cast<double>(next));
      tr.rows.push_back(row);
    }
    std::string stem = "trajectory_" + std::to_string(i);
    cx.write(stem + ".csv", tr.to_string());
    json jumps = json::array();
    for (const auto& e : r.jumps) jumps.push_back({{"t", e.t}, {"channel", e.channel}});
    cx.write_json(stem + ".json", {{"seed", r.seed}, {"index", r.index}, {"scheme", scheme_name(r.scheme)},
                                   {"jumps", jumps}});
  }
  json meta = {{"seed", *cfg.seed}, {"n", cfg.n}, {"dt", cfg.grid.dt}, {"scheme", cfg.scheme},
               {"t0", cfg.grid.t0}, {"t1", cfg.grid.t1}};
  if (rq.scheme == Scheme::Mcwf || rq.scheme == Scheme::SmeJump) {
    JumpStatistics js = jump_statistics(res.records, cfg.grid.t0, cfg.grid.t1,
                                        static_cast<int>(cx.bm.model.jumps.size()));
    meta["jump_statistics"] = {{"mean_count", js.mean_count}, {"variance", js.variance}, {"fano", js.fano},
                               {"mean_waiting_time", js.mean_waiting_time},
                               {"waiting_samples", js.waiting_times.size()}};
  }
  cx.write_json("ensemble.json", meta);
}

json cplx_json(cplx z) { return json::array({z.real(), z.imag()}); }

void task_analyze(Context& cx) {
  const auto& model = cx.bm.model;
  json out;
  out["model"] = cx.bm.spec.name;
  out["dimension"] = model.dim();
  IrreducibilityReport ir = davies_irreducible(model);
  out["irreducibility"] = {{"irreducible", ir.irreducible}, {"algebra_dim", ir.algebra_dim}, {"d2", ir.d2},
                           {"kernel_dim", ir.kernel_dim}, {"steady_min_eigenvalue", ir.steady_min_eigenvalue},
                           {"consistent", ir.consistent}};
  DarkStateResult ds = dark_states(model);
  json dj = json::array();
  for (const auto& d : ds.states) {
    json ev = json::array();
    for (auto z : d.jump_eigenvalues) ev.push_back(cplx_json(z));
    json amp = json::array();
    for (Eigen::Index i = 0; i < d.psi.amp.size(); ++i) amp.push_back(cplx_json(d.psi.amp(i)));
    dj.push_back({{"amplitudes", amp}, {"jump_eigenvalues", ev}, {"heff_eigenvalue", cplx_json(d.heff_eigenvalue)},
                  {"generator_residual", d.generator_residual}});
  }
  out["dark_states"] = dj;
  out["dark_state_warnings"] = ds.warnings;
  json sj = json::array();
  for (const auto& e : scan_symmetries(model)) sj.push_back({{"name", e.name}, {"strong", e.strong}, {"weak", e.weak}});
  out["symmetries"] = sj;
  json fj = json::array();
  for (const auto& f : dfs_detect(model)) {
    json pe = json::array();
    for (auto z : f.predicted_eigenvalues) pe.push_back(cplx_json(z));
    fj.push_back({{"kind", f.kind}, {"dimension", f.basis.cols()}, {"energies", f.energies}, {"predicted_eigenvalues", pe}});
  }
  out["dfs"] = fj;
  SpectralDecomposition dec = spectral_decomposition(model);
  GapReport g = liouvillian_gap(dec);
  out["spectrum"] = {{"kernel_dim", dec.kernel_dim}, {"gap", g.gap}, {"slowest", cplx_json(g.slowest)},
                     {"oscillating", g.oscillating.size()}};
  cx.write_json("analysis.json", out);
}

void task_zeno(Context& cx) {
  const auto& cfg = cx.cfg;
  ZenoProtocol p;
  p.H = cx.bm.model.H;
  p.schedule = cfg.zeno.schedule == "rotating" ? ZenoSchedule::RotatingAxis : ZenoSchedule::FixedObservable;
  if (p.schedule == ZenoSchedule::FixedObservable) p.O = parse_observable(cfg.zeno.observable, cx.bm);
  p.axis_rate = cfg.zeno.axis_rate;
  p.tau = cfg.zeno.tau;
  p.N = cfg.zeno.N;
  p.psi0 = initial_state(cfg, cx.bm);
  p.mode = cfg.zeno.mode == "trajectory" ? ZenoMode::Trajectory
           : cfg.zeno.mode == "post-selected" ? ZenoMode::PostSelected : ZenoMode::Ensemble;
  p.seed = cfg.seed.value_or(0);
  ZenoResult r = zeno_protocol_run(p);
  CsvTable t{{"measurement", "t", "survival"}, {}};
  if (p.mode == ZenoMode::Trajectory) t.header.push_back("outcome");
  for (size_t i = 0; i < r.times.size(); ++i) {
    std::vector<double> row{static_cast<double>(i + 1), r.times[i], r.survival[i]};
    if (p.mode == ZenoMode::Trajectory) row.push_back(r.outcomes[i]);
    t.rows.push_back(row);
  }
  cx.write("zeno.csv", t.to_string());
  ObsSet o = observables(cfg, cx.bm);
  json fin = json::object();
  for (size_t k = 0; k < o.ops.size(); ++k) fin[o.names[k]] = expectation(o.ops[k], r.final_state).real();
  json meta = {{"final_survival", r.final_survival}, {"final_expectations", fin},
               {"final_state", operator_to_json(r.final_state)}};
  if (cfg.seed) meta["seed"] = *cfg.seed;
  cx.write_json("zeno.json", meta);
}

std::vector<double> sweep_point(const ExperimentConfig& cfg, double value) {
  ModelSpec spec = cfg.model;
  spec.params[cfg.sweep.param] = value;
  BuiltModel bm = build_model_full(spec);
  const auto& model = bm.model;
  bool sparse = cfg.sweep.method == "sparse";
  bool need_dec = false, need_rho = false;
  for (const auto& m : cfg.sweep.metrics) {
    if (m == "gap" || m == "kernel-dim") need_dec = !sparse || m == "kernel-dim";
    else need_rho = true;
    if (m == "kernel-dim" && sparse) bad("sweep.metrics", "kernel-dim needs the dense method");
  }
  std::optional<SpectralDecomposition> dec;
  if (!sparse && (need_dec || need_rho)) dec = spectral_decomposition(model);
  Operator rho;
  if (need_rho) rho = sparse ? steady_state_sparse(model) : steady_states(*dec, model.dims()).states.front();
  std::vector<double> row{value};
  for (const auto& m : cfg.sweep.metrics) {
    if (m == "gap") {
      row.push_back(sparse ? slowest_modes_sparse(model, cfg.krylov).gap : liouvillian_gap(*dec).gap);
    } else if (m == "kernel-dim") {
      row.push_back(dec->kernel_dim);
    } else if (m == "purity") {
      row.push_back(purity(rho));
    } else if (m == "pt-order") {
      if (bm.spec.name != "pt-spins") bad("sweep.metrics", "pt-order applies to pt-spins only");
      row.push_back(pt_order_parameter(rho, bm.spec.params.at("s")));
    } else if (m == "density") {
      if (bm.spec.name != "kerr") bad("sweep.metrics", "density applies to kerr only");
      row.push_back(expectation(bm.ops.at("n"), rho).real() / bm.spec.params.at("n"));
    } else {
      row.push_back(expectation(parse_observable(m.substr(7), bm), rho).real());
    }
  }
  return row;
}

void task_sweep(Context& cx) {
  const auto& cfg = cx.cfg;
  std::vector<std::vector<double>> rows(cfg.sweep.values.size());
  parallel_for(rows.size(), cx.threads, [&](std::size_t i) { rows[i] = sweep_point(cfg, cfg.sweep.values[i]); });
  CsvTable t{{cfg.sweep.param}, rows};
  for (const auto& m : cfg.sweep.metrics) t.header.push_back(m);
  cx.write("sweep.csv", t.to_string());
}

}  // namespace

RunManifest run_experiment(const ExperimentConfig& cfg, const std::string& out_dir, int threads) {
  auto t0 = std::chrono::steady_clock::now();
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) throw Error("cannot create output directory " + out_dir + ": " + ec.message());
  Context cx{cfg, build_model_full(cfg.model), out_dir, {}, threads > 0 ? threads : cfg.threads};
  if (cfg.task == "spectrum") task_spectrum(cx);
  else if (cfg.task == "evolve") task_evolve(cx);
  else if (cfg.task == "trajectories") task_trajectories(cx);
  else if (cfg.task == "analyze") task_analyze(cx);
  else if (cfg.task == "zeno") task_zeno(cx);
  else if (cfg.task == "sweep") task_sweep(cx);
  else bad("task", "unknown task '" + cfg.task + "'");
  cx.write_json("config.json", config_to_json(cfg));
  RunManifest m;
  m.config_hash = config_hash(cfg);
  m.task = cfg.task;
  m.artifacts = cx.artifacts;
  m.version = library_version();
  m.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  write_text_file((fs::path(out_dir) / "manifest.json").string(), m.to_json().dump(2) + "\n");
  return m;
}

namespace {

int report(const std::exception& e, int code) {
  std::cerr << "oqs: " << e.what() << "\n";
  return code;
}

}  // namespace

int cli_main(int argc, char** argv) {
  CLI::App app{"oqs: open quantum systems experiment runner"};
  app.require_subcommand(1);
  std::string config_path, out_dir;
  std::uint64_t seed = 0;
  int threads = 0;
  bool as_json = false;

  auto add_run_flags = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "experiment config (JSON)")->required();
    sub->add_option("--out", out_dir, "output directory");
    sub->add_option("--seed", seed, "master seed override");
    sub->add_option("--threads", threads, "worker threads (0 = hardware)")->check(CLI::NonNegativeNumber);
  };
  CLI::App* run = app.add_subcommand("run", "run an experiment config");
  add_run_flags(run);
  CLI::App* sweep = app.add_subcommand("sweep", "run a sweep config");
  add_run_flags(sweep);
  CLI::App* list = app.add_subcommand("list-models", "list the model catalog");
  list->add_flag("--json", as_json, "machine-readable parameter schemas");
  CLI::App* validate = app.add_subcommand("validate-config", "check a config and print its canonical form");
  validate->add_option("--config", config_path, "experiment config (JSON)")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (list->parsed()) {
      if (as_json) std::cout << catalog_json().dump(2) << "\n";
      else std::cout << catalog_text();
      return 0;
    }
    json raw;
    try {
      raw = json::parse(read_text_file(config_path));
    } catch (const json::parse_error& e) {
      throw ConfigError(std::string("config: invalid JSON: ") + e.what());
    }
    CLI::App* sub = run->parsed() ? run : (sweep->parsed() ? sweep : validate);
    if (sub != validate && sub->count("--seed") && raw.is_object()) raw["seed"] = seed;
    ExperimentConfig cfg = parse_config(raw);
    if (validate->parsed()) {
      std::cout << config_to_json(cfg).dump(2) << "\n" << "hash " << config_hash(cfg) << "\n";
      return 0;
    }
    if (sub == sweep && cfg.task != "sweep") throw ConfigError("config.task: the sweep command needs task \"sweep\"");
    if (sub->count("--threads")) cfg.threads = threads;
    std::string dir = !out_dir.empty() ? out_dir : (!cfg.out.empty() ? cfg.out : "out");
    RunManifest m = run_experiment(cfg, dir, cfg.threads);
    std::cout << m.to_json().dump(2) << "\n";
    return 0;
  } catch (const ConfigError& e) {
    return report(e, 2);
  } catch (const DimensionError& e) {
    return report(e, 2);
  } catch (const CapacityError& e) {
    return report(e, 3);
  } catch (const NumericalError& e) {
    return report(e, 4);
  } catch (const std::exception& e) {
    return report(e, 4);
  }
}

}  // namespace oqs

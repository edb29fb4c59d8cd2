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

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "oqs/cli.hpp"
#include "oqs/errors.hpp"
#include "oqs/models.hpp"
#include "oqs/spectra.hpp"

namespace fs = std::filesystem;
using namespace oqs;

namespace {

std::string bin() {
  const char* b = std::getenv("OQS_BIN");
  return b ? b : "oqs";
}

fs::path scratch(const std::string& name) {
  fs::path p = fs::temp_directory_path() / ("oqs_cli_test_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Runs the binary with the given arguments; stdout and stderr go to files in dir.
int run(const fs::path& dir, const std::string& args) {
  std::string cmd = "\"" + bin() + "\" " + args + " >\"" + (dir / "stdout.txt").string() + "\" 2>\"" +
                    (dir / "stderr.txt").string() + "\"";
  int rc = std::system(cmd.c_str());
  return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

int run_config(const fs::path& dir, const std::string& config, const std::string& extra = "") {
  std::ofstream(dir / "cfg.json") << config;
  return run(dir, "run --config \"" + (dir / "cfg.json").string() + "\" --out \"" + (dir / "out").string() + "\" " + extra);
}

struct Csv {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
  int col(const std::string& name) const {
    for (size_t k = 0; k < header.size(); ++k)
      if (header[k] == name) return static_cast<int>(k);
    return -1;
  }
};

Csv read_csv(const fs::path& p) {
  Csv c;
  std::ifstream in(p);
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    std::stringstream ss(line);
    std::string cell;
    std::vector<std::string> cells;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (first) {
      c.header = cells;
      first = false;
      continue;
    }
    std::vector<double> r;
    for (const auto& s : cells) r.push_back(std::strtod(s.c_str(), nullptr));
    c.rows.push_back(r);
  }
  return c;
}

double kerr_window_center() {
  double lo = 1e300, hi = -1e300;
  for (int k = 1; k <= 4000; ++k) {
    double F = 3.0 * k / 4000;
    if (kerr_classical_fixed_points(3, 1, 1, F).size() == 3) {
      lo = std::min(lo, F);
      hi = std::max(hi, F);
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace

TEST(CliRun, QubitDecayEvolveMatchesExponential) {
  auto d = scratch("evolve");
  ASSERT_EQ(run_config(d, R"({"model": {"name": "qubit-decay"}, "task": "evolve", "grid": [0, 10, 1e-3],
                              "stride": 100, "observables": ["sz"]})"),
            0)
      << slurp(d / "stderr.txt");
  for (const char* f : {"config.json", "manifest.json", "metadata.json", "series.csv"})
    EXPECT_TRUE(fs::exists(d / "out" / f)) << f;
  Csv c = read_csv(d / "out" / "series.csv");
  ASSERT_EQ(c.header, (std::vector<std::string>{"t", "sz"}));
  ASSERT_EQ(c.rows.size(), 101u);
  for (const auto& r : c.rows) EXPECT_NEAR(r[1], 2 * std::exp(-r[0]) - 1, 1e-9) << "t=" << r[0];
  json m = json::parse(slurp(d / "out" / "manifest.json"));
  EXPECT_EQ(m["task"], "evolve");
  EXPECT_EQ(m["config_hash"].get<std::string>().size(), 16u);
  EXPECT_NE(slurp(d / "stdout.txt").find("config_hash"), std::string::npos);
}

TEST(CliRun, DrivenSpinTrajectoriesWriteEnsembleAndJumps) {
  auto d = scratch("traj");
  ASSERT_EQ(run_config(d, R"({"model": {"name": "spin-half-driven"}, "task": "trajectories", "scheme": "mcwf",
                              "n": 1000, "seed": 7, "grid": [0, 10, 1e-3], "stride": 200, "observables": ["sz"]})"),
            0)
      << slurp(d / "stderr.txt");
  Csv e = read_csv(d / "out" / "ensemble.csv");
  int mean = e.col("mean[sz]"), se = e.col("stderr[sz]");
  ASSERT_GE(mean, 0);
  ASSERT_GE(se, 0);
  ASSERT_EQ(e.rows.size(), 51u);

  auto r = scratch("traj_ref");
  ASSERT_EQ(run_config(r, R"({"model": {"name": "spin-half-driven"}, "task": "evolve", "grid": [0, 10, 1e-3],
                              "stride": 200, "observables": ["sz"]})"),
            0);
  Csv ref = read_csv(r / "out" / "series.csv");
  ASSERT_EQ(ref.rows.size(), e.rows.size());
  for (size_t k = 1; k < e.rows.size(); ++k) {
    double tol = 3 * std::max(e.rows[k][se], 2.0 / 1000);
    EXPECT_NEAR(e.rows[k][mean], ref.rows[k][1], tol) << "t=" << e.rows[k][0];
  }

  Csv j = read_csv(d / "out" / "jumps.csv");
  EXPECT_EQ(j.header, (std::vector<std::string>{"trajectory", "t", "channel"}));
  EXPECT_GT(j.rows.size(), 1000u);
  for (const auto& row : j.rows) {
    EXPECT_GE(row[1], 0);
    EXPECT_LE(row[1], 10);
    EXPECT_EQ(row[2], 0);
  }
}

TEST(CliRun, DampedCavitySpectrumHasWedge) {
  auto d = scratch("spectrum");
  ASSERT_EQ(run_config(d, R"({"model": {"name": "damped-cavity", "params": {"cutoff": 12}}, "task": "spectrum"})"), 0)
      << slurp(d / "stderr.txt");
  Csv c = read_csv(d / "out" / "spectrum.csv");
  ASSERT_EQ(c.header[0], "re");
  ASSERT_EQ(c.header[1], "im");
  ASSERT_EQ(c.rows.size(), 12u * 12u);
  int kernel = c.col("is_kernel");
  int nk = 0;
  for (const auto& r : c.rows) nk += r[kernel] != 0;
  EXPECT_EQ(nk, 1);
  auto has = [&](double re, double im) {
    for (const auto& r : c.rows)
      if (std::abs(r[0] - re) < 1e-8 && std::abs(r[1] - im) < 1e-8) return true;
    return false;
  };
  // kappa = 1, omega = 1: -(p + q)/2 + i (q - p)
  for (int p = 0; p <= 4; ++p)
    for (int q = 0; q <= 4; ++q) EXPECT_TRUE(has(-0.5 * (p + q), q - p)) << p << "," << q;
}

TEST(CliListModels, TextAndJson) {
  auto d = scratch("list");
  ASSERT_EQ(run(d, "list-models"), 0);
  std::string text = slurp(d / "stdout.txt");
  for (const char* name : {"kerr", "pt-spins", "rainbow", "qubit-decay", "zeno-spin"})
    EXPECT_NE(text.find(name), std::string::npos) << name;
  ASSERT_EQ(run(d, "list-models --json"), 0);
  json j = json::parse(slurp(d / "stdout.txt"));
  ASSERT_TRUE(j.is_array());
  bool kerr = false;
  for (const auto& m : j) {
    EXPECT_TRUE(m.contains("name"));
    EXPECT_TRUE(m.contains("params"));
    kerr = kerr || m["name"] == "kerr";
  }
  EXPECT_TRUE(kerr);
}

TEST(CliUsage, UnknownFlagExits2) {
  auto d = scratch("usage");
  EXPECT_EQ(run(d, "list-models --bogus"), 2);
  EXPECT_EQ(run(d, "frobnicate"), 2);
}

TEST(CliSweep, KerrGapDeepensWithN) {
  auto d = scratch("kerr");
  double Fc = kerr_window_center();
  json cfg = {{"model", {{"name", "kerr"}, {"params", {{"delta", 3}, {"u", 1}, {"f", Fc}, {"gamma", 1}}}}},
              {"task", "sweep"},
              {"sweep", {{"param", "n"}, {"values", {1, 3, 10}}, {"metrics", {"gap"}}, {"method", "sparse"}}}};
  ASSERT_EQ(run_config(d, cfg.dump()), 0) << slurp(d / "stderr.txt");
  Csv c = read_csv(d / "out" / "sweep.csv");
  ASSERT_EQ(c.header, (std::vector<std::string>{"n", "gap"}));
  ASSERT_EQ(c.rows.size(), 3u);
  EXPECT_GT(c.rows[0][1], c.rows[1][1]);
  EXPECT_GT(c.rows[1][1], c.rows[2][1]);
  EXPECT_GT(c.rows[2][1], 0);

  auto bm = build_model_full({"kerr", {{"delta", 3}, {"u", 1}, {"f", Fc}, {"gamma", 1}, {"n", 1}}});
  double dense = liouvillian_gap(spectral_decomposition(bm.model)).gap;
  EXPECT_NEAR(c.rows[0][1], dense, 1e-6 * std::max(1.0, dense));
}

TEST(CliSweep, ZenoGapApproachesInverseRate) {
  auto d = scratch("zeno");
  ASSERT_EQ(run_config(d, R"({"model": {"name": "zeno-spin"}, "task": "sweep",
                              "sweep": {"param": "gamma", "values": [10, 30, 100, 300, 1000], "metrics": ["gap"]}})"),
            0)
      << slurp(d / "stderr.txt");
  Csv c = read_csv(d / "out" / "sweep.csv");
  ASSERT_EQ(c.rows.size(), 5u);
  double prev = 1e300;
  for (const auto& r : c.rows) {
    double rel = std::abs(r[1] * r[0] / 2 - 1);
    EXPECT_LT(rel, prev) << "gamma=" << r[0];
    prev = rel;
  }
  EXPECT_LT(prev, 1e-5);
}

TEST(CliSweep, EmptyValuesExit2) {
  auto d = scratch("empty");
  EXPECT_EQ(run_config(d, R"({"model": {"name": "kerr"}, "task": "sweep",
                              "sweep": {"param": "f", "values": [], "metrics": ["gap"]}})"),
            2);
  EXPECT_NE(slurp(d / "stderr.txt").find("empty"), std::string::npos);
}

TEST(CliReproducibility, SameSeedSameBytes) {
  const std::string cfg = R"({"model": {"name": "qubit-decay"}, "task": "trajectories", "scheme": "mcwf",
                              "n": 50, "seed": 11, "grid": [0, 3, 1e-3], "stride": 100, "observables": ["sz"]})";
  auto a = scratch("repro_a");
  auto b = scratch("repro_b");
  ASSERT_EQ(run_config(a, cfg, "--threads 1"), 0);
  ASSERT_EQ(run_config(b, cfg, "--threads 3"), 0);
  for (const char* f : {"ensemble.csv", "ensemble.json", "jumps.csv", "trajectory_0.csv", "trajectory_0.json"})
    EXPECT_EQ(slurp(a / "out" / f), slurp(b / "out" / f)) << f;
  json ma = json::parse(slurp(a / "out" / "manifest.json"));
  json mb = json::parse(slurp(b / "out" / "manifest.json"));
  EXPECT_EQ(ma["config_hash"], mb["config_hash"]);
}

TEST(CliReproducibility, SeedFlagOverridesConfig) {
  const std::string cfg = R"({"model": {"name": "qubit-decay"}, "task": "trajectories", "scheme": "mcwf",
                              "n": 20, "seed": 11, "grid": [0, 3, 1e-3], "stride": 100})";
  auto a = scratch("seed_a");
  auto b = scratch("seed_b");
  ASSERT_EQ(run_config(a, cfg), 0);
  ASSERT_EQ(run_config(b, cfg, "--seed 12"), 0);
  EXPECT_NE(slurp(a / "out" / "jumps.csv"), slurp(b / "out" / "jumps.csv"));
}

TEST(CliSchema, CanonicalRoundTripIsIdempotent) {
  const char* texts[] = {
      R"({"model": {"name": "qubit-decay"}, "task": "evolve", "grid": [0, 10, 1e-3], "stride": 100, "observables": ["sz"]})",
      R"({"model": {"name": "spin-half-driven", "params": {"omega": 2}}, "task": "trajectories", "scheme": "mcwf",
          "n": 10, "seed": 3, "grid": [0, 1, 1e-3]})",
      R"({"model": {"name": "kerr"}, "task": "sweep", "sweep": {"param": "f", "values": [1, 1.5], "metrics": ["gap"]}})",
      R"({"model": {"name": "damped-cavity", "params": {"cutoff": 8}}, "task": "spectrum"})"};
  for (const char* t : texts) {
    ExperimentConfig c1 = parse_config_text(t);
    json j1 = config_to_json(c1);
    ExperimentConfig c2 = parse_config(j1);
    json j2 = config_to_json(c2);
    EXPECT_EQ(j1, j2) << t;
    EXPECT_EQ(j1.dump(), j2.dump());
    EXPECT_EQ(config_hash(c1), config_hash(c2));
  }
}

TEST(CliSchema, HashIgnoresOutAndThreads) {
  auto c1 = parse_config_text(R"({"model": {"name": "qubit-decay"}, "task": "spectrum", "threads": 2, "out": "x"})");
  auto c2 = parse_config_text(R"({"model": {"name": "qubit-decay"}, "task": "spectrum"})");
  auto c3 = parse_config_text(R"({"model": {"name": "qubit-decay", "params": {"gamma": 2}}, "task": "spectrum"})");
  EXPECT_EQ(config_hash(c1), config_hash(c2));
  EXPECT_NE(config_hash(c1), config_hash(c3));
}

TEST(CliSchema, StrictParsingRejects) {
  EXPECT_THROW(parse_config_text(R"({"model": {"name": "qubit-decay"}, "task": "evolve", "grid": [0, 1, 1e-3], "bogus": 1})"),
               ConfigError);
  EXPECT_THROW(parse_config_text(R"({"model": {"name": "no-such-model"}, "task": "spectrum"})"), ConfigError);
  EXPECT_THROW(parse_config_text(R"({"model": {"name": "qubit-decay", "params": {"gamma": -1}}, "task": "spectrum"})"),
               ConfigError);
  EXPECT_THROW(parse_config_text(R"({"model": {"name": "qubit-decay"}, "task": "trajectories", "grid": [0, 1, 1e-3]})"),
               ConfigError);
  EXPECT_THROW(parse_config_text(R"({"model": {"name": "qubit-decay"}, "task": "evolve", "grid": [1, 0, 1e-3]})"),
               ConfigError);
  EXPECT_THROW(parse_config_text("{not json"), ConfigError);
}

TEST(CliExitCodes, ConfigCapacityNumerical) {
  auto d = scratch("codes");
  EXPECT_EQ(run_config(d, R"({"model": {"name": "qubit-decay"}, "task": "evolve", "grid": [0, 1, 1e-3], "bogus": 1})"), 2);
  EXPECT_NE(slurp(d / "stderr.txt").find("bogus"), std::string::npos);
  EXPECT_EQ(run_config(d, R"({"model": {"name": "damped-cavity", "params": {"cutoff": 200}}, "task": "spectrum"})"), 3);
  EXPECT_EQ(run_config(d, R"({"model": {"name": "qubit-decay", "params": {"gamma": 500}}, "task": "trajectories",
                              "scheme": "sme-jump", "n": 2, "seed": 1, "grid": [0, 1, 1e-2]})"),
            4);
  EXPECT_EQ(run(d, "run --config \"" + (d / "missing.json").string() + "\" --out \"" + (d / "o").string() + "\""), 2);
}

TEST(CliValidate, AcceptsAndRejects) {
  auto d = scratch("validate");
  std::ofstream(d / "ok.json") << R"({"model": {"name": "qubit-decay"}, "task": "spectrum"})";
  std::ofstream(d / "bad.json") << R"({"model": {"name": "qubit-decay"}, "task": "trajectories", "grid": [0, 1, 1e-3]})";
  EXPECT_EQ(run(d, "validate-config --config \"" + (d / "ok.json").string() + "\""), 0);
  EXPECT_EQ(run(d, "validate-config --config \"" + (d / "bad.json").string() + "\""), 2);
  EXPECT_NE(slurp(d / "stderr.txt").find("config.n"), std::string::npos);
  EXPECT_FALSE(fs::exists(d / "out"));
}

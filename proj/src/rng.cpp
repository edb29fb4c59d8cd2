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

#include "oqs/rng.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include "oqs/parallel.hpp"

namespace oqs {

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
  std::uint64_t s = master;
  std::uint64_t a = splitmix64(s);
  std::uint64_t t = a ^ (index * 0xd1b54a32d192ed03ULL);
  splitmix64(t);
  return splitmix64(t);
}

std::mt19937_64 make_stream(std::uint64_t master, std::uint64_t index) {
  return std::mt19937_64(derive_seed(master, index));
}

static double fano_of(const std::vector<double>& c) {
  double n = static_cast<double>(c.size());
  double mean = 0;
  for (double x : c) mean += x;
  mean /= n;
  double var = 0;
  for (double x : c) var += (x - mean) * (x - mean);
  var /= (n - 1);
  return mean > 0 ? var / mean : 0.0;
}

double bootstrap_fano_quantile(const std::vector<double>& counts, int resamples, double q,
                               std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, counts.size() - 1);
  std::vector<double> stats(resamples);
  std::vector<double> sample(counts.size());
  for (int r = 0; r < resamples; ++r) {
    for (auto& x : sample) x = counts[pick(rng)];
    stats[r] = fano_of(sample);
  }
  std::sort(stats.begin(), stats.end());
  auto k = static_cast<std::size_t>(std::ceil(q * resamples)) - 1;
  return stats[std::min(k, stats.size() - 1)];
}

int default_threads() {
  unsigned h = std::thread::hardware_concurrency();
  return h == 0 ? 1 : static_cast<int>(h);
}

}  // namespace oqs

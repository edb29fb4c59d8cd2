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

#include <cstdint>
#include <random>
#include <vector>

namespace oqs {

/// One step of the SplitMix64 generator; advances `state`.
std::uint64_t splitmix64(std::uint64_t& state);

/// Seed for stream `index` under `master`; independent of evaluation order.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index);

std::mt19937_64 make_stream(std::uint64_t master, std::uint64_t index);

/// Upper `q`-quantile of the bootstrap distribution of variance/mean.
double bootstrap_fano_quantile(const std::vector<double>& counts, int resamples, double q,
                               std::uint64_t seed);

}  // namespace oqs

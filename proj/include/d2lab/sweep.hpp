// Copyright 2026 The d2lab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef D2LAB_SWEEP_HPP
#define D2LAB_SWEEP_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "d2lab/noise.hpp"

namespace d2lab {

enum class NoiseMode { GateOnly, MeasOnly, Both };

NoiseMode parse_noise_mode(std::string_view s);
const char *noise_mode_name(NoiseMode m);

/// gate-only: p2 = p, p1 = p/10, pm = 0. meas-only: pm = p. both: all three.
NoiseModel sweep_noise(NoiseMode mode, double p);

struct SweepConfig {
    NoiseMode mode = NoiseMode::Both;
    std::vector<double> p_grid;
    std::vector<std::string> families{"single", "bell"};
    size_t shots = 1000000;  // per circuit
    uint64_t seed = 1;
    unsigned threads = 0;
};

struct SweepPoint {
    double p = 0;
    double logical_error = 0;  // P(wrong eigenvalue | passed)
    std::optional<double> logical_2sigma;
    double ps_rate = 0;
    double n_pass = 0;
    double n_total = 0;
    double physical_error = 0;
    std::optional<double> physical_2sigma;
    bool excluded = false;  // nothing passed post-selection
};

struct SweepCurve {
    std::string family;
    std::vector<SweepPoint> points;
    std::optional<double> crossing;  // empty when the curves never cross on the grid
};

struct SweepResult {
    SweepConfig config;
    std::vector<SweepCurve> curves;
    std::vector<std::string> warnings;

    const SweepCurve *curve(std::string_view family) const;
};

/// Throws std::invalid_argument for an empty grid, p outside [0, 0.5) or an
/// unknown family ("single" or "bell").
SweepResult run_sweep(const SweepConfig &cfg);

/// First upward crossing of logical over physical error, by linear
/// interpolation between neighbouring non-excluded grid points.
std::optional<double> crossing_point(const std::vector<SweepPoint> &points);

/// "0.01:0.2:0.01" (inclusive range) or "0.01,0.05,0.1".
std::vector<double> parse_grid(std::string_view text);

}  // namespace d2lab

#endif

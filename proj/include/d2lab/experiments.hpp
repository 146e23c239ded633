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

#ifndef D2LAB_EXPERIMENTS_HPP
#define D2LAB_EXPERIMENTS_HPP

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "d2lab/device.hpp"
#include "d2lab/noise.hpp"
#include "d2lab/ptm.hpp"
#include "d2lab/shots.hpp"
#include "d2lab/surface_code.hpp"
#include "d2lab/tomography.hpp"

namespace d2lab {

enum class Engine { Tableau, Dense, DenseMc };

Engine parse_engine(std::string_view name);
const char *engine_name(Engine e);

struct RunOptions {
    Engine engine = Engine::Tableau;
    size_t shots = 50000;  // per measurement setting
    uint64_t seed = 1;
    unsigned threads = 0;  // 0: hardware concurrency
    // 1: device parameters everywhere.
    // 2: characterization readout noiseless (the teleport ancilla keeps its readout noise).
    // 3: as 2, and the teleport ancilla is prepared without faults.
    int noise_case = 1;
    bool noiseless = false;
};

/// Register of device qubits used by one experiment; local index = position.
struct Register {
    std::vector<std::string> names;

    uint32_t index(const std::string &device_qubit) const;
    LogicalBlock block(const std::vector<std::string> &device_qubits, std::string name = "") const;
};

/// What is read out for one logical (or physical) qubit in a given basis.
struct Readout {
    bool physical = false;
    LogicalBlock block;   // logical readout
    uint32_t qubit = 0;   // physical readout
    std::string name;     // label prefix for a physical readout

    LogicalMeasurement measure(char basis) const;
};

/// A state to be characterized by tomography: the preparation body and how
/// each qubit is read out. An optional teleport ancilla is measured alongside
/// and must pass `extra`.
struct StateProgram {
    std::string tag;
    Register reg;
    LayerList body;
    std::vector<Readout> readouts;
    PostSelectionRule extra;
    std::optional<LogicalMeasurement> ancilla;
    size_t ancilla_prep_layers = 0;
    bool asymmetric_readout = false;
};

/// One concrete measured circuit.
struct SettingProgram {
    std::string tag;
    std::string setting;
    Circuit circuit;
    std::vector<LogicalMeasurement> blocks;
    PostSelectionRule extra;
    std::vector<std::string> ancilla_labels;
    std::vector<uint32_t> ancilla_qubits;
    size_t ancilla_prep_moments = 0;
    bool asymmetric_readout = false;
};

std::vector<SettingProgram> tomography_programs(const StateProgram &sp);

/// Noise annotation with the case-specific adjustments applied.
AnnotatedCircuit annotate(const SettingProgram &p, const NoiseModel &nm, int noise_case);

/// Samples (or computes exactly) the outcome distribution with the chosen engine.
OutcomeDistribution simulate(const AnnotatedCircuit &ac, const RunOptions &opt, uint64_t seed);

/// Seed of one circuit, derived from the run seed and the circuit tag.
uint64_t derive_seed(uint64_t seed, std::string_view tag);

struct SettingRow {
    std::string tag;
    std::string setting;
    double ps_rate = 0;
    std::optional<double> ps_rate_2sigma;
    double n_pass = 0;
    double n_total = 0;
    bool exact = false;
};

struct TomographyRun {
    ExpectationSet es;
    std::vector<SettingRow> settings;
};

TomographyRun run_tomography(const StateProgram &sp, const DeviceParams &dev, const RunOptions &opt);

struct ObservableRow {
    std::string label;
    ExpectationValue ev;
};

struct Metric {
    std::string name;
    double value = 0;
    std::optional<double> two_sigma;
};

struct ScanPoint {
    double theta = 0;
    ExpectationSet es;
    double fidelity = 0;
    double ps_rate = 0;
};

struct ExperimentReport {
    std::string id;
    std::string kind;  // state | scan | lptm
    std::string engine;
    size_t shots = 0;
    uint64_t seed = 0;
    int noise_case = 1;
    bool noiseless = false;
    std::string device_name;
    std::string device_hash;

    std::vector<ObservableRow> observables;
    std::vector<SettingRow> settings;
    std::vector<Metric> metrics;
    std::optional<Eigen::MatrixXcd> rho;
    std::optional<PTM> ptm_raw;
    std::optional<PTM> ptm;
    std::vector<ScanPoint> scan;
    std::vector<std::string> warnings;
    std::vector<std::string> artifacts;

    const Metric *metric(std::string_view name) const;
};

struct ExperimentInfo {
    std::string pattern;
    std::string description;
};

const std::vector<ExperimentInfo> &experiment_registry();

/// Angles: plain numbers or multiples of pi ("pi/4", "-pi/2", "3pi/4", "3*pi/4").
double parse_angle(std::string_view text);

/// n evenly spaced angles in (-pi, pi], ending at pi.
std::vector<double> theta_grid(size_t n = 17);

/// Throws std::invalid_argument for unknown ids; UnsupportedCircuitError when the
/// engine cannot run the circuit; NumericalError from the CPTP solver.
ExperimentReport run_experiment(const std::string &id, const DeviceParams &dev, const RunOptions &opt);

// Building blocks exposed for tests.

struct LptmData {
    std::vector<ExpectationSet> inputs;
    std::vector<ExpectationSet> outputs;
    std::vector<SettingRow> settings;
};

/// gate: "cnot", "rz" or "rx".
LptmData collect_lptm(const std::string &gate, double theta, const DeviceParams &dev, const RunOptions &opt);

struct LptmResult {
    PTM raw;
    CptpProjection projected;
    PTM ideal;
    double fidelity = 0;
    double fidelity_raw = 0;
    std::optional<double> fidelity_2sigma;  // linearized, from the raw estimate
};

LptmResult reconstruct_lptm(const LptmData &data, const PTM &ideal);

}  // namespace d2lab

#endif

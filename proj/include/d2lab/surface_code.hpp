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

#ifndef D2LAB_SURFACE_CODE_HPP
#define D2LAB_SURFACE_CODE_HPP

#include <array>
#include <complex>
#include <string>
#include <vector>

#include "d2lab/circuit.hpp"
#include "d2lab/pauli.hpp"
#include "d2lab/postselect.hpp"

namespace d2lab {

// Four data qubits D1..D4 of a distance-2 surface code. Stabilizers
// X1X2X3X4, Z1Z2, Z3Z4; logicals Z_L = Z1Z3, X_L = X3X4, Y_L = Z1Y3X4.
struct LogicalBlock {
    std::array<uint32_t, 4> data{0, 1, 2, 3};
    std::string name;  // measurement label prefix; empty for a lone block

    std::vector<PauliString> stabilizers(size_t n) const;
    PauliString logical_x(size_t n) const;
    PauliString logical_z(size_t n) const;
    PauliString logical_y(size_t n) const;
    PauliString logical(size_t n, char basis) const;

    /// Measurement label of data qubit i (1-based) in the given basis.
    std::string label(int i, char basis) const;
};

struct LogicalLayout {
    std::vector<LogicalBlock> blocks;
    std::array<int, 4> pairing{0, 1, 2, 3};  // control D_i -> target D_pairing[i]

    void validate() const;
};

LayerList prep_ft_z_layers(const LogicalBlock &b, int eigen);
LayerList prep_ft_x_layers(const LogicalBlock &b, int sign);
/// alpha|0_L> + beta|1_L> on the chain D1-D2-D3-D4 (not fault-tolerant).
LayerList prep_nft_layers(const LogicalBlock &b, std::complex<double> alpha, std::complex<double> beta);
LayerList transversal_cnot_layers(const LogicalBlock &control, const LogicalBlock &target,
                                  const std::array<int, 4> &pairing = {0, 1, 2, 3});

Circuit prep_ft_z(const LogicalBlock &b, int eigen, size_t num_qubits = 4);
Circuit prep_ft_x(const LogicalBlock &b, int sign, size_t num_qubits = 4);
Circuit prep_nft_arbitrary(const LogicalBlock &b, std::complex<double> alpha, std::complex<double> beta,
                           size_t num_qubits = 4);
Circuit transversal_cnot(const LogicalLayout &layout, size_t num_qubits);

struct LogicalMeasurement {
    char basis;
    std::vector<uint32_t> qubits;
    std::vector<char> bases;
    std::vector<std::string> labels;
    PostSelectionRule rule;
    Observable observable;
};

LogicalMeasurement logical_measure(const LogicalBlock &b, char basis);

/// Appends simultaneous logical measurements of several blocks.
Circuit with_logical_measurements(size_t num_qubits, LayerList body, const std::vector<LogicalMeasurement> &ms);

struct TeleportCircuit {
    LayerList layers;                 // preparation + transversal CNOT, no measurement
    size_t ancilla_prep_layers = 0;   // leading layers holding the ancilla preparation
    LogicalMeasurement ancilla;       // logical Z (axis Z) or X (axis X) on the ancilla
    PostSelectionRule rule;           // ancilla checks and ancilla outcome +1
};

/// Rotation R_axis(theta) on the data block by gate teleportation, given the
/// data preparation layers.
TeleportCircuit teleport_rotation(char axis, double theta, const LogicalBlock &data, const LogicalBlock &ancilla,
                                  const LayerList &data_prep);

/// Ideal encoded state vectors over four qubits.
std::array<std::complex<double>, 16> logical_zero_state();
std::array<std::complex<double>, 16> logical_one_state();

}  // namespace d2lab

#endif

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

#ifndef D2LAB_CIRCUIT_HPP
#define D2LAB_CIRCUIT_HPP

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "d2lab/pauli.hpp"

namespace d2lab {

enum class OpKind : uint8_t { Clifford, Rz, Rx, MeasureZ, Reset, Idle };

/// One scheduled operation. Rotation angles are stored wrapped into (-pi, pi].
struct Instruction {
    OpKind kind = OpKind::Idle;
    GateKind gate = GateKind::H;  // meaningful for Clifford only
    std::array<uint32_t, 2> qubits{};
    double angle = 0;
    std::string label;  // measurement label for MeasureZ

    static Instruction clifford(GateKind g, uint32_t q);
    static Instruction clifford(GateKind g, uint32_t a, uint32_t b);
    static Instruction rz(uint32_t q, double theta);
    static Instruction rx(uint32_t q, double theta);
    static Instruction measure_z(uint32_t q, std::string label);
    static Instruction reset(uint32_t q);
    static Instruction idle(uint32_t q);

    size_t arity() const { return kind == OpKind::Clifford && is_two_qubit(gate) ? 2 : 1; }
    std::span<const uint32_t> targets() const { return {qubits.data(), arity()}; }
    bool is_two_qubit_gate() const { return arity() == 2; }
    /// Rz, S, S_DAG, Z: executed as a frame update with zero duration.
    bool is_virtual() const;
    /// The gate as a Clifford, folding Rz/Rx at multiples of pi/2. Empty otherwise.
    std::optional<CliffordGate> as_clifford() const;
    /// True when the rotation is an exact identity (angle 0).
    bool is_identity_rotation() const;

    std::string str() const;
    bool operator==(const Instruction &) const = default;
};

using Moment = std::vector<Instruction>;

struct MeasurementRecord {
    uint32_t qubit;
    std::string label;
    size_t moment;
};

/// Moment-scheduled circuit. Within a moment each qubit appears exactly once
/// (explicit Idle fills qubits that do nothing). Immutable after construction.
class Circuit {
   public:
    Circuit() = default;
    Circuit(size_t num_qubits, std::vector<Moment> moments);

    size_t num_qubits() const { return n_; }
    const std::vector<Moment> &moments() const { return moments_; }
    const std::vector<MeasurementRecord> &measurements() const { return measurements_; }
    /// measurement index -> label
    std::map<size_t, std::string> measurement_labels() const;
    std::optional<size_t> measurement_index(const std::string &label) const;

    /// Device names for each local qubit (e.g. "q3"); defaults to "q<k+1>".
    const std::vector<std::string> &qubit_names() const { return names_; }
    Circuit with_qubit_names(std::vector<std::string> names) const;

    bool is_clifford() const;
    /// Line-oriented text: one moment per line, instructions separated by "; ".
    std::string to_text() const;
    static Circuit from_text(const std::string &text);
    /// FNV-1a of the text form, as 16 hex digits.
    std::string hash() const;

    bool operator==(const Circuit &other) const { return n_ == other.n_ && moments_ == other.moments_; }

   private:
    void validate();

    size_t n_ = 0;
    std::vector<Moment> moments_;
    std::vector<MeasurementRecord> measurements_;
    std::vector<std::string> names_;
};

/// Builds moments from an instruction list. `barriers` holds positions k meaning
/// "barrier before instruction k". Each barrier-delimited group is one moment;
/// a qubit used twice inside a group is an error. Unused qubits get Idle.
Circuit schedule(size_t num_qubits, std::span<const Instruction> instructions, std::span<const size_t> barriers);

struct FlatCircuit {
    std::vector<Instruction> instructions;
    std::vector<size_t> barriers;
};
FlatCircuit flatten(const Circuit &c);

/// A group of instructions meant to run simultaneously.
using Layer = std::vector<Instruction>;
using LayerList = std::vector<Layer>;

Circuit schedule_layers(size_t num_qubits, const LayerList &layers);

/// Merges two independent layer programs, overlapping single-qubit layers and
/// staggering two-qubit layers so that no moment mixes 1q gates and CZs.
LayerList interleave(const LayerList &a, const LayerList &b);

/// Appends basis changes (X: H, Y: S_DAG then H) and a final MeasureZ layer.
/// Labels default to "m<k+1><basis>" using positions in `qubits`.
LayerList measurement_layers(std::span<const uint32_t> qubits, std::span<const char> bases,
                             std::span<const std::string> labels);

Circuit compile_measurement_basis(const Circuit &c, std::span<const uint32_t> qubits, std::span<const char> bases,
                                  std::span<const std::string> labels = {});

}  // namespace d2lab

#endif

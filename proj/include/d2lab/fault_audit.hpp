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

#ifndef D2LAB_FAULT_AUDIT_HPP
#define D2LAB_FAULT_AUDIT_HPP

#include <array>
#include <set>
#include <string>
#include <vector>

#include "d2lab/circuit.hpp"
#include "d2lab/pauli.hpp"
#include "d2lab/surface_code.hpp"

namespace d2lab {

enum class FaultClass { Trivial, Detected, Logical };
const char *fault_class_name(FaultClass c);

struct FaultLocation {
    int moment = -1;          // -1: before the first moment (initialization)
    std::string instruction;  // the instruction the fault follows, "init" otherwise
    uint32_t qubit = 0;
    char pauli = 'X';
};

struct FaultOutcome {
    FaultLocation where;
    PauliString propagated;  // phase dropped
    FaultClass cls;
};

struct AuditOptions {
    // Grant only the code stabilizers as harmless, as for a preparation of an
    // unknown logical state. Otherwise the full stabilizer group of the ideal
    // output state is used.
    bool arbitrary_logical_state = false;
    unsigned threads = 0;
};

struct AuditReport {
    std::array<size_t, 3> counts{};  // indexed by FaultClass
    std::vector<FaultOutcome> outcomes;

    size_t count(FaultClass c) const { return counts[static_cast<int>(c)]; }
    std::vector<FaultOutcome> of_class(FaultClass c) const;
    /// Distinct propagated patterns on `block` of weight >= min_weight whose
    /// non-identity factors all equal `type`, e.g. "IXXI".
    std::set<std::string> patterns(const LogicalBlock &block, char type, size_t min_weight = 2) const;
};

/// Injects X, Y and Z at initialization and after every instruction of a
/// measurement-free Clifford circuit, propagates each to the end and
/// classifies it against the stabilizers of `blocks`.
AuditReport fault_injection_audit(const Circuit &c, const std::vector<LogicalBlock> &blocks,
                                  const AuditOptions &opt = {});

struct MeasurementFault {
    int position;  // data position 1..4
    char pauli;
};

/// Single-qubit faults right before a logical measurement that satisfy every
/// post-selection condition and still flip the logical value.
std::vector<MeasurementFault> undetected_readout_faults(const LogicalMeasurement &m);

}  // namespace d2lab

#endif

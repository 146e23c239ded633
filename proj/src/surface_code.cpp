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

#include "d2lab/surface_code.hpp"

#include <cmath>
#include <numbers>
#include <set>

#include "d2lab/errors.hpp"

namespace d2lab {

namespace {

using I = Instruction;

uint32_t D(const LogicalBlock &b, int i) { return b.data[i - 1]; }

PauliString on_block(size_t n, const LogicalBlock &b, std::initializer_list<std::pair<int, char>> ops) {
    PauliString p(n);
    for (auto [i, op] : ops) {
        if (D(b, i) >= n) {
            throw DimensionError("block qubit outside register");
        }
        p.set_op(D(b, i), op);
    }
    return p;
}

}  // namespace

std::vector<PauliString> LogicalBlock::stabilizers(size_t n) const {
    return {on_block(n, *this, {{1, 'X'}, {2, 'X'}, {3, 'X'}, {4, 'X'}}), on_block(n, *this, {{1, 'Z'}, {2, 'Z'}}),
            on_block(n, *this, {{3, 'Z'}, {4, 'Z'}})};
}

PauliString LogicalBlock::logical_x(size_t n) const { return on_block(n, *this, {{3, 'X'}, {4, 'X'}}); }
PauliString LogicalBlock::logical_z(size_t n) const { return on_block(n, *this, {{1, 'Z'}, {3, 'Z'}}); }
PauliString LogicalBlock::logical_y(size_t n) const { return on_block(n, *this, {{1, 'Z'}, {3, 'Y'}, {4, 'X'}}); }

PauliString LogicalBlock::logical(size_t n, char basis) const {
    switch (basis) {
        case 'X':
            return logical_x(n);
        case 'Y':
            return logical_y(n);
        case 'Z':
            return logical_z(n);
        case 'I':
            return PauliString(n);
    }
    throw std::invalid_argument(std::string("unknown logical basis '") + basis + "'");
}

std::string LogicalBlock::label(int i, char basis) const {
    std::string l = "m" + std::to_string(i) + char(std::tolower(basis));
    return name.empty() ? l : name + "_" + l;
}

void LogicalLayout::validate() const {
    std::set<uint32_t> seen;
    for (const auto &b : blocks) {
        for (auto q : b.data) {
            if (!seen.insert(q).second) {
                throw CircuitError("logical blocks overlap on qubit " + std::to_string(q));
            }
        }
    }
    std::set<int> targets(pairing.begin(), pairing.end());
    if (targets.size() != 4 || *targets.begin() != 0 || *targets.rbegin() != 3) {
        throw CircuitError("transversal pairing must be a permutation of the four data positions");
    }
}

LayerList prep_ft_z_layers(const LogicalBlock &b, int eigen) {
    if (eigen != 0 && eigen != 1) {
        throw std::invalid_argument("eigen must be 0 or 1");
    }
    // CNOT 1->2, then CNOT 1->4 and 2->3, each CNOT compiled as H.CZ.H on the target.
    LayerList l = {
        {I::clifford(GateKind::H, D(b, 1)), I::clifford(GateKind::H, D(b, 2))},
        {I::clifford(GateKind::CZ, D(b, 1), D(b, 2))},
        {I::clifford(GateKind::H, D(b, 2)), I::clifford(GateKind::H, D(b, 3)), I::clifford(GateKind::H, D(b, 4))},
        {I::clifford(GateKind::CZ, D(b, 1), D(b, 4)), I::clifford(GateKind::CZ, D(b, 2), D(b, 3))},
        {I::clifford(GateKind::H, D(b, 3)), I::clifford(GateKind::H, D(b, 4))},
    };
    if (eigen == 1) {
        l.push_back({I::clifford(GateKind::X, D(b, 3)), I::clifford(GateKind::X, D(b, 4))});
    }
    return l;
}

LayerList prep_ft_x_layers(const LogicalBlock &b, int sign) {
    if (sign != 1 && sign != -1) {
        throw std::invalid_argument("sign must be +1 or -1");
    }
    // Two Bell pairs (D1,D2) and (D3,D4).
    LayerList l = {
        {I::clifford(GateKind::H, D(b, 1)), I::clifford(GateKind::H, D(b, 2)), I::clifford(GateKind::H, D(b, 3)),
         I::clifford(GateKind::H, D(b, 4))},
        {I::clifford(GateKind::CZ, D(b, 1), D(b, 2)), I::clifford(GateKind::CZ, D(b, 3), D(b, 4))},
        {I::clifford(GateKind::H, D(b, 2)), I::clifford(GateKind::H, D(b, 4))},
    };
    if (sign == -1) {
        l.push_back({I::clifford(GateKind::Z, D(b, 1)), I::clifford(GateKind::Z, D(b, 3))});
    }
    return l;
}

LayerList prep_nft_layers(const LogicalBlock &b, std::complex<double> alpha, std::complex<double> beta) {
    double norm = std::norm(alpha) + std::norm(beta);
    if (!std::isfinite(norm) || std::abs(norm - 1) > 1e-9) {
        throw std::invalid_argument("logical amplitudes must satisfy |alpha|^2 + |beta|^2 = 1");
    }
    // D3 carries alpha|0> + beta|1>, D2 a |+>; CNOT 2->3 then fan out along
    // the chain with CNOT 3->4 and CNOT 2->1.
    double t = 2 * std::atan2(std::abs(beta), std::abs(alpha));
    // Rx(t)|0> carries a relative phase -i on |1>, undone by Rz. With a zero
    // amplitude the phase is global and the Rz is dropped.
    double lambda = 0;
    if (std::abs(alpha) > 0 && std::abs(beta) > 0) {
        lambda = std::arg(beta) - std::arg(alpha) + std::numbers::pi / 2;
    }
    LayerList l = {{I::rx(D(b, 3), t), I::clifford(GateKind::H, D(b, 2))}};
    auto rz = I::rz(D(b, 3), lambda);
    if (!rz.is_identity_rotation()) {
        l.push_back({rz});
    }
    l.push_back({I::clifford(GateKind::H, D(b, 3))});
    l.push_back({I::clifford(GateKind::CZ, D(b, 2), D(b, 3))});
    l.push_back({I::clifford(GateKind::H, D(b, 3)), I::clifford(GateKind::H, D(b, 4)), I::clifford(GateKind::H, D(b, 1))});
    l.push_back({I::clifford(GateKind::CZ, D(b, 3), D(b, 4)), I::clifford(GateKind::CZ, D(b, 1), D(b, 2))});
    l.push_back({I::clifford(GateKind::H, D(b, 4)), I::clifford(GateKind::H, D(b, 1))});
    return l;
}

LayerList transversal_cnot_layers(const LogicalBlock &control, const LogicalBlock &target,
                                  const std::array<int, 4> &pairing) {
    LogicalLayout layout{{control, target}, pairing};
    layout.validate();
    Layer h, cz1, cz2;
    for (int i = 0; i < 4; ++i) {
        uint32_t t = target.data[pairing[i]];
        h.push_back(I::clifford(GateKind::H, t));
        (i < 2 ? cz1 : cz2).push_back(I::clifford(GateKind::CZ, control.data[i], t));
    }
    return {h, cz1, cz2, h};
}

Circuit prep_ft_z(const LogicalBlock &b, int eigen, size_t num_qubits) {
    return schedule_layers(num_qubits, prep_ft_z_layers(b, eigen));
}

Circuit prep_ft_x(const LogicalBlock &b, int sign, size_t num_qubits) {
    return schedule_layers(num_qubits, prep_ft_x_layers(b, sign));
}

Circuit prep_nft_arbitrary(const LogicalBlock &b, std::complex<double> alpha, std::complex<double> beta,
                           size_t num_qubits) {
    return schedule_layers(num_qubits, prep_nft_layers(b, alpha, beta));
}

Circuit transversal_cnot(const LogicalLayout &layout, size_t num_qubits) {
    if (layout.blocks.size() != 2) {
        throw CircuitError("transversal CNOT needs exactly two blocks");
    }
    return schedule_layers(num_qubits, transversal_cnot_layers(layout.blocks[0], layout.blocks[1], layout.pairing));
}

LogicalMeasurement logical_measure(const LogicalBlock &b, char basis) {
    LogicalMeasurement m;
    m.basis = basis;
    m.qubits.assign(b.data.begin(), b.data.end());
    auto cond = [&](std::string name, std::initializer_list<std::pair<int, char>> items) {
        ParityCondition c;
        c.name = b.name.empty() ? name : b.name + "_" + name;
        for (auto [i, bb] : items) c.labels.push_back(b.label(i, bb));
        return c;
    };
    std::string obs_name = b.name.empty() ? std::string(1, basis) + "_L" : b.name + "_" + basis + "_L";
    switch (basis) {
        case 'Z':
            m.bases = {'Z', 'Z', 'Z', 'Z'};
            m.rule = PostSelectionRule({cond("z12", {{1, 'Z'}, {2, 'Z'}}), cond("z34", {{3, 'Z'}, {4, 'Z'}})});
            m.observable = {obs_name, {b.label(1, 'Z'), b.label(3, 'Z')}};
            break;
        case 'X':
            m.bases = {'X', 'X', 'X', 'X'};
            m.rule = PostSelectionRule({cond("x1234", {{1, 'X'}, {2, 'X'}, {3, 'X'}, {4, 'X'}})});
            m.observable = {obs_name, {b.label(3, 'X'), b.label(4, 'X')}};
            break;
        case 'Y':
            m.bases = {'Z', 'Z', 'Y', 'X'};
            m.rule = PostSelectionRule({cond("z12", {{1, 'Z'}, {2, 'Z'}})});
            m.observable = {obs_name, {b.label(1, 'Z'), b.label(3, 'Y'), b.label(4, 'X')}};
            break;
        default:
            throw std::invalid_argument(std::string("unknown logical basis '") + basis + "'");
    }
    for (int i = 0; i < 4; ++i) {
        m.labels.push_back(b.label(i + 1, m.bases[i]));
    }
    return m;
}

Circuit with_logical_measurements(size_t num_qubits, LayerList body, const std::vector<LogicalMeasurement> &ms) {
    std::vector<uint32_t> qubits;
    std::vector<char> bases;
    std::vector<std::string> labels;
    for (const auto &m : ms) {
        qubits.insert(qubits.end(), m.qubits.begin(), m.qubits.end());
        bases.insert(bases.end(), m.bases.begin(), m.bases.end());
        labels.insert(labels.end(), m.labels.begin(), m.labels.end());
    }
    auto suffix = measurement_layers(qubits, bases, labels);
    body.insert(body.end(), suffix.begin(), suffix.end());
    return schedule_layers(num_qubits, body);
}

TeleportCircuit teleport_rotation(char axis, double theta, const LogicalBlock &data, const LogicalBlock &ancilla,
                                  const LayerList &data_prep) {
    if (!std::isfinite(theta)) {
        throw std::invalid_argument("rotation angle must be finite");
    }
    const double r = std::numbers::sqrt2 / 2;
    std::complex<double> alpha, beta;
    if (axis == 'Z') {
        alpha = r;
        beta = std::polar(r, theta);
    } else if (axis == 'X') {
        alpha = std::cos(theta / 2);
        beta = std::complex<double>(0, -std::sin(theta / 2));
    } else {
        throw std::invalid_argument(std::string("rotation axis must be Z or X, got '") + axis + "'");
    }
    TeleportCircuit t;
    t.layers = interleave(prep_nft_layers(ancilla, alpha, beta), data_prep);
    std::set<uint32_t> anc(ancilla.data.begin(), ancilla.data.end());
    for (size_t k = 0; k < t.layers.size(); ++k) {
        for (const auto &ins : t.layers[k]) {
            if (anc.count(ins.qubits[0])) t.ancilla_prep_layers = k + 1;
        }
    }
    auto cnot = axis == 'Z' ? transversal_cnot_layers(data, ancilla) : transversal_cnot_layers(ancilla, data);
    t.layers.insert(t.layers.end(), cnot.begin(), cnot.end());
    t.ancilla = logical_measure(ancilla, axis);
    ParityCondition plus{ancilla.name.empty() ? "ancilla_plus" : ancilla.name + "_plus", t.ancilla.observable.labels};
    t.rule = t.ancilla.rule & PostSelectionRule({plus});
    return t;
}

std::array<std::complex<double>, 16> logical_zero_state() {
    std::array<std::complex<double>, 16> s{};
    s[0b0000] = s[0b1111] = std::numbers::sqrt2 / 2;
    return s;
}

std::array<std::complex<double>, 16> logical_one_state() {
    std::array<std::complex<double>, 16> s{};
    s[0b0011] = s[0b1100] = std::numbers::sqrt2 / 2;
    return s;
}

}  // namespace d2lab

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

#include "d2lab/circuit.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numbers>
#include <set>
#include <sstream>

#include "d2lab/errors.hpp"

namespace d2lab {

namespace {

constexpr double kAngleTol = 1e-12;

double wrap_angle(double theta) {
    if (!std::isfinite(theta)) {
        throw CircuitError("rotation angle must be finite");
    }
    double a = std::remainder(theta, 2 * std::numbers::pi);
    if (a <= -std::numbers::pi) {
        a += 2 * std::numbers::pi;
    }
    return a;
}

bool near(double a, double b) { return std::abs(a - b) < kAngleTol; }

std::string format_double(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, ptr);
}

std::string trim(std::string s) {
    auto not_space = [](unsigned char c) { return !std::isspace(c); };
    s.erase(s.begin(), std::find_if(s.begin(), s.end(), not_space));
    s.erase(std::find_if(s.rbegin(), s.rend(), not_space).base(), s.end());
    return s;
}

uint32_t parse_qubit(const std::string &tok) {
    uint32_t q = 0;
    auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), q);
    if (ec != std::errc() || ptr != tok.data() + tok.size()) {
        throw ParseError("bad qubit index '" + tok + "'");
    }
    return q;
}

}  // namespace

Instruction Instruction::clifford(GateKind g, uint32_t q) {
    auto cg = CliffordGate::one(g, q);
    Instruction ins;
    ins.kind = OpKind::Clifford;
    ins.gate = cg.kind;
    ins.qubits = cg.targets;
    return ins;
}

Instruction Instruction::clifford(GateKind g, uint32_t a, uint32_t b) {
    auto cg = CliffordGate::two(g, a, b);
    Instruction ins;
    ins.kind = OpKind::Clifford;
    ins.gate = cg.kind;
    ins.qubits = cg.targets;
    return ins;
}

Instruction Instruction::rz(uint32_t q, double theta) {
    Instruction ins;
    ins.kind = OpKind::Rz;
    ins.qubits = {q, q};
    ins.angle = wrap_angle(theta);
    return ins;
}

Instruction Instruction::rx(uint32_t q, double theta) {
    Instruction ins;
    ins.kind = OpKind::Rx;
    ins.qubits = {q, q};
    ins.angle = wrap_angle(theta);
    return ins;
}

Instruction Instruction::measure_z(uint32_t q, std::string label) {
    Instruction ins;
    ins.kind = OpKind::MeasureZ;
    ins.qubits = {q, q};
    ins.label = std::move(label);
    return ins;
}

Instruction Instruction::reset(uint32_t q) {
    Instruction ins;
    ins.kind = OpKind::Reset;
    ins.qubits = {q, q};
    return ins;
}

Instruction Instruction::idle(uint32_t q) {
    Instruction ins;
    ins.kind = OpKind::Idle;
    ins.qubits = {q, q};
    return ins;
}

bool Instruction::is_virtual() const {
    return kind == OpKind::Rz || (kind == OpKind::Clifford && is_virtual_z(gate));
}

bool Instruction::is_identity_rotation() const {
    return (kind == OpKind::Rz || kind == OpKind::Rx) && near(angle, 0);
}

std::optional<CliffordGate> Instruction::as_clifford() const {
    using std::numbers::pi;
    switch (kind) {
        case OpKind::Clifford:
            return CliffordGate{gate, qubits};
        case OpKind::Rz:
            if (near(angle, pi / 2)) return CliffordGate::one(GateKind::S, qubits[0]);
            if (near(angle, -pi / 2)) return CliffordGate::one(GateKind::SDag, qubits[0]);
            if (near(angle, pi)) return CliffordGate::one(GateKind::Z, qubits[0]);
            return std::nullopt;
        case OpKind::Rx:
            if (near(angle, pi / 2)) return CliffordGate::one(GateKind::SqrtX, qubits[0]);
            if (near(angle, -pi / 2)) return CliffordGate::one(GateKind::SqrtXDag, qubits[0]);
            if (near(angle, pi)) return CliffordGate::one(GateKind::X, qubits[0]);
            return std::nullopt;
        default:
            return std::nullopt;
    }
}

std::string Instruction::str() const {
    std::string q0 = std::to_string(qubits[0]);
    switch (kind) {
        case OpKind::Clifford:
            if (is_two_qubit(gate)) {
                return std::string(gate_name(gate)) + " " + q0 + "," + std::to_string(qubits[1]);
            }
            return std::string(gate_name(gate)) + " " + q0;
        case OpKind::Rz:
            return "RZ(" + format_double(angle) + ") " + q0;
        case OpKind::Rx:
            return "RX(" + format_double(angle) + ") " + q0;
        case OpKind::MeasureZ:
            return "MZ " + q0 + " " + label;
        case OpKind::Reset:
            return "R " + q0;
        case OpKind::Idle:
            return "I " + q0;
    }
    return "?";
}

Circuit::Circuit(size_t num_qubits, std::vector<Moment> moments) : n_(num_qubits), moments_(std::move(moments)) {
    validate();
    for (size_t q = 0; q < n_; ++q) {
        names_.push_back("q" + std::to_string(q + 1));
    }
}

void Circuit::validate() {
    std::vector<bool> measured(n_, false);
    std::set<std::string> labels;
    for (size_t m = 0; m < moments_.size(); ++m) {
        auto &moment = moments_[m];
        std::vector<bool> used(n_, false);
        for (const auto &ins : moment) {
            for (auto q : ins.targets()) {
                if (q >= n_) {
                    throw CircuitError("instruction '" + ins.str() + "' targets qubit outside 0.." +
                                       std::to_string(n_ - 1));
                }
                if (used[q]) {
                    throw CircuitError("qubit " + std::to_string(q) + " appears twice in moment " + std::to_string(m));
                }
                used[q] = true;
                if (measured[q] && ins.kind != OpKind::Idle && ins.kind != OpKind::Reset) {
                    throw CircuitError("qubit " + std::to_string(q) + " is used after being measured");
                }
            }
            if (ins.kind == OpKind::MeasureZ) {
                if (ins.label.empty()) {
                    throw CircuitError("measurement without a label");
                }
                if (!labels.insert(ins.label).second) {
                    throw CircuitError("duplicate measurement label '" + ins.label + "'");
                }
                measured[ins.qubits[0]] = true;
                measurements_.push_back({ins.qubits[0], ins.label, m});
            } else if (ins.kind == OpKind::Reset) {
                measured[ins.qubits[0]] = false;
            }
        }
        for (uint32_t q = 0; q < n_; ++q) {
            if (!used[q]) {
                moment.push_back(Instruction::idle(q));
            }
        }
        std::stable_sort(moment.begin(), moment.end(),
                         [](const Instruction &a, const Instruction &b) { return a.qubits[0] < b.qubits[0]; });
    }
}

std::map<size_t, std::string> Circuit::measurement_labels() const {
    std::map<size_t, std::string> out;
    for (size_t k = 0; k < measurements_.size(); ++k) {
        out[k] = measurements_[k].label;
    }
    return out;
}

std::optional<size_t> Circuit::measurement_index(const std::string &label) const {
    for (size_t k = 0; k < measurements_.size(); ++k) {
        if (measurements_[k].label == label) {
            return k;
        }
    }
    return std::nullopt;
}

Circuit Circuit::with_qubit_names(std::vector<std::string> names) const {
    if (names.size() != n_) {
        throw DimensionError("expected " + std::to_string(n_) + " qubit names, got " + std::to_string(names.size()));
    }
    Circuit out = *this;
    out.names_ = std::move(names);
    return out;
}

bool Circuit::is_clifford() const {
    for (const auto &moment : moments_) {
        for (const auto &ins : moment) {
            if ((ins.kind == OpKind::Rz || ins.kind == OpKind::Rx) && !ins.is_identity_rotation() &&
                !ins.as_clifford()) {
                return false;
            }
        }
    }
    return true;
}

std::string Circuit::to_text() const {
    std::string out = "QUBITS " + std::to_string(n_) + "\n";
    for (const auto &moment : moments_) {
        for (size_t k = 0; k < moment.size(); ++k) {
            if (k) {
                out += "; ";
            }
            out += moment[k].str();
        }
        out += "\n";
    }
    return out;
}

Circuit Circuit::from_text(const std::string &text) {
    std::istringstream in(text);
    std::string line;
    size_t n = 0;
    bool have_header = false;
    std::vector<Moment> moments;
    while (std::getline(in, line)) {
        line = trim(line);
        if (line.empty() || line[0] == '#') {
            continue;
        }
        if (!have_header) {
            if (!line.starts_with("QUBITS ")) {
                throw ParseError("circuit text must start with 'QUBITS <n>'");
            }
            n = parse_qubit(trim(line.substr(7)));
            have_header = true;
            continue;
        }
        Moment moment;
        std::istringstream parts(line);
        std::string part;
        while (std::getline(parts, part, ';')) {
            part = trim(part);
            if (part.empty()) {
                continue;
            }
            std::istringstream toks(part);
            std::string head, targets, label;
            toks >> head >> targets >> label;
            if (head.empty() || targets.empty()) {
                throw ParseError("malformed instruction '" + part + "'");
            }
            auto paren = head.find('(');
            if (paren != std::string::npos) {
                if (head.back() != ')') {
                    throw ParseError("malformed rotation '" + head + "'");
                }
                std::string name = head.substr(0, paren);
                std::string arg = head.substr(paren + 1, head.size() - paren - 2);
                double theta = 0;
                auto [ptr, ec] = std::from_chars(arg.data(), arg.data() + arg.size(), theta);
                if (ec != std::errc() || ptr != arg.data() + arg.size()) {
                    throw ParseError("bad angle '" + arg + "'");
                }
                if (name == "RZ") {
                    moment.push_back(Instruction::rz(parse_qubit(targets), theta));
                } else if (name == "RX") {
                    moment.push_back(Instruction::rx(parse_qubit(targets), theta));
                } else {
                    throw ParseError("unknown rotation '" + name + "'");
                }
            } else if (head == "MZ") {
                moment.push_back(Instruction::measure_z(parse_qubit(targets), label));
            } else if (head == "R") {
                moment.push_back(Instruction::reset(parse_qubit(targets)));
            } else if (head == "I") {
                moment.push_back(Instruction::idle(parse_qubit(targets)));
            } else {
                GateKind g = gate_from_name(head);
                auto comma = targets.find(',');
                if (is_two_qubit(g)) {
                    if (comma == std::string::npos) {
                        throw ParseError(head + " needs two targets");
                    }
                    moment.push_back(Instruction::clifford(g, parse_qubit(targets.substr(0, comma)),
                                                           parse_qubit(targets.substr(comma + 1))));
                } else {
                    moment.push_back(Instruction::clifford(g, parse_qubit(targets)));
                }
            }
        }
        moments.push_back(std::move(moment));
    }
    if (!have_header) {
        throw ParseError("circuit text must start with 'QUBITS <n>'");
    }
    return Circuit(n, std::move(moments));
}

std::string Circuit::hash() const {
    uint64_t h = 1469598103934665603ull;
    for (unsigned char c : to_text()) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

Circuit schedule(size_t num_qubits, std::span<const Instruction> instructions, std::span<const size_t> barriers) {
    std::vector<size_t> cuts(barriers.begin(), barriers.end());
    for (auto b : cuts) {
        if (b > instructions.size()) {
            throw CircuitError("barrier position " + std::to_string(b) + " past end of instruction list");
        }
    }
    cuts.push_back(0);
    cuts.push_back(instructions.size());
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

    std::vector<Moment> moments;
    for (size_t g = 0; g + 1 < cuts.size(); ++g) {
        if (cuts[g] == cuts[g + 1]) {
            continue;
        }
        Moment moment;
        std::vector<bool> used(num_qubits, false);
        for (size_t k = cuts[g]; k < cuts[g + 1]; ++k) {
            const auto &ins = instructions[k];
            for (auto q : ins.targets()) {
                if (q >= num_qubits) {
                    throw CircuitError("instruction '" + ins.str() + "' targets qubit outside register");
                }
                if (used[q]) {
                    throw CircuitError("qubit conflict in simultaneous group: qubit " + std::to_string(q) +
                                       " used twice (instruction '" + ins.str() + "')");
                }
                used[q] = true;
            }
            moment.push_back(ins);
        }
        moments.push_back(std::move(moment));
    }
    return Circuit(num_qubits, std::move(moments));
}

FlatCircuit flatten(const Circuit &c) {
    FlatCircuit out;
    for (const auto &moment : c.moments()) {
        if (!out.instructions.empty()) {
            out.barriers.push_back(out.instructions.size());
        }
        out.instructions.insert(out.instructions.end(), moment.begin(), moment.end());
    }
    return out;
}

Circuit schedule_layers(size_t num_qubits, const LayerList &layers) {
    std::vector<Instruction> flat;
    std::vector<size_t> barriers;
    for (const auto &layer : layers) {
        if (layer.empty()) {
            continue;
        }
        barriers.push_back(flat.size());
        flat.insert(flat.end(), layer.begin(), layer.end());
    }
    return schedule(num_qubits, flat, barriers);
}

namespace {

enum class LayerClass { Single, TwoQubit, Virtual, Measure };

LayerClass classify(const Layer &layer) {
    bool all_virtual = true;
    for (const auto &ins : layer) {
        if (ins.is_two_qubit_gate()) {
            return LayerClass::TwoQubit;
        }
        if (ins.kind == OpKind::MeasureZ) {
            return LayerClass::Measure;
        }
        all_virtual = all_virtual && (ins.is_virtual() || ins.kind == OpKind::Idle);
    }
    return all_virtual ? LayerClass::Virtual : LayerClass::Single;
}

}  // namespace

LayerList interleave(const LayerList &a, const LayerList &b) {
    LayerList out;
    size_t i = 0, j = 0;
    while (i < a.size() || j < b.size()) {
        if (i == a.size()) {
            out.push_back(b[j++]);
            continue;
        }
        if (j == b.size()) {
            out.push_back(a[i++]);
            continue;
        }
        auto ca = classify(a[i]);
        auto cb = classify(b[j]);
        if (ca == cb && ca != LayerClass::TwoQubit) {
            Layer merged = a[i++];
            merged.insert(merged.end(), b[j].begin(), b[j].end());
            ++j;
            out.push_back(std::move(merged));
        } else if (b.size() - j > a.size() - i) {
            // The longer program sits on the critical path.
            out.push_back(b[j++]);
        } else {
            out.push_back(a[i++]);
        }
    }
    return out;
}

LayerList measurement_layers(std::span<const uint32_t> qubits, std::span<const char> bases,
                             std::span<const std::string> labels) {
    if (qubits.size() != bases.size()) {
        throw DimensionError("one basis per measured qubit required");
    }
    if (!labels.empty() && labels.size() != qubits.size()) {
        throw DimensionError("one label per measured qubit required");
    }
    Layer phase, hadamard, measure;
    for (size_t k = 0; k < qubits.size(); ++k) {
        char b = bases[k];
        if (b == 'Y') {
            phase.push_back(Instruction::clifford(GateKind::SDag, qubits[k]));
            hadamard.push_back(Instruction::clifford(GateKind::H, qubits[k]));
        } else if (b == 'X') {
            hadamard.push_back(Instruction::clifford(GateKind::H, qubits[k]));
        } else if (b != 'Z') {
            throw std::invalid_argument(std::string("unknown measurement basis '") + b + "'");
        }
        std::string label = labels.empty() ? "m" + std::to_string(k + 1) + char(std::tolower(b)) : labels[k];
        measure.push_back(Instruction::measure_z(qubits[k], label));
    }
    LayerList out;
    if (!phase.empty()) out.push_back(std::move(phase));
    if (!hadamard.empty()) out.push_back(std::move(hadamard));
    out.push_back(std::move(measure));
    return out;
}

Circuit compile_measurement_basis(const Circuit &c, std::span<const uint32_t> qubits, std::span<const char> bases,
                                  std::span<const std::string> labels) {
    for (const auto &m : c.measurements()) {
        if (std::find(qubits.begin(), qubits.end(), m.qubit) != qubits.end()) {
            throw CircuitError("qubit " + std::to_string(m.qubit) + " is already measured");
        }
    }
    std::set<uint32_t> seen;
    for (auto q : qubits) {
        if (!seen.insert(q).second) {
            throw CircuitError("qubit " + std::to_string(q) + " listed twice for measurement");
        }
    }
    LayerList layers;
    for (const auto &moment : c.moments()) {
        Layer layer;
        for (const auto &ins : moment) {
            if (ins.kind != OpKind::Idle) {
                layer.push_back(ins);
            }
        }
        // Keep all-idle moments so the timing of the original circuit survives.
        if (layer.empty()) {
            layer = moment;
        }
        layers.push_back(std::move(layer));
    }
    auto suffix = measurement_layers(qubits, bases, labels);
    layers.insert(layers.end(), suffix.begin(), suffix.end());
    return schedule_layers(c.num_qubits(), layers).with_qubit_names(c.qubit_names());
}

}  // namespace d2lab

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

#include "d2lab/pauli.hpp"

#include <bit>

#include "d2lab/errors.hpp"

namespace d2lab {

namespace {

size_t words_for(size_t n) { return (n + 63) / 64; }

void require_same_size(const PauliString &p, const PauliString &q) {
    if (p.size() != q.size()) {
        throw DimensionError(
            "Pauli length mismatch: " + std::to_string(p.size()) + " vs " + std::to_string(q.size()));
    }
}

// Exponent of i picked up by sigma(x1,z1) * sigma(x2,z2) on one qubit.
int product_phase(bool x1, bool z1, bool x2, bool z2) {
    if (x1 && z1) {
        return int(z2) - int(x2);
    }
    if (x1) {
        return z2 ? (x2 ? 1 : -1) : 0;
    }
    if (z1) {
        return x2 ? (z2 ? -1 : 1) : 0;
    }
    return 0;
}

}  // namespace

PauliString::PauliString(size_t num_qubits)
    : n_(num_qubits), xs_(words_for(num_qubits), 0), zs_(words_for(num_qubits), 0) {}

PauliString PauliString::from_text(std::string_view text) {
    uint8_t phase = 0;
    if (text.starts_with("+i")) {
        phase = 1;
        text.remove_prefix(2);
    } else if (text.starts_with("-i")) {
        phase = 3;
        text.remove_prefix(2);
    } else if (text.starts_with("+")) {
        text.remove_prefix(1);
    } else if (text.starts_with("-")) {
        phase = 2;
        text.remove_prefix(1);
    }
    PauliString out(text.size());
    for (size_t k = 0; k < text.size(); ++k) {
        char c = text[k];
        if (c == '_') {
            c = 'I';
        }
        if (c != 'I' && c != 'X' && c != 'Y' && c != 'Z') {
            throw ParseError("bad Pauli character '" + std::string(1, text[k]) + "' at position " + std::to_string(k));
        }
        out.set_op(k, c);
    }
    out.phase_ = phase;
    return out;
}

PauliString PauliString::single(size_t num_qubits, size_t q, char op) {
    if (q >= num_qubits) {
        throw DimensionError("qubit " + std::to_string(q) + " out of range for " + std::to_string(num_qubits));
    }
    PauliString out(num_qubits);
    out.set_op(q, op);
    return out;
}

PauliString PauliString::on(size_t num_qubits, std::span<const uint32_t> qubits, char op) {
    PauliString out(num_qubits);
    for (auto q : qubits) {
        out = multiply(out, single(num_qubits, q, op));
    }
    return out;
}

PauliString PauliString::on(size_t num_qubits, std::initializer_list<uint32_t> qubits, char op) {
    return on(num_qubits, std::span<const uint32_t>(qubits.begin(), qubits.size()), op);
}

char PauliString::op(size_t q) const {
    static constexpr char table[4] = {'I', 'X', 'Z', 'Y'};
    return table[int(x(q)) | (int(z(q)) << 1)];
}

void PauliString::set(size_t q, bool x, bool z) {
    uint64_t bit = uint64_t{1} << (q % 64);
    xs_[q / 64] = x ? (xs_[q / 64] | bit) : (xs_[q / 64] & ~bit);
    zs_[q / 64] = z ? (zs_[q / 64] | bit) : (zs_[q / 64] & ~bit);
}

void PauliString::set_op(size_t q, char op) {
    switch (op) {
        case 'I':
            set(q, false, false);
            break;
        case 'X':
            set(q, true, false);
            break;
        case 'Y':
            set(q, true, true);
            break;
        case 'Z':
            set(q, false, true);
            break;
        default:
            throw ParseError(std::string("bad Pauli operator '") + op + "'");
    }
}

int PauliString::sign() const {
    if (phase_ & 1) {
        throw std::logic_error("Pauli " + str() + " has an imaginary phase");
    }
    return phase_ == 0 ? 1 : -1;
}

size_t PauliString::weight() const {
    size_t w = 0;
    for (size_t k = 0; k < xs_.size(); ++k) {
        w += std::popcount(xs_[k] | zs_[k]);
    }
    return w;
}

bool PauliString::is_identity() const {
    for (size_t k = 0; k < xs_.size(); ++k) {
        if (xs_[k] | zs_[k]) {
            return false;
        }
    }
    return true;
}

bool PauliString::same_support(const PauliString &other) const {
    return n_ == other.n_ && xs_ == other.xs_ && zs_ == other.zs_;
}

std::string PauliString::str() const {
    static constexpr const char *prefix[4] = {"+", "+i", "-", "-i"};
    std::string out = prefix[phase_];
    for (size_t q = 0; q < n_; ++q) {
        out += op(q);
    }
    return out;
}

PauliString multiply(const PauliString &p, const PauliString &q) {
    require_same_size(p, q);
    PauliString out(p.size());
    int phase = p.phase() + q.phase();
    for (size_t k = 0; k < p.size(); ++k) {
        bool x1 = p.x(k), z1 = p.z(k), x2 = q.x(k), z2 = q.z(k);
        phase += product_phase(x1, z1, x2, z2);
        out.set(k, x1 != x2, z1 != z2);
    }
    out.set_phase(uint8_t(((phase % 4) + 4) % 4));
    return out;
}

bool commutes(const PauliString &p, const PauliString &q) {
    require_same_size(p, q);
    auto px = p.x_words(), pz = p.z_words(), qx = q.x_words(), qz = q.z_words();
    int parity = 0;
    for (size_t k = 0; k < px.size(); ++k) {
        parity ^= std::popcount((px[k] & qz[k]) ^ (pz[k] & qx[k])) & 1;
    }
    return parity == 0;
}

GateKind inverse(GateKind k) {
    switch (k) {
        case GateKind::SqrtX:
            return GateKind::SqrtXDag;
        case GateKind::SqrtXDag:
            return GateKind::SqrtX;
        case GateKind::S:
            return GateKind::SDag;
        case GateKind::SDag:
            return GateKind::S;
        default:
            return k;
    }
}

std::string_view gate_name(GateKind k) {
    switch (k) {
        case GateKind::H:
            return "H";
        case GateKind::SqrtX:
            return "SQRT_X";
        case GateKind::SqrtXDag:
            return "SQRT_X_DAG";
        case GateKind::S:
            return "S";
        case GateKind::SDag:
            return "S_DAG";
        case GateKind::X:
            return "X";
        case GateKind::Y:
            return "Y";
        case GateKind::Z:
            return "Z";
        case GateKind::CZ:
            return "CZ";
        case GateKind::CNOT:
            return "CNOT";
    }
    return "?";
}

GateKind gate_from_name(std::string_view name) {
    for (auto k : {GateKind::H, GateKind::SqrtX, GateKind::SqrtXDag, GateKind::S, GateKind::SDag, GateKind::X,
                   GateKind::Y, GateKind::Z, GateKind::CZ, GateKind::CNOT}) {
        if (gate_name(k) == name) {
            return k;
        }
    }
    throw ParseError("unknown gate '" + std::string(name) + "'");
}

CliffordGate CliffordGate::one(GateKind k, uint32_t q) {
    if (is_two_qubit(k)) {
        throw std::invalid_argument(std::string(gate_name(k)) + " needs two targets");
    }
    return CliffordGate{k, {q, q}};
}

CliffordGate CliffordGate::two(GateKind k, uint32_t a, uint32_t b) {
    if (!is_two_qubit(k)) {
        throw std::invalid_argument(std::string(gate_name(k)) + " takes one target");
    }
    if (a == b) {
        throw std::invalid_argument(std::string(gate_name(k)) + " targets must differ");
    }
    return CliffordGate{k, {a, b}};
}

namespace {

// Images g X_t g^dag and g Z_t g^dag for each target t, as (ops on targets, sign).
struct LocalImage {
    std::array<char, 2> ops;
    bool negative;
};

std::array<LocalImage, 4> images(GateKind k) {
    // Order: X_a, Z_a, X_b, Z_b. Unused entries for one-qubit gates.
    switch (k) {
        case GateKind::H:
            return {{{{'Z', 'I'}, false}, {{'X', 'I'}, false}}};
        case GateKind::S:
            return {{{{'Y', 'I'}, false}, {{'Z', 'I'}, false}}};
        case GateKind::SDag:
            return {{{{'Y', 'I'}, true}, {{'Z', 'I'}, false}}};
        case GateKind::SqrtX:
            return {{{{'X', 'I'}, false}, {{'Y', 'I'}, true}}};
        case GateKind::SqrtXDag:
            return {{{{'X', 'I'}, false}, {{'Y', 'I'}, false}}};
        case GateKind::X:
            return {{{{'X', 'I'}, false}, {{'Z', 'I'}, true}}};
        case GateKind::Y:
            return {{{{'X', 'I'}, true}, {{'Z', 'I'}, true}}};
        case GateKind::Z:
            return {{{{'X', 'I'}, true}, {{'Z', 'I'}, false}}};
        case GateKind::CZ:
            return {{{{'X', 'Z'}, false}, {{'Z', 'I'}, false}, {{'Z', 'X'}, false}, {{'I', 'Z'}, false}}};
        case GateKind::CNOT:
            return {{{{'X', 'X'}, false}, {{'Z', 'I'}, false}, {{'I', 'X'}, false}, {{'Z', 'Z'}, false}}};
    }
    return {};
}

}  // namespace

PauliString conjugate(const PauliString &p, const CliffordGate &g) {
    const size_t n = p.size();
    const size_t arity = g.arity();
    for (size_t t = 0; t < arity; ++t) {
        if (g.targets[t] >= n) {
            throw DimensionError("gate target " + std::to_string(g.targets[t]) + " out of range for " +
                                 std::to_string(n) + " qubits");
        }
    }
    auto imgs = images(g.kind);
    auto image_string = [&](const LocalImage &img) {
        PauliString s(n);
        for (size_t t = 0; t < arity; ++t) {
            s.set_op(g.targets[t], img.ops[t]);
        }
        s.set_phase(img.negative ? 2 : 0);
        return s;
    };

    PauliString result = p;
    for (size_t t = 0; t < arity; ++t) {
        result.set(g.targets[t], false, false);
    }
    for (size_t t = 0; t < arity; ++t) {
        bool x = p.x(g.targets[t]);
        bool z = p.z(g.targets[t]);
        if (x && z) {
            result.mul_phase(1);  // Y = i X Z
        }
        if (x) {
            result = multiply(result, image_string(imgs[2 * t]));
        }
        if (z) {
            result = multiply(result, image_string(imgs[2 * t + 1]));
        }
    }
    return result;
}

}  // namespace d2lab

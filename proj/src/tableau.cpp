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

#include "d2lab/tableau.hpp"

#include "d2lab/errors.hpp"
#include "d2lab/rng.hpp"

namespace d2lab {

StabilizerTableau::StabilizerTableau(size_t num_qubits) : n_(num_qubits) {
    rows_.reserve(2 * n_);
    for (size_t q = 0; q < n_; ++q) {
        rows_.push_back(PauliString::single(n_, q, 'X'));
    }
    for (size_t q = 0; q < n_; ++q) {
        rows_.push_back(PauliString::single(n_, q, 'Z'));
    }
}

void StabilizerTableau::apply(const CliffordGate &g) {
    for (auto &row : rows_) {
        row = conjugate(row, g);
    }
}

void StabilizerTableau::apply_pauli(const PauliString &p) {
    if (p.size() != n_) {
        throw DimensionError("Pauli size does not match tableau");
    }
    for (size_t k = n_; k < 2 * n_; ++k) {
        if (!commutes(rows_[k], p)) {
            rows_[k].mul_phase(2);
        }
    }
}

PauliString StabilizerTableau::product_of_stabilizers_for(const PauliString &p) const {
    // Stabilizer k appears in the decomposition of p iff destabilizer k
    // anticommutes with p.
    PauliString acc(n_);
    for (size_t k = 0; k < n_; ++k) {
        if (!commutes(rows_[k], p)) {
            acc = multiply(acc, rows_[n_ + k]);
        }
    }
    return acc;
}

std::optional<bool> StabilizerTableau::peek_z(size_t q) const {
    auto zq = PauliString::single(n_, q, 'Z');
    int e = expectation(zq);
    if (e == 0) {
        return std::nullopt;
    }
    return e < 0;
}

bool StabilizerTableau::measure_z(size_t q, const std::function<bool()> &coin) {
    if (q >= n_) {
        throw DimensionError("measured qubit out of range");
    }
    size_t pivot = 2 * n_;
    for (size_t k = n_; k < 2 * n_; ++k) {
        if (rows_[k].x(q)) {
            pivot = k;
            break;
        }
    }
    if (pivot == 2 * n_) {
        return *peek_z(q);
    }
    for (size_t k = 0; k < 2 * n_; ++k) {
        if (k != pivot && rows_[k].x(q)) {
            rows_[k] = multiply(rows_[k], rows_[pivot]);
            if (k < n_) {
                rows_[k].set_phase(0);
            }
        }
    }
    bool outcome = coin();
    rows_[pivot - n_] = rows_[pivot];
    rows_[pivot - n_].set_phase(0);
    rows_[pivot] = PauliString::single(n_, q, 'Z');
    if (outcome) {
        rows_[pivot].mul_phase(2);
    }
    return outcome;
}

void StabilizerTableau::reset(size_t q, const std::function<bool()> &coin) {
    if (measure_z(q, coin)) {
        apply(CliffordGate::one(GateKind::X, static_cast<uint32_t>(q)));
    }
}

int StabilizerTableau::expectation(const PauliString &p) const {
    if (p.size() != n_) {
        throw DimensionError("Pauli size does not match tableau");
    }
    for (size_t k = n_; k < 2 * n_; ++k) {
        if (!commutes(rows_[k], p)) {
            return 0;
        }
    }
    auto acc = product_of_stabilizers_for(p);
    if (!acc.same_support(p)) {
        throw std::logic_error("tableau lost rank");
    }
    // acc = i^a P_xz and p = i^b P_xz, so p = i^(b-a) acc.
    int rel = (p.phase() - acc.phase() + 4) % 4;
    if (rel == 0) return 1;
    if (rel == 2) return -1;
    throw std::invalid_argument("expectation of a non-Hermitian Pauli");
}

bool StabilizerTableau::is_consistent() const {
    for (size_t i = 0; i < n_; ++i) {
        for (size_t j = 0; j < n_; ++j) {
            if (!commutes(rows_[n_ + i], rows_[n_ + j])) return false;
            if (commutes(rows_[i], rows_[n_ + j]) != (i != j)) return false;
        }
    }
    return true;
}

namespace {

void apply_instruction(StabilizerTableau &t, const Instruction &ins, const std::function<bool()> &coin,
                       std::vector<uint8_t> &bits) {
    switch (ins.kind) {
        case OpKind::Idle:
            return;
        case OpKind::MeasureZ:
            bits.push_back(t.measure_z(ins.qubits[0], coin));
            return;
        case OpKind::Reset:
            t.reset(ins.qubits[0], coin);
            return;
        default:
            break;
    }
    if (ins.is_identity_rotation()) {
        return;
    }
    auto g = ins.as_clifford();
    if (!g) {
        throw UnsupportedCircuitError("instruction '" + ins.str() +
                                      "' is not Clifford; run this circuit with the dense engine (--engine dense)");
    }
    t.apply(*g);
}

PauliString site_fault(size_t n, const NoiseSite &s, int draw) {
    PauliString e(n);
    if (s.kind == SiteKind::E1) {
        auto [x, z] = pauli_digit_bits(draw);
        e.set(s.a, x, z);
    } else {
        auto [xa, za] = pauli_digit_bits(draw >> 2);
        auto [xb, zb] = pauli_digit_bits(draw & 3);
        e.set(s.a, xa, za);
        e.set(s.b, xb, zb);
    }
    return e;
}

}  // namespace

std::vector<uint8_t> run_tableau(const Circuit &c, const std::function<bool()> &coin) {
    StabilizerTableau t(c.num_qubits());
    std::vector<uint8_t> bits;
    for (const auto &moment : c.moments()) {
        for (const auto &ins : moment) {
            apply_instruction(t, ins, coin, bits);
        }
    }
    return bits;
}

std::vector<uint8_t> run_tableau_shot(const AnnotatedCircuit &ac, uint64_t seed, uint64_t shot) {
    const auto &c = ac.circuit;
    size_t n = c.num_qubits();
    CounterRng rng(seed, shot);
    uint64_t counter = 0;
    uint64_t coin_counter = kCoinCounterBase;
    auto coin = [&] { return rng.bit_at(coin_counter++); };

    StabilizerTableau t(n);
    auto inject = [&](const NoiseSite &s) {
        int d = sample_site(rng.uniform_at(counter++), s);
        if (d) {
            t.apply_pauli(site_fault(n, s, d));
        }
    };
    for (const auto &s : ac.init_sites) {
        inject(s);
    }
    std::vector<uint8_t> bits;
    for (size_t m = 0; m < c.moments().size(); ++m) {
        for (const auto &ins : c.moments()[m]) {
            apply_instruction(t, ins, coin, bits);
        }
        for (const auto &s : ac.moment_sites[m]) {
            inject(s);
        }
    }
    for (size_t k = 0; k < bits.size(); ++k) {
        double p = bits[k] ? ac.readout[k].flip_if_1 : ac.readout[k].flip_if_0;
        if (rng.uniform_at(counter++) < p) {
            bits[k] ^= 1;
        }
    }
    return bits;
}

}  // namespace d2lab

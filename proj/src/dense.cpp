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

#include "d2lab/dense.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>

#include "d2lab/errors.hpp"
#include "d2lab/rng.hpp"

namespace d2lab {

namespace dense {

namespace {

const cplx I1{0, 1};

// P|j> = omega_j |j ^ xmask>.
struct PauliAction {
    size_t xmask = 0;
    std::vector<cplx> omega;
};

PauliAction pauli_action(const PauliString &p) {
    size_t n = p.size();
    size_t d = size_t{1} << n;
    PauliAction act;
    act.omega.assign(d, cplx(1, 0));
    static const cplx phases[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
    for (size_t q = 0; q < n; ++q) {
        if (p.x(q)) act.xmask |= qubit_bit(n, q);
    }
    for (size_t j = 0; j < d; ++j) {
        cplx w = phases[p.phase()];
        for (size_t q = 0; q < n; ++q) {
            bool b = j & qubit_bit(n, q);
            char op = p.op(q);
            if (op == 'Z' && b) w = -w;
            if (op == 'Y') w *= b ? -I1 : I1;
        }
        act.omega[j] = w;
    }
    return act;
}

}  // namespace

Eigen::Matrix2cd single_qubit_matrix(const Instruction &ins) {
    Eigen::Matrix2cd u;
    const double r = std::numbers::sqrt2 / 2;
    if (ins.kind == OpKind::Rz) {
        u << std::exp(-I1 * ins.angle / 2.0), 0, 0, std::exp(I1 * ins.angle / 2.0);
        return u;
    }
    if (ins.kind == OpKind::Rx) {
        double c = std::cos(ins.angle / 2), s = std::sin(ins.angle / 2);
        u << c, -I1 * s, -I1 * s, c;
        return u;
    }
    if (ins.kind == OpKind::Idle) {
        return Eigen::Matrix2cd::Identity();
    }
    if (ins.kind != OpKind::Clifford || ins.is_two_qubit_gate()) {
        throw std::invalid_argument("not a single-qubit gate: " + ins.str());
    }
    switch (ins.gate) {
        case GateKind::H:
            u << r, r, r, -r;
            break;
        case GateKind::SqrtX:
            u << cplx(0.5, 0.5), cplx(0.5, -0.5), cplx(0.5, -0.5), cplx(0.5, 0.5);
            break;
        case GateKind::SqrtXDag:
            u << cplx(0.5, -0.5), cplx(0.5, 0.5), cplx(0.5, 0.5), cplx(0.5, -0.5);
            break;
        case GateKind::S:
            u << 1, 0, 0, I1;
            break;
        case GateKind::SDag:
            u << 1, 0, 0, -I1;
            break;
        case GateKind::X:
            u << 0, 1, 1, 0;
            break;
        case GateKind::Y:
            u << 0, -I1, I1, 0;
            break;
        case GateKind::Z:
            u << 1, 0, 0, -1;
            break;
        default:
            throw std::invalid_argument("not a single-qubit gate: " + ins.str());
    }
    return u;
}

Eigen::MatrixXcd pauli_matrix(const PauliString &p) {
    size_t d = size_t{1} << p.size();
    auto act = pauli_action(p);
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(d, d);
    for (size_t j = 0; j < d; ++j) {
        m(j ^ act.xmask, j) = act.omega[j];
    }
    return m;
}

cplx expectation(const Eigen::MatrixXcd &rho, const PauliString &p) {
    if (rho.rows() != (Eigen::Index{1} << p.size())) {
        throw DimensionError("Pauli size does not match density matrix");
    }
    auto act = pauli_action(p);
    cplx acc = 0;
    for (size_t j = 0; j < act.omega.size(); ++j) {
        acc += rho(j, j ^ act.xmask) * act.omega[j];
    }
    return acc;
}

void apply_1q(Eigen::MatrixXcd &rho, size_t n, size_t q, const Eigen::Matrix2cd &u) {
    const size_t d = rho.rows(), m = qubit_bit(n, q);
    const cplx u00 = u(0, 0), u01 = u(0, 1), u10 = u(1, 0), u11 = u(1, 1);
    cplx *data = rho.data();
    for (size_t j = 0; j < d; ++j) {
        cplx *col = data + j * d;
        for (size_t i = 0; i < d; ++i) {
            if (i & m) continue;
            cplx r0 = col[i], r1 = col[i | m];
            col[i] = u00 * r0 + u01 * r1;
            col[i | m] = u10 * r0 + u11 * r1;
        }
    }
    const cplx c00 = std::conj(u00), c01 = std::conj(u01), c10 = std::conj(u10), c11 = std::conj(u11);
    for (size_t j = 0; j < d; ++j) {
        if (j & m) continue;
        cplx *col0 = data + j * d, *col1 = data + (j | m) * d;
        for (size_t i = 0; i < d; ++i) {
            cplx a = col0[i], b = col1[i];
            col0[i] = a * c00 + b * c01;
            col1[i] = a * c10 + b * c11;
        }
    }
}

void apply_cz(Eigen::MatrixXcd &rho, size_t n, size_t a, size_t b) {
    const size_t d = rho.rows(), mask = qubit_bit(n, a) | qubit_bit(n, b);
    for (size_t j = 0; j < d; ++j) {
        bool sj = (j & mask) == mask;
        for (size_t i = 0; i < d; ++i) {
            if (sj != ((i & mask) == mask)) {
                rho(i, j) = -rho(i, j);
            }
        }
    }
}

void apply_cnot(Eigen::MatrixXcd &rho, size_t n, size_t c, size_t t) {
    const size_t d = rho.rows(), mc = qubit_bit(n, c), mt = qubit_bit(n, t);
    auto perm = [&](size_t i) { return (i & mc) ? i ^ mt : i; };
    Eigen::MatrixXcd out(d, d);
    for (size_t j = 0; j < d; ++j) {
        size_t pj = perm(j);
        for (size_t i = 0; i < d; ++i) {
            out(i, j) = rho(perm(i), pj);
        }
    }
    rho.swap(out);
}

void depolarize1(Eigen::MatrixXcd &rho, size_t n, size_t q, double p) {
    if (p == 0) return;
    const size_t d = rho.rows(), m = qubit_bit(n, q);
    const double lam = 4 * p / 3, keep = 1 - lam;
    for (size_t j = 0; j < d; ++j) {
        if (j & m) continue;
        for (size_t i = 0; i < d; ++i) {
            if (i & m) continue;
            cplx a = rho(i, j), b = rho(i | m, j | m);
            cplx avg = (a + b) * 0.5;
            rho(i, j) = keep * a + lam * avg;
            rho(i | m, j | m) = keep * b + lam * avg;
            rho(i | m, j) *= keep;
            rho(i, j | m) *= keep;
        }
    }
}

void depolarize2(Eigen::MatrixXcd &rho, size_t n, size_t a, size_t b, double p) {
    if (p == 0) return;
    const size_t d = rho.rows(), ma = qubit_bit(n, a), mb = qubit_bit(n, b);
    const size_t offs[4] = {0, mb, ma, ma | mb};
    const double lam = 16 * p / 15, keep = 1 - lam;
    for (size_t j = 0; j < d; ++j) {
        if (j & (ma | mb)) continue;
        for (size_t i = 0; i < d; ++i) {
            if (i & (ma | mb)) continue;
            cplx avg = 0;
            for (auto o : offs) avg += rho(i | o, j | o);
            avg *= 0.25;
            for (auto s : offs) {
                for (auto t : offs) {
                    cplx &e = rho(i | s, j | t);
                    e = s == t ? keep * e + lam * avg : keep * e;
                }
            }
        }
    }
}

void reset(Eigen::MatrixXcd &rho, size_t n, size_t q) {
    const size_t d = rho.rows(), m = qubit_bit(n, q);
    for (size_t j = 0; j < d; ++j) {
        if (j & m) continue;
        for (size_t i = 0; i < d; ++i) {
            if (i & m) continue;
            rho(i, j) += rho(i | m, j | m);
            rho(i | m, j | m) = 0;
            rho(i | m, j) = 0;
            rho(i, j | m) = 0;
        }
    }
}

void apply_pauli(Eigen::MatrixXcd &rho, const PauliString &p) {
    auto act = pauli_action(p);
    const size_t d = rho.rows();
    Eigen::MatrixXcd out(d, d);
    for (size_t j = 0; j < d; ++j) {
        size_t pj = j ^ act.xmask;
        cplx wj = std::conj(act.omega[pj]);
        for (size_t i = 0; i < d; ++i) {
            size_t pi = i ^ act.xmask;
            out(i, j) = act.omega[pi] * rho(pi, pj) * wj;
        }
    }
    rho.swap(out);
}

void apply_1q(Eigen::VectorXcd &psi, size_t n, size_t q, const Eigen::Matrix2cd &u) {
    const size_t d = psi.size(), m = qubit_bit(n, q);
    for (size_t i = 0; i < d; ++i) {
        if (i & m) continue;
        cplx a = psi[i], b = psi[i | m];
        psi[i] = u(0, 0) * a + u(0, 1) * b;
        psi[i | m] = u(1, 0) * a + u(1, 1) * b;
    }
}

void apply_cz(Eigen::VectorXcd &psi, size_t n, size_t a, size_t b) {
    const size_t mask = qubit_bit(n, a) | qubit_bit(n, b);
    for (Eigen::Index i = 0; i < psi.size(); ++i) {
        if ((size_t(i) & mask) == mask) psi[i] = -psi[i];
    }
}

void apply_cnot(Eigen::VectorXcd &psi, size_t n, size_t c, size_t t) {
    const size_t mc = qubit_bit(n, c), mt = qubit_bit(n, t);
    for (Eigen::Index i = 0; i < psi.size(); ++i) {
        size_t k = size_t(i);
        if ((k & mc) && !(k & mt)) std::swap(psi[k], psi[k | mt]);
    }
}

}  // namespace dense

namespace {

void check_size(size_t n) {
    if (n > kDenseMaxQubits) {
        throw DimensionError("dense engine is limited to " + std::to_string(kDenseMaxQubits) + " qubits, circuit has " +
                             std::to_string(n));
    }
}

// Measurements are deferred to the end, which is exact as long as nothing but
// idling touches a qubit after it is measured.
void check_terminal_measurements(const Circuit &c) {
    std::vector<bool> measured(c.num_qubits(), false);
    for (const auto &moment : c.moments()) {
        for (const auto &ins : moment) {
            uint32_t q = ins.qubits[0];
            if (ins.kind == OpKind::Idle) continue;
            for (auto t : ins.targets()) {
                if (measured[t]) {
                    throw UnsupportedCircuitError("dense engine needs terminal measurements; qubit " +
                                                  std::to_string(t) + " is reused after measurement");
                }
            }
            if (ins.kind == OpKind::MeasureZ) measured[q] = true;
        }
    }
}

template <typename State>
void apply_unitary(State &s, size_t n, const Instruction &ins) {
    switch (ins.kind) {
        case OpKind::Idle:
        case OpKind::MeasureZ:
            return;
        case OpKind::Reset:
            throw UnsupportedCircuitError("reset is not supported here");
        default:
            break;
    }
    if (ins.is_two_qubit_gate()) {
        if (ins.gate == GateKind::CZ) {
            dense::apply_cz(s, n, ins.qubits[0], ins.qubits[1]);
        } else {
            dense::apply_cnot(s, n, ins.qubits[0], ins.qubits[1]);
        }
        return;
    }
    if (ins.is_identity_rotation()) return;
    dense::apply_1q(s, n, ins.qubits[0], dense::single_qubit_matrix(ins));
}

uint64_t pattern_of(size_t index, size_t n, const std::vector<uint32_t> &measured) {
    uint64_t pat = 0;
    for (size_t k = 0; k < measured.size(); ++k) {
        if (index & dense::qubit_bit(n, measured[k])) pat |= uint64_t{1} << k;
    }
    return pat;
}

}  // namespace

DenseResult run_dense_exact(const AnnotatedCircuit &ac) {
    const auto &c = ac.circuit;
    size_t n = c.num_qubits();
    check_size(n);
    check_terminal_measurements(c);
    size_t d = size_t{1} << n;

    DenseResult res;
    res.num_qubits = n;
    res.rho = Eigen::MatrixXcd::Zero(d, d);
    res.rho(0, 0) = 1;
    auto &rho = res.rho;
    auto noise = [&](const NoiseSite &s) {
        if (s.kind == SiteKind::E1) {
            dense::depolarize1(rho, n, s.a, s.p);
        } else {
            dense::depolarize2(rho, n, s.a, s.b, s.p);
        }
    };
    for (const auto &s : ac.init_sites) noise(s);
    for (size_t m = 0; m < c.moments().size(); ++m) {
        for (const auto &ins : c.moments()[m]) {
            if (ins.kind == OpKind::Reset) {
                dense::reset(rho, n, ins.qubits[0]);
            } else {
                apply_unitary(rho, n, ins);
            }
        }
        for (const auto &s : ac.moment_sites[m]) noise(s);
    }
    double drift = std::abs(rho.trace() - cplx(1, 0));
    if (drift > 1e-9) {
        throw NumericalError("density matrix trace drifted from 1", drift);
    }

    for (const auto &mr : c.measurements()) {
        res.measured_qubits.push_back(mr.qubit);
        res.outcomes.labels.push_back(mr.label);
    }
    std::map<uint64_t, double> w;
    for (size_t i = 0; i < d; ++i) {
        double p = rho(i, i).real();
        if (p != 0) w[pattern_of(i, n, res.measured_qubits)] += p;
    }
    for (size_t k = 0; k < res.measured_qubits.size(); ++k) {
        const auto &ro = ac.readout[k];
        if (ro.flip_if_0 == 0 && ro.flip_if_1 == 0) continue;
        std::map<uint64_t, double> next;
        for (const auto &[pat, p] : w) {
            bool b = (pat >> k) & 1;
            double f = b ? ro.flip_if_1 : ro.flip_if_0;
            next[pat] += p * (1 - f);
            next[pat ^ (uint64_t{1} << k)] += p * f;
        }
        w.swap(next);
    }
    res.outcomes.weights = std::move(w);
    // Summed in the order post-selection sums, so an always-passing rule gives
    // a rate of exactly 1 rather than 1 +- ulp.
    res.outcomes.total = 0;
    for (const auto &[pat, p] : res.outcomes.weights) res.outcomes.total += p;
    res.outcomes.exact = true;
    return res;
}

Eigen::MatrixXcd DenseResult::conditional_block(uint64_t pattern) const {
    size_t n = num_qubits;
    std::vector<uint32_t> free;
    for (uint32_t q = 0; q < n; ++q) {
        if (std::find(measured_qubits.begin(), measured_qubits.end(), q) == measured_qubits.end()) {
            free.push_back(q);
        }
    }
    size_t base = 0;
    for (size_t k = 0; k < measured_qubits.size(); ++k) {
        if ((pattern >> k) & 1) base |= dense::qubit_bit(n, measured_qubits[k]);
    }
    size_t df = size_t{1} << free.size();
    auto index = [&](size_t a) {
        size_t i = base;
        for (size_t k = 0; k < free.size(); ++k) {
            if (a & (size_t{1} << (free.size() - 1 - k))) i |= dense::qubit_bit(n, free[k]);
        }
        return i;
    };
    Eigen::MatrixXcd out(df, df);
    for (size_t a = 0; a < df; ++a) {
        for (size_t b = 0; b < df; ++b) {
            out(a, b) = rho(index(a), index(b));
        }
    }
    return out;
}

ShotTable run_dense_trajectories(const AnnotatedCircuit &ac, size_t shots, uint64_t seed) {
    const auto &c = ac.circuit;
    size_t n = c.num_qubits();
    check_size(n);
    check_terminal_measurements(c);
    size_t d = size_t{1} << n;

    ShotTable table;
    std::vector<uint32_t> measured;
    for (const auto &mr : c.measurements()) {
        measured.push_back(mr.qubit);
        table.labels.push_back(mr.label);
    }
    static const Eigen::Matrix2cd paulis[4] = {
        Eigen::Matrix2cd::Identity(),
        (Eigen::Matrix2cd() << 0, 1, 1, 0).finished(),
        (Eigen::Matrix2cd() << 0, cplx(0, -1), cplx(0, 1), 0).finished(),
        (Eigen::Matrix2cd() << 1, 0, 0, -1).finished(),
    };
    table.rows.reserve(shots);
    for (size_t shot = 0; shot < shots; ++shot) {
        CounterRng rng(seed, shot);
        uint64_t counter = 0;
        Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(d);
        psi[0] = 1;
        auto noise = [&](const NoiseSite &s) {
            uint64_t k = counter++;
            if (s.p <= 0) return;
            int draw = sample_site(rng.uniform_at(k), s);
            if (!draw) return;
            if (s.kind == SiteKind::E1) {
                dense::apply_1q(psi, n, s.a, paulis[draw]);
            } else {
                if (draw >> 2) dense::apply_1q(psi, n, s.a, paulis[draw >> 2]);
                if (draw & 3) dense::apply_1q(psi, n, s.b, paulis[draw & 3]);
            }
        };
        for (const auto &s : ac.init_sites) noise(s);
        for (size_t m = 0; m < c.moments().size(); ++m) {
            for (const auto &ins : c.moments()[m]) apply_unitary(psi, n, ins);
            for (const auto &s : ac.moment_sites[m]) noise(s);
        }
        double u = rng.uniform_at(kCoinCounterBase), acc = 0;
        size_t chosen = d - 1;
        for (size_t i = 0; i < d; ++i) {
            acc += std::norm(psi[i]);
            if (u < acc) {
                chosen = i;
                break;
            }
        }
        uint64_t pat = pattern_of(chosen, n, measured);
        for (size_t k = 0; k < measured.size(); ++k) {
            bool b = (pat >> k) & 1;
            double f = b ? ac.readout[k].flip_if_1 : ac.readout[k].flip_if_0;
            if (f > 0 && rng.uniform_at(counter) < f) pat ^= uint64_t{1} << k;
            ++counter;
        }
        table.rows.push_back(pat);
    }
    return table;
}

Eigen::VectorXcd run_statevector(const Circuit &c) {
    size_t n = c.num_qubits();
    check_size(n);
    Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(size_t{1} << n);
    psi[0] = 1;
    for (const auto &moment : c.moments()) {
        for (const auto &ins : moment) {
            if (ins.kind == OpKind::MeasureZ || ins.kind == OpKind::Reset) {
                throw UnsupportedCircuitError("run_statevector takes measurement-free circuits");
            }
            apply_unitary(psi, n, ins);
        }
    }
    return psi;
}

}  // namespace d2lab

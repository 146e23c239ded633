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

#include "d2lab/frame_sampler.hpp"

#include <algorithm>
#include <thread>

#include "d2lab/errors.hpp"
#include "d2lab/rng.hpp"
#include "d2lab/tableau.hpp"

namespace d2lab {

namespace {

enum class Op : uint8_t { SwapXZ, ZxorX, XxorZ, CZ, CNOT, Noise, Measure, Reset };

struct FrameOp {
    Op op;
    uint32_t a;
    uint32_t b;
    uint32_t index;  // noise site or measurement index
};

struct Program {
    std::vector<FrameOp> ops;
    std::vector<NoiseSite> sites;
    std::vector<uint8_t> reference;
    std::vector<ReadoutSite> readout;
    size_t num_qubits;
};

Program compile(const AnnotatedCircuit &ac, uint64_t seed) {
    const auto &c = ac.circuit;
    if (c.num_qubits() > 64) {
        throw DimensionError("frame sampler supports at most 64 qubits");
    }
    if (c.measurements().size() > 64) {
        throw DimensionError("frame sampler supports at most 64 measurements");
    }
    Program prog;
    prog.num_qubits = c.num_qubits();
    prog.readout = ac.readout;
    auto add_site = [&](const NoiseSite &s) {
        prog.ops.push_back({Op::Noise, s.a, s.b, static_cast<uint32_t>(prog.sites.size())});
        prog.sites.push_back(s);
    };
    for (const auto &s : ac.init_sites) {
        add_site(s);
    }
    uint32_t meas = 0;
    for (size_t m = 0; m < c.moments().size(); ++m) {
        for (const auto &ins : c.moments()[m]) {
            uint32_t a = ins.qubits[0], b = ins.qubits[1];
            if (ins.kind == OpKind::Idle || ins.is_identity_rotation()) {
                continue;
            }
            if (ins.kind == OpKind::MeasureZ) {
                prog.ops.push_back({Op::Measure, a, a, meas++});
                continue;
            }
            if (ins.kind == OpKind::Reset) {
                prog.ops.push_back({Op::Reset, a, a, 0});
                continue;
            }
            auto g = ins.as_clifford();
            if (!g) {
                throw UnsupportedCircuitError("instruction '" + ins.str() +
                                              "' is not Clifford; run this circuit with the dense engine "
                                              "(--engine dense)");
            }
            switch (g->kind) {
                case GateKind::H:
                    prog.ops.push_back({Op::SwapXZ, a, a, 0});
                    break;
                case GateKind::S:
                case GateKind::SDag:
                    prog.ops.push_back({Op::ZxorX, a, a, 0});
                    break;
                case GateKind::SqrtX:
                case GateKind::SqrtXDag:
                    prog.ops.push_back({Op::XxorZ, a, a, 0});
                    break;
                case GateKind::CZ:
                    prog.ops.push_back({Op::CZ, a, b, 0});
                    break;
                case GateKind::CNOT:
                    prog.ops.push_back({Op::CNOT, a, b, 0});
                    break;
                default:  // Paulis leave the frame alone
                    break;
            }
        }
        for (const auto &s : ac.moment_sites[m]) {
            add_site(s);
        }
    }
    CounterRng ref_rng(seed, ~uint64_t{0});
    uint64_t counter = 0;
    prog.reference = run_tableau(c, [&] { return ref_rng.bit_at(counter++); });
    return prog;
}

inline uint64_t bit(uint64_t w, uint32_t q) { return (w >> q) & 1; }

uint64_t run_shot(const Program &prog, uint64_t seed, uint64_t shot) {
    CounterRng rng(seed, shot);
    uint64_t coin = kCoinCounterBase;
    uint64_t full = prog.num_qubits == 64 ? ~uint64_t{0} : ((uint64_t{1} << prog.num_qubits) - 1);
    uint64_t x = 0;
    uint64_t z = rng.at(coin++) & full;  // random gauge: |0> is a Z eigenstate
    uint64_t result = 0;
    for (const auto &op : prog.ops) {
        uint32_t a = op.a, b = op.b;
        switch (op.op) {
            case Op::SwapXZ: {
                uint64_t d = (bit(x, a) ^ bit(z, a)) << a;
                x ^= d;
                z ^= d;
                break;
            }
            case Op::ZxorX:
                z ^= x & (uint64_t{1} << a);
                break;
            case Op::XxorZ:
                x ^= z & (uint64_t{1} << a);
                break;
            case Op::CZ:
                z ^= bit(x, b) << a;
                z ^= bit(x, a) << b;
                break;
            case Op::CNOT:
                x ^= bit(x, a) << b;
                z ^= bit(z, b) << a;
                break;
            case Op::Noise: {
                const auto &s = prog.sites[op.index];
                if (s.p <= 0) {
                    break;
                }
                int d = sample_site(rng.uniform_at(op.index), s);
                if (!d) {
                    break;
                }
                if (s.kind == SiteKind::E1) {
                    auto [fx, fz] = pauli_digit_bits(d);
                    x ^= uint64_t(fx) << a;
                    z ^= uint64_t(fz) << a;
                } else {
                    auto [xa, za] = pauli_digit_bits(d >> 2);
                    auto [xb, zb] = pauli_digit_bits(d & 3);
                    x ^= (uint64_t(xa) << a) | (uint64_t(xb) << b);
                    z ^= (uint64_t(za) << a) | (uint64_t(zb) << b);
                }
                break;
            }
            case Op::Measure:
                result |= (uint64_t(prog.reference[op.index]) ^ bit(x, a)) << op.index;
                z ^= uint64_t(rng.bit_at(coin++)) << a;
                break;
            case Op::Reset:
                x &= ~(uint64_t{1} << a);
                z = (z & ~(uint64_t{1} << a)) | (uint64_t(rng.bit_at(coin++)) << a);
                break;
        }
    }
    uint64_t counter = prog.sites.size();
    for (size_t k = 0; k < prog.readout.size(); ++k) {
        bool b = (result >> k) & 1;
        double p = b ? prog.readout[k].flip_if_1 : prog.readout[k].flip_if_0;
        if (p > 0 && rng.uniform_at(counter) < p) {
            result ^= uint64_t{1} << k;
        }
        ++counter;
    }
    return result;
}

}  // namespace

ShotTable sample_pauli_frame(const AnnotatedCircuit &ac, size_t shots, uint64_t seed, unsigned threads) {
    Program prog = compile(ac, seed);
    ShotTable table;
    for (const auto &m : ac.circuit.measurements()) {
        table.labels.push_back(m.label);
    }
    table.rows.resize(shots);
    if (threads == 0) {
        threads = std::max(1u, std::thread::hardware_concurrency());
    }
    threads = static_cast<unsigned>(std::min<size_t>(threads, std::max<size_t>(1, shots / 4096)));
    auto work = [&](size_t begin, size_t end) {
        for (size_t s = begin; s < end; ++s) {
            table.rows[s] = run_shot(prog, seed, s);
        }
    };
    if (threads <= 1) {
        work(0, shots);
        return table;
    }
    std::vector<std::thread> pool;
    size_t chunk = (shots + threads - 1) / threads;
    for (unsigned t = 0; t < threads; ++t) {
        size_t begin = t * chunk, end = std::min(shots, begin + chunk);
        if (begin < end) {
            pool.emplace_back(work, begin, end);
        }
    }
    for (auto &th : pool) {
        th.join();
    }
    return table;
}

}  // namespace d2lab

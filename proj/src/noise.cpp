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

#include "d2lab/noise.hpp"

#include <algorithm>

#include "d2lab/errors.hpp"

namespace d2lab {

namespace {

std::pair<std::string, std::string> pair_key(const std::string &a, const std::string &b) {
    return a < b ? std::make_pair(a, b) : std::make_pair(b, a);
}

void check_probability(double p, const std::string &what) {
    if (!(p >= 0 && p <= 1)) {
        throw NoiseModelError(what + " = " + std::to_string(p) + " is not a probability");
    }
}

}  // namespace

NoiseModel NoiseModel::noiseless() { return uniform(0, 0, 0); }

NoiseModel NoiseModel::uniform(double p1, double p2, double pm) {
    NoiseModel nm;
    nm.default_p1 = p1;
    nm.default_p2 = p2;
    nm.default_readout = ReadoutFidelity{1 - pm, 1 - pm};
    nm.validate();
    return nm;
}

double NoiseModel::single(const std::string &q) const {
    if (auto it = p1.find(q); it != p1.end()) {
        return it->second;
    }
    if (default_p1) {
        return *default_p1;
    }
    throw NoiseModelError("no single-qubit error rate for qubit " + q);
}

double NoiseModel::pair(const std::string &a, const std::string &b) const {
    if (auto it = p2.find(pair_key(a, b)); it != p2.end()) {
        return it->second;
    }
    if (default_p2) {
        return *default_p2;
    }
    throw NoiseModelError("no two-qubit error rate for pair " + a + "-" + b + " (not a coupled pair?)");
}

ReadoutFidelity NoiseModel::fidelity(const std::string &q) const {
    if (auto it = readout.find(q); it != readout.end()) {
        return it->second;
    }
    if (default_readout) {
        return *default_readout;
    }
    throw NoiseModelError("no readout fidelity for qubit " + q);
}

double NoiseModel::flip_probability(const std::string &q, bool bit) const {
    auto f = fidelity(q);
    if (symmetric_readout) {
        return 1 - (f.f00 + f.f11) / 2;
    }
    return bit ? 1 - f.f11 : 1 - f.f00;
}

void NoiseModel::set_pair(const std::string &a, const std::string &b, double p) { p2[pair_key(a, b)] = p; }

void NoiseModel::validate() const {
    for (const auto &[q, p] : p1) check_probability(p, "p1[" + q + "]");
    for (const auto &[k, p] : p2) check_probability(p, "p2[" + k.first + "-" + k.second + "]");
    for (const auto &[q, f] : readout) {
        check_probability(f.f00, "f00[" + q + "]");
        check_probability(f.f11, "f11[" + q + "]");
    }
    if (default_p1) check_probability(*default_p1, "default p1");
    if (default_p2) check_probability(*default_p2, "default p2");
    if (default_readout) {
        check_probability(default_readout->f00, "default f00");
        check_probability(default_readout->f11, "default f11");
    }
}

size_t AnnotatedCircuit::num_sites() const {
    size_t n = init_sites.size();
    for (const auto &m : moment_sites) {
        n += m.size();
    }
    return n;
}

size_t AnnotatedCircuit::count(SiteKind k) const {
    auto match = [k](const NoiseSite &s) { return s.kind == k; };
    size_t n = std::count_if(init_sites.begin(), init_sites.end(), match);
    for (const auto &m : moment_sites) {
        n += std::count_if(m.begin(), m.end(), match);
    }
    return n;
}

AnnotatedCircuit apply_noise_sites(const Circuit &c, const NoiseModel &nm) {
    nm.validate();
    const auto &names = c.qubit_names();
    AnnotatedCircuit out;
    out.circuit = c;
    for (uint32_t q = 0; q < c.num_qubits(); ++q) {
        out.init_sites.push_back({SiteKind::E1, q, q, nm.single(names[q])});
    }

    std::vector<bool> measured(c.num_qubits(), false);
    for (const auto &moment : c.moments()) {
        std::vector<NoiseSite> sites;
        // Virtual-Z moments take no time and carry no noise.
        bool virtual_only = std::all_of(moment.begin(), moment.end(), [](const Instruction &ins) {
            return ins.is_virtual() || ins.kind == OpKind::Idle;
        });
        bool has_measure = std::any_of(moment.begin(), moment.end(),
                                       [](const Instruction &ins) { return ins.kind == OpKind::MeasureZ; });
        for (const auto &ins : moment) {
            uint32_t a = ins.qubits[0];
            switch (ins.kind) {
                case OpKind::MeasureZ:
                    measured[a] = true;
                    break;
                case OpKind::Idle:
                    if (!virtual_only && !has_measure && !measured[a]) {
                        sites.push_back({SiteKind::E1, a, a, nm.single(names[a])});
                    }
                    break;
                case OpKind::Reset:
                    measured[a] = false;
                    sites.push_back({SiteKind::E1, a, a, nm.single(names[a])});
                    break;
                default:
                    if (ins.is_two_qubit_gate()) {
                        uint32_t b = ins.qubits[1];
                        sites.push_back({SiteKind::E2, a, b, nm.pair(names[a], names[b])});
                    } else if (!virtual_only) {
                        sites.push_back({SiteKind::E1, a, a, nm.single(names[a])});
                    }
                    break;
            }
        }
        out.moment_sites.push_back(std::move(sites));
    }
    for (const auto &m : c.measurements()) {
        const auto &name = names[m.qubit];
        out.readout.push_back({nm.flip_probability(name, false), nm.flip_probability(name, true)});
    }
    return out;
}

}  // namespace d2lab

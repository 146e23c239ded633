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

#include "d2lab/cross_validate.hpp"

#include <cmath>
#include <limits>

#include "d2lab/dense.hpp"
#include "d2lab/frame_sampler.hpp"
#include "d2lab/rng.hpp"

namespace d2lab {

CrossValidationReport cross_validate(const Circuit &c, const NoiseModel &nm, size_t shots, uint64_t seed,
                                     unsigned threads) {
    auto ac = apply_noise_sites(c, nm);
    auto table = sample_pauli_frame(ac, shots, seed, threads);
    auto exact = run_dense_exact(ac);
    auto sampled = OutcomeDistribution::from_shots(table);

    CrossValidationReport r;
    r.labels = table.labels;
    r.shots = shots;
    for (size_t k = 0; k < r.labels.size(); ++k) {
        double f = sampled.frequency_minus(k);
        double p = exact.outcomes.frequency_minus(k);
        double sigma = std::sqrt(std::max(0.0, p * (1 - p)) / double(shots));
        double z;
        if (sigma > 0) {
            z = (f - p) / sigma;
        } else {
            z = std::abs(f - p) < 1e-12 ? 0 : std::numeric_limits<double>::infinity();
        }
        r.sampled.push_back(f);
        r.exact.push_back(p);
        r.z.push_back(z);
        r.max_abs_z = std::max(r.max_abs_z, std::abs(z));
    }
    return r;
}

Circuit random_clifford_circuit(size_t num_qubits, const std::vector<std::pair<uint32_t, uint32_t>> &edges,
                                size_t depth, uint64_t seed) {
    static constexpr GateKind one_qubit[] = {GateKind::H,    GateKind::SqrtX, GateKind::SqrtXDag, GateKind::S,
                                             GateKind::SDag, GateKind::X,     GateKind::Y,        GateKind::Z};
    CounterRng rng(seed, 0);
    uint64_t counter = 0;
    auto draw = [&](uint64_t m) { return rng.at(counter++) % m; };

    LayerList layers;
    for (size_t layer = 0; layer < depth; ++layer) {
        Layer l;
        if (layer % 2 == 0) {
            for (uint32_t q = 0; q < num_qubits; ++q) {
                auto pick = draw(10);
                if (pick < 8) {
                    l.push_back(Instruction::clifford(one_qubit[pick], q));
                }
            }
        } else {
            std::vector<bool> used(num_qubits, false);
            for (size_t attempt = 0; attempt < edges.size(); ++attempt) {
                auto [a, b] = edges[draw(edges.size())];
                if (used[a] || used[b]) continue;
                used[a] = used[b] = true;
                l.push_back(draw(2) ? Instruction::clifford(GateKind::CZ, a, b)
                                    : Instruction::clifford(GateKind::CNOT, a, b));
            }
        }
        if (!l.empty()) layers.push_back(std::move(l));
    }
    Layer measure;
    for (uint32_t q = 0; q < num_qubits; ++q) {
        measure.push_back(Instruction::measure_z(q, "m" + std::to_string(q + 1)));
    }
    layers.push_back(std::move(measure));
    return schedule_layers(num_qubits, layers);
}

}  // namespace d2lab

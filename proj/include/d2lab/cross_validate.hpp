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

#ifndef D2LAB_CROSS_VALIDATE_HPP
#define D2LAB_CROSS_VALIDATE_HPP

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "d2lab/circuit.hpp"
#include "d2lab/noise.hpp"

namespace d2lab {

struct CrossValidationReport {
    std::vector<std::string> labels;
    std::vector<double> sampled;  // frequency of -1 from the frame sampler
    std::vector<double> exact;    // probability of -1 from the dense engine
    std::vector<double> z;
    double max_abs_z = 0;
    size_t shots = 0;
};

CrossValidationReport cross_validate(const Circuit &c, const NoiseModel &nm, size_t shots, uint64_t seed,
                                     unsigned threads = 0);

/// Random Clifford circuit over the given coupling edges, with all qubits
/// measured at the end. Layers alternate single-qubit and CZ layers.
Circuit random_clifford_circuit(size_t num_qubits, const std::vector<std::pair<uint32_t, uint32_t>> &edges,
                                size_t depth, uint64_t seed);

}  // namespace d2lab

#endif

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

#ifndef D2LAB_NOISE_HPP
#define D2LAB_NOISE_HPP

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "d2lab/circuit.hpp"

namespace d2lab {

struct ReadoutFidelity {
    double f00 = 1;
    double f11 = 1;
};

struct NoiseModel {
    std::map<std::string, double> p1;
    std::map<std::pair<std::string, std::string>, double> p2;  // key stored with names sorted
    std::map<std::string, ReadoutFidelity> readout;
    bool symmetric_readout = true;

    // Fallbacks for qubits/pairs absent from the maps (uniform models).
    std::optional<double> default_p1;
    std::optional<double> default_p2;
    std::optional<ReadoutFidelity> default_readout;

    static NoiseModel noiseless();
    /// Same strength everywhere; p_m is a symmetric flip probability.
    static NoiseModel uniform(double p1, double p2, double pm);

    double single(const std::string &q) const;
    double pair(const std::string &a, const std::string &b) const;
    ReadoutFidelity fidelity(const std::string &q) const;
    /// Probability of flipping a recorded bit that should read `bit`.
    double flip_probability(const std::string &q, bool bit) const;

    void set_pair(const std::string &a, const std::string &b, double p);
    void validate() const;
};

enum class SiteKind : uint8_t { E1, E2 };

struct NoiseSite {
    SiteKind kind;
    uint32_t a;
    uint32_t b;  // E2 only
    double p;
};

struct ReadoutSite {
    double flip_if_0;
    double flip_if_1;
};

// A circuit together with the sites at which stochastic faults may occur.
// Sites are listed in execution order; each one consumes exactly one random
// draw, followed by one draw per measurement for the readout flip.
struct AnnotatedCircuit {
    Circuit circuit;
    std::vector<NoiseSite> init_sites;
    std::vector<std::vector<NoiseSite>> moment_sites;  // after moment k
    std::vector<ReadoutSite> readout;                  // per measurement index

    size_t num_sites() const;
    size_t count(SiteKind k) const;
};

AnnotatedCircuit apply_noise_sites(const Circuit &c, const NoiseModel &nm);

/// A fault drawn at a site: 0 means none; otherwise 1..3 (E1) or 1..15 (E2),
/// read as base-4 digits (I,X,Y,Z) with the first qubit in the high digit.
inline int sample_site(double u, const NoiseSite &s) {
    if (u >= s.p) {
        return 0;
    }
    int m = s.kind == SiteKind::E1 ? 3 : 15;
    int k = static_cast<int>(u / s.p * m);
    return 1 + (k < m ? k : m - 1);
}

/// (x, z) bits of the Pauli digit 0..3 = I, X, Y, Z.
inline std::pair<bool, bool> pauli_digit_bits(int digit) { return {digit == 1 || digit == 2, digit == 2 || digit == 3}; }

}  // namespace d2lab

#endif

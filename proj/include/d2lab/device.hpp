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

#ifndef D2LAB_DEVICE_HPP
#define D2LAB_DEVICE_HPP

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "d2lab/noise.hpp"

namespace d2lab {

struct QubitParams {
    double gate_error_1q = 0;
    double f00 = 1;
    double f11 = 1;
    std::optional<double> t1_us;  // informational; not used by the noise model
    std::optional<double> t2_us;
};

struct DeviceParams {
    std::string name;
    std::vector<std::string> qubits;
    std::vector<std::pair<std::string, std::string>> edges;
    std::map<std::string, QubitParams> qubit;
    std::map<std::pair<std::string, std::string>, double> cz_fidelity;  // key sorted

    bool adjacent(const std::string &a, const std::string &b) const;
    double cz(const std::string &a, const std::string &b) const;
    /// Mean of 1 - (f00 + f11) / 2 over qubits.
    double average_pm() const;
    double average_cz_fidelity() const;

    /// p1 = gate error, p2 = 1 - CZ fidelity, readout from f00/f11.
    NoiseModel to_noise_model(bool symmetric_readout = true) const;

    void validate() const;
    /// Normalized text used for hashing; insensitive to comments and order.
    std::string canonical_text() const;
    /// FNV-1a 64-bit hash of canonical_text(), 16 hex digits.
    std::string hash() const;
};

/// Parses the INI device description. Throws ParseError naming the first
/// missing or invalid field.
DeviceParams parse_device(const std::string &text, const std::string &origin = "<string>");
/// Reads a file; IoError when it cannot be read.
DeviceParams load_device(const std::string &path);
/// The bundled description of the 2x4 processor.
DeviceParams default_device();
const char *default_device_ini();

}  // namespace d2lab

#endif

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

#ifndef D2LAB_ERRORS_HPP
#define D2LAB_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace d2lab {

/// Operand sizes disagree (Pauli lengths, matrix dimensions).
struct DimensionError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// A circuit contains content the chosen engine cannot execute.
struct UnsupportedCircuitError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Malformed circuit structure (qubit conflicts, double measurement, bad targets).
struct CircuitError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Noise model is missing a parameter or holds an out-of-range probability.
struct NoiseModelError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Text or config input could not be parsed.
struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// An iterative solver hit its iteration cap or a state drifted off the physical set.
/// File system failures; the message names the path.
struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NumericalError : std::runtime_error {
    NumericalError(const std::string &what, double residual)
        : std::runtime_error(what), residual(residual) {}
    double residual;
};

}  // namespace d2lab

#endif

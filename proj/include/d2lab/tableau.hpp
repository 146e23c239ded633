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

#ifndef D2LAB_TABLEAU_HPP
#define D2LAB_TABLEAU_HPP

#include <cstdint>
#include <functional>
#include <vector>

#include "d2lab/circuit.hpp"
#include "d2lab/noise.hpp"
#include "d2lab/pauli.hpp"

namespace d2lab {

// Aaronson-Gottesman tableau. Row k < n is destabilizer k, row n + k is
// stabilizer k. Destabilizer phases are not tracked.
class StabilizerTableau {
   public:
    explicit StabilizerTableau(size_t num_qubits);

    size_t size() const { return n_; }
    const PauliString &destabilizer(size_t k) const { return rows_[k]; }
    const PauliString &stabilizer(size_t k) const { return rows_[n_ + k]; }

    void apply(const CliffordGate &g);
    /// Conjugates the state by a Pauli (an injected error).
    void apply_pauli(const PauliString &p);

    /// Outcome bit of a Z measurement when it is deterministic.
    std::optional<bool> peek_z(size_t q) const;
    /// Measures Z on `q`; `coin` supplies the outcome when it is random.
    bool measure_z(size_t q, const std::function<bool()> &coin);
    void reset(size_t q, const std::function<bool()> &coin);

    /// +1/-1 if +-p is in the stabilizer group, 0 if p anticommutes with it.
    int expectation(const PauliString &p) const;

    /// Checks the commutation structure of the rows.
    bool is_consistent() const;

   private:
    PauliString product_of_stabilizers_for(const PauliString &p) const;

    size_t n_;
    std::vector<PauliString> rows_;
};

/// Noiseless run. Random outcomes are decided by `coin`.
std::vector<uint8_t> run_tableau(const Circuit &c, const std::function<bool()> &coin);

/// One noisy shot with errors injected explicitly into the tableau, using the
/// same fault draws as the Pauli-frame sampler for (seed, shot).
std::vector<uint8_t> run_tableau_shot(const AnnotatedCircuit &ac, uint64_t seed, uint64_t shot);

}  // namespace d2lab

#endif

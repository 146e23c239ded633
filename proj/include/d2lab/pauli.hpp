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

#ifndef D2LAB_PAULI_HPP
#define D2LAB_PAULI_HPP

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace d2lab {

/// Phase-tracked n-qubit Pauli operator  i^phase * P_0 (x) P_1 (x) ... (x) P_{n-1}.
///
/// Qubit k carries (x_k, z_k): (0,0)=I, (1,0)=X, (0,1)=Z, (1,1)=Y, where Y = iXZ.
/// The phase exponent lives in Z_4, so products are exact (XZ = -iY).
///
/// Text form: optional "+", "-", "+i", "-i" prefix then one of IXYZ per qubit,
/// leftmost character = qubit 0 ("qubit 1" in device naming).
class PauliString {
   public:
    PauliString() = default;
    explicit PauliString(size_t num_qubits);

    static PauliString from_text(std::string_view text);
    /// Identity everywhere except `op` on qubit `q`.
    static PauliString single(size_t num_qubits, size_t q, char op);
    /// Product of `op` on each listed qubit.
    static PauliString on(size_t num_qubits, std::span<const uint32_t> qubits, char op);
    static PauliString on(size_t num_qubits, std::initializer_list<uint32_t> qubits, char op);

    size_t size() const { return n_; }
    bool x(size_t q) const { return (xs_[q / 64] >> (q % 64)) & 1; }
    bool z(size_t q) const { return (zs_[q / 64] >> (q % 64)) & 1; }
    char op(size_t q) const;
    void set(size_t q, bool x, bool z);
    void set_op(size_t q, char op);

    /// Exponent k of the global factor i^k, in [0, 4).
    uint8_t phase() const { return phase_; }
    void set_phase(uint8_t k) { phase_ = k & 3; }
    PauliString &mul_phase(uint8_t k) {
        phase_ = (phase_ + k) & 3;
        return *this;
    }
    /// +1 or -1 for a Hermitian operator (real phase). Throws on imaginary phase.
    int sign() const;

    size_t weight() const;
    bool is_identity() const;  // ignores phase
    /// Same x/z content, phase ignored.
    bool same_support(const PauliString &other) const;

    std::span<const uint64_t> x_words() const { return xs_; }
    std::span<const uint64_t> z_words() const { return zs_; }

    std::string str() const;

    bool operator==(const PauliString &other) const = default;

   private:
    size_t n_ = 0;
    std::vector<uint64_t> xs_;
    std::vector<uint64_t> zs_;
    uint8_t phase_ = 0;
};

PauliString multiply(const PauliString &p, const PauliString &q);
bool commutes(const PauliString &p, const PauliString &q);

enum class GateKind : uint8_t { H, SqrtX, SqrtXDag, S, SDag, X, Y, Z, CZ, CNOT };

constexpr bool is_two_qubit(GateKind k) { return k == GateKind::CZ || k == GateKind::CNOT; }
/// Gates implementable as a frame change (zero-duration virtual Z on hardware).
constexpr bool is_virtual_z(GateKind k) {
    return k == GateKind::S || k == GateKind::SDag || k == GateKind::Z;
}
GateKind inverse(GateKind k);
std::string_view gate_name(GateKind k);
GateKind gate_from_name(std::string_view name);

struct CliffordGate {
    GateKind kind;
    std::array<uint32_t, 2> targets{};

    static CliffordGate one(GateKind k, uint32_t q);
    static CliffordGate two(GateKind k, uint32_t a, uint32_t b);

    size_t arity() const { return is_two_qubit(kind) ? 2 : 1; }
    CliffordGate inverse() const { return CliffordGate{d2lab::inverse(kind), targets}; }
    bool operator==(const CliffordGate &) const = default;
};

/// g * p * g^dagger with exact phase. Only the targeted qubits change.
PauliString conjugate(const PauliString &p, const CliffordGate &g);

}  // namespace d2lab

#endif

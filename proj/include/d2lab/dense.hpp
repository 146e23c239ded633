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

#ifndef D2LAB_DENSE_HPP
#define D2LAB_DENSE_HPP

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <vector>

#include "d2lab/noise.hpp"
#include "d2lab/shots.hpp"

namespace d2lab {

using cplx = std::complex<double>;

inline constexpr size_t kDenseMaxQubits = 12;

// Basis index convention: qubit 0 is the most significant bit.
namespace dense {

inline size_t qubit_bit(size_t n, size_t q) { return size_t{1} << (n - 1 - q); }

Eigen::Matrix2cd single_qubit_matrix(const Instruction &ins);
Eigen::MatrixXcd pauli_matrix(const PauliString &p);
/// Tr(rho P), using the sparsity of P.
cplx expectation(const Eigen::MatrixXcd &rho, const PauliString &p);

void apply_1q(Eigen::MatrixXcd &rho, size_t n, size_t q, const Eigen::Matrix2cd &u);
void apply_cz(Eigen::MatrixXcd &rho, size_t n, size_t a, size_t b);
void apply_cnot(Eigen::MatrixXcd &rho, size_t n, size_t c, size_t t);
/// (1 - 4p/3) rho + (4p/3) I/2 (x) Tr_q rho, equal to the three-Pauli mixture.
void depolarize1(Eigen::MatrixXcd &rho, size_t n, size_t q, double p);
/// (1 - 16p/15) rho + (16p/15) I/4 (x) Tr_ab rho.
void depolarize2(Eigen::MatrixXcd &rho, size_t n, size_t a, size_t b, double p);
void reset(Eigen::MatrixXcd &rho, size_t n, size_t q);
/// Conjugation of a state by a Pauli.
void apply_pauli(Eigen::MatrixXcd &rho, const PauliString &p);

void apply_1q(Eigen::VectorXcd &psi, size_t n, size_t q, const Eigen::Matrix2cd &u);
void apply_cz(Eigen::VectorXcd &psi, size_t n, size_t a, size_t b);
void apply_cnot(Eigen::VectorXcd &psi, size_t n, size_t c, size_t t);

}  // namespace dense

struct DenseResult {
    size_t num_qubits = 0;
    Eigen::MatrixXcd rho;                  // final state; measured qubits are still present
    std::vector<uint32_t> measured_qubits;  // per measurement index
    OutcomeDistribution outcomes;          // exact, including readout flips

    /// Sub-normalized state of the unmeasured qubits (ascending order) given
    /// the true (pre-readout) measurement pattern.
    Eigen::MatrixXcd conditional_block(uint64_t pattern) const;
};

/// Exact channel evolution. Measurements must be terminal on their qubit.
DenseResult run_dense_exact(const AnnotatedCircuit &ac);

/// Monte Carlo trajectories: one Pauli draw per site, Born-rule readout.
ShotTable run_dense_trajectories(const AnnotatedCircuit &ac, size_t shots, uint64_t seed);

/// Ideal pure state of a measurement-free circuit.
Eigen::VectorXcd run_statevector(const Circuit &c);

}  // namespace d2lab

#endif

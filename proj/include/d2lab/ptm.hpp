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

#ifndef D2LAB_PTM_HPP
#define D2LAB_PTM_HPP

#include <Eigen/Dense>
#include <vector>

#include "d2lab/tomography.hpp"

namespace d2lab {

// Pauli transfer matrix R(out, in) = Tr(P_out E(P_in)) / d, Paulis ordered
// I, X, Y, Z per qubit with the leftmost qubit slowest.
struct PTM {
    int d = 2;
    Eigen::MatrixXd r;

    int num_qubits() const { return d == 2 ? 1 : 2; }
    static PTM identity(int d);
};

// Choi state with the output on the left factor:
//   rho = (1/d^2) sum R(o,i) P_o^T (x) P_i,
// so that Tr(rho P_o^T (x) P_i) = R(o,i). Positivity is complete positivity
// and Tr_left(rho) = I/d is trace preservation.
struct ChoiState {
    Eigen::MatrixXcd rho;
};

ChoiState ptm_to_choi(const PTM &r);
PTM choi_to_ptm(const ChoiState &c);

PTM ptm_of_unitary(const Eigen::MatrixXcd &u);
PTM ideal_cnot_ptm();
PTM ideal_rz_ptm(double theta);
PTM ideal_rx_ptm(double theta);

/// Least-squares solution of p_out = R p_in over the stacked state set.
PTM ptm_raw(const std::vector<ExpectationSet> &inputs, const std::vector<ExpectationSet> &outputs);

struct ProjectOptions {
    double tol = 1e-9;
    size_t max_iterations = 100000;
};

struct CptpProjection {
    PTM ptm;
    ChoiState choi;
    size_t iterations = 0;
    double step = 0;               // last change between iterates
    std::vector<double> dual_log;  // dual objective per iteration, non-decreasing
};

/// Nearest CPTP map in the Frobenius norm on R, by Dykstra's alternating
/// projections between {rho >= 0, Tr rho = 1} and {Tr_left rho = I/d}.
/// Throws NumericalError when the iteration cap is hit.
CptpProjection project_cptp(const PTM &raw, const ProjectOptions &opt = {});

/// (Tr(R^T R_ideal) + d) / (d^2 + d).
double gate_fidelity(const PTM &r, const PTM &ideal);

/// Partial trace over the left (output) factor.
Eigen::MatrixXcd trace_left(const Eigen::MatrixXcd &rho, int d);

}  // namespace d2lab

#endif

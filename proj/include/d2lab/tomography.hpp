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

#ifndef D2LAB_TOMOGRAPHY_HPP
#define D2LAB_TOMOGRAPHY_HPP

#include <Eigen/Dense>
#include <map>
#include <string>
#include <vector>

#include "d2lab/postselect.hpp"
#include "d2lab/shots.hpp"
#include "d2lab/surface_code.hpp"

namespace d2lab {

/// "I","X","Y","Z" per qubit, leftmost qubit slowest.
std::vector<std::string> pauli_labels(int n);
/// Measurement settings without identities: "X","Y","Z" or "XX".."ZZ".
std::vector<std::string> tomography_settings(int n);
/// Setting used to estimate a Pauli label: identities read off the Z setting.
std::string setting_for(const std::string &pauli_label);

struct ExpectationValue {
    double value = 0;
    double two_sigma = 0;
    double n_pass = 0;
    double n_total = 0;
    double ps_rate = 0;
    bool exact = false;
    bool empty = false;  // no shot passed post-selection; value is 0
};

struct ExpectationSet {
    int n_logical = 1;
    std::map<std::string, ExpectationValue> entries;

    static ExpectationSet identity_only(int n);
    double value(const std::string &label) const;
    /// Values in pauli_labels order, identity first.
    Eigen::VectorXd vector() const;
    std::vector<std::string> empty_labels() const;
    /// Complete label set, identity exactly 1, values in [-1, 1] if asked.
    void validate(bool check_range = true) const;
};

/// Exact expectation values of a density matrix (for oracles and ideal sets).
ExpectationSet expectations_of(const Eigen::MatrixXcd &rho);

/// One measurement setting: outcomes plus one logical measurement per logical
/// qubit (in logical-qubit order) and any extra rule such as a teleportation
/// ancilla check.
struct SettingRecord {
    OutcomeDistribution outcomes;
    std::vector<LogicalMeasurement> blocks;
    PostSelectionRule extra;
};

/// Estimates every non-identity Pauli label from its setting, post-selected
/// on all blocks' rules in that setting.
ExpectationSet aggregate(int n, const std::map<std::string, SettingRecord> &settings);

struct MleResult {
    Eigen::MatrixXcd rho;
    double objective = 0;  // sum over Paulis of (Tr(rho P) - p)^2
};

/// Constrained least squares: minimizes sum_P (Tr(rho P) - p_P)^2 over
/// density matrices. The objective equals d * ||rho - rho_lin||_F^2 for the
/// linear-inversion estimate rho_lin, so the minimizer is the Frobenius
/// projection of rho_lin, computed exactly from its spectrum.
MleResult mle_state(const ExpectationSet &es);

/// Projects a Hermitian matrix onto {rho >= 0, Tr rho = 1}.
Eigen::MatrixXcd project_density(const Eigen::MatrixXcd &h);

double state_fidelity(const Eigen::MatrixXcd &rho, const Eigen::VectorXcd &target);

struct ChshResult {
    double u1_plus_u2 = 0;
    bool violated = false;
    Eigen::Matrix3d t;
};
ChshResult chsh_criterion(const Eigen::MatrixXcd &rho);

/// Checks Hermiticity, unit trace and positivity.
void validate_density(const Eigen::MatrixXcd &rho, double tol = 1e-8);

}  // namespace d2lab

#endif

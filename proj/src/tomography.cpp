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

#include "d2lab/tomography.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "d2lab/dense.hpp"
#include "d2lab/errors.hpp"

namespace d2lab {

std::vector<std::string> pauli_labels(int n) {
    std::vector<std::string> out{""};
    for (int q = 0; q < n; ++q) {
        std::vector<std::string> next;
        for (const auto &s : out)
            for (char c : {'I', 'X', 'Y', 'Z'}) next.push_back(s + c);
        out = std::move(next);
    }
    return out;
}

std::vector<std::string> tomography_settings(int n) {
    std::vector<std::string> out;
    for (const auto &l : pauli_labels(n))
        if (l.find('I') == std::string::npos) out.push_back(l);
    return out;
}

std::string setting_for(const std::string &pauli_label) {
    std::string s = pauli_label;
    std::replace(s.begin(), s.end(), 'I', 'Z');
    return s;
}

ExpectationSet ExpectationSet::identity_only(int n) {
    ExpectationSet es;
    es.n_logical = n;
    ExpectationValue id;
    id.value = 1;
    id.exact = true;
    id.ps_rate = 1;
    es.entries[std::string(n, 'I')] = id;
    return es;
}

double ExpectationSet::value(const std::string &label) const {
    auto it = entries.find(label);
    if (it == entries.end()) {
        throw std::invalid_argument("expectation set has no entry for '" + label + "'");
    }
    return it->second.value;
}

Eigen::VectorXd ExpectationSet::vector() const {
    auto labels = pauli_labels(n_logical);
    Eigen::VectorXd v(labels.size());
    for (size_t k = 0; k < labels.size(); ++k) v[k] = value(labels[k]);
    return v;
}

std::vector<std::string> ExpectationSet::empty_labels() const {
    std::vector<std::string> out;
    for (const auto &[l, e] : entries)
        if (e.empty) out.push_back(l);
    return out;
}

void ExpectationSet::validate(bool check_range) const {
    if (n_logical != 1 && n_logical != 2) {
        throw DimensionError("expectation sets cover one or two logical qubits");
    }
    for (const auto &l : pauli_labels(n_logical)) {
        auto it = entries.find(l);
        if (it == entries.end()) {
            throw std::invalid_argument("expectation set is missing '" + l + "'");
        }
        if (check_range && std::abs(it->second.value) > 1 + 1e-12) {
            throw std::invalid_argument("expectation of '" + l + "' outside [-1, 1]");
        }
    }
    const auto &id = entries.at(std::string(n_logical, 'I'));
    if (id.value != 1 || id.two_sigma != 0) {
        throw std::invalid_argument("identity expectation must be exactly 1");
    }
}

ExpectationSet expectations_of(const Eigen::MatrixXcd &rho) {
    const int n = rho.rows() == 2 ? 1 : rho.rows() == 4 ? 2 : 0;
    if (n == 0 || rho.cols() != rho.rows()) {
        throw DimensionError("expected a 2x2 or 4x4 density matrix");
    }
    ExpectationSet es = ExpectationSet::identity_only(n);
    for (const auto &l : pauli_labels(n)) {
        if (l == std::string(n, 'I')) continue;
        ExpectationValue v;
        v.value = dense::expectation(rho, PauliString::from_text(l)).real();
        v.exact = true;
        v.ps_rate = 1;
        es.entries[l] = v;
    }
    return es;
}

ExpectationSet aggregate(int n, const std::map<std::string, SettingRecord> &settings) {
    ExpectationSet es = ExpectationSet::identity_only(n);
    for (const auto &label : pauli_labels(n)) {
        if (label == std::string(n, 'I')) continue;
        const std::string setting = setting_for(label);
        auto it = settings.find(setting);
        if (it == settings.end()) {
            throw std::invalid_argument("missing tomography setting '" + setting + "'");
        }
        const SettingRecord &rec = it->second;
        if (rec.blocks.size() != size_t(n)) {
            throw DimensionError("setting '" + setting + "' does not measure every logical qubit");
        }
        PostSelectionRule rule = rec.extra;
        Observable obs{label, {}};
        for (int q = 0; q < n; ++q) {
            const auto &m = rec.blocks[q];
            if (m.basis != setting[q]) {
                throw std::invalid_argument("setting '" + setting + "' measured in the wrong basis");
            }
            rule = rule & m.rule;
            if (label[q] != 'I') {
                obs.labels.insert(obs.labels.end(), m.observable.labels.begin(), m.observable.labels.end());
            }
        }
        Estimate e = postselect_and_estimate(rec.outcomes, rule, obs);
        ExpectationValue v;
        v.empty = e.empty();
        v.value = e.expectation.value_or(0.0);
        v.two_sigma = e.expectation_2sigma.value_or(0.0);
        v.n_pass = e.n_pass;
        v.n_total = e.n_total;
        v.ps_rate = e.ps_rate;
        v.exact = e.exact;
        es.entries[label] = v;
    }
    return es;
}

namespace {

// Euclidean projection onto the probability simplex.
Eigen::VectorXd project_simplex(const Eigen::VectorXd &v) {
    std::vector<double> u(v.data(), v.data() + v.size());
    std::sort(u.begin(), u.end(), std::greater<>());
    double css = 0, tau = 0;
    for (size_t k = 0; k < u.size(); ++k) {
        css += u[k];
        double t = (css - 1) / double(k + 1);
        if (u[k] - t > 0) tau = t;
    }
    return (v.array() - tau).max(0.0);
}

}  // namespace

Eigen::MatrixXcd project_density(const Eigen::MatrixXcd &h) {
    Eigen::MatrixXcd herm = (h + h.adjoint()) / 2.0;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(herm);
    Eigen::VectorXd lam = project_simplex(es.eigenvalues());
    return es.eigenvectors() * lam.cast<cplx>().asDiagonal() * es.eigenvectors().adjoint();
}

MleResult mle_state(const ExpectationSet &es) {
    es.validate(false);
    const int n = es.n_logical;
    const size_t d = size_t(1) << n;
    Eigen::MatrixXcd lin = Eigen::MatrixXcd::Zero(d, d);
    for (const auto &l : pauli_labels(n)) lin += es.value(l) * dense::pauli_matrix(PauliString::from_text(l));
    lin /= double(d);

    MleResult r;
    r.rho = project_density(lin);
    auto fit = expectations_of(r.rho);
    for (const auto &l : pauli_labels(n)) {
        double diff = fit.value(l) - es.value(l);
        r.objective += diff * diff;
    }
    return r;
}

double state_fidelity(const Eigen::MatrixXcd &rho, const Eigen::VectorXcd &target) {
    if (rho.rows() != target.size() || rho.cols() != target.size()) {
        throw DimensionError("state dimension " + std::to_string(target.size()) + " does not match density matrix " +
                             std::to_string(rho.rows()));
    }
    Eigen::VectorXcd psi = target.normalized();
    return std::clamp(psi.dot(rho * psi).real(), 0.0, 1.0);
}

void validate_density(const Eigen::MatrixXcd &rho, double tol) {
    if (rho.rows() != rho.cols()) {
        throw DimensionError("density matrix must be square");
    }
    if ((rho - rho.adjoint()).norm() > tol) {
        throw std::invalid_argument("density matrix is not Hermitian");
    }
    if (std::abs(rho.trace() - cplx(1)) > tol) {
        throw std::invalid_argument("density matrix trace differs from 1");
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es((rho + rho.adjoint()) / 2.0);
    if (es.eigenvalues().minCoeff() < -tol) {
        throw std::invalid_argument("density matrix has a negative eigenvalue");
    }
}

ChshResult chsh_criterion(const Eigen::MatrixXcd &rho) {
    if (rho.rows() != 4) {
        throw DimensionError("CHSH criterion needs a two-qubit state");
    }
    validate_density(rho, 1e-6);
    static const char ops[3] = {'X', 'Y', 'Z'};
    ChshResult r;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            r.t(i, j) = dense::expectation(rho, PauliString::from_text(std::string{ops[i], ops[j]})).real();
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(r.t.transpose() * r.t);
    // Ascending order: the two largest are the last two.
    r.u1_plus_u2 = es.eigenvalues()[2] + es.eigenvalues()[1];
    r.violated = r.u1_plus_u2 > 1;
    return r;
}

}  // namespace d2lab

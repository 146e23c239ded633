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

#include "d2lab/ptm.hpp"

#include <cmath>

#include "d2lab/dense.hpp"
#include "d2lab/errors.hpp"

namespace d2lab {

namespace {

int qubits_for_dim(int d) {
    if (d == 2) return 1;
    if (d == 4) return 2;
    throw DimensionError("PTMs are supported for d = 2 or 4, got " + std::to_string(d));
}

std::vector<Eigen::MatrixXcd> pauli_basis(int d) {
    std::vector<Eigen::MatrixXcd> out;
    for (const auto &l : pauli_labels(qubits_for_dim(d))) out.push_back(dense::pauli_matrix(PauliString::from_text(l)));
    return out;
}

Eigen::MatrixXcd kron(const Eigen::MatrixXcd &a, const Eigen::MatrixXcd &b) {
    Eigen::MatrixXcd out(a.rows() * b.rows(), a.cols() * b.cols());
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j) out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

}  // namespace

PTM PTM::identity(int d) {
    qubits_for_dim(d);
    return PTM{d, Eigen::MatrixXd::Identity(d * d, d * d)};
}

ChoiState ptm_to_choi(const PTM &r) {
    const int d = r.d, d2 = d * d;
    auto basis = pauli_basis(d);
    if (r.r.rows() != d2 || r.r.cols() != d2) {
        throw DimensionError("PTM shape does not match d");
    }
    Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(d2, d2);
    for (int o = 0; o < d2; ++o)
        for (int i = 0; i < d2; ++i)
            if (r.r(o, i) != 0) rho += r.r(o, i) * kron(basis[o].transpose(), basis[i]);
    return ChoiState{rho / double(d2)};
}

PTM choi_to_ptm(const ChoiState &c) {
    const int d2 = int(c.rho.rows());
    const int d = int(std::lround(std::sqrt(double(d2))));
    auto basis = pauli_basis(d);
    PTM r{d, Eigen::MatrixXd(d2, d2)};
    for (int o = 0; o < d2; ++o)
        for (int i = 0; i < d2; ++i) r.r(o, i) = (c.rho * kron(basis[o].transpose(), basis[i])).trace().real();
    return r;
}

Eigen::MatrixXcd trace_left(const Eigen::MatrixXcd &rho, int d) {
    Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(d, d);
    for (int k = 0; k < d; ++k) out += rho.block(k * d, k * d, d, d);
    return out;
}

PTM ptm_of_unitary(const Eigen::MatrixXcd &u) {
    const int d = int(u.rows());
    auto basis = pauli_basis(d);
    PTM r{d, Eigen::MatrixXd(d * d, d * d)};
    for (int o = 0; o < d * d; ++o)
        for (int i = 0; i < d * d; ++i) r.r(o, i) = (basis[o] * u * basis[i] * u.adjoint()).trace().real() / d;
    return r;
}

PTM ideal_cnot_ptm() {
    Eigen::MatrixXcd u = Eigen::MatrixXcd::Zero(4, 4);
    u(0, 0) = u(1, 1) = u(2, 3) = u(3, 2) = 1;
    return ptm_of_unitary(u);
}

PTM ideal_rz_ptm(double theta) {
    Eigen::MatrixXcd u = Eigen::MatrixXcd::Zero(2, 2);
    u(0, 0) = std::polar(1.0, -theta / 2);
    u(1, 1) = std::polar(1.0, theta / 2);
    return ptm_of_unitary(u);
}

PTM ideal_rx_ptm(double theta) {
    Eigen::MatrixXcd u(2, 2);
    const cplx c = std::cos(theta / 2), s = cplx(0, -std::sin(theta / 2));
    u << c, s, s, c;
    return ptm_of_unitary(u);
}

PTM ptm_raw(const std::vector<ExpectationSet> &inputs, const std::vector<ExpectationSet> &outputs) {
    if (inputs.empty() || inputs.size() != outputs.size()) {
        throw std::invalid_argument("ptm_raw needs matching, non-empty input and output sets");
    }
    const int n = inputs.front().n_logical;
    const int d = 1 << n, d2 = d * d;
    Eigen::MatrixXd pin(d2, inputs.size()), pout(d2, outputs.size());
    for (size_t k = 0; k < inputs.size(); ++k) {
        if (inputs[k].n_logical != n || outputs[k].n_logical != n) {
            throw DimensionError("mixed logical qubit counts in PTM data");
        }
        pin.col(k) = inputs[k].vector();
        pout.col(k) = outputs[k].vector();
    }
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(pin.transpose(), Eigen::ComputeThinU | Eigen::ComputeThinV);
    const auto &sv = svd.singularValues();
    if (sv.size() < d2 || sv[d2 - 1] < 1e-10 * std::max(1.0, sv[0])) {
        throw NumericalError("input states do not span the Pauli space", sv.size() < d2 ? 0.0 : sv[d2 - 1]);
    }
    // R^T solves P_in^T R^T = P_out^T in least squares.
    Eigen::MatrixXd rt = svd.solve(pout.transpose());
    return PTM{d, rt.transpose()};
}

CptpProjection project_cptp(const PTM &raw, const ProjectOptions &opt) {
    if (!raw.r.allFinite()) {
        throw std::invalid_argument("raw PTM has non-finite entries");
    }
    const int d = raw.d, d2 = d * d;
    const Eigen::MatrixXcd x0 = ptm_to_choi(raw).rho;
    const Eigen::MatrixXcd id_d = Eigen::MatrixXcd::Identity(d, d);

    auto project_tp = [&](const Eigen::MatrixXcd &x) {
        Eigen::MatrixXcd fix = (id_d / double(d) - trace_left(x, d)) / double(d);
        Eigen::MatrixXcd out = x;
        for (int k = 0; k < d; ++k) out.block(k * d, k * d, d, d) += fix;
        return out;
    };
    auto dual = [&](const Eigen::MatrixXcd &p, const Eigen::MatrixXcd &q) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es((p + p.adjoint()) / 2.0, Eigen::EigenvaluesOnly);
        const double x0n = x0.squaredNorm();
        return 0.5 * x0n - 0.5 * (x0 - p - q).squaredNorm() - es.eigenvalues().maxCoeff() - q.trace().real() / d2;
    };

    CptpProjection res;
    Eigen::MatrixXcd x = x0, y = x0;
    Eigen::MatrixXcd p = Eigen::MatrixXcd::Zero(d2, d2), q = p;
    for (size_t k = 1; k <= opt.max_iterations; ++k) {
        Eigen::MatrixXcd y_new = project_density(x + p);
        p = x + p - y_new;
        Eigen::MatrixXcd x_new = project_tp(y_new + q);
        q = y_new + q - x_new;
        res.step = std::max((y_new - y).norm(), (x_new - x).norm());
        res.dual_log.push_back(dual(p, q));
        x = std::move(x_new);
        y = std::move(y_new);
        res.iterations = k;
        if (res.step < opt.tol) {
            res.choi = ChoiState{y};
            res.ptm = choi_to_ptm(res.choi);
            return res;
        }
    }
    throw NumericalError("CPTP projection did not converge in " + std::to_string(opt.max_iterations) + " iterations",
                         res.step);
}

double gate_fidelity(const PTM &r, const PTM &ideal) {
    if (r.d != ideal.d || r.r.rows() != ideal.r.rows() || r.r.cols() != ideal.r.cols()) {
        throw DimensionError("gate_fidelity: PTM dimensions differ");
    }
    const double d = r.d;
    return ((r.r.transpose() * ideal.r).trace() + d) / (d * d + d);
}

}  // namespace d2lab

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

#include <gtest/gtest.h>

#include <Eigen/Dense>
#include <random>

#include "d2lab/dense.hpp"
#include "d2lab/errors.hpp"
#include "d2lab/pauli.hpp"

using namespace d2lab;

namespace {

using Mat = Eigen::MatrixXcd;
const std::complex<double> i1(0, 1);

Mat single(char op) {
    Mat m(2, 2);
    switch (op) {
        case 'I': m << 1, 0, 0, 1; break;
        case 'X': m << 0, 1, 1, 0; break;
        case 'Y': m << 0, -i1, i1, 0; break;
        case 'Z': m << 1, 0, 0, -1; break;
    }
    return m;
}

Mat kron(const Mat &a, const Mat &b) {
    Mat out(a.rows() * b.rows(), a.cols() * b.cols());
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j) out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

// Independent construction: Kronecker product, leftmost factor = qubit 0.
Mat oracle_matrix(const PauliString &p) {
    static const std::complex<double> ph[4] = {1.0, i1, -1.0, -i1};
    Mat m = Mat::Identity(1, 1);
    for (size_t q = 0; q < p.size(); ++q) m = kron(m, single(p.op(q)));
    return ph[p.phase()] * m;
}

Mat gate_unitary(GateKind k, uint32_t a, uint32_t b) {
    const double r = std::sqrt(0.5);
    Mat u1(2, 2);
    switch (k) {
        case GateKind::H: u1 << r, r, r, -r; break;
        case GateKind::S: u1 << 1, 0, 0, i1; break;
        case GateKind::SDag: u1 << 1, 0, 0, -i1; break;
        case GateKind::SqrtX: u1 << 0.5 + 0.5 * i1, 0.5 - 0.5 * i1, 0.5 - 0.5 * i1, 0.5 + 0.5 * i1; break;
        case GateKind::SqrtXDag: u1 << 0.5 - 0.5 * i1, 0.5 + 0.5 * i1, 0.5 + 0.5 * i1, 0.5 - 0.5 * i1; break;
        case GateKind::X: u1 = single('X'); break;
        case GateKind::Y: u1 = single('Y'); break;
        case GateKind::Z: u1 = single('Z'); break;
        case GateKind::CZ: {
            Mat u = Mat::Identity(4, 4);
            u(3, 3) = -1;
            return u;
        }
        case GateKind::CNOT: {
            Mat u = Mat::Zero(4, 4);
            if (a == 0) {
                u(0, 0) = u(1, 1) = u(2, 3) = u(3, 2) = 1;
            } else {
                u(0, 0) = u(2, 2) = u(1, 3) = u(3, 1) = 1;
            }
            return u;
        }
    }
    Mat id = Mat::Identity(2, 2);
    return a == 0 ? kron(u1, id) : kron(id, u1);
}

const GateKind kAllGates[] = {GateKind::H, GateKind::SqrtX, GateKind::SqrtXDag, GateKind::S,   GateKind::SDag,
                              GateKind::X, GateKind::Y,     GateKind::Z,        GateKind::CZ, GateKind::CNOT};

PauliString random_pauli(size_t n, std::mt19937_64 &rng) {
    PauliString p(n);
    for (size_t q = 0; q < n; ++q) p.set_op(q, "IXYZ"[rng() % 4]);
    p.set_phase(rng() % 4);
    return p;
}

}  // namespace

TEST(Pauli, TextRoundTrip) {
    auto p = PauliString::from_text("-iZIYX");
    EXPECT_EQ(p.size(), 4u);
    EXPECT_EQ(p.phase(), 3);
    EXPECT_EQ(p.op(2), 'Y');
    EXPECT_EQ(p.str(), "-iZIYX");
    EXPECT_EQ(PauliString::from_text("XZ").str(), "+XZ");
    EXPECT_THROW(PauliString::from_text("XQ"), ParseError);
}

TEST(Pauli, XTimesZIsMinusIY) {
    auto p = multiply(PauliString::from_text("X"), PauliString::from_text("Z"));
    EXPECT_EQ(p.str(), "-iY");
}

TEST(Pauli, LogicalYFromXAndZ) {
    auto xl = PauliString::from_text("IIXX");
    auto zl = PauliString::from_text("ZIZI");
    // X3X4 * Z1Z3 = -i Z1Y3X4, hence i X_L Z_L = Z1Y3X4 with phase +1.
    EXPECT_EQ(multiply(xl, zl).str(), "-iZIYX");
    EXPECT_EQ(multiply(xl, zl).mul_phase(1).str(), "+ZIYX");
    EXPECT_TRUE(oracle_matrix(multiply(xl, zl)).isApprox(oracle_matrix(xl) * oracle_matrix(zl)));
}

TEST(Pauli, SquareIsIdentity) {
    auto p = PauliString::from_text("ZZII");
    auto sq = multiply(p, p);
    EXPECT_TRUE(sq.is_identity());
    EXPECT_EQ(sq.phase(), 0);
}

TEST(Pauli, Commutation) {
    EXPECT_FALSE(commutes(PauliString::from_text("IXXI"), PauliString::from_text("ZZII")));
    EXPECT_TRUE(commutes(PauliString::from_text("XXXX"), PauliString::from_text("ZZII")));
    EXPECT_TRUE(commutes(PauliString::from_text("XYZX"), PauliString(4)));
    EXPECT_THROW(commutes(PauliString(3), PauliString(4)), DimensionError);
    EXPECT_THROW(multiply(PauliString(3), PauliString(4)), DimensionError);
}

TEST(Pauli, MultiplyMatchesMatrices) {
    std::mt19937_64 rng(7);
    for (int t = 0; t < 200; ++t) {
        auto p = random_pauli(3, rng), q = random_pauli(3, rng);
        EXPECT_TRUE(oracle_matrix(multiply(p, q)).isApprox(oracle_matrix(p) * oracle_matrix(q)));
        bool anti = !(oracle_matrix(p) * oracle_matrix(q)).isApprox(oracle_matrix(q) * oracle_matrix(p));
        EXPECT_EQ(commutes(p, q), !anti);
    }
}

TEST(Pauli, MultiplyAssociative) {
    std::mt19937_64 rng(11);
    for (int t = 0; t < 200; ++t) {
        auto a = random_pauli(5, rng), b = random_pauli(5, rng), c = random_pauli(5, rng);
        EXPECT_EQ(multiply(multiply(a, b), c), multiply(a, multiply(b, c)));
        auto back = multiply(a, multiply(a, b));
        EXPECT_TRUE(back.same_support(b));
        EXPECT_EQ((back.phase() - b.phase() + 4) % 2, 0);
    }
}

TEST(Pauli, ConjugationBasics) {
    EXPECT_EQ(conjugate(PauliString::from_text("X"), CliffordGate::one(GateKind::H, 0)).str(), "+Z");
    EXPECT_EQ(conjugate(PauliString::from_text("XI"), CliffordGate::two(GateKind::CNOT, 0, 1)).str(), "+XX");
    EXPECT_EQ(conjugate(PauliString::from_text("IZ"), CliffordGate::two(GateKind::CNOT, 0, 1)).str(), "+ZZ");
    EXPECT_EQ(conjugate(PauliString::from_text("X"), CliffordGate::one(GateKind::S, 0)).str(), "+Y");
    EXPECT_EQ(conjugate(PauliString::from_text("Z"), CliffordGate::one(GateKind::SqrtX, 0)).str(), "-Y");
    EXPECT_THROW(conjugate(PauliString(2), CliffordGate::one(GateKind::H, 2)), DimensionError);
}

TEST(Pauli, ConjugationMatchesDenseForEveryGate) {
    std::mt19937_64 rng(3);
    for (auto k : kAllGates) {
        for (int orient = 0; orient < 2; ++orient) {
            uint32_t a = orient, b = 1 - orient;
            auto g = is_two_qubit(k) ? CliffordGate::two(k, a, b) : CliffordGate::one(k, a);
            Mat u = gate_unitary(k, a, b);
            for (int t = 0; t < 40; ++t) {
                auto p = random_pauli(2, rng);
                Mat expect = u * oracle_matrix(p) * u.adjoint();
                EXPECT_TRUE(oracle_matrix(conjugate(p, g)).isApprox(expect, 1e-12))
                    << gate_name(k) << " on " << p.str() << " -> " << conjugate(p, g).str();
            }
        }
    }
}

TEST(Pauli, ConjugationPreservesCommutationAndInverts) {
    std::mt19937_64 rng(5);
    for (auto k : kAllGates) {
        for (int t = 0; t < 100; ++t) {
            uint32_t a = rng() % 6, b = (a + 1 + rng() % 5) % 6;
            auto g = is_two_qubit(k) ? CliffordGate::two(k, a, b) : CliffordGate::one(k, a);
            auto p = random_pauli(6, rng), q = random_pauli(6, rng);
            EXPECT_EQ(commutes(p, q), commutes(conjugate(p, g), conjugate(q, g)));
            EXPECT_EQ(conjugate(conjugate(p, g), g.inverse()), p);
        }
    }
}

TEST(Pauli, DensePauliMatrixMatchesKronecker) {
    std::mt19937_64 rng(9);
    for (int t = 0; t < 50; ++t) {
        auto p = random_pauli(3, rng);
        EXPECT_TRUE(dense::pauli_matrix(p).isApprox(oracle_matrix(p)));
    }
}

TEST(Pauli, WideStrings) {
    PauliString p(100), q(100);
    p.set_op(70, 'X');
    q.set_op(70, 'Z');
    EXPECT_FALSE(commutes(p, q));
    EXPECT_EQ(multiply(p, q).op(70), 'Y');
    EXPECT_EQ(multiply(p, q).phase(), 3);
}

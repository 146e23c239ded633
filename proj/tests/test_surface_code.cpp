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

#include <numbers>

#include "d2lab/dense.hpp"
#include "d2lab/errors.hpp"
#include "d2lab/frame_sampler.hpp"
#include "d2lab/surface_code.hpp"

using namespace d2lab;
using cd = std::complex<double>;

namespace {

const LogicalBlock kBlock{{0, 1, 2, 3}, ""};
constexpr double kPi = std::numbers::pi;

Eigen::VectorXcd to_vec(const std::array<cd, 16> &a) {
    Eigen::VectorXcd v(16);
    for (int i = 0; i < 16; ++i) v[i] = a[i];
    return v;
}

double overlap(const Eigen::VectorXcd &a, const Eigen::VectorXcd &b) { return std::norm(a.dot(b)); }

Estimate logical_estimate(size_t n, const LayerList &body, const std::vector<LogicalMeasurement> &ms,
                          const NoiseModel &nm = NoiseModel::noiseless(), const PostSelectionRule &extra = {}) {
    auto c = with_logical_measurements(n, body, ms);
    auto res = run_dense_exact(apply_noise_sites(c, nm));
    PostSelectionRule rule = extra;
    Observable obs{"obs", {}};
    for (const auto &m : ms) {
        rule = rule & m.rule;
        obs.labels.insert(obs.labels.end(), m.observable.labels.begin(), m.observable.labels.end());
    }
    return postselect_and_estimate(res.outcomes, rule, obs);
}

}  // namespace

TEST(LogicalBlock, OperatorAlgebra) {
    auto s = kBlock.stabilizers(4);
    for (auto &a : s)
        for (auto &b : s) EXPECT_TRUE(commutes(a, b));
    auto x = kBlock.logical_x(4), z = kBlock.logical_z(4), y = kBlock.logical_y(4);
    for (auto &g : s) {
        EXPECT_TRUE(commutes(g, x));
        EXPECT_TRUE(commutes(g, z));
        EXPECT_TRUE(commutes(g, y));
    }
    EXPECT_FALSE(commutes(x, z));
    EXPECT_EQ(multiply(x, z).mul_phase(1), y);
    EXPECT_EQ(y.str(), "+ZIYX");
}

TEST(Prep, FtZeroAndOneAreCodeStates) {
    auto zero = run_statevector(prep_ft_z(kBlock, 0));
    auto one = run_statevector(prep_ft_z(kBlock, 1));
    EXPECT_NEAR(overlap(zero, to_vec(logical_zero_state())), 1, 1e-12);
    EXPECT_NEAR(overlap(one, to_vec(logical_one_state())), 1, 1e-12);
}

TEST(Prep, FtPlusIsProductOfBellPairs) {
    Eigen::VectorXcd expect = Eigen::VectorXcd::Zero(16);
    for (int i : {0b0000, 0b0011, 0b1100, 0b1111}) expect[i] = 0.5;
    auto plus = run_statevector(prep_ft_x(kBlock, 1));
    EXPECT_NEAR(overlap(plus, expect), 1, 1e-12);
    EXPECT_LT((plus - expect).norm(), 1e-12);
    auto minus = run_statevector(prep_ft_x(kBlock, -1));
    Eigen::VectorXcd m = (to_vec(logical_zero_state()) - to_vec(logical_one_state())) / std::sqrt(2.0);
    EXPECT_NEAR(overlap(minus, m), 1, 1e-12);
}

TEST(Prep, EveryPrepIsAStabilizerEigenstate) {
    std::vector<Circuit> preps = {prep_ft_z(kBlock, 0), prep_ft_z(kBlock, 1), prep_ft_x(kBlock, 1),
                                  prep_ft_x(kBlock, -1), prep_nft_arbitrary(kBlock, cd(0.6, 0), cd(0, 0.8)),
                                  prep_nft_arbitrary(kBlock, cd(std::cos(0.3), 0), std::polar(std::sin(0.3), 2.1))};
    for (const auto &c : preps) {
        auto psi = run_statevector(c);
        Eigen::MatrixXcd rho = psi * psi.adjoint();
        for (const auto &s : kBlock.stabilizers(4)) EXPECT_NEAR(dense::expectation(rho, s).real(), 1, 1e-12);
    }
}

TEST(Prep, NftArbitraryStates) {
    auto z0 = to_vec(logical_zero_state()), z1 = to_vec(logical_one_state());
    EXPECT_NEAR(overlap(run_statevector(prep_nft_arbitrary(kBlock, 1, 0)), z0), 1, 1e-12);
    for (double th : {-2.0, -0.5, 0.7, kPi}) {
        const double r = std::sqrt(0.5);
        Eigen::VectorXcd expect = r * z0 + std::polar(r, th) * z1;
        EXPECT_NEAR(overlap(run_statevector(prep_nft_arbitrary(kBlock, r, std::polar(r, th))), expect), 1, 1e-12);
        Eigen::VectorXcd ex = std::cos(th / 2) * z0 + cd(0, -std::sin(th / 2)) * z1;
        EXPECT_NEAR(overlap(run_statevector(prep_nft_arbitrary(kBlock, std::cos(th / 2), cd(0, -std::sin(th / 2)))), ex),
                    1, 1e-12);
    }
    EXPECT_THROW(prep_nft_arbitrary(kBlock, 1, 1), std::invalid_argument);
}

TEST(Prep, NftUsesChainNeighboursOnly) {
    auto c = prep_nft_arbitrary(kBlock, cd(0.6, 0), cd(0, 0.8));
    for (const auto &m : c.moments())
        for (const auto &ins : m)
            if (ins.is_two_qubit_gate()) {
                int a = ins.qubits[0], b = ins.qubits[1];
                EXPECT_EQ(std::abs(a - b), 1);
            }
}

TEST(Prep, FtZeroNeverOverlapsCzOnAQubit) {
    auto c = prep_ft_z(kBlock, 0);
    EXPECT_EQ(c.moments().size(), 5u);
    for (const auto &m : c.moments()) {
        std::vector<int> use(4, 0);
        for (const auto &ins : m)
            if (ins.kind != OpKind::Idle)
                for (auto q : ins.targets()) EXPECT_EQ(use[q]++, 0);
    }
}

TEST(TransversalCnot, ConjugatesLogicalOperators) {
    LogicalBlock a{{0, 1, 2, 3}, "A"}, b{{4, 5, 6, 7}, "B"};
    auto c = transversal_cnot(LogicalLayout{{a, b}}, 8);
    auto push = [&](PauliString p) {
        for (const auto &m : c.moments())
            for (const auto &ins : m)
                if (ins.kind == OpKind::Clifford) p = conjugate(p, *ins.as_clifford());
        return p;
    };
    auto xa = a.logical_x(8), za = a.logical_z(8), xb = b.logical_x(8), zb = b.logical_z(8);
    EXPECT_EQ(push(xa), multiply(xa, xb));
    EXPECT_EQ(push(zb), multiply(za, zb));
    EXPECT_EQ(push(za), za);
    EXPECT_EQ(push(xb), xb);
    for (const auto &s : a.stabilizers(8)) {
        auto img = push(s);
        bool in_group = img == s;
        for (const auto &t : b.stabilizers(8)) in_group = in_group || img == multiply(s, t);
        EXPECT_TRUE(in_group) << img.str();
    }
    EXPECT_THROW(transversal_cnot(LogicalLayout{{a, a}}, 8), CircuitError);
}

TEST(TransversalCnot, BellStateAndIdentityOnZeros) {
    LogicalBlock a{{0, 1, 2, 3}, "A"}, b{{4, 5, 6, 7}, "B"};
    auto body = interleave(prep_ft_x_layers(a, 1), prep_ft_z_layers(b, 0));
    auto cn = transversal_cnot_layers(a, b);
    body.insert(body.end(), cn.begin(), cn.end());
    EXPECT_NEAR(*logical_estimate(8, body, {logical_measure(a, 'X'), logical_measure(b, 'X')}).expectation, 1, 1e-12);
    EXPECT_NEAR(*logical_estimate(8, body, {logical_measure(a, 'Z'), logical_measure(b, 'Z')}).expectation, 1, 1e-12);
    EXPECT_NEAR(*logical_estimate(8, body, {logical_measure(a, 'Y'), logical_measure(b, 'Y')}).expectation, -1, 1e-12);

    auto zz = interleave(prep_ft_z_layers(a, 0), prep_ft_z_layers(b, 0));
    zz.insert(zz.end(), cn.begin(), cn.end());
    auto e = logical_estimate(8, zz, {logical_measure(b, 'Z')});
    EXPECT_NEAR(*e.expectation, 1, 1e-12);
    EXPECT_NEAR(e.ps_rate, 1, 1e-12);
}

TEST(LogicalMeasure, RulesAndValues) {
    auto z = logical_measure(kBlock, 'Z');
    EXPECT_EQ(z.observable.labels, (std::vector<std::string>{"m1z", "m3z"}));
    EXPECT_EQ(z.rule.conditions().size(), 2u);
    auto x = logical_measure(kBlock, 'X');
    EXPECT_EQ(x.observable.labels, (std::vector<std::string>{"m3x", "m4x"}));
    auto y = logical_measure(kBlock, 'Y');
    EXPECT_EQ(y.bases, (std::vector<char>{'Z', 'Z', 'Y', 'X'}));
    EXPECT_EQ(y.observable.labels, (std::vector<std::string>{"m1z", "m3y", "m4x"}));
    EXPECT_EQ(y.rule.conditions().size(), 1u);
    EXPECT_THROW(logical_measure(kBlock, 'W'), std::invalid_argument);

    auto e0 = logical_estimate(4, prep_ft_z_layers(kBlock, 0), {z});
    EXPECT_NEAR(*e0.expectation, 1, 1e-12);
    EXPECT_NEAR(e0.ps_rate, 1, 1e-12);
    const double r = std::sqrt(0.5);
    auto ei = logical_estimate(4, prep_nft_layers(kBlock, r, cd(0, r)), {y});
    EXPECT_NEAR(*ei.expectation, 1, 1e-12);
    auto ey = logical_estimate(4, prep_ft_z_layers(kBlock, 0), {y});
    EXPECT_NEAR(*ey.expectation, 0, 1e-12);
    EXPECT_NEAR(ey.ps_rate, 1, 1e-12);
    auto em = logical_estimate(4, prep_ft_x_layers(kBlock, -1), {x});
    EXPECT_NEAR(*em.expectation, -1, 1e-12);
}

TEST(LogicalMeasure, NoiselessFrameSamplingAlwaysPasses) {
    auto m = logical_measure(kBlock, 'Z');
    auto c = with_logical_measurements(4, prep_ft_z_layers(kBlock, 0), {m});
    for (uint64_t seed : {1, 2, 3}) {
        auto t = sample_pauli_frame(apply_noise_sites(c, NoiseModel::noiseless()), 2000, seed);
        auto e = postselect_and_estimate(OutcomeDistribution::from_shots(t), m.rule, m.observable);
        EXPECT_EQ(e.ps_rate, 1);
        EXPECT_EQ(*e.expectation, 1);
    }
    for (char basis : {'X', 'Z'}) {
        for (const auto &prep : {prep_ft_z_layers(kBlock, 1), prep_ft_x_layers(kBlock, -1)}) {
            auto mm = logical_measure(kBlock, basis);
            auto t = sample_pauli_frame(
                apply_noise_sites(with_logical_measurements(4, prep, {mm}), NoiseModel::noiseless()), 2000, 4);
            EXPECT_EQ(postselect_and_estimate(OutcomeDistribution::from_shots(t), mm.rule, mm.observable).ps_rate, 1);
        }
    }
}

TEST(LogicalMeasure, ReadoutFlipFailureRateMatchesEnumeration) {
    auto m = logical_measure(kBlock, 'Z');
    auto c = with_logical_measurements(4, prep_ft_z_layers(kBlock, 0), {m});
    const double pf[4] = {0.0, 0.05, 0.02, 0.08};
    NoiseModel nm = NoiseModel::noiseless();
    for (int q = 0; q < 4; ++q) nm.readout["q" + std::to_string(q + 1)] = {1 - pf[q], 1 - pf[q]};
    // Enumerate flip patterns: pass iff flips on (1,2) and on (3,4) have even parity.
    double pass = 0;
    for (int f = 0; f < 16; ++f) {
        double w = 1;
        for (int q = 0; q < 4; ++q) w *= (f >> q) & 1 ? pf[q] : 1 - pf[q];
        bool ok = (((f >> 0) ^ (f >> 1)) & 1) == 0 && (((f >> 2) ^ (f >> 3)) & 1) == 0;
        if (ok) pass += w;
    }
    const size_t shots = 100000;
    auto t = sample_pauli_frame(apply_noise_sites(c, nm), shots, 17);
    auto e = postselect_and_estimate(OutcomeDistribution::from_shots(t), m.rule, m.observable);
    double sigma = std::sqrt(pass * (1 - pass) / shots);
    EXPECT_NEAR(1 - e.ps_rate, 1 - pass, 3 * sigma);
}

TEST(Teleport, RzOnPlusFollowsCosSin) {
    LogicalBlock anc{{0, 1, 2, 3}, "A"}, data{{4, 5, 6, 7}, "D"};
    for (int k = 0; k < 17; ++k) {
        double th = -kPi + 2 * kPi * (k + 1) / 17;
        auto t = teleport_rotation('Z', th, data, anc, prep_ft_x_layers(data, 1));
        double expect[3] = {std::cos(th), std::sin(th), 0};
        int idx = 0;
        for (char b : {'X', 'Y', 'Z'}) {
            auto e = logical_estimate(8, t.layers, {t.ancilla, logical_measure(data, b)}, NoiseModel::noiseless(), t.rule);
            // the ancilla observable is fixed at +1 by the rule
            EXPECT_NEAR(*e.expectation, expect[idx++], 1e-9) << b << " theta " << th;
            EXPECT_NEAR(e.ps_rate, 0.5, 1e-9);
        }
    }
}

TEST(Teleport, RxPiFlipsZero) {
    LogicalBlock anc{{0, 1, 2, 3}, "A"}, data{{4, 5, 6, 7}, "D"};
    auto t = teleport_rotation('X', kPi, data, anc, prep_ft_z_layers(data, 0));
    auto e = logical_estimate(8, t.layers, {t.ancilla, logical_measure(data, 'Z')}, NoiseModel::noiseless(), t.rule);
    EXPECT_NEAR(*e.expectation, -1, 1e-9);
    auto t2 = teleport_rotation('X', 0.9, data, anc, prep_ft_z_layers(data, 0));
    auto ey = logical_estimate(8, t2.layers, {t2.ancilla, logical_measure(data, 'Y')}, NoiseModel::noiseless(), t2.rule);
    EXPECT_NEAR(*ey.expectation, -std::sin(0.9), 1e-9);
    EXPECT_THROW(teleport_rotation('Y', 0.1, data, anc, {}), std::invalid_argument);
    EXPECT_THROW(teleport_rotation('Z', NAN, data, anc, {}), std::invalid_argument);
}

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

#include <random>

#include "d2lab/dense.hpp"
#include "d2lab/errors.hpp"
#include "d2lab/frame_sampler.hpp"
#include "d2lab/tomography.hpp"

using namespace d2lab;
using cd = std::complex<double>;
using Mat = Eigen::MatrixXcd;

namespace {

Mat random_density(int d, std::mt19937_64 &rng, int rank = 0) {
    std::normal_distribution<double> g;
    const int k = rank ? rank : d;
    Mat a(d, k);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < k; ++j) a(i, j) = cd(g(rng), g(rng));
    Mat rho = a * a.adjoint();
    return rho / rho.trace();
}

Mat random_unitary2(std::mt19937_64 &rng) {
    std::normal_distribution<double> g;
    Mat a(2, 2);
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) a(i, j) = cd(g(rng), g(rng));
    return Eigen::HouseholderQR<Mat>(a).householderQ();
}

Mat kron(const Mat &a, const Mat &b) {
    Mat out(a.rows() * b.rows(), a.cols() * b.cols());
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j) out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

std::map<std::string, SettingRecord> exact_settings(const std::vector<LogicalBlock> &blocks, size_t n,
                                                    const LayerList &body, const NoiseModel &nm) {
    std::map<std::string, SettingRecord> out;
    for (const auto &s : tomography_settings(int(blocks.size()))) {
        SettingRecord rec;
        for (size_t k = 0; k < blocks.size(); ++k) rec.blocks.push_back(logical_measure(blocks[k], s[k]));
        auto c = with_logical_measurements(n, body, rec.blocks);
        rec.outcomes = run_dense_exact(apply_noise_sites(c, nm)).outcomes;
        out[s] = rec;
    }
    return out;
}

const LogicalBlock kBlock{{0, 1, 2, 3}, ""};

}  // namespace

TEST(Labels, OrderingAndSettings) {
    auto l = pauli_labels(2);
    ASSERT_EQ(l.size(), 16u);
    EXPECT_EQ(l[0], "II");
    EXPECT_EQ(l[1], "IX");
    EXPECT_EQ(l[4], "XI");
    EXPECT_EQ(l[15], "ZZ");
    EXPECT_EQ(tomography_settings(1), (std::vector<std::string>{"X", "Y", "Z"}));
    EXPECT_EQ(tomography_settings(2).size(), 9u);
    EXPECT_EQ(setting_for("IX"), "ZX");
}

TEST(Aggregate, IdealZeroState) {
    auto es = aggregate(1, exact_settings({kBlock}, 4, prep_ft_z_layers(kBlock, 0), NoiseModel::noiseless()));
    EXPECT_NEAR(es.value("X"), 0, 1e-12);
    EXPECT_NEAR(es.value("Y"), 0, 1e-12);
    EXPECT_NEAR(es.value("Z"), 1, 1e-12);
    EXPECT_EQ(es.value("I"), 1);
    es.validate();
}

TEST(Aggregate, SampledZeroStateWithinErrorBars) {
    std::map<std::string, SettingRecord> settings;
    for (char b : {'X', 'Y', 'Z'}) {
        SettingRecord rec;
        rec.blocks = {logical_measure(kBlock, b)};
        auto c = with_logical_measurements(4, prep_ft_z_layers(kBlock, 0), rec.blocks);
        rec.outcomes = OutcomeDistribution::from_shots(
            sample_pauli_frame(apply_noise_sites(c, NoiseModel::uniform(0.002, 0.02, 0.03)), 40000, 5));
        settings[std::string(1, b)] = rec;
    }
    auto es = aggregate(1, settings);
    EXPECT_NEAR(es.value("X"), 0, 2.5 * es.entries["X"].two_sigma);
    EXPECT_NEAR(es.value("Y"), 0, 2.5 * es.entries["Y"].two_sigma);
    EXPECT_GT(es.value("Z"), 0.97);
    EXPECT_LT(es.entries["Z"].ps_rate, 1);
    EXPECT_GT(es.entries["Z"].n_pass, 100);
}

TEST(Aggregate, IdealBellCorrelations) {
    LogicalBlock a{{0, 1, 2, 3}, "A"}, b{{4, 5, 6, 7}, "B"};
    auto body = interleave(prep_ft_x_layers(a, 1), prep_ft_z_layers(b, 0));
    auto cn = transversal_cnot_layers(a, b);
    body.insert(body.end(), cn.begin(), cn.end());
    auto es = aggregate(2, exact_settings({a, b}, 8, body, NoiseModel::noiseless()));
    EXPECT_NEAR(es.value("XX"), 1, 1e-12);
    EXPECT_NEAR(es.value("YY"), -1, 1e-12);
    EXPECT_NEAR(es.value("ZZ"), 1, 1e-12);
    for (const auto &l : {"IX", "XI", "ZI", "IZ", "XY", "XZ", "YZ"}) EXPECT_NEAR(es.value(l), 0, 1e-12) << l;
    auto chsh = chsh_criterion(mle_state(es).rho);
    EXPECT_NEAR(chsh.u1_plus_u2, 2, 1e-9);
}

TEST(Aggregate, MissingAndEmptySettings) {
    auto settings = exact_settings({kBlock}, 4, prep_ft_z_layers(kBlock, 0), NoiseModel::noiseless());
    auto partial = settings;
    partial.erase("Y");
    EXPECT_THROW(aggregate(1, partial), std::invalid_argument);

    // A rule that can never hold empties the setting instead of producing NaN.
    auto never = settings;
    never["X"].extra = PostSelectionRule(std::vector<ParityCondition>{{"never", {"m1x"}}});
    never["X"].outcomes.weights.clear();
    never["X"].outcomes.weights[0b0001] = 1;
    auto es = aggregate(1, never);
    EXPECT_TRUE(es.entries["X"].empty);
    EXPECT_EQ(es.value("X"), 0);
    EXPECT_EQ(es.empty_labels(), (std::vector<std::string>{"X"}));
}

TEST(Mle, RecoversValidStates) {
    std::mt19937_64 rng(1);
    for (int d : {2, 4}) {
        for (int t = 0; t < 100; ++t) {
            Mat rho = random_density(d, rng, 1 + t % d);
            auto r = mle_state(expectations_of(rho));
            EXPECT_LT((r.rho - rho).norm(), 1e-6);
            EXPECT_LT(r.objective, 1e-12);
        }
    }
}

TEST(Mle, UnphysicalBlochVectorProjectsToBall) {
    ExpectationSet es = ExpectationSet::identity_only(1);
    es.entries["X"].value = 0;
    es.entries["Y"].value = 0;
    es.entries["Z"].value = 1.2;
    auto r = mle_state(es);
    EXPECT_NEAR(r.rho(0, 0).real(), 1, 1e-9);
    EXPECT_NEAR(std::abs(r.rho(1, 1)), 0, 1e-9);

    // Oracle: the objective is |r - r0|^2 on Bloch vectors, so the minimizer
    // is r0 inside the ball and r0/|r0| outside it.
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> u(-1.5, 1.5);
    for (int t = 0; t < 200; ++t) {
        Eigen::Vector3d r0(u(rng), u(rng), u(rng));
        ExpectationSet e = ExpectationSet::identity_only(1);
        e.entries["X"].value = r0[0];
        e.entries["Y"].value = r0[1];
        e.entries["Z"].value = r0[2];
        Eigen::Vector3d expect = r0.norm() > 1 ? Eigen::Vector3d(r0.normalized()) : r0;
        auto fit = expectations_of(mle_state(e).rho);
        EXPECT_NEAR(fit.value("X"), expect[0], 1e-9);
        EXPECT_NEAR(fit.value("Y"), expect[1], 1e-9);
        EXPECT_NEAR(fit.value("Z"), expect[2], 1e-9);
    }
}

TEST(Mle, FuzzedInputsGiveDensityMatrices) {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-1.5, 1.5);
    for (int t = 0; t < 200; ++t) {
        ExpectationSet e = ExpectationSet::identity_only(2);
        for (const auto &l : pauli_labels(2))
            if (l != "II") e.entries[l].value = u(rng);
        EXPECT_NO_THROW(validate_density(mle_state(e).rho, 1e-9));
    }
    ExpectationSet bad = ExpectationSet::identity_only(1);
    EXPECT_THROW(mle_state(bad), std::invalid_argument);
}

TEST(Fidelity, Examples) {
    Eigen::VectorXcd z0(16), z1(16);
    auto a = logical_zero_state(), b = logical_one_state();
    for (int i = 0; i < 16; ++i) z0[i] = a[i], z1[i] = b[i];
    Mat pure = z0 * z0.adjoint();
    EXPECT_NEAR(state_fidelity(pure, z0), 1, 1e-12);
    Mat mix = (pure + z1 * z1.adjoint()) / 2.0;
    EXPECT_NEAR(state_fidelity(mix, z0), 0.5, 1e-12);
    EXPECT_THROW(state_fidelity(Mat::Identity(2, 2) / 2.0, z0), DimensionError);
}

TEST(Chsh, BellMixedAndLocalInvariance) {
    Eigen::VectorXcd phi = Eigen::VectorXcd::Zero(4);
    phi[0] = phi[3] = std::sqrt(0.5);
    auto r = chsh_criterion(phi * phi.adjoint());
    EXPECT_NEAR(r.u1_plus_u2, 2, 1e-12);
    EXPECT_TRUE(r.violated);
    EXPECT_NEAR(r.t(0, 0), 1, 1e-12);
    EXPECT_NEAR(r.t(1, 1), -1, 1e-12);
    EXPECT_NEAR(r.t(2, 2), 1, 1e-12);
    auto m = chsh_criterion(Mat::Identity(4, 4) / 4.0);
    EXPECT_NEAR(m.u1_plus_u2, 0, 1e-12);
    EXPECT_FALSE(m.violated);

    std::mt19937_64 rng(4);
    for (int t = 0; t < 50; ++t) {
        Mat rho = random_density(4, rng);
        Mat u = kron(random_unitary2(rng), random_unitary2(rng));
        EXPECT_NEAR(chsh_criterion(rho).u1_plus_u2, chsh_criterion(u * rho * u.adjoint()).u1_plus_u2, 1e-9);
    }
    Mat bad = Mat::Identity(4, 4) / 4.0;
    bad(0, 0) = -0.5;
    EXPECT_THROW(chsh_criterion(bad), std::invalid_argument);
    EXPECT_THROW(chsh_criterion(Mat::Identity(2, 2) / 2.0), DimensionError);
}

// Post-selected expectations computed from the pre-measurement state with
// code-space projectors must agree with the sampled-outcome pipeline.
TEST(Pipeline, ExactExpectationsMatchProjectorOracle) {
    NoiseModel nm = NoiseModel::uniform(0.0, 0.05, 0.0);
    for (int eigen : {0, 1}) {
        auto body = prep_ft_z_layers(kBlock, eigen);
        auto es = aggregate(1, exact_settings({kBlock}, 4, body, nm));
        double f_pipeline = state_fidelity(mle_state(es).rho, eigen ? Eigen::Vector2cd(0, 1) : Eigen::Vector2cd(1, 0));

        Mat rho = run_dense_exact(apply_noise_sites(schedule_layers(4, body), nm)).rho;
        Mat id = Mat::Identity(16, 16);
        auto proj = [&](const char *s) -> Mat { return (id + dense::pauli_matrix(PauliString::from_text(s))) / 2.0; };
        std::map<char, Mat> pi = {{'X', proj("XXXX")}, {'Y', proj("ZZII")}, {'Z', proj("ZZII") * proj("IIZZ")}};
        Eigen::Vector3d bloch;
        int k = 0;
        for (char b : {'X', 'Y', 'Z'}) {
            Mat p = dense::pauli_matrix(kBlock.logical(4, b));
            bloch[k++] = ((rho * pi[b] * p).trace() / (rho * pi[b]).trace()).real();
            EXPECT_NEAR(es.value(std::string(1, b)), bloch[k - 1], 1e-9);
        }
        double z = eigen ? -bloch[2] : bloch[2];
        double f_oracle = (1 + z) / 2;
        EXPECT_NEAR(f_pipeline, f_oracle, 1e-6);
        EXPECT_LT(f_pipeline, 1);
    }
}

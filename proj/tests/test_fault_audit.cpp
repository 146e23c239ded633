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

#include "d2lab/errors.hpp"
#include "d2lab/fault_audit.hpp"

using namespace d2lab;

namespace {

const LogicalBlock kBlock{{0, 1, 2, 3}, ""};

// The CNOT form of the |0_L> encoder: H1; CNOT 1->2; CNOT 1->4, CNOT 2->3.
PauliString push_through_cnot_encoder(PauliString p, int after) {
    const std::vector<std::vector<CliffordGate>> layers = {
        {CliffordGate::one(GateKind::H, 0)},
        {CliffordGate::two(GateKind::CNOT, 0, 1)},
        {CliffordGate::two(GateKind::CNOT, 0, 3), CliffordGate::two(GateKind::CNOT, 1, 2)}};
    for (size_t l = size_t(after + 1); l < layers.size(); ++l)
        for (const auto &g : layers[l]) p = conjugate(p, g);
    return p;
}

}  // namespace

TEST(FaultPropagation, CnotEncoderXFaultSets) {
    std::set<std::string> seen;
    for (int after = 0; after < 3; ++after)
        for (uint32_t q = 0; q < 4; ++q) {
            auto e = push_through_cnot_encoder(PauliString::single(4, q, 'X'), after);
            if (e.weight() >= 2) seen.insert(e.str());
        }
    EXPECT_EQ(seen, (std::set<std::string>{"+XXXX", "+IXXI", "+XIIX"}));
}

TEST(FaultAudit, FtZeroHasNoLogicalFaults) {
    auto rep = fault_injection_audit(prep_ft_z(kBlock, 0), {kBlock});
    EXPECT_EQ(rep.count(FaultClass::Logical), 0u);
    EXPECT_GT(rep.count(FaultClass::Detected), 0u);
    EXPECT_EQ(rep.patterns(kBlock, 'X'), (std::set<std::string>{"XXXX", "IXXI", "XIIX"}));
    for (const auto &o : rep.outcomes) {
        auto s = o.propagated.str();
        if (s == "+XXXX") EXPECT_EQ(o.cls, FaultClass::Trivial);
        if (s == "+IXXI" || s == "+XIIX") EXPECT_EQ(o.cls, FaultClass::Detected);
    }
    EXPECT_EQ(fault_injection_audit(prep_ft_z(kBlock, 1), {kBlock}).count(FaultClass::Logical), 0u);
}

TEST(FaultAudit, FtPlusZPatternsAreStabilizers) {
    for (int sign : {1, -1}) {
        auto rep = fault_injection_audit(prep_ft_x(kBlock, sign), {kBlock});
        EXPECT_EQ(rep.count(FaultClass::Logical), 0u);
        EXPECT_EQ(rep.patterns(kBlock, 'Z'), (std::set<std::string>{"ZZII", "IIZZ"}));
        for (const auto &o : rep.outcomes) {
            auto s = o.propagated.str();
            if (s == "+ZZII" || s == "+IIZZ") EXPECT_EQ(o.cls, FaultClass::Trivial);
        }
    }
}

TEST(FaultAudit, NftPreparationIsNotFaultTolerant) {
    const double r = std::sqrt(0.5);
    auto c = prep_nft_arbitrary(kBlock, r, std::complex<double>(0, r));
    AuditOptions opt;
    opt.arbitrary_logical_state = true;
    auto rep = fault_injection_audit(c, {kBlock}, opt);
    EXPECT_GE(rep.count(FaultClass::Logical), 1u);
    for (const auto &o : rep.of_class(FaultClass::Logical))
        for (const auto &s : kBlock.stabilizers(4)) EXPECT_TRUE(commutes(s, o.propagated));
}

TEST(FaultAudit, TwoBlockLayoutAndErrors) {
    LogicalBlock a{{0, 1, 2, 3}, "A"}, b{{4, 5, 6, 7}, "B"};
    auto body = interleave(prep_ft_x_layers(a, 1), prep_ft_z_layers(b, 0));
    auto cn = transversal_cnot_layers(a, b);
    body.insert(body.end(), cn.begin(), cn.end());
    auto rep = fault_injection_audit(schedule_layers(8, body), {a, b});
    EXPECT_EQ(rep.count(FaultClass::Logical), 0u);
    EXPECT_EQ(rep.outcomes.size(), rep.count(FaultClass::Trivial) + rep.count(FaultClass::Detected));

    EXPECT_THROW(fault_injection_audit(prep_nft_arbitrary(kBlock, 0.6, 0.8), {kBlock}), UnsupportedCircuitError);
    auto measured = with_logical_measurements(4, prep_ft_z_layers(kBlock, 0), {logical_measure(kBlock, 'Z')});
    EXPECT_THROW(fault_injection_audit(measured, {kBlock}), CircuitError);
}

TEST(FaultAudit, ParallelMatchesSerial) {
    AuditOptions one, many;
    one.threads = 1;
    many.threads = 8;
    auto a = fault_injection_audit(prep_ft_z(kBlock, 0), {kBlock}, one);
    auto b = fault_injection_audit(prep_ft_z(kBlock, 0), {kBlock}, many);
    ASSERT_EQ(a.outcomes.size(), b.outcomes.size());
    for (size_t i = 0; i < a.outcomes.size(); ++i) {
        EXPECT_EQ(a.outcomes[i].propagated, b.outcomes[i].propagated);
        EXPECT_EQ(a.outcomes[i].cls, b.outcomes[i].cls);
    }
}

TEST(ReadoutFaults, OnlyYBasisLetsAFlipThrough) {
    EXPECT_TRUE(undetected_readout_faults(logical_measure(kBlock, 'Z')).empty());
    EXPECT_TRUE(undetected_readout_faults(logical_measure(kBlock, 'X')).empty());
    auto y = undetected_readout_faults(logical_measure(kBlock, 'Y'));
    ASSERT_FALSE(y.empty());
    bool z_on_d4 = false;
    for (auto f : y) z_on_d4 = z_on_d4 || (f.position == 4 && f.pauli == 'Z');
    EXPECT_TRUE(z_on_d4);
}

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

#include <fstream>
#include <sstream>

#include "d2lab/device.hpp"
#include "d2lab/errors.hpp"

using namespace d2lab;

namespace {

std::string read_file(const std::string &path) {
    std::ifstream in(path);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

const std::string kMinimal = R"(
[device]
qubits = a, b
[layout]
edges = a-b
[qubit.a]
f00 = 0.99
f11 = 0.95
gate_error_1q = 0.001
[qubit.b]
f00 = 0.98
f11 = 0.96
gate_error_1q = 0.002
[pair.a-b]
cz_fidelity = 0.97
)";

std::string replace(std::string s, const std::string &from, const std::string &to) {
    auto pos = s.find(from);
    if (pos == std::string::npos) throw std::logic_error("bad fixture edit");
    return s.replace(pos, from.size(), to);
}

void expect_parse_error(const std::string &text, const std::string &fragment) {
    try {
        parse_device(text, "dev.ini");
        FAIL() << "expected ParseError containing '" << fragment << "'";
    } catch (const ParseError &e) {
        EXPECT_NE(std::string(e.what()).find(fragment), std::string::npos) << e.what();
    }
}

}  // namespace

TEST(Device, BundledTableValues) {
    auto d = default_device();
    ASSERT_EQ(d.qubits.size(), 8u);
    EXPECT_EQ(d.edges.size(), 10u);
    EXPECT_DOUBLE_EQ(d.qubit.at("q1").f00, 0.9610);
    EXPECT_DOUBLE_EQ(d.qubit.at("q1").f11, 0.9150);
    EXPECT_DOUBLE_EQ(d.qubit.at("q1").gate_error_1q, 0.0024);
    // Summary statistics quoted alongside the tables.
    EXPECT_NEAR(d.average_pm(), 0.0776, 5e-5);
    EXPECT_NEAR(d.average_cz_fidelity(), 0.9702, 5e-5);
    EXPECT_TRUE(d.adjacent("q6", "q2"));
    EXPECT_FALSE(d.adjacent("q1", "q6"));
}

TEST(Device, BundledCopyMatchesConfigFile) {
    EXPECT_EQ(std::string(default_device_ini()), read_file(D2LAB_SOURCE_DIR "/config/wukong_2x4.ini"));
    auto a = default_device();
    auto b = load_device(D2LAB_SOURCE_DIR "/config/wukong_2x4.ini");
    EXPECT_EQ(a.hash(), b.hash());
}

TEST(Device, NoiseModelMapping) {
    auto d = default_device();
    auto nm = d.to_noise_model();
    EXPECT_DOUBLE_EQ(nm.p1.at("q3"), 0.0018);
    for (const auto &[a, b] : d.edges) EXPECT_DOUBLE_EQ(nm.p2.at(std::minmax(a, b)), 1 - d.cz(a, b));
    EXPECT_TRUE(nm.symmetric_readout);
    EXPECT_FALSE(d.to_noise_model(false).symmetric_readout);
}

TEST(Device, HashIgnoresCommentsAndOrder) {
    auto a = parse_device(kMinimal);
    auto b = parse_device("; comment\n" + replace(kMinimal, "f00 = 0.99\nf11 = 0.95", "f11 = 0.95\nf00 = 0.99"));
    EXPECT_EQ(a.hash(), b.hash());
    EXPECT_EQ(a.hash().size(), 16u);
    auto c = parse_device(replace(kMinimal, "0.97", "0.96"));
    EXPECT_NE(a.hash(), c.hash());
}

TEST(Device, ReversedPairSectionAccepted) {
    auto d = parse_device(replace(kMinimal, "[pair.a-b]", "[pair.b-a]"));
    EXPECT_DOUBLE_EQ(d.cz("b", "a"), 0.97);
}

TEST(Device, EmptyFileNamesFirstMissingField) { expect_parse_error("", "[device] qubits"); }

TEST(Device, InvalidFieldsAreNamed) {
    expect_parse_error(replace(kMinimal, "f00 = 0.99", "f00 = high"), "[qubit.a] f00");
    expect_parse_error(replace(kMinimal, "f00 = 0.99", "f00 = 1.5"), "not a probability");
    expect_parse_error(replace(kMinimal, "gate_error_1q = 0.002\n", ""), "[qubit.b] gate_error_1q");
    expect_parse_error(replace(kMinimal, "[pair.a-b]\ncz_fidelity = 0.97", ""), "cz_fidelity");
    expect_parse_error(replace(kMinimal, "edges = a-b", "edges = a-c"), "unknown qubit");
    expect_parse_error(kMinimal + "[qubit.z]\nf00=1\n", "[qubit.z]");
    expect_parse_error(replace(kMinimal, "[device]", "stray = 1\n[device]"), "outside of any section");
}

TEST(Device, MissingFileIsIoError) { EXPECT_THROW(load_device("/nonexistent/dev.ini"), IoError); }

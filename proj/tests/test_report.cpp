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

#include <filesystem>
#include <fstream>
#include <regex>
#include <sstream>

#include "d2lab/errors.hpp"
#include "d2lab/postselect.hpp"
#include "d2lab/report.hpp"
#include "json.hpp"

using namespace d2lab;
namespace fs = std::filesystem;

namespace {

const DeviceParams &device() {
    static const DeviceParams d = default_device();
    return d;
}

ExperimentReport sampled(const std::string &id, uint64_t seed = 3) {
    RunOptions o;
    o.shots = 4000;
    o.seed = seed;
    return run_experiment(id, device(), o);
}

template <class F>
std::string render(F f) {
    std::ostringstream s;
    f(s);
    return s.str();
}

std::vector<std::string> data_lines(const std::string &text) {
    std::vector<std::string> out;
    std::istringstream in(text);
    for (std::string l; std::getline(in, l);)
        if (!l.empty() && l[0] != '#') out.push_back(l);
    return out;
}

fs::path scratch(const std::string &name) {
    auto p = fs::temp_directory_path() / ("d2lab_test_report_" + name);
    fs::remove_all(p);
    return p;
}

}  // namespace

TEST(Format, ShortestRoundTrip) {
    EXPECT_EQ(format_double(0.1), "0.1");
    EXPECT_EQ(format_double(-2), "-2");
    EXPECT_EQ(format_double(1e-7), "1e-07");
    EXPECT_EQ(format_double(std::nan("")), "nan");
    EXPECT_EQ(format_double(-INFINITY), "-inf");
    const double x = 0.1 + 0.2;
    EXPECT_EQ(std::stod(format_double(x)), x);
}

TEST(Format, Slugs) {
    EXPECT_EQ(slug("teleport_rz(pi/4)"), "teleport_rz_pi_4");
    EXPECT_EQ(slug("nft(2.1,-0.4)"), "nft_2.1_-0.4");
    EXPECT_EQ(slug("ft_zero"), "ft_zero");
    EXPECT_EQ(slug("()"), "report");
}

TEST(Csv, EmptyReportIsHeaderOnly) {
    ExperimentReport r;
    r.id = "empty";
    r.kind = "state";
    auto lines = data_lines(render([&](std::ostream &o) { write_report_csv(o, r); }));
    ASSERT_EQ(lines.size(), 1u);
    EXPECT_EQ(lines[0], "section,name,setting,value,two_sigma,ps_rate,ps_rate_2sigma,n_pass,n_total,exact");
    lines = data_lines(render([&](std::ostream &o) { write_summary_csv(o, r); }));
    ASSERT_EQ(lines.size(), 1u);
    EXPECT_EQ(lines[0], "name,fidelity,two_sigma,formatted");
}

TEST(Csv, RowsHaveTheHeaderWidthAndProvenance) {
    auto r = sampled("bell_2");
    auto text = render([&](std::ostream &o) { write_report_csv(o, r); });
    EXPECT_NE(text.find("# experiment=bell_2 kind=state engine=tableau shots=4000 seed=3 case=1"), std::string::npos);
    EXPECT_NE(text.find("device_hash=" + device().hash()), std::string::npos);
    auto lines = data_lines(text);
    ASSERT_GT(lines.size(), 16u);
    size_t observables = 0;
    for (const auto &l : lines) {
        if (l.find('"') == std::string::npos) EXPECT_EQ(std::count(l.begin(), l.end(), ','), 9) << l;
        observables += l.rfind("observable,", 0) == 0;
    }
    EXPECT_EQ(observables, 16u);
    EXPECT_NE(text.find("metric,fidelity,,"), std::string::npos);
}

TEST(Csv, SummaryUsesParenthesisNotation) {
    ExperimentReport r;
    r.id = "lptm_all";
    r.kind = "table";
    r.metrics = {{"CNOT", 0.9791, 0.0021}, {"R_Z(0)", 0.95, std::nullopt}};
    auto lines = data_lines(render([&](std::ostream &o) { write_summary_csv(o, r); }));
    ASSERT_EQ(lines.size(), 3u);
    EXPECT_EQ(lines[1], "CNOT,0.9791,0.0021," + format_uncertain(0.9791, 0.0021));
    EXPECT_TRUE(std::regex_match(format_uncertain(0.9791, 0.0021), std::regex(R"(97\.9\(2\)%)")))
        << format_uncertain(0.9791, 0.0021);
}

TEST(Output, BytesDependOnlyOnInputs) {
    auto a = sampled("ft_plus"), b = sampled("ft_plus"), c = sampled("ft_plus", 4);
    for (auto w : {write_report_csv, write_report_json, write_report_svg, write_summary_csv}) {
        auto ta = render([&](std::ostream &o) { w(o, a); });
        EXPECT_EQ(ta, render([&](std::ostream &o) { w(o, b); }));
        EXPECT_NE(ta, render([&](std::ostream &o) { w(o, c); }));
    }
}

TEST(Json, SchemaAndDensityMatrix) {
    auto r = sampled("bell_1");
    auto j = nlohmann::json::parse(render([&](std::ostream &o) { write_report_json(o, r); }));
    EXPECT_EQ(j["schema_version"], kReportSchemaVersion);
    EXPECT_EQ(j["provenance"]["experiment"], "bell_1");
    EXPECT_EQ(j["provenance"]["shots_per_setting"], 4000);
    EXPECT_EQ(j["provenance"]["device"]["hash"], device().hash());
    EXPECT_EQ(j["observables"].size(), 16u);
    EXPECT_EQ(j["observables"][0]["label"], "II");
    EXPECT_EQ(j["density_matrix"]["dim"], 4);
    EXPECT_EQ(j["density_matrix"]["data"].size(), 16u);
    double trace = 0;
    for (int k = 0; k < 4; ++k) trace += j["density_matrix"]["data"][5 * k][0].get<double>();
    EXPECT_NEAR(trace, 1, 1e-9);
    EXPECT_FALSE(j.contains("ptm"));
}

TEST(Json, PtmCarriesLabels) {
    RunOptions o;
    o.engine = Engine::Dense;
    o.noiseless = true;
    auto r = run_experiment("lptm_rz(pi/2)", device(), o);
    auto j = nlohmann::json::parse(render([&](std::ostream &s) { write_report_json(s, r); }));
    ASSERT_TRUE(j.contains("ptm"));
    EXPECT_EQ(j["ptm"]["row_labels"], nlohmann::json({"I", "X", "Y", "Z"}));
    EXPECT_EQ(j["ptm"]["rows"].size(), 4u);
    // R_Z(pi/2): X -> Y.
    EXPECT_NEAR(j["ptm"]["rows"][2][1].get<double>(), 1, 1e-9);
    EXPECT_EQ(j["provenance"]["shots_per_setting"], 0);
}

TEST(Svg, WellFormedPerKind) {
    RunOptions o;
    o.engine = Engine::Dense;
    o.noiseless = true;
    auto scan = run_experiment("teleport_rz", device(), o);
    auto svg = render([&](std::ostream &s) { write_report_svg(s, scan); });
    EXPECT_EQ(svg.rfind("<svg", 0), 0u);
    EXPECT_EQ(svg.substr(svg.size() - 7), "</svg>\n");
    size_t polylines = 0;
    for (size_t at = 0; (at = svg.find("<polyline", at)) != std::string::npos; ++at) ++polylines;
    EXPECT_EQ(polylines, 4u);
    svg = render([&](std::ostream &s) { write_report_svg(s, sampled("ft_zero")); });
    EXPECT_NE(svg.find("fidelity"), std::string::npos);
}

TEST(Emit, WritesRequestedFormats) {
    auto dir = scratch("emit");
    auto r = sampled("ft_one");
    auto paths = emit_report(r, (dir / "nested").string(), {"csv", "json", "svg"});
    ASSERT_EQ(paths.size(), 4u);
    for (const auto &p : paths) EXPECT_TRUE(fs::exists(p)) << p;
    std::ifstream in(dir / "nested" / "ft_one.json");
    auto j = nlohmann::json::parse(in);
    EXPECT_EQ(j["artifacts"], nlohmann::json({"ft_one.csv", "ft_one_summary.csv", "ft_one.svg", "ft_one.json"}));
    EXPECT_EQ(emit_report(r, dir.string(), {"json"}).size(), 1u);
    EXPECT_THROW(emit_report(r, dir.string(), {"xml"}), std::invalid_argument);
    fs::remove_all(dir);
}

TEST(Emit, UnwritableDirectoryIsIoError) {
    auto dir = scratch("blocked");
    std::ofstream(dir.string()) << "a file, not a directory";
    try {
        emit_report(sampled("ft_zero"), (dir / "out").string(), {"csv"});
        FAIL();
    } catch (const IoError &e) {
        EXPECT_NE(std::string(e.what()).find(dir.string()), std::string::npos);
    }
    fs::remove(dir);
}

TEST(SweepOutput, CsvRowsAndCrossingHeader) {
    SweepConfig cfg;
    cfg.mode = NoiseMode::MeasOnly;
    cfg.p_grid = {0.05, 0.1};
    cfg.shots = 2000;
    auto s = run_sweep(cfg);
    auto text = render([&](std::ostream &o) { write_sweep_csv(o, {s}); });
    EXPECT_NE(text.find("crossing[single]=none"), std::string::npos);
    auto lines = data_lines(text);
    ASSERT_EQ(lines.size(), 5u);
    EXPECT_EQ(lines[0], "mode,family,p,logical_error,logical_2sigma,ps_rate,n_pass,n_total,physical_error,"
                        "physical_2sigma,excluded");
    EXPECT_EQ(lines[1].rfind("meas_only,single,0.05,", 0), 0u);
    auto j = nlohmann::json::parse(render([&](std::ostream &o) { write_sweep_json(o, {s}); }));
    EXPECT_EQ(j["schema_version"], kReportSchemaVersion);
    auto svg = render([&](std::ostream &o) { write_sweep_svg(o, {s}); });
    EXPECT_EQ(svg.substr(svg.size() - 7), "</svg>\n");
}

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

// d2lab: experiment runner for distance-2 surface-code logical qubits.
//
//   d2lab list
//   d2lab run ft_zero bell_1 'teleport_rz(pi/4)' --engine dense --shots 50000
//   d2lab sweep --mode all --grid 0.01:0.2:0.01 --shots 100000
//   d2lab audit ft_zero
//   d2lab validate-device config/wukong_2x4.ini
//
// Exit codes: 0 success, 1 usage error, 2 numerical non-convergence, 3 I/O.

#include <CLI11.hpp>
#include <cstdlib>
#include <iostream>
#include <numbers>
#include <sstream>

#include "d2lab/device.hpp"
#include "d2lab/errors.hpp"
#include "d2lab/experiments.hpp"
#include "d2lab/fault_audit.hpp"
#include "d2lab/postselect.hpp"
#include "d2lab/report.hpp"
#include "d2lab/surface_code.hpp"
#include "d2lab/sweep.hpp"

using namespace d2lab;

namespace {

enum Exit { kOk = 0, kUsage = 1, kNumerical = 2, kIo = 3 };

std::string default_out_dir() {
    const char *env = std::getenv("D2LAB_OUT_DIR");
    return env && *env ? env : "d2lab_out";
}

std::vector<std::string> split_list(const std::string &s) {
    std::vector<std::string> out;
    std::stringstream in(s);
    for (std::string item; std::getline(in, item, ',');)
        if (!item.empty()) out.push_back(item);
    return out;
}

DeviceParams device_from(const std::string &path) { return path.empty() ? default_device() : load_device(path); }

void print_report(const ExperimentReport &r, const std::vector<std::string> &paths) {
    std::cout << r.id << " [" << r.engine << ", case " << r.noise_case << (r.noiseless ? ", noiseless" : "") << "]\n";
    if (r.kind == "scan") {
        std::cout << "  theta        <X_L>      <Y_L>      <Z_L>   fidelity  ps_rate\n";
        for (const auto &p : r.scan) {
            char line[160];
            auto val = [&](const char *l) {
                auto it = p.es.entries.find(l);
                return it == p.es.entries.end() || it->second.empty ? std::nan("") : it->second.value;
            };
            std::snprintf(line, sizeof line, "  %+8.4f  %+9.5f  %+9.5f  %+9.5f  %8.5f  %7.4f\n", p.theta, val("X"),
                          val("Y"), val("Z"), p.fidelity, p.ps_rate);
            std::cout << line;
        }
    } else if (r.kind == "state") {
        for (const auto &o : r.observables) {
            if (o.label.find_first_not_of('I') == std::string::npos) continue;
            std::cout << "  <" << o.label << "> = "
                      << (o.ev.empty ? std::string("n/a") : format_uncertain(o.ev.value, o.ev.two_sigma, false))
                      << "  ps_rate " << format_uncertain(o.ev.ps_rate, std::nullopt, false) << "\n";
        }
    }
    for (const auto &m : r.metrics) {
        std::cout << "  " << m.name << " = " << format_double(m.value);
        if (m.two_sigma) std::cout << "  (2sigma " << format_double(*m.two_sigma) << ")";
        std::cout << "\n";
    }
    for (const auto &w : r.warnings) std::cerr << "warning: " << r.id << ": " << w << "\n";
    for (const auto &p : paths) std::cout << "  wrote " << p << "\n";
}

struct AuditTarget {
    Circuit circuit;
    std::vector<LogicalBlock> blocks;
    bool arbitrary = false;
};

AuditTarget audit_target(const std::string &name) {
    LogicalBlock b;
    if (name == "ft_zero") return {prep_ft_z(b, 0), {b}};
    if (name == "ft_one") return {prep_ft_z(b, 1), {b}};
    if (name == "ft_plus") return {prep_ft_x(b, +1), {b}};
    if (name == "ft_minus") return {prep_ft_x(b, -1), {b}};
    if (name == "nft") {
        // A Clifford instance of the arbitrary-state encoder; only code
        // stabilizers count as harmless.
        const double r = std::numbers::sqrt2 / 2;
        return {prep_nft_arbitrary(b, r, std::complex<double>(0, r)), {b}, true};
    }
    if (name == "bell") {
        LogicalBlock a{{0, 1, 2, 3}, "a"}, t{{4, 5, 6, 7}, "b"};
        LayerList body = interleave(prep_ft_x_layers(a, +1), prep_ft_z_layers(t, 0));
        auto cnot = transversal_cnot_layers(a, t);
        body.insert(body.end(), cnot.begin(), cnot.end());
        return {schedule_layers(8, body), {a, t}};
    }
    throw std::invalid_argument("unknown audit circuit '" + name + "' (ft_zero, ft_one, ft_plus, ft_minus, nft, bell)");
}

int run_audit(const std::string &name, bool verbose) {
    auto t = audit_target(name);
    AuditOptions opt;
    opt.arbitrary_logical_state = t.arbitrary;
    auto rep = fault_injection_audit(t.circuit, t.blocks, opt);
    std::cout << name << ": " << rep.outcomes.size() << " single-Pauli faults\n";
    for (auto c : {FaultClass::Trivial, FaultClass::Detected, FaultClass::Logical}) {
        std::cout << "  " << fault_class_name(c) << ": " << rep.count(c) << "\n";
    }
    for (const auto &b : t.blocks) {
        for (char type : {'X', 'Z'}) {
            auto pats = rep.patterns(b, type);
            if (pats.empty()) continue;
            std::cout << "  " << (b.name.empty() ? "block" : b.name) << " " << type << "-type patterns:";
            for (const auto &p : pats) std::cout << " " << p;
            std::cout << "\n";
        }
    }
    for (const auto &o : rep.of_class(FaultClass::Logical)) {
        if (!verbose) break;
        std::cout << "  logical: " << o.where.pauli << " on q" << o.where.qubit << " after " << o.where.instruction
                  << " (moment " << o.where.moment << ") -> " << o.propagated.str() << "\n";
    }
    return kOk;
}

int run_validate(const std::string &path) {
    DeviceParams d = device_from(path);
    std::cout << (path.empty() ? "<bundled>" : path) << ": ok\n";
    std::cout << "  name " << d.name << ", " << d.qubits.size() << " qubits, " << d.edges.size() << " edges\n";
    std::cout << "  average p_m " << format_double(d.average_pm()) << ", average CZ fidelity "
              << format_double(d.average_cz_fidelity()) << "\n";
    std::cout << "  hash " << d.hash() << "\n";
    return kOk;
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"d2lab: distance-2 surface code logical-qubit simulator"};
    app.require_subcommand(1);

    auto *list = app.add_subcommand("list", "List registered experiments");

    auto *run = app.add_subcommand("run", "Run experiments and write reports");
    std::vector<std::string> ids;
    std::string engine = "tableau", device_path, out_dir = default_out_dir(), formats = "csv,json,svg";
    size_t shots = 50000;
    uint64_t seed = 1;
    int noise_case = 1;
    unsigned threads = 0;
    bool noiseless = false;
    run->add_option("ids", ids, "Experiment ids, e.g. ft_zero bell_1 'teleport_rz(pi/4)'")->required();
    run->add_option("--engine", engine, "tableau | dense | dense-mc")
        ->check(CLI::IsMember({"tableau", "dense", "dense-mc"}));
    run->add_option("--shots", shots, "Shots per measurement setting")->check(CLI::PositiveNumber);
    run->add_option("--seed", seed, "Random seed");
    run->add_option("--device", device_path, "Device INI file (default: bundled 2x4 description)");
    run->add_option("--out", out_dir, "Output directory (default: $D2LAB_OUT_DIR or ./d2lab_out)");
    run->add_option("--format", formats, "Comma-separated: csv,json,svg");
    run->add_option("--case", noise_case, "1 device | 2 ideal characterization readout | 3 also ideal ancilla")
        ->check(CLI::Range(1, 3));
    run->add_flag("--noiseless", noiseless, "Disable all noise");
    run->add_option("--threads", threads, "Worker threads (0: all cores)");

    auto *sweep = app.add_subcommand("sweep", "Logical vs physical error sweep over a uniform noise strength");
    std::string mode = "both", grid = "0.01:0.2:0.01", families = "single,bell", sweep_name;
    size_t sweep_shots = 1000000;
    sweep->add_option("--mode", mode, "gate_only | meas_only | both | all");
    sweep->add_option("--grid", grid, "start:stop:step or a comma list");
    sweep->add_option("--family", families, "single,bell");
    sweep->add_option("--shots", sweep_shots, "Shots per circuit and grid point")->check(CLI::PositiveNumber);
    sweep->add_option("--seed", seed, "Random seed");
    sweep->add_option("--out", out_dir, "Output directory (default: $D2LAB_OUT_DIR or ./d2lab_out)");
    sweep->add_option("--format", formats, "Comma-separated: csv,json,svg");
    sweep->add_option("--name", sweep_name, "Output file stem (default: sweep_<mode>)");
    sweep->add_option("--threads", threads, "Worker threads (0: all cores)");

    auto *audit = app.add_subcommand("audit", "Exhaustive single-fault injection on an encoder");
    std::string audit_name;
    bool verbose = false;
    audit->add_option("circuit", audit_name, "ft_zero | ft_one | ft_plus | ft_minus | nft | bell")->required();
    audit->add_flag("-v,--verbose", verbose, "List logical-class faults");

    auto *validate = app.add_subcommand("validate-device", "Parse and check a device file");
    std::string validate_path;
    validate->add_option("path", validate_path, "Device INI file (default: bundled)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        int code = app.exit(e);
        return code == 0 ? kOk : kUsage;
    }

    try {
        if (*list) {
            for (const auto &e : experiment_registry()) {
                std::cout << "  " << e.pattern << std::string(e.pattern.size() < 20 ? 20 - e.pattern.size() : 1, ' ')
                          << e.description << "\n";
            }
            return kOk;
        }
        if (*run) {
            RunOptions opt;
            opt.engine = parse_engine(engine);
            opt.shots = shots;
            opt.seed = seed;
            opt.noise_case = noise_case;
            opt.noiseless = noiseless;
            opt.threads = threads;
            const DeviceParams dev = device_from(device_path);
            const auto fmts = split_list(formats);
            for (const auto &id : ids) {
                auto r = run_experiment(id, dev, opt);
                auto paths = emit_report(r, out_dir, fmts);
                print_report(r, paths);
            }
            return kOk;
        }
        if (*sweep) {
            std::vector<NoiseMode> modes;
            if (mode == "all") {
                modes = {NoiseMode::GateOnly, NoiseMode::MeasOnly, NoiseMode::Both};
            } else {
                modes = {parse_noise_mode(mode)};
            }
            std::vector<SweepResult> results;
            for (auto m : modes) {
                SweepConfig cfg;
                cfg.mode = m;
                cfg.p_grid = parse_grid(grid);
                cfg.families = split_list(families);
                cfg.shots = sweep_shots;
                cfg.seed = seed;
                cfg.threads = threads;
                results.push_back(run_sweep(cfg));
                for (const auto &c : results.back().curves) {
                    std::cout << noise_mode_name(m) << " " << c.family << ": pseudo-threshold "
                              << (c.crossing ? format_double(*c.crossing) : std::string("not reached on grid")) << "\n";
                }
                for (const auto &w : results.back().warnings) std::cerr << "warning: " << w << "\n";
            }
            const std::string stem = sweep_name.empty() ? "sweep_" + mode : sweep_name;
            for (const auto &p : emit_sweep(results, out_dir, stem, split_list(formats))) std::cout << "  wrote " << p << "\n";
            return kOk;
        }
        if (*audit) return run_audit(audit_name, verbose);
        if (*validate) return run_validate(validate_path);
    } catch (const NumericalError &e) {
        std::cerr << "error: " << e.what() << " (residual " << e.residual << ")\n";
        return kNumerical;
    } catch (const IoError &e) {
        std::cerr << "error: " << e.what() << "\n";
        return kIo;
    } catch (const ParseError &e) {
        std::cerr << "error: " << e.what() << "\n";
        return kIo;
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    }
    return kUsage;
}

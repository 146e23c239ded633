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

#include "d2lab/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <charconv>
#include <cmath>
#include <complex>
#include <map>
#include <mutex>
#include <numbers>
#include <set>
#include <thread>

#include "d2lab/dense.hpp"
#include "d2lab/errors.hpp"
#include "d2lab/frame_sampler.hpp"
#include "d2lab/rng.hpp"

namespace d2lab {

namespace {

constexpr double kPi = std::numbers::pi;
using cplx = std::complex<double>;

// Device placement on the 2x4 grid (rows q1..q4 over q5..q8).
const std::vector<std::string> kZBlock{"q2", "q6", "q7", "q3"};
const std::vector<std::string> kXBlock{"q1", "q5", "q8", "q4"};
const std::vector<std::string> kTopRow{"q1", "q2", "q3", "q4"};
const std::vector<std::string> kBottomRow{"q5", "q6", "q7", "q8"};
const std::string kPhysQubit = "q2";
const std::vector<std::string> kPhysPair{"q6", "q7"};

const std::vector<double> kLptmAngles{0, kPi / 4, kPi / 2, kPi};

std::vector<std::string> concat(const std::vector<std::string> &a, const std::vector<std::string> &b) {
    std::vector<std::string> out = a;
    out.insert(out.end(), b.begin(), b.end());
    return out;
}

Eigen::VectorXcd ket(std::initializer_list<cplx> amps) {
    Eigen::VectorXcd v(amps.size());
    size_t k = 0;
    for (auto a : amps) v[k++] = a;
    return v.normalized();
}

void check_device_edges(const Circuit &c, const DeviceParams &dev) {
    const auto &names = c.qubit_names();
    for (const auto &m : c.moments()) {
        for (const auto &ins : m) {
            if (!ins.is_two_qubit_gate()) continue;
            const auto &a = names[ins.qubits[0]];
            const auto &b = names[ins.qubits[1]];
            if (!dev.adjacent(a, b)) {
                throw CircuitError("two-qubit gate on " + a + "-" + b + " is not a device edge");
            }
        }
    }
}

// Layers preparing one of the characterization inputs {+, -, 0, i}.
LayerList prep_input(char state, const LogicalBlock &b) {
    const double r = std::numbers::sqrt2 / 2;
    switch (state) {
        case '+':
            return prep_ft_x_layers(b, +1);
        case '-':
            return prep_ft_x_layers(b, -1);
        case '0':
            return prep_nft_layers(b, 1.0, 0.0);
        case 'i':
            return prep_nft_layers(b, r, cplx(0, r));
    }
    throw std::invalid_argument(std::string("unknown input state '") + state + "'");
}

size_t nonempty_layers(const LayerList &layers, size_t count) {
    size_t n = 0;
    for (size_t k = 0; k < count && k < layers.size(); ++k) n += !layers[k].empty();
    return n;
}

unsigned worker_count(unsigned requested, size_t jobs) {
    unsigned n = requested ? requested : std::max(1u, std::thread::hardware_concurrency());
    return unsigned(std::min<size_t>(n, std::max<size_t>(jobs, 1)));
}

template <class F>
void parallel_for(size_t n, unsigned threads, F &&body) {
    threads = worker_count(threads, n);
    if (threads <= 1) {
        for (size_t i = 0; i < n; ++i) body(i);
        return;
    }
    std::atomic<size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) {
        pool.emplace_back([&] {
            for (size_t i; (i = next++) < n;) {
                try {
                    body(i);
                } catch (...) {
                    std::lock_guard lock(error_mutex);
                    if (!error) error = std::current_exception();
                    next = n;
                }
            }
        });
    }
    for (auto &th : pool) th.join();
    if (error) std::rethrow_exception(error);
}

NoiseModel noise_for(const DeviceParams &dev, const RunOptions &opt, bool asymmetric) {
    return opt.noiseless ? NoiseModel::noiseless() : dev.to_noise_model(!asymmetric);
}

std::vector<TomographyRun> run_tomographies(const std::vector<StateProgram> &sps, const DeviceParams &dev,
                                            const RunOptions &opt) {
    std::vector<std::vector<SettingProgram>> programs;
    std::vector<std::pair<size_t, size_t>> flat;
    for (size_t s = 0; s < sps.size(); ++s) {
        programs.push_back(tomography_programs(sps[s]));
        for (size_t k = 0; k < programs.back().size(); ++k) {
            check_device_edges(programs.back()[k].circuit, dev);
            flat.push_back({s, k});
        }
    }
    const NoiseModel sym = noise_for(dev, opt, false);
    const NoiseModel asym = noise_for(dev, opt, true);

    std::vector<OutcomeDistribution> dists(flat.size());
    auto job = [&](size_t j, unsigned inner_threads) {
        const auto &p = programs[flat[j].first][flat[j].second];
        auto ac = annotate(p, p.asymmetric_readout ? asym : sym, opt.noise_case);
        RunOptions o = opt;
        o.threads = inner_threads;
        dists[j] = simulate(ac, o, derive_seed(opt.seed, p.tag));
    };
    if (opt.engine == Engine::Tableau) {
        // The frame sampler parallelizes over shots itself.
        for (size_t j = 0; j < flat.size(); ++j) job(j, opt.threads);
    } else {
        parallel_for(flat.size(), opt.threads, [&](size_t j) { job(j, 1); });
    }

    std::vector<TomographyRun> out(sps.size());
    std::vector<std::map<std::string, SettingRecord>> records(sps.size());
    for (size_t j = 0; j < flat.size(); ++j) {
        const auto [s, k] = flat[j];
        const auto &p = programs[s][k];
        SettingRecord rec;
        rec.outcomes = std::move(dists[j]);
        rec.blocks = p.blocks;
        rec.extra = p.extra;

        PostSelectionRule all = p.extra;
        for (const auto &b : p.blocks) all = all & b.rule;
        Estimate e = postselect_and_estimate(rec.outcomes, all, Observable{"", {}});
        out[s].settings.push_back(SettingRow{p.tag, p.setting, e.ps_rate, e.ps_rate_2sigma, e.n_pass, e.n_total, e.exact});
        records[s][p.setting] = std::move(rec);
    }
    for (size_t s = 0; s < sps.size(); ++s) {
        out[s].es = aggregate(int(sps[s].readouts.size()), records[s]);
    }
    return out;
}

// Linearized 2-sigma of <psi|rho_lin|psi> = (1/d) sum_P <psi|P|psi> <P>.
std::optional<double> fidelity_2sigma(const ExpectationSet &es, const Eigen::VectorXcd &target) {
    const int n = es.n_logical;
    const double d = double(1 << n);
    Eigen::MatrixXcd proj = target.normalized() * target.normalized().adjoint();
    double var = 0;
    for (const auto &l : pauli_labels(n)) {
        const auto &e = es.entries.at(l);
        if (e.empty) return std::nullopt;
        double t = dense::expectation(proj, PauliString::from_text(l)).real();
        var += std::pow(t / d * e.two_sigma / 2, 2);
    }
    return 2 * std::sqrt(var);
}

void add_low_stat_warnings(ExperimentReport &r, const std::vector<SettingRow> &rows) {
    for (const auto &s : rows) {
        if (!s.exact && s.n_pass < 100) {
            r.warnings.push_back("low statistics: " + s.tag + " passed " + std::to_string(size_t(s.n_pass)) +
                                 " of " + std::to_string(size_t(s.n_total)) + " shots");
        }
    }
}

double mean_ps_rate(const std::vector<SettingRow> &rows) {
    double s = 0;
    for (const auto &r : rows) s += r.ps_rate;
    return rows.empty() ? 0 : s / double(rows.size());
}

// ---- id parsing ----

struct ParsedId {
    std::string family;
    std::vector<double> args;
};

ParsedId parse_id(const std::string &id) {
    ParsedId p;
    auto open = id.find('(');
    if (open == std::string::npos) {
        p.family = id;
        return p;
    }
    if (id.back() != ')') {
        throw std::invalid_argument("malformed experiment id '" + id + "'");
    }
    p.family = id.substr(0, open);
    std::string inner = id.substr(open + 1, id.size() - open - 2);
    size_t start = 0;
    while (true) {
        auto comma = inner.find(',', start);
        p.args.push_back(parse_angle(inner.substr(start, comma - start)));
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return p;
}

void expect_args(const ParsedId &p, size_t lo, size_t hi, const std::string &id) {
    if (p.args.size() < lo || p.args.size() > hi) {
        throw std::invalid_argument("wrong number of arguments in experiment id '" + id + "'");
    }
}

// A single- or two-qubit state experiment.
struct StateCase {
    StateProgram program;
    Eigen::VectorXcd target;
};

std::optional<StateCase> state_case(const ParsedId &p, const std::string &id) {
    const double r = std::numbers::sqrt2 / 2;
    const auto zero = ket({1, 0}), one = ket({0, 1}), plus = ket({r, r}), minus = ket({r, -r});
    StateCase sc;
    auto &sp = sc.program;
    sp.tag = id;

    auto ft_single = [&](bool z, int sign) {
        sp.reg.names = z ? kZBlock : kXBlock;
        auto b = sp.reg.block(sp.reg.names);
        sp.body = z ? prep_ft_z_layers(b, sign) : prep_ft_x_layers(b, sign);
        sp.readouts = {Readout{false, b, 0, ""}};
    };
    const std::string &f = p.family;
    if (f == "ft_zero" || f == "ft_one" || f == "ft_plus" || f == "ft_minus") {
        expect_args(p, 0, 0, id);
        if (f == "ft_zero") ft_single(true, 0), sc.target = zero;
        if (f == "ft_one") ft_single(true, 1), sc.target = one;
        if (f == "ft_plus") ft_single(false, +1), sc.target = plus;
        if (f == "ft_minus") ft_single(false, -1), sc.target = minus;
        return sc;
    }
    if (f == "nft") {
        expect_args(p, 2, 2, id);
        cplx alpha = std::cos(p.args[0] / 2), beta = std::polar(std::sin(p.args[0] / 2), p.args[1]);
        sp.reg.names = kTopRow;
        auto b = sp.reg.block(kTopRow);
        sp.body = prep_nft_layers(b, alpha, beta);
        sp.readouts = {Readout{false, b, 0, ""}};
        sc.target = ket({alpha, beta});
        return sc;
    }
    if (f.rfind("bell_", 0) == 0 && f.size() == 6 && f[5] >= '1' && f[5] <= '4') {
        expect_args(p, 0, 0, id);
        const int k = f[5] - '1';
        const int sign = (k % 2) ? -1 : +1;
        const int eigen = k / 2;
        sp.reg.names = concat(kXBlock, kZBlock);
        auto a = sp.reg.block(kXBlock, "a");
        auto b = sp.reg.block(kZBlock, "b");
        sp.body = interleave(prep_ft_x_layers(a, sign), prep_ft_z_layers(b, eigen));
        auto cnot = transversal_cnot_layers(a, b);
        sp.body.insert(sp.body.end(), cnot.begin(), cnot.end());
        sp.readouts = {Readout{false, a, 0, ""}, Readout{false, b, 0, ""}};
        // CNOT |s, e> for s in {+,-}, e in {0,1}.
        const double sg = sign;
        sc.target = eigen ? ket({0, r, sg * r, 0}) : ket({r, 0, 0, sg * r});
        return sc;
    }
    if (f == "teleport_rz" || f == "teleport_rx") {
        expect_args(p, 1, 1, id);
        const double th = p.args[0];
        sp.reg.names = concat(kTopRow, kBottomRow);
        auto anc = sp.reg.block(kTopRow, "anc");
        auto data = sp.reg.block(kBottomRow, "d");
        const bool z = f == "teleport_rz";
        auto t = teleport_rotation(z ? 'Z' : 'X', th, data,
                                   anc, z ? prep_ft_x_layers(data, +1) : prep_nft_layers(data, 1.0, 0.0));
        sp.body = t.layers;
        sp.readouts = {Readout{false, data, 0, ""}};
        sp.extra = t.rule;
        sp.ancilla = t.ancilla;
        sp.ancilla_prep_layers = t.ancilla_prep_layers;
        sc.target = z ? ket({r, std::polar(r, th)}) : ket({std::cos(th / 2), cplx(0, -std::sin(th / 2))});
        return sc;
    }
    if (f == "phys_zero" || f == "phys_one" || f == "phys_plus" || f == "phys_minus") {
        expect_args(p, 0, 0, id);
        sp.reg.names = {kPhysQubit};
        sp.asymmetric_readout = true;
        sp.readouts = {Readout{true, {}, 0, ""}};
        if (f == "phys_one") sp.body = {{Instruction::clifford(GateKind::X, 0)}};
        if (f == "phys_plus") sp.body = {{Instruction::clifford(GateKind::H, 0)}};
        if (f == "phys_minus") sp.body = {{Instruction::clifford(GateKind::H, 0)}, {Instruction::clifford(GateKind::Z, 0)}};
        sc.target = f == "phys_zero" ? zero : f == "phys_one" ? one : f == "phys_plus" ? plus : minus;
        return sc;
    }
    if (f.rfind("phys_bell_", 0) == 0 && f.size() == 11 && f[10] >= '1' && f[10] <= '4') {
        expect_args(p, 0, 0, id);
        const int k = f[10] - '1';
        const bool minus_in = k % 2, one_in = k / 2;
        sp.reg.names = kPhysPair;
        sp.asymmetric_readout = true;
        sp.readouts = {Readout{true, {}, 0, "a"}, Readout{true, {}, 1, "b"}};
        Layer l1{Instruction::clifford(GateKind::H, 0)};
        if (one_in) l1.push_back(Instruction::clifford(GateKind::X, 1));
        Layer l2{Instruction::clifford(GateKind::H, 1)};
        if (minus_in) l2.push_back(Instruction::clifford(GateKind::Z, 0));
        // CNOT q6 -> q7 compiled as H CZ H on the target.
        sp.body = {l1, l2, {Instruction::clifford(GateKind::CZ, 0, 1)}, {Instruction::clifford(GateKind::H, 1)}};
        const double sg = minus_in ? -1 : 1;
        sc.target = one_in ? ket({0, r, sg * r, 0}) : ket({r, 0, 0, sg * r});
        return sc;
    }
    return std::nullopt;
}

void fill_state_report(ExperimentReport &r, const TomographyRun &run, const Eigen::VectorXcd &target) {
    for (const auto &[label, ev] : run.es.entries) r.observables.push_back({label, ev});
    r.settings = run.settings;
    add_low_stat_warnings(r, run.settings);
    auto empty = run.es.empty_labels();
    if (!empty.empty()) {
        r.warnings.push_back("no shot passed post-selection for " + std::to_string(empty.size()) +
                             " observables; fidelity is not reported");
        r.metrics.push_back({"ps_rate", mean_ps_rate(run.settings), std::nullopt});
        return;
    }
    auto mle = mle_state(run.es);
    r.rho = mle.rho;
    r.metrics.push_back({"fidelity", state_fidelity(mle.rho, target), fidelity_2sigma(run.es, target)});
    r.metrics.push_back({"ps_rate", mean_ps_rate(run.settings), std::nullopt});
    r.metrics.push_back({"mle_objective", mle.objective, std::nullopt});
    if (run.es.n_logical == 2) {
        auto chsh = chsh_criterion(mle.rho);
        r.metrics.push_back({"chsh_u1_plus_u2", chsh.u1_plus_u2, std::nullopt});
        r.metrics.push_back({"chsh_violated", chsh.violated ? 1.0 : 0.0, std::nullopt});
    }
}

PTM ideal_for(const std::string &gate, double theta) {
    if (gate == "cnot") return ideal_cnot_ptm();
    if (gate == "rz") return ideal_rz_ptm(theta);
    if (gate == "rx") return ideal_rx_ptm(theta);
    throw std::invalid_argument("unknown gate '" + gate + "'");
}

std::string angle_text(double theta) {
    static const std::vector<std::pair<double, std::string>> named{
        {0, "0"}, {kPi / 4, "pi/4"}, {kPi / 2, "pi/2"}, {3 * kPi / 4, "3pi/4"}, {kPi, "pi"},
        {-kPi / 4, "-pi/4"}, {-kPi / 2, "-pi/2"}, {-3 * kPi / 4, "-3pi/4"}};
    for (const auto &[v, s] : named)
        if (std::abs(theta - v) < 1e-12) return s;
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, theta);
    return std::string(buf, res.ptr);
}

void fill_lptm_report(ExperimentReport &r, const LptmData &data, const LptmResult &res, const std::string &prefix) {
    r.settings.insert(r.settings.end(), data.settings.begin(), data.settings.end());
    add_low_stat_warnings(r, data.settings);
    r.metrics.push_back({prefix + "gate_fidelity", res.fidelity, res.fidelity_2sigma});
    r.metrics.push_back({prefix + "gate_fidelity_raw", res.fidelity_raw, res.fidelity_2sigma});
    r.metrics.push_back({prefix + "cptp_iterations", double(res.projected.iterations), std::nullopt});
}

}  // namespace

// ---- public API ----

Engine parse_engine(std::string_view name) {
    if (name == "tableau") return Engine::Tableau;
    if (name == "dense") return Engine::Dense;
    if (name == "dense-mc") return Engine::DenseMc;
    throw std::invalid_argument("unknown engine '" + std::string(name) + "' (tableau, dense, dense-mc)");
}

const char *engine_name(Engine e) {
    switch (e) {
        case Engine::Tableau:
            return "tableau";
        case Engine::Dense:
            return "dense";
        case Engine::DenseMc:
            return "dense-mc";
    }
    return "?";
}

uint32_t Register::index(const std::string &device_qubit) const {
    auto it = std::find(names.begin(), names.end(), device_qubit);
    if (it == names.end()) {
        throw std::invalid_argument("qubit " + device_qubit + " is not in the register");
    }
    return uint32_t(it - names.begin());
}

LogicalBlock Register::block(const std::vector<std::string> &device_qubits, std::string name) const {
    if (device_qubits.size() != 4) {
        throw DimensionError("a logical block needs four data qubits");
    }
    LogicalBlock b;
    for (size_t i = 0; i < 4; ++i) b.data[i] = index(device_qubits[i]);
    b.name = std::move(name);
    return b;
}

LogicalMeasurement Readout::measure(char basis) const {
    if (!physical) return logical_measure(block, basis);
    LogicalMeasurement m;
    m.basis = basis;
    m.qubits = {qubit};
    m.bases = {basis};
    std::string label = std::string("m") + char(std::tolower(basis));
    if (!name.empty()) label = name + "_" + label;
    m.labels = {label};
    m.observable = {name.empty() ? std::string(1, basis) : name + "_" + basis, {label}};
    return m;
}

std::vector<SettingProgram> tomography_programs(const StateProgram &sp) {
    const int n = int(sp.readouts.size());
    std::vector<SettingProgram> out;
    for (const auto &setting : tomography_settings(n)) {
        SettingProgram p;
        p.setting = setting;
        p.tag = sp.tag + "/" + setting;
        std::vector<LogicalMeasurement> ms;
        for (int q = 0; q < n; ++q) {
            p.blocks.push_back(sp.readouts[q].measure(setting[q]));
            ms.push_back(p.blocks.back());
        }
        if (sp.ancilla) {
            ms.push_back(*sp.ancilla);
            p.ancilla_labels = sp.ancilla->labels;
            p.ancilla_qubits = sp.ancilla->qubits;
            p.ancilla_prep_moments = nonempty_layers(sp.body, sp.ancilla_prep_layers);
        }
        p.extra = sp.extra;
        p.asymmetric_readout = sp.asymmetric_readout;
        p.circuit = with_logical_measurements(sp.reg.names.size(), sp.body, ms).with_qubit_names(sp.reg.names);
        out.push_back(std::move(p));
    }
    return out;
}

AnnotatedCircuit annotate(const SettingProgram &p, const NoiseModel &nm, int noise_case) {
    if (noise_case < 1 || noise_case > 3) {
        throw std::invalid_argument("noise case must be 1, 2 or 3");
    }
    AnnotatedCircuit ac = apply_noise_sites(p.circuit, nm);
    if (noise_case >= 2) {
        std::set<std::string> keep(p.ancilla_labels.begin(), p.ancilla_labels.end());
        const auto &ms = p.circuit.measurements();
        for (size_t k = 0; k < ms.size(); ++k) {
            if (!keep.count(ms[k].label)) ac.readout[k] = ReadoutSite{0, 0};
        }
    }
    if (noise_case >= 3 && !p.ancilla_qubits.empty()) {
        std::set<uint32_t> anc(p.ancilla_qubits.begin(), p.ancilla_qubits.end());
        auto touches = [&](const NoiseSite &s) {
            return anc.count(s.a) || (s.kind == SiteKind::E2 && anc.count(s.b));
        };
        std::erase_if(ac.init_sites, touches);
        for (size_t t = 0; t < p.ancilla_prep_moments && t < ac.moment_sites.size(); ++t) {
            std::erase_if(ac.moment_sites[t], touches);
        }
    }
    return ac;
}

OutcomeDistribution simulate(const AnnotatedCircuit &ac, const RunOptions &opt, uint64_t seed) {
    switch (opt.engine) {
        case Engine::Tableau:
            return OutcomeDistribution::from_shots(sample_pauli_frame(ac, opt.shots, seed, opt.threads));
        case Engine::Dense:
            return run_dense_exact(ac).outcomes;
        case Engine::DenseMc:
            return OutcomeDistribution::from_shots(run_dense_trajectories(ac, opt.shots, seed));
    }
    throw std::logic_error("unhandled engine");
}

uint64_t derive_seed(uint64_t seed, std::string_view tag) {
    uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : tag) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return splitmix64(seed ^ splitmix64(h));
}

TomographyRun run_tomography(const StateProgram &sp, const DeviceParams &dev, const RunOptions &opt) {
    return run_tomographies({sp}, dev, opt).front();
}

const Metric *ExperimentReport::metric(std::string_view name) const {
    for (const auto &m : metrics)
        if (m.name == name) return &m;
    return nullptr;
}

const std::vector<ExperimentInfo> &experiment_registry() {
    static const std::vector<ExperimentInfo> reg{
        {"ft_zero", "fault-tolerant |0_L> on q2,q6,q7,q3"},
        {"ft_one", "fault-tolerant |1_L> on q2,q6,q7,q3"},
        {"ft_plus", "fault-tolerant |+_L> on q1,q5,q8,q4"},
        {"ft_minus", "fault-tolerant |-_L> on q1,q5,q8,q4"},
        {"nft(theta,phi)", "cos(theta/2)|0_L> + e^(i phi) sin(theta/2)|1_L> on the q1..q4 chain"},
        {"bell_1", "logical Bell from |+_L,0_L> (control q1,q5,q8,q4; target q2,q6,q7,q3)"},
        {"bell_2", "logical Bell from |-_L,0_L>"},
        {"bell_3", "logical Bell from |+_L,1_L>"},
        {"bell_4", "logical Bell from |-_L,1_L>"},
        {"teleport_rz(theta)", "R_Z(theta)|+_L> by gate teleportation; no theta: 17-point scan"},
        {"teleport_rx(theta)", "R_X(theta)|0_L> by gate teleportation; no theta: 17-point scan"},
        {"lptm_cnot", "logical PTM of the transversal CNOT (16 inputs)"},
        {"lptm_rz(theta)", "logical PTM of teleported R_Z(theta)"},
        {"lptm_rx(theta)", "logical PTM of teleported R_X(theta)"},
        {"lptm_all", "CNOT and R_Z/R_X at theta in {0, pi/4, pi/2, pi}: fidelity table"},
        {"phys_zero", "physical |0> on q2"},
        {"phys_one", "physical |1> on q2"},
        {"phys_plus", "physical |+> on q2"},
        {"phys_minus", "physical |-> on q2"},
        {"phys_bell_1", "physical Bell by CNOT q6->q7 from |+,0>"},
        {"phys_bell_2", "physical Bell from |-,0>"},
        {"phys_bell_3", "physical Bell from |+,1>"},
        {"phys_bell_4", "physical Bell from |-,1>"},
    };
    return reg;
}

double parse_angle(std::string_view text) {
    std::string s;
    for (char c : text)
        if (!std::isspace(static_cast<unsigned char>(c))) s += char(std::tolower(static_cast<unsigned char>(c)));
    auto fail = [&]() -> double { throw std::invalid_argument("cannot parse angle '" + std::string(text) + "'"); };
    auto number = [&](const std::string &t) {
        double v = 0;
        auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
        if (ec != std::errc() || ptr != t.data() + t.size() || !std::isfinite(v)) fail();
        return v;
    };
    if (s.empty()) fail();
    auto pi = s.find("pi");
    if (pi == std::string::npos) return number(s);

    std::string coef = s.substr(0, pi);
    std::string rest = s.substr(pi + 2);
    if (!coef.empty() && coef.back() == '*') coef.pop_back();
    double c = coef.empty() || coef == "+" ? 1.0 : coef == "-" ? -1.0 : number(coef);
    double den = 1;
    if (!rest.empty()) {
        if (rest[0] != '/') fail();
        den = number(rest.substr(1));
        if (den == 0) fail();
    }
    return c * kPi / den;
}

std::vector<double> theta_grid(size_t n) {
    if (n == 0) throw std::invalid_argument("theta grid needs at least one point");
    std::vector<double> out;
    for (size_t k = 1; k <= n; ++k) out.push_back(-kPi + 2 * kPi * double(k) / double(n));
    return out;
}

LptmData collect_lptm(const std::string &gate, double theta, const DeviceParams &dev, const RunOptions &opt) {
    static const std::string inputs = "+-0i";
    std::vector<StateProgram> in, out;
    const std::string tag = gate == "cnot" ? "lptm_cnot" : "lptm_" + gate + "(" + angle_text(theta) + ")";

    if (gate == "cnot") {
        Register reg{concat(kTopRow, kBottomRow)};
        auto c = reg.block(kTopRow, "c");
        auto t = reg.block(kBottomRow, "t");
        for (char a : inputs) {
            for (char b : inputs) {
                StateProgram sp;
                sp.reg = reg;
                sp.tag = tag + "/in[" + a + b + "]";
                sp.body = interleave(prep_input(a, c), prep_input(b, t));
                sp.readouts = {Readout{false, c, 0, ""}, Readout{false, t, 0, ""}};
                in.push_back(sp);
                auto cnot = transversal_cnot_layers(c, t);
                sp.body.insert(sp.body.end(), cnot.begin(), cnot.end());
                sp.tag = tag + "/out[" + a + b + "]";
                out.push_back(sp);
            }
        }
    } else if (gate == "rz" || gate == "rx") {
        Register data_reg{kBottomRow};
        Register reg{concat(kTopRow, kBottomRow)};
        for (char a : inputs) {
            StateProgram sp;
            sp.reg = data_reg;
            sp.tag = tag + "/in[" + a + "]";
            auto d0 = data_reg.block(kBottomRow, "d");
            sp.body = prep_input(a, d0);
            sp.readouts = {Readout{false, d0, 0, ""}};
            in.push_back(sp);

            auto d = reg.block(kBottomRow, "d");
            auto anc = reg.block(kTopRow, "anc");
            auto tc = teleport_rotation(gate == "rz" ? 'Z' : 'X', theta, d, anc, prep_input(a, d));
            StateProgram so;
            so.reg = reg;
            so.tag = tag + "/out[" + a + "]";
            so.body = tc.layers;
            so.readouts = {Readout{false, d, 0, ""}};
            so.extra = tc.rule;
            so.ancilla = tc.ancilla;
            so.ancilla_prep_layers = tc.ancilla_prep_layers;
            out.push_back(so);
        }
    } else {
        throw std::invalid_argument("unknown gate '" + gate + "'");
    }

    std::vector<StateProgram> all = in;
    all.insert(all.end(), out.begin(), out.end());
    auto runs = run_tomographies(all, dev, opt);
    LptmData data;
    for (size_t k = 0; k < runs.size(); ++k) {
        (k < in.size() ? data.inputs : data.outputs).push_back(runs[k].es);
        data.settings.insert(data.settings.end(), runs[k].settings.begin(), runs[k].settings.end());
    }
    return data;
}

LptmResult reconstruct_lptm(const LptmData &data, const PTM &ideal) {
    for (const auto *sets : {&data.inputs, &data.outputs}) {
        for (const auto &es : *sets) {
            if (!es.empty_labels().empty()) {
                throw NumericalError("an LPTM input or output has observables with no passing shots", 0);
            }
        }
    }
    LptmResult r;
    r.ideal = ideal;
    r.raw = ptm_raw(data.inputs, data.outputs);
    r.projected = project_cptp(r.raw);
    r.fidelity = gate_fidelity(r.projected.ptm, ideal);
    r.fidelity_raw = gate_fidelity(r.raw, ideal);

    // Finite-difference linearization of the raw fidelity in every estimate.
    const double h = 1e-6;
    double var = 0;
    bool all_exact = true;
    auto perturb = [&](bool output, size_t k, const std::string &label, double sigma) {
        LptmData d = data;
        auto &es = output ? d.outputs[k] : d.inputs[k];
        es.entries[label].value += h;
        double g = (gate_fidelity(ptm_raw(d.inputs, d.outputs), ideal) - r.fidelity_raw) / h;
        var += g * g * sigma * sigma;
    };
    for (bool output : {false, true}) {
        const auto &sets = output ? data.outputs : data.inputs;
        for (size_t k = 0; k < sets.size(); ++k) {
            for (const auto &[label, ev] : sets[k].entries) {
                if (!ev.exact) all_exact = false;
                if (ev.two_sigma > 0) perturb(output, k, label, ev.two_sigma / 2);
            }
        }
    }
    r.fidelity_2sigma = all_exact ? 0.0 : 2 * std::sqrt(var);
    return r;
}

ExperimentReport run_experiment(const std::string &id, const DeviceParams &dev, const RunOptions &opt) {
    ExperimentReport r;
    r.id = id;
    r.engine = engine_name(opt.engine);
    r.shots = opt.engine == Engine::Dense ? 0 : opt.shots;
    r.seed = opt.seed;
    r.noise_case = opt.noise_case;
    r.noiseless = opt.noiseless;
    r.device_name = dev.name;
    r.device_hash = dev.hash();

    const ParsedId p = parse_id(id);
    const bool scan = (p.family == "teleport_rz" || p.family == "teleport_rx") && p.args.empty();
    if (!scan) {
        if (auto sc = state_case(p, id)) {
            r.kind = "state";
            fill_state_report(r, run_tomography(sc->program, dev, opt), sc->target);
            return r;
        }
    }
    if (scan) {
        r.kind = "scan";
        std::vector<StateCase> cases;
        std::vector<StateProgram> programs;
        const auto grid = theta_grid();
        for (double th : grid) {
            ParsedId q{p.family, {th}};
            cases.push_back(*state_case(q, p.family + "(" + angle_text(th) + ")"));
            programs.push_back(cases.back().program);
        }
        auto runs = run_tomographies(programs, dev, opt);
        for (size_t k = 0; k < grid.size(); ++k) {
            ScanPoint pt;
            pt.theta = grid[k];
            pt.es = runs[k].es;
            pt.ps_rate = mean_ps_rate(runs[k].settings);
            if (pt.es.empty_labels().empty()) {
                pt.fidelity = state_fidelity(mle_state(pt.es).rho, cases[k].target);
            } else {
                pt.fidelity = std::nan("");
                r.warnings.push_back("no passing shots at theta = " + angle_text(grid[k]));
            }
            r.scan.push_back(pt);
            r.settings.insert(r.settings.end(), runs[k].settings.begin(), runs[k].settings.end());
            add_low_stat_warnings(r, runs[k].settings);
        }
        double fsum = 0;
        for (const auto &pt : r.scan) fsum += pt.fidelity;
        r.metrics.push_back({"mean_fidelity", fsum / double(r.scan.size()), std::nullopt});
        r.metrics.push_back({"ps_rate", mean_ps_rate(r.settings), std::nullopt});
        return r;
    }
    if (p.family == "lptm_cnot" || p.family == "lptm_rz" || p.family == "lptm_rx") {
        r.kind = "lptm";
        const std::string gate = p.family.substr(5);
        expect_args(p, gate == "cnot" ? 0 : 1, gate == "cnot" ? 0 : 1, id);
        const double th = p.args.empty() ? 0 : p.args[0];
        auto data = collect_lptm(gate, th, dev, opt);
        auto res = reconstruct_lptm(data, ideal_for(gate, th));
        fill_lptm_report(r, data, res, "");
        r.ptm_raw = res.raw;
        r.ptm = res.projected.ptm;
        return r;
    }
    if (p.family == "lptm_all") {
        expect_args(p, 0, 0, id);
        r.kind = "table";
        auto run_one = [&](const std::string &gate, double th, const std::string &name) {
            auto data = collect_lptm(gate, th, dev, opt);
            auto res = reconstruct_lptm(data, ideal_for(gate, th));
            r.metrics.push_back({name, res.fidelity, res.fidelity_2sigma});
            add_low_stat_warnings(r, data.settings);
            return res.fidelity;
        };
        run_one("cnot", 0, "CNOT");
        double sum = 0;
        for (const char *g : {"rz", "rx"}) {
            for (double th : kLptmAngles) {
                std::string name = std::string(g) == "rz" ? "R_Z(" : "R_X(";
                sum += run_one(g, th, name + angle_text(th) + ")");
            }
        }
        r.metrics.push_back({"single_qubit_average", sum / double(2 * kLptmAngles.size()), std::nullopt});
        return r;
    }
    throw std::invalid_argument("unknown experiment '" + id + "'; see `d2lab list`");
}

}  // namespace d2lab

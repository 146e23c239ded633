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

#include "d2lab/sweep.hpp"

#include <charconv>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "d2lab/experiments.hpp"
#include "d2lab/frame_sampler.hpp"
#include "d2lab/postselect.hpp"
#include "d2lab/surface_code.hpp"

namespace d2lab {

namespace {

// One eigenstate circuit: the observable should read `expected`.
struct Probe {
    std::string name;
    Circuit circuit;
    PostSelectionRule rule;
    Observable observable;
    int expected;
};

Probe make_probe(std::string name, size_t n, LayerList body, std::vector<LogicalMeasurement> ms, int expected) {
    Probe p{std::move(name), with_logical_measurements(n, std::move(body), ms), {}, {"obs", {}}, expected};
    for (const auto &m : ms) {
        p.rule = p.rule & m.rule;
        p.observable.labels.insert(p.observable.labels.end(), m.observable.labels.begin(), m.observable.labels.end());
    }
    return p;
}

std::vector<Probe> logical_probes(const std::string &family) {
    std::vector<Probe> out;
    if (family == "single") {
        LogicalBlock b;
        out.push_back(make_probe("ft_zero/Z", 4, prep_ft_z_layers(b, 0), {logical_measure(b, 'Z')}, +1));
        out.push_back(make_probe("ft_one/Z", 4, prep_ft_z_layers(b, 1), {logical_measure(b, 'Z')}, -1));
        out.push_back(make_probe("ft_plus/X", 4, prep_ft_x_layers(b, +1), {logical_measure(b, 'X')}, +1));
        out.push_back(make_probe("ft_minus/X", 4, prep_ft_x_layers(b, -1), {logical_measure(b, 'X')}, -1));
        return out;
    }
    LogicalBlock a{{0, 1, 2, 3}, "a"}, b{{4, 5, 6, 7}, "b"};
    for (int k = 0; k < 4; ++k) {
        const int sign = k % 2 ? -1 : +1, eigen = k / 2;
        LayerList body = interleave(prep_ft_x_layers(a, sign), prep_ft_z_layers(b, eigen));
        auto cnot = transversal_cnot_layers(a, b);
        body.insert(body.end(), cnot.begin(), cnot.end());
        const std::string tag = "bell_" + std::to_string(k + 1);
        out.push_back(make_probe(tag + "/XX", 8, body, {logical_measure(a, 'X'), logical_measure(b, 'X')}, sign));
        out.push_back(make_probe(tag + "/ZZ", 8, body, {logical_measure(a, 'Z'), logical_measure(b, 'Z')},
                                 eigen ? -1 : +1));
    }
    return out;
}

std::vector<Probe> physical_probes(const std::string &family) {
    using I = Instruction;
    std::vector<Probe> out;
    if (family == "single") {
        Readout r{true, {}, 0, ""};
        out.push_back(make_probe("phys_zero/Z", 1, {}, {r.measure('Z')}, +1));
        out.push_back(make_probe("phys_one/Z", 1, {{I::clifford(GateKind::X, 0)}}, {r.measure('Z')}, -1));
        out.push_back(make_probe("phys_plus/X", 1, {{I::clifford(GateKind::H, 0)}}, {r.measure('X')}, +1));
        out.push_back(make_probe("phys_minus/X", 1, {{I::clifford(GateKind::H, 0)}, {I::clifford(GateKind::Z, 0)}},
                                 {r.measure('X')}, -1));
        return out;
    }
    Readout ra{true, {}, 0, "a"}, rb{true, {}, 1, "b"};
    for (int k = 0; k < 4; ++k) {
        const bool minus = k % 2, one = k / 2;
        Layer l1{I::clifford(GateKind::H, 0)};
        if (one) l1.push_back(I::clifford(GateKind::X, 1));
        Layer l2{I::clifford(GateKind::H, 1)};
        if (minus) l2.push_back(I::clifford(GateKind::Z, 0));
        LayerList body{l1, l2, {I::clifford(GateKind::CZ, 0, 1)}, {I::clifford(GateKind::H, 1)}};
        const std::string tag = "phys_bell_" + std::to_string(k + 1);
        out.push_back(make_probe(tag + "/XX", 2, body, {ra.measure('X'), rb.measure('X')}, minus ? -1 : +1));
        out.push_back(make_probe(tag + "/ZZ", 2, body, {ra.measure('Z'), rb.measure('Z')}, one ? -1 : +1));
    }
    return out;
}

struct Tally {
    double wrong = 0;
    double pass = 0;
    double total = 0;
};

Tally run_probes(const std::vector<Probe> &probes, const NoiseModel &nm, const SweepConfig &cfg,
                 const std::string &tag) {
    Tally t;
    for (const auto &pr : probes) {
        auto ac = apply_noise_sites(pr.circuit, nm);
        auto dist = OutcomeDistribution::from_shots(
            sample_pauli_frame(ac, cfg.shots, derive_seed(cfg.seed, tag + "/" + pr.name), cfg.threads));
        Estimate e = postselect_and_estimate(dist, pr.rule, pr.observable);
        t.total += e.n_total;
        if (e.empty()) continue;
        t.pass += e.n_pass;
        t.wrong += e.n_pass * (1 - pr.expected * *e.expectation) / 2;
    }
    return t;
}

std::string format_p(double p) {
    char buf[32];
    auto r = std::to_chars(buf, buf + sizeof buf, p);
    return std::string(buf, r.ptr);
}

}  // namespace

NoiseMode parse_noise_mode(std::string_view s) {
    if (s == "gate" || s == "gate_only" || s == "gate-only") return NoiseMode::GateOnly;
    if (s == "meas" || s == "meas_only" || s == "meas-only") return NoiseMode::MeasOnly;
    if (s == "both") return NoiseMode::Both;
    throw std::invalid_argument("unknown noise mode '" + std::string(s) + "' (gate_only, meas_only, both)");
}

const char *noise_mode_name(NoiseMode m) {
    switch (m) {
        case NoiseMode::GateOnly:
            return "gate_only";
        case NoiseMode::MeasOnly:
            return "meas_only";
        case NoiseMode::Both:
            return "both";
    }
    return "?";
}

NoiseModel sweep_noise(NoiseMode mode, double p) {
    switch (mode) {
        case NoiseMode::GateOnly:
            return NoiseModel::uniform(p / 10, p, 0);
        case NoiseMode::MeasOnly:
            return NoiseModel::uniform(0, 0, p);
        case NoiseMode::Both:
            return NoiseModel::uniform(p / 10, p, p);
    }
    throw std::logic_error("unhandled noise mode");
}

const SweepCurve *SweepResult::curve(std::string_view family) const {
    for (const auto &c : curves)
        if (c.family == family) return &c;
    return nullptr;
}

std::optional<double> crossing_point(const std::vector<SweepPoint> &points) {
    const SweepPoint *prev = nullptr;
    for (const auto &pt : points) {
        if (pt.excluded) continue;
        if (prev) {
            const double d0 = prev->logical_error - prev->physical_error;
            const double d1 = pt.logical_error - pt.physical_error;
            if (d0 < 0 && d1 >= 0) {
                return prev->p + (pt.p - prev->p) * (-d0) / (d1 - d0);
            }
        }
        prev = &pt;
    }
    return std::nullopt;
}

SweepResult run_sweep(const SweepConfig &cfg) {
    if (cfg.p_grid.empty()) {
        throw std::invalid_argument("sweep grid is empty");
    }
    for (double p : cfg.p_grid) {
        if (!(p >= 0 && p < 0.5)) {
            throw std::invalid_argument("sweep strength " + format_p(p) + " outside [0, 0.5)");
        }
    }
    if (cfg.shots == 0) {
        throw std::invalid_argument("sweep needs at least one shot per circuit");
    }
    SweepResult res;
    res.config = cfg;
    for (const auto &family : cfg.families) {
        if (family != "single" && family != "bell") {
            throw std::invalid_argument("unknown sweep family '" + family + "' (single, bell)");
        }
        const auto logical = logical_probes(family);
        const auto physical = physical_probes(family);
        SweepCurve curve;
        curve.family = family;
        for (double p : cfg.p_grid) {
            const NoiseModel nm = sweep_noise(cfg.mode, p);
            const std::string tag = std::string(noise_mode_name(cfg.mode)) + "/" + family + "/" + format_p(p);
            Tally lt = run_probes(logical, nm, cfg, tag);
            Tally pt = run_probes(physical, nm, cfg, tag);
            SweepPoint sp;
            sp.p = p;
            sp.n_pass = lt.pass;
            sp.n_total = lt.total;
            sp.ps_rate = lt.total > 0 ? lt.pass / lt.total : 0;
            sp.excluded = lt.pass == 0;
            if (sp.excluded) {
                res.warnings.push_back(family + ": no shot passed post-selection at p = " + format_p(p) +
                                       "; point excluded");
            } else {
                sp.logical_error = lt.wrong / lt.pass;
                sp.logical_2sigma = binom_2sigma(sp.logical_error, lt.pass);
            }
            sp.physical_error = pt.wrong / pt.pass;
            sp.physical_2sigma = binom_2sigma(sp.physical_error, pt.pass);
            curve.points.push_back(sp);
        }
        curve.crossing = crossing_point(curve.points);
        res.curves.push_back(std::move(curve));
    }
    return res;
}

std::vector<double> parse_grid(std::string_view text) {
    auto number = [&](std::string s) {
        double v = 0;
        auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (s.empty() || ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v)) {
            throw std::invalid_argument("cannot parse grid '" + std::string(text) + "'");
        }
        return v;
    };
    std::string s(text);
    std::vector<double> out;
    if (s.find(':') != std::string::npos) {
        std::vector<std::string> parts;
        std::stringstream in(s);
        for (std::string item; std::getline(in, item, ':');) parts.push_back(item);
        if (parts.size() != 3) {
            throw std::invalid_argument("grid range must be start:stop:step");
        }
        double lo = number(parts[0]), hi = number(parts[1]), step = number(parts[2]);
        if (step <= 0 || hi < lo) {
            throw std::invalid_argument("grid range needs start <= stop and a positive step");
        }
        const auto n = static_cast<size_t>(std::floor((hi - lo) / step + 1e-9));
        // Rounded to 12 digits so that 0.01:0.2:0.01 yields 0.07, not 0.07000000000000001.
        for (size_t k = 0; k <= n; ++k) out.push_back(std::round((lo + double(k) * step) * 1e12) / 1e12);
        return out;
    }
    std::stringstream in(s);
    for (std::string item; std::getline(in, item, ',');) out.push_back(number(item));
    if (out.empty()) {
        throw std::invalid_argument("grid is empty");
    }
    return out;
}

}  // namespace d2lab

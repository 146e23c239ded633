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

#include "d2lab/fault_audit.hpp"

#include <algorithm>
#include <thread>

#include "d2lab/errors.hpp"
#include "d2lab/tableau.hpp"

namespace d2lab {

const char *fault_class_name(FaultClass c) {
    switch (c) {
        case FaultClass::Trivial:
            return "trivial";
        case FaultClass::Detected:
            return "detected";
        case FaultClass::Logical:
            return "logical";
    }
    return "?";
}

std::vector<FaultOutcome> AuditReport::of_class(FaultClass c) const {
    std::vector<FaultOutcome> out;
    std::copy_if(outcomes.begin(), outcomes.end(), std::back_inserter(out),
                 [c](const FaultOutcome &o) { return o.cls == c; });
    return out;
}

std::set<std::string> AuditReport::patterns(const LogicalBlock &block, char type, size_t min_weight) const {
    std::set<std::string> out;
    for (const auto &o : outcomes) {
        std::string s;
        size_t w = 0;
        bool pure = true;
        for (auto q : block.data) {
            char op = o.propagated.op(q);
            s += op;
            if (op != 'I') {
                ++w;
                pure = pure && op == type;
            }
        }
        // Anything outside the block disqualifies the pattern.
        if (pure && w >= min_weight && o.propagated.weight() == w) out.insert(s);
    }
    return out;
}

namespace {

struct Step {
    int moment;
    std::string text;
    std::vector<uint32_t> qubits;
    std::optional<CliffordGate> gate;
};

// Membership of a phaseless Pauli in the group generated by `gens`.
bool in_group(const PauliString &e, const std::vector<PauliString> &gens) {
    const size_t k = gens.size();
    for (uint64_t m = 0; m < (uint64_t{1} << k); ++m) {
        PauliString acc(e.size());
        for (size_t j = 0; j < k; ++j)
            if ((m >> j) & 1) acc = multiply(acc, gens[j]);
        if (acc.same_support(e)) return true;
    }
    return false;
}

}  // namespace

AuditReport fault_injection_audit(const Circuit &c, const std::vector<LogicalBlock> &blocks, const AuditOptions &opt) {
    const size_t n = c.num_qubits();
    std::vector<Step> steps;
    for (size_t t = 0; t < c.moments().size(); ++t) {
        for (const auto &ins : c.moments()[t]) {
            if (ins.kind == OpKind::MeasureZ || ins.kind == OpKind::Reset) {
                throw CircuitError("fault audit expects a measurement-free circuit");
            }
            Step s{int(t), ins.str(), {ins.targets().begin(), ins.targets().end()}, std::nullopt};
            if (ins.kind != OpKind::Idle) {
                s.gate = ins.as_clifford();
                if (!s.gate) {
                    throw UnsupportedCircuitError("fault audit needs a Clifford circuit; '" + ins.str() +
                                                  "' is not Clifford");
                }
            }
            steps.push_back(std::move(s));
        }
    }

    std::vector<PauliString> checks;
    for (const auto &b : blocks)
        for (auto &s : b.stabilizers(n)) checks.push_back(s);

    StabilizerTableau ideal(n);
    for (const auto &s : steps)
        if (s.gate) ideal.apply(*s.gate);

    // Faults enter after step index `after` (-1 = initialization).
    struct Job {
        int after;
        uint32_t qubit;
        char pauli;
    };
    std::vector<Job> jobs;
    for (uint32_t q = 0; q < n; ++q)
        for (char p : {'X', 'Y', 'Z'}) jobs.push_back({-1, q, p});
    for (size_t k = 0; k < steps.size(); ++k)
        for (auto q : steps[k].qubits)
            for (char p : {'X', 'Y', 'Z'}) jobs.push_back({int(k), q, p});

    std::vector<FaultOutcome> results(jobs.size());
    auto work = [&](size_t lo, size_t hi) {
        for (size_t j = lo; j < hi; ++j) {
            const auto &job = jobs[j];
            PauliString e = PauliString::single(n, job.qubit, job.pauli);
            for (size_t k = size_t(job.after + 1); k < steps.size(); ++k)
                if (steps[k].gate) e = conjugate(e, *steps[k].gate);
            e.set_phase(0);

            FaultClass cls;
            bool harmless = opt.arbitrary_logical_state ? in_group(e, checks) : ideal.expectation(e) != 0;
            if (harmless) {
                cls = FaultClass::Trivial;
            } else if (std::any_of(checks.begin(), checks.end(), [&](const auto &s) { return !commutes(s, e); })) {
                cls = FaultClass::Detected;
            } else {
                cls = FaultClass::Logical;
            }
            FaultLocation where;
            where.moment = job.after < 0 ? -1 : steps[job.after].moment;
            where.instruction = job.after < 0 ? "init" : steps[job.after].text;
            where.qubit = job.qubit;
            where.pauli = job.pauli;
            results[j] = FaultOutcome{where, e, cls};
        }
    };

    unsigned threads = opt.threads ? opt.threads : std::max(1u, std::thread::hardware_concurrency());
    threads = std::min<unsigned>(threads, std::max<size_t>(1, jobs.size() / 64));
    if (threads <= 1) {
        work(0, jobs.size());
    } else {
        std::vector<std::thread> pool;
        const size_t chunk = (jobs.size() + threads - 1) / threads;
        for (unsigned t = 0; t < threads; ++t) {
            size_t lo = t * chunk, hi = std::min(jobs.size(), lo + chunk);
            if (lo < hi) pool.emplace_back(work, lo, hi);
        }
        for (auto &th : pool) th.join();
    }

    AuditReport rep;
    for (auto &r : results) ++rep.counts[static_cast<int>(r.cls)];
    rep.outcomes = std::move(results);
    return rep;
}

std::vector<MeasurementFault> undetected_readout_faults(const LogicalMeasurement &m) {
    std::vector<MeasurementFault> out;
    auto flips = [](char fault, char basis) { return fault != basis; };
    for (int i = 0; i < 4; ++i) {
        for (char p : {'X', 'Y', 'Z'}) {
            const std::string &flipped = m.labels[i];
            auto odd = [&](const std::vector<std::string> &labels) {
                return flips(p, m.bases[i]) && std::count(labels.begin(), labels.end(), flipped) % 2 == 1;
            };
            bool caught = std::any_of(m.rule.conditions().begin(), m.rule.conditions().end(),
                                      [&](const ParityCondition &c) { return odd(c.labels); });
            if (!caught && odd(m.observable.labels)) out.push_back({i + 1, p});
        }
    }
    return out;
}

}  // namespace d2lab

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

#include "d2lab/shots.hpp"

#include "d2lab/postselect.hpp"

namespace d2lab {

namespace {

size_t find_label(const std::vector<std::string> &labels, const std::string &label) {
    for (size_t k = 0; k < labels.size(); ++k) {
        if (labels[k] == label) {
            return k;
        }
    }
    throw std::invalid_argument("unknown measurement label '" + label + "'");
}

}  // namespace

size_t ShotTable::label_index(const std::string &label) const { return find_label(labels, label); }

size_t OutcomeDistribution::label_index(const std::string &label) const { return find_label(labels, label); }

OutcomeDistribution OutcomeDistribution::from_shots(const ShotTable &t) {
    OutcomeDistribution d;
    d.labels = t.labels;
    for (auto r : t.rows) {
        d.weights[r] += 1;
    }
    d.total = static_cast<double>(t.rows.size());
    return d;
}

double OutcomeDistribution::frequency_minus(size_t k) const {
    double w = 0;
    for (const auto &[pattern, weight] : weights) {
        if ((pattern >> k) & 1) {
            w += weight;
        }
    }
    return total > 0 ? w / total : 0;
}

void write_shots_csv(std::ostream &out, const ShotTable &t, const std::vector<const PostSelectionRule *> &rules,
                     const std::string &circuit_hash, uint64_t seed) {
    out << "# circuit_hash=" << circuit_hash << " seed=" << seed << " shots=" << t.num_shots() << "\n";
    std::vector<std::string> cond_names;
    std::vector<uint64_t> masks;
    for (const auto *rule : rules) {
        auto m = rule->masks(t.labels);
        for (size_t c = 0; c < m.size(); ++c) {
            cond_names.push_back(rule->conditions()[c].name);
            masks.push_back(m[c]);
        }
    }
    bool first = true;
    for (const auto &l : t.labels) {
        out << (first ? "" : ",") << l;
        first = false;
    }
    for (const auto &c : cond_names) {
        out << (first ? "" : ",") << c;
        first = false;
    }
    out << "\n";
    for (size_t s = 0; s < t.num_shots(); ++s) {
        first = true;
        for (size_t k = 0; k < t.labels.size(); ++k) {
            out << (first ? "" : ",") << (t.value(s, k) > 0 ? "+1" : "-1");
            first = false;
        }
        for (auto m : masks) {
            out << (first ? "" : ",") << (parity_even(t.rows[s], m) ? 1 : 0);
            first = false;
        }
        out << "\n";
    }
}

}  // namespace d2lab

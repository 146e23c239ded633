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

#ifndef D2LAB_SHOTS_HPP
#define D2LAB_SHOTS_HPP

#include <cstdint>
#include <map>
#include <ostream>
#include <string>
#include <vector>

namespace d2lab {

// Measurement outcomes of many shots. Bit k of a row is set when measurement
// k recorded |1>, i.e. the eigenvalue -1.
struct ShotTable {
    std::vector<std::string> labels;
    std::vector<uint64_t> rows;

    size_t num_shots() const { return rows.size(); }
    int value(size_t shot, size_t k) const { return (rows[shot] >> k) & 1 ? -1 : +1; }
    size_t label_index(const std::string &label) const;
};

// Weighted outcome patterns: shot counts when sampled, probabilities when
// computed exactly. Both feed the same post-selection code.
struct OutcomeDistribution {
    std::vector<std::string> labels;
    std::map<uint64_t, double> weights;
    double total = 0;
    bool exact = false;

    static OutcomeDistribution from_shots(const ShotTable &t);
    size_t label_index(const std::string &label) const;
    /// Fraction of weight with measurement k reading -1.
    double frequency_minus(size_t k) const;
};

class PostSelectionRule;

/// One row per shot: +1/-1 per label, then 1/0 per condition.
void write_shots_csv(std::ostream &out, const ShotTable &t, const std::vector<const PostSelectionRule *> &rules,
                     const std::string &circuit_hash, uint64_t seed);

}  // namespace d2lab

#endif

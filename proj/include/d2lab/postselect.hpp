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

#ifndef D2LAB_POSTSELECT_HPP
#define D2LAB_POSTSELECT_HPP

#include <bit>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "d2lab/shots.hpp"

namespace d2lab {

/// The product of the listed +-1 outcomes must be +1.
struct ParityCondition {
    std::string name;
    std::vector<std::string> labels;
};

class PostSelectionRule {
   public:
    PostSelectionRule() = default;
    explicit PostSelectionRule(std::vector<ParityCondition> conditions) : conditions_(std::move(conditions)) {}

    const std::vector<ParityCondition> &conditions() const { return conditions_; }
    /// Both rules must hold.
    PostSelectionRule operator&(const PostSelectionRule &other) const;

    /// One bit mask per condition, over the given measurement order.
    std::vector<uint64_t> masks(const std::vector<std::string> &labels) const;

   private:
    std::vector<ParityCondition> conditions_;
};

/// Product of +-1 outcomes.
struct Observable {
    std::string name;
    std::vector<std::string> labels;
};

uint64_t label_mask(const std::vector<std::string> &all, const std::vector<std::string> &wanted);

inline bool parity_even(uint64_t pattern, uint64_t mask) { return (std::popcount(pattern & mask) & 1) == 0; }

struct ShotRecord {
    std::map<std::string, int> bits;
    std::map<std::string, bool> verdicts;
};
ShotRecord shot_record(const ShotTable &t, size_t shot, const PostSelectionRule &rule);

struct Estimate {
    std::optional<double> expectation;  // empty when nothing passed
    std::optional<double> expectation_2sigma;
    double ps_rate = 0;
    std::optional<double> ps_rate_2sigma;
    double n_pass = 0;
    double n_total = 0;
    bool exact = false;

    bool empty() const { return !expectation.has_value(); }
};

Estimate postselect_and_estimate(const OutcomeDistribution &d, const PostSelectionRule &rule, const Observable &obs);

/// 2 * sqrt(p (1 - p) / n); empty when n == 0.
std::optional<double> binom_2sigma(double p_hat, double n);

/// "97.9(2)" style: the uncertainty rounded to one significant digit, the
/// value to the same decimal place. Values are scaled by 100 when `percent`.
std::string format_uncertain(double value, std::optional<double> two_sigma, bool percent = true);

}  // namespace d2lab

#endif

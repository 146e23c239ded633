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

#include "d2lab/postselect.hpp"

#include <bit>
#include <algorithm>
#include <cmath>
#include <cstdio>

#include "d2lab/errors.hpp"

namespace d2lab {

PostSelectionRule PostSelectionRule::operator&(const PostSelectionRule &other) const {
    auto c = conditions_;
    c.insert(c.end(), other.conditions_.begin(), other.conditions_.end());
    return PostSelectionRule(std::move(c));
}

std::vector<uint64_t> PostSelectionRule::masks(const std::vector<std::string> &labels) const {
    std::vector<uint64_t> out;
    for (const auto &c : conditions_) {
        out.push_back(label_mask(labels, c.labels));
    }
    return out;
}

uint64_t label_mask(const std::vector<std::string> &all, const std::vector<std::string> &wanted) {
    if (all.size() > 64) {
        throw DimensionError("at most 64 measurements per circuit are supported");
    }
    uint64_t mask = 0;
    for (const auto &w : wanted) {
        bool found = false;
        for (size_t k = 0; k < all.size(); ++k) {
            if (all[k] == w) {
                mask ^= uint64_t{1} << k;
                found = true;
                break;
            }
        }
        if (!found) {
            throw std::invalid_argument("measurement label '" + w + "' not produced by the circuit");
        }
    }
    return mask;
}

ShotRecord shot_record(const ShotTable &t, size_t shot, const PostSelectionRule &rule) {
    ShotRecord r;
    for (size_t k = 0; k < t.labels.size(); ++k) {
        r.bits[t.labels[k]] = t.value(shot, k);
    }
    auto masks = rule.masks(t.labels);
    for (size_t c = 0; c < masks.size(); ++c) {
        r.verdicts[rule.conditions()[c].name] = parity_even(t.rows[shot], masks[c]);
    }
    return r;
}

Estimate postselect_and_estimate(const OutcomeDistribution &d, const PostSelectionRule &rule, const Observable &obs) {
    auto masks = rule.masks(d.labels);
    uint64_t obs_mask = label_mask(d.labels, obs.labels);
    double pass = 0, plus = 0;
    for (const auto &[pattern, w] : d.weights) {
        bool ok = true;
        for (auto m : masks) {
            ok = ok && parity_even(pattern, m);
        }
        if (ok) {
            pass += w;
            if (parity_even(pattern, obs_mask)) {
                plus += w;
            }
        }
    }
    Estimate e;
    e.exact = d.exact;
    e.n_total = d.total;
    e.n_pass = pass;
    e.ps_rate = d.total > 0 ? pass / d.total : 0;
    if (d.exact) {
        e.ps_rate_2sigma = 0;
    } else {
        e.ps_rate_2sigma = binom_2sigma(e.ps_rate, d.total);
    }
    if (pass > 0) {
        double p_plus = plus / pass;
        e.expectation = 2 * p_plus - 1;
        if (d.exact) {
            e.expectation_2sigma = 0;
        } else if (auto s = binom_2sigma(p_plus, pass)) {
            e.expectation_2sigma = 2 * *s;
        }
    }
    return e;
}

std::optional<double> binom_2sigma(double p_hat, double n) {
    if (!(n > 0)) {
        return std::nullopt;
    }
    double p = std::clamp(p_hat, 0.0, 1.0);
    return 2 * std::sqrt(p * (1 - p) / n);
}

std::string format_uncertain(double value, std::optional<double> two_sigma, bool percent) {
    double scale = percent ? 100 : 1;
    double v = value * scale;
    char buf[64];
    if (!two_sigma || !(*two_sigma > 0)) {
        std::snprintf(buf, sizeof(buf), "%.4f", v);
        return std::string(buf) + (percent ? "%" : "");
    }
    double u = *two_sigma * scale;
    int e = static_cast<int>(std::floor(std::log10(u)));
    long digit = std::lround(u / std::pow(10.0, e));
    if (digit >= 10) {
        digit = 1;
        ++e;
    }
    int decimals = std::max(0, -e);
    long shown = e > 0 ? digit * static_cast<long>(std::llround(std::pow(10.0, e))) : digit;
    std::snprintf(buf, sizeof(buf), "%.*f(%ld)", decimals, v, shown);
    return std::string(buf) + (percent ? "%" : "");
}

}  // namespace d2lab

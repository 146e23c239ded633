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

#ifndef D2LAB_REPORT_HPP
#define D2LAB_REPORT_HPP

#include <iosfwd>
#include <string>
#include <vector>

#include "d2lab/experiments.hpp"
#include "d2lab/sweep.hpp"

namespace d2lab {

inline constexpr int kReportSchemaVersion = 1;

const char *git_describe();

/// Shortest round-trip decimal form; "nan"/"inf" for non-finite values.
std::string format_double(double v);

/// File-name-safe form of an experiment id: "teleport_rz(pi/4)" -> "teleport_rz_pi_4".
std::string slug(const std::string &id);

void write_report_csv(std::ostream &out, const ExperimentReport &r);
/// One row per fidelity: name, fidelity, two_sigma, formatted ("97.9(2)%").
void write_summary_csv(std::ostream &out, const ExperimentReport &r);
void write_report_json(std::ostream &out, const ExperimentReport &r);
void write_report_svg(std::ostream &out, const ExperimentReport &r);

void write_sweep_csv(std::ostream &out, const std::vector<SweepResult> &sweeps);
void write_sweep_json(std::ostream &out, const std::vector<SweepResult> &sweeps);
void write_sweep_svg(std::ostream &out, const std::vector<SweepResult> &sweeps);

/// Writes <dir>/<slug>.{csv,json,svg} (and <slug>_summary.csv with csv) for the
/// requested formats; returns the paths written. IoError names the failing path.
std::vector<std::string> emit_report(const ExperimentReport &r, const std::string &dir,
                                     const std::vector<std::string> &formats);
std::vector<std::string> emit_sweep(const std::vector<SweepResult> &sweeps, const std::string &dir,
                                    const std::string &stem, const std::vector<std::string> &formats);

}  // namespace d2lab

#endif

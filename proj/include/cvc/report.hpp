// Copyright 2026 The cvc Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "cvc/analysis.hpp"
#include "cvc/protocols.hpp"

namespace cvc {

/** One sweep request: key=start:stop:steps[:log]. `steps` is the number of
 *  grid points (≥ 1); a log-scaled axis spaces them geometrically. */
struct SweepSpec {
  std::string key;
  double start = 0.0;
  double stop = 0.0;
  int steps = 1;
  bool log_scale = false;
};

SweepSpec parse_sweep_spec(std::string_view text);
std::vector<double> expand_sweep(const SweepSpec& spec);

/** A full run request: scenario parameters plus presentation choices. */
struct ScenarioConfig {
  ScenarioParams params;
  std::vector<SweepSpec> sweeps;
  std::string format = "json";  // "json" or "csv"
  std::string out_path;         // empty → stdout
};

/** Applies one key/value entry (config line or command-line override).
 *  Accepted keys: protocol, backend, format, out, sweep, and the numeric
 *  scenario parameters (r, eta, pair_r, fma_r, encode_r, encode_x,
 *  encode_p). Unknown keys raise UsageError naming the key. */
void apply_config_entry(ScenarioConfig& config, std::string_view key,
                        std::string_view value);

/** Parses `key = value` lines; blank lines and #-comments are skipped and
 *  duplicate scalar keys are rejected (sweep may repeat). */
ScenarioConfig parse_config_text(std::string_view text);
ScenarioConfig parse_config_file(const std::string& path);

/** Print precision in significant digits: CVC_PRECISION_DIGITS when set
 *  (must parse to an integer in [1, 17]), otherwise 12. */
int report_precision();

/** Shortest-form decimal rendering at the given precision ("%.Ng"). */
std::string format_real(double value, int digits);

/** Canonical JSON report of a single run: fixed field order, deterministic
 *  bytes for identical inputs. */
std::string emit_json(const ScenarioResult& result, int digits);

/** Canonical JSON report of a sweep: shared header plus one summary record
 *  per grid point, in grid order. */
std::string emit_json_sweep(const std::vector<ScenarioResult>& results,
                            int digits);

/** CSV with a fixed column set; one row per result, header always present.
 *  Columns not applicable to a protocol are left blank. */
std::string emit_csv(const std::vector<ScenarioResult>& results, int digits);

/** Outcome of a full run: the rendered report plus the process exit code
 *  (0 success, 1 usage/parameter error, 2 when a channel protocol fails its
 *  definition check — the report is still rendered in that case). */
struct RunOutcome {
  int exit_code = 0;
  std::string report;
  std::string diagnostics;
};

RunOutcome run(const ScenarioConfig& config);

}  // namespace cvc

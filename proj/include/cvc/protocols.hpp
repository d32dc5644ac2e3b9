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

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "cvc/elements.hpp"
#include "cvc/fma_qnd.hpp"
#include "cvc/quad_algebra.hpp"

namespace cvc {

enum class Protocol {
  QndChannel,      // single QND copy onto a squeezed ancilla
  Ccaecc,          // entanglement-assisted channel from a three-mode resource
  Superdense,      // two conjugate channels through one entangled pair
  ReductionCheck,  // superdense driven by classically encoded inputs
  Teleportation,   // channel composition that teleports an unknown mode
};

const char* protocol_name(Protocol protocol);
std::optional<Protocol> protocol_from_name(std::string_view name);

enum class BackendKind : std::uint8_t { Ideal, Fma };

const char* backend_name(BackendKind kind);

/** Which QND realization a scenario should instantiate. */
struct QndBackend {
  BackendKind kind = BackendKind::Ideal;
  std::optional<FmaParams> fma;  // engaged when kind == Fma

  static QndBackend ideal() { return QndBackend{}; }
  static QndBackend with_fma(const FmaParams& params) {
    return QndBackend{BackendKind::Fma, params};
  }
};

/** Flat parameter set shared by all scenarios (the CLI surface). Fields not
 *  used by a protocol are ignored by it. */
struct ScenarioParams {
  Protocol protocol = Protocol::QndChannel;
  BackendKind backend = BackendKind::Ideal;
  double r = 1.0;         // channel/resource squeezing strength
  double eta = 1.0;       // detector efficiency (homodyne or FMA box)
  double pair_r = 1.0;    // squeezing of entangled pair resources
  std::optional<double> fma_r;  // FMA offline squeezing; defaults to the
                                // protocol's resource squeezing
  double encode_r = 2.0;  // squeezing of classically encoded inputs
  double encode_x = 0.0;  // encoded/teleported displacement, x̂ component
  double encode_p = 0.0;  // encoded/teleported displacement, p̂ component
};

/** Assigns a numeric field by config key (r, eta, pair_r, fma_r, encode_r,
 *  encode_x, encode_p); throws UsageError for unknown keys. */
void set_scenario_param(ScenarioParams& params, std::string_view key,
                        double value);

/** An input or output mode with its Heisenberg-picture quadratures. */
struct OutputMode {
  std::string role;
  ModeQuads quads;
};

/** One reported second moment (or derived figure), carried in both views:
 *  `symbolic` from the quadrature algebra, `oracle` from the Gaussian moment
 *  engine when an independent numeric route exists. */
struct NamedMoment {
  std::string name;
  double symbolic;
  std::optional<double> oracle;
};

/** Everything a scenario run certifies and reports. */
struct ScenarioResult {
  Protocol protocol;
  BackendKind backend;
  std::vector<std::pair<std::string, double>> params;  // reported in order

  SourceRegistry registry;
  std::vector<OutputMode> inputs;        // pre-circuit snapshots
  std::vector<SourceId> input_sources;
  std::vector<OutputMode> outputs;

  std::vector<NamedMoment> moments;

  std::optional<double> epsilon;           // certified noise ceiling
  std::optional<double> epsilon_measured;  // worst measured residual moment
  std::optional<double> delta;             // pair correlation figure 2e^{-2r}
  std::optional<double> fidelity;          // teleportation fidelity
  std::optional<double> fidelity_bound;    // certified fidelity floor (FMA)

  double engine_agreement = 0.0;      // max |symbolic − oracle| over moments
  double max_commutator_error = 0.0;  // worst canonical-commutator deviation

  const OutputMode& find_output(std::string_view role) const;
  const OutputMode& find_input(std::string_view role) const;
  /** Symbolic value of a named moment; UsageError when absent. */
  double moment_value(std::string_view name) const;
};

/** Single QND interaction copying x̂ of the input onto an x̂-squeezed ancilla
 *  (strength r). Outputs A_prime (retained) and B_prime (copy). */
ScenarioResult qnd_coherent_channel(double r, const QndBackend& backend);

/** Entanglement-assisted channel: a three-mode resource of squeezing r, one
 *  balanced beamsplitter and two homodyne detectors of efficiency η with
 *  classical feedforward. Outputs A_prime and B_prime; uses no QND stage. */
ScenarioResult ccaecc(double r, double eta);

/** Two conjugate channels through one two-mode squeezed pair: a momentum
 *  channel from input 1 to output 3 and a position channel from input 2 to
 *  output 4. Outputs out1..out4. */
ScenarioResult coherent_superdense(double pair_r, const QndBackend& backend);

/** Superdense circuit driven by classically encoded squeezed inputs: a p̂
 *  displacement arrives on output 3 and an x̂ displacement on output 4, each
 *  with variance e^{-2·encode_r} + 2e^{-2·pair_r}. */
ScenarioResult incoherent_reduction_check(double encode_p, double encode_x,
                                          double encode_r, double pair_r,
                                          const QndBackend& backend);

/** Teleportation of an unknown (displaced vacuum) input through two squeezed
 *  pairs; the teleported mode emerges on output 3. Outputs out1..out5. */
ScenarioResult coherent_teleportation(double pair_r, const QndBackend& backend,
                                      double in_x = 0.0, double in_p = 0.0);

/** Dispatch on params.protocol/backend with defaulting of fma_r. */
ScenarioResult run_scenario(const ScenarioParams& params);

}  // namespace cvc

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

#include "cvc/protocols.hpp"
#include "cvc/quad_algebra.hpp"

namespace cvc {

/** Quality class of a channel/teleportation figure relative to the two
 *  classical thresholds. */
enum class ThresholdClass : std::uint8_t { None, BeatsOneHalf, BeatsTwoThirds };

/** ε < 1/2 → BeatsTwoThirds, ε < 1 → BeatsOneHalf, otherwise None.
 *  An ε-approximate channel yields teleportation fidelity above 1/2
 *  (resp. 2/3) exactly in these regimes. */
ThresholdClass epsilon_threshold_class(double epsilon);

/** F > 2/3 → BeatsTwoThirds, F > 1/2 → BeatsOneHalf, otherwise None. */
ThresholdClass fidelity_threshold_class(double fidelity);

/** "none" / "beats_1/2" / "beats_2/3". */
const char* epsilon_threshold_label(ThresholdClass cls);
/** "below_classical" / "beats_1/2" / "beats_2/3". */
const char* fidelity_threshold_label(ThresholdClass cls);

/** Teleportation fidelity of a displaced-vacuum input from the teleported
 *  mode's output spreads (full variances, vacuum = 1):
 *  F = 2/√((Δx + 1)(Δp + 1)); strictly decreasing in each spread and equal
 *  to 1 exactly when both spreads are at the vacuum level. */
struct FidelityReport {
  double delta_x;
  double delta_p;
  double fidelity;
  ThresholdClass threshold;
};
FidelityReport teleport_fidelity(double delta_x_moment, double delta_p_moment);

/** Two-mode entanglement witness on correlation moments: the pair is
 *  entangled when both ⟨(x̂_a + s_x·x̂_b)²⟩ and ⟨(p̂_a + s_p·p̂_b)²⟩ fall
 *  below the vacuum level 1 (signs s_x, s_p ∈ {−1, +1}). */
struct EntanglementReport {
  double x_moment;
  double p_moment;
  double total;  // sum of the two
  bool entangled;
};
EntanglementReport duan_check(const QuadExpr& xa, const QuadExpr& pa,
                              const QuadExpr& xb, const QuadExpr& pb,
                              int x_sign, int p_sign,
                              const SourceRegistry& registry);

/** Outcome of checking one claimed coherent channel of a scenario against
 *  the defining conditions: the copied quadrature arrives with unit gain and
 *  residual moment ≤ ε, the conjugate back-action combination has moment
 *  ≤ ε, both deviations are zero-mean, the retained mode still carries the
 *  input quadrature with unit gain plus input-independent noise, and the two
 *  output modes stay canonical. */
struct ChannelReport {
  std::string input_role;
  std::string retained_role;
  std::string copy_role;
  Axis copy_axis;

  double residual_copy;        // ⟨(q_copy − q_in)²⟩
  double residual_backaction;  // ⟨(q̄_ret − q̄_in + q̄_copy)²⟩
  double epsilon;              // max of the two residual moments
  double retained_deviation;   // ⟨(q_ret − q_in)²⟩
  double input_leakage;        // largest input coefficient left in either
                               // deviation (0 up to rounding for a channel)

  bool copy_gain_unit;      // copy deviation carries no input operator terms
  bool identity_retention;  // retained deviation is zero-mean pure noise
  bool identity_exact;      // retained quadrature is termwise the input
  bool mean_conditions_ok;  // both deviations have zero offset

  double max_commutator_error;
  bool commutators_canonical;

  bool definition_satisfied;
  ThresholdClass threshold;
};

/** Verifies one channel inside a scenario result. copy_axis = X means x̂ is
 *  copied from the input to the copy output; copy_axis = P swaps the roles
 *  of the quadratures throughout. */
ChannelReport verify_coherent_channel(const ScenarioResult& result,
                                      std::string_view input_role,
                                      std::string_view retained_role,
                                      std::string_view copy_role,
                                      Axis copy_axis);

/** All channels a protocol claims: one for the single-channel protocols, two
 *  conjugate ones for the superdense family, none for teleportation. */
std::vector<ChannelReport> verify_scenario_channels(const ScenarioResult& result);

/** One sweep dimension: a parameter key with its explicit grid values. */
struct SweepAxis {
  std::string key;
  std::vector<double> values;
};

/** Cartesian sweep over the axes (first axis slowest), returning one result
 *  per grid point in deterministic row-major order. With no axes, runs the
 *  base point once. */
std::vector<ScenarioResult> sweep(const ScenarioParams& base,
                                  const std::vector<SweepAxis>& axes);

}  // namespace cvc

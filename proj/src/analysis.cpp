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

#include "cvc/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace cvc {

namespace {

constexpr double kMeanTol = 1e-12;
constexpr double kCommutatorTol = 1e-12;
constexpr double kCoefficientTol = 1e-12;

}  // namespace

ThresholdClass epsilon_threshold_class(double epsilon) {
  if (!(epsilon >= 0.0)) {
    throw ParameterError("epsilon must be nonnegative, got " +
                         std::to_string(epsilon));
  }
  if (epsilon < 0.5) return ThresholdClass::BeatsTwoThirds;
  if (epsilon < 1.0) return ThresholdClass::BeatsOneHalf;
  return ThresholdClass::None;
}

ThresholdClass fidelity_threshold_class(double fidelity) {
  if (!(fidelity >= 0.0) || fidelity > 1.0) {
    throw ParameterError("fidelity must lie in [0, 1], got " +
                         std::to_string(fidelity));
  }
  if (fidelity > 2.0 / 3.0) return ThresholdClass::BeatsTwoThirds;
  if (fidelity > 0.5) return ThresholdClass::BeatsOneHalf;
  return ThresholdClass::None;
}

const char* epsilon_threshold_label(ThresholdClass cls) {
  switch (cls) {
    case ThresholdClass::None:
      return "none";
    case ThresholdClass::BeatsOneHalf:
      return "beats_1/2";
    case ThresholdClass::BeatsTwoThirds:
      return "beats_2/3";
  }
  return "none";
}

const char* fidelity_threshold_label(ThresholdClass cls) {
  switch (cls) {
    case ThresholdClass::None:
      return "below_classical";
    case ThresholdClass::BeatsOneHalf:
      return "beats_1/2";
    case ThresholdClass::BeatsTwoThirds:
      return "beats_2/3";
  }
  return "below_classical";
}

FidelityReport teleport_fidelity(double delta_x_moment, double delta_p_moment) {
  if (!(delta_x_moment >= 0.0) || !(delta_p_moment >= 0.0)) {
    throw ParameterError("teleported-mode spreads must be nonnegative");
  }
  const double fidelity =
      2.0 / std::sqrt((delta_x_moment + 1.0) * (delta_p_moment + 1.0));
  return FidelityReport{delta_x_moment, delta_p_moment, fidelity,
                        fidelity_threshold_class(fidelity)};
}

EntanglementReport duan_check(const QuadExpr& xa, const QuadExpr& pa,
                              const QuadExpr& xb, const QuadExpr& pb,
                              int x_sign, int p_sign,
                              const SourceRegistry& registry) {
  if ((x_sign != 1 && x_sign != -1) || (p_sign != 1 && p_sign != -1)) {
    throw UsageError("duan_check signs must be +1 or -1");
  }
  const double x_moment =
      second_moment(xa + static_cast<double>(x_sign) * xb, registry);
  const double p_moment =
      second_moment(pa + static_cast<double>(p_sign) * pb, registry);
  return EntanglementReport{x_moment, p_moment, x_moment + p_moment,
                            x_moment < 1.0 && p_moment < 1.0};
}

ChannelReport verify_coherent_channel(const ScenarioResult& result,
                                      std::string_view input_role,
                                      std::string_view retained_role,
                                      std::string_view copy_role,
                                      Axis copy_axis) {
  const OutputMode& in = result.find_input(input_role);
  const OutputMode& ret = result.find_output(retained_role);
  const OutputMode& cpy = result.find_output(copy_role);

  const bool copy_x = copy_axis == Axis::X;
  const QuadExpr& in_c = copy_x ? in.quads.x : in.quads.p;   // copied axis
  const QuadExpr& in_j = copy_x ? in.quads.p : in.quads.x;   // conjugate axis
  const QuadExpr& ret_c = copy_x ? ret.quads.x : ret.quads.p;
  const QuadExpr& ret_j = copy_x ? ret.quads.p : ret.quads.x;
  const QuadExpr& cpy_c = copy_x ? cpy.quads.x : cpy.quads.p;
  const QuadExpr& cpy_j = copy_x ? cpy.quads.p : cpy.quads.x;

  const QuadExpr copy_err = cpy_c - in_c;
  const QuadExpr back_err = ret_j - in_j + cpy_j;
  const QuadExpr retain_err = ret_c - in_c;

  // Coefficients assembled from irrational element parameters cancel only up
  // to rounding, so "no input term" means "below the symbolic tolerance".
  const auto input_leak = [&result](const QuadExpr& e) {
    double worst = 0.0;
    for (const SourceId source : result.input_sources) {
      worst = std::max(worst, std::abs(e.coefficient(source, Axis::X)));
      worst = std::max(worst, std::abs(e.coefficient(source, Axis::P)));
    }
    return worst;
  };

  ChannelReport report;
  report.input_role = std::string(input_role);
  report.retained_role = std::string(retained_role);
  report.copy_role = std::string(copy_role);
  report.copy_axis = copy_axis;

  report.residual_copy = second_moment(copy_err, result.registry);
  report.residual_backaction = second_moment(back_err, result.registry);
  report.epsilon = std::max(report.residual_copy, report.residual_backaction);
  report.retained_deviation = second_moment(retain_err, result.registry);

  report.input_leakage =
      std::max({input_leak(copy_err), input_leak(retain_err),
                input_leak(back_err)});
  report.copy_gain_unit = input_leak(copy_err) <= kCoefficientTol;
  report.identity_retention =
      input_leak(retain_err) <= kCoefficientTol &&
      std::abs(retain_err.offset()) <= kMeanTol;
  report.identity_exact = retain_err.is_zero();
  report.mean_conditions_ok = std::abs(copy_err.offset()) <= kMeanTol &&
                              std::abs(back_err.offset()) <= kMeanTol;

  double worst = 0.0;
  const ModeQuads* pair[2] = {&ret.quads, &cpy.quads};
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      const double expected = i == j ? 1.0 : 0.0;
      worst = std::max(
          worst, std::abs(commutator_im(pair[i]->x, pair[j]->p) - expected));
      worst = std::max(worst, std::abs(commutator_im(pair[i]->x, pair[j]->x)));
      worst = std::max(worst, std::abs(commutator_im(pair[i]->p, pair[j]->p)));
    }
  }
  report.max_commutator_error = worst;
  report.commutators_canonical = worst <= kCommutatorTol;

  report.definition_satisfied = report.copy_gain_unit &&
                                report.identity_retention &&
                                report.mean_conditions_ok &&
                                report.commutators_canonical &&
                                report.input_leakage <= kCoefficientTol;
  report.threshold = epsilon_threshold_class(report.epsilon);
  return report;
}

std::vector<ChannelReport> verify_scenario_channels(const ScenarioResult& result) {
  switch (result.protocol) {
    case Protocol::QndChannel:
    case Protocol::Ccaecc:
      return {verify_coherent_channel(result, "in_A", "A_prime", "B_prime",
                                      Axis::X)};
    case Protocol::Superdense:
    case Protocol::ReductionCheck:
      return {
          verify_coherent_channel(result, "in_1", "out1", "out3", Axis::P),
          verify_coherent_channel(result, "in_2", "out2", "out4", Axis::X),
      };
    case Protocol::Teleportation:
      return {};
  }
  return {};
}

std::vector<ScenarioResult> sweep(const ScenarioParams& base,
                                  const std::vector<SweepAxis>& axes) {
  for (const SweepAxis& axis : axes) {
    if (axis.values.empty()) {
      throw UsageError("sweep axis '" + axis.key + "' has no values");
    }
    // Reject unknown keys before running anything.
    ScenarioParams probe = base;
    set_scenario_param(probe, axis.key, axis.values.front());
  }

  std::vector<ScenarioResult> results;
  std::vector<std::size_t> index(axes.size(), 0);
  while (true) {
    ScenarioParams point = base;
    for (std::size_t k = 0; k < axes.size(); ++k) {
      set_scenario_param(point, axes[k].key, axes[k].values[index[k]]);
    }
    results.push_back(run_scenario(point));

    // Advance the odometer, last axis fastest.
    std::size_t k = axes.size();
    while (k > 0) {
      --k;
      if (++index[k] < axes[k].values.size()) break;
      index[k] = 0;
      if (k == 0) return results;
    }
    if (axes.empty()) return results;
  }
}

}  // namespace cvc

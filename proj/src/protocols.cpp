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

#include "cvc/protocols.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace cvc {

namespace {

// Input variances of the primary run and of the oracle reference run used
// for gain extraction by input-variance differencing.
constexpr double kPrimaryVx = 1.0;
constexpr double kPrimaryVp = 1.0;
constexpr double kReferenceVx = 4.0;
constexpr double kReferenceVp = 0.5;

void check_nonnegative(double value, const char* what) {
  if (!(value >= 0.0)) {
    throw ParameterError(std::string(what) + " must be nonnegative, got " +
                         std::to_string(value));
  }
}

void apply_qnd(CircuitState& cs, int signal, int target, Axis copy_axis,
               const QndBackend& backend, int& box_counter) {
  if (backend.kind == BackendKind::Ideal) {
    cs.apply_ideal_qnd(signal, target, 1.0, copy_axis);
  } else {
    apply_fma_qnd(cs, signal, target, *backend.fma, copy_axis,
                  "fma" + std::to_string(++box_counter));
  }
}

double worst_commutator_error(const std::vector<OutputMode>& outputs) {
  double worst = 0.0;
  for (std::size_t i = 0; i < outputs.size(); ++i) {
    for (std::size_t j = 0; j < outputs.size(); ++j) {
      const double expected = i == j ? 1.0 : 0.0;
      worst = std::max(worst, std::abs(commutator_im(outputs[i].quads.x,
                                                     outputs[j].quads.p) -
                                       expected));
      worst = std::max(worst, std::abs(commutator_im(outputs[i].quads.x,
                                                     outputs[j].quads.x)));
      worst = std::max(worst, std::abs(commutator_im(outputs[i].quads.p,
                                                     outputs[j].quads.p)));
    }
  }
  return worst;
}

// Oracle-side estimate of an input-referenced residual: running the same
// circuit at two input variances v1 ≠ v2 identifies the (squared) input gain
// of a linear form, after which the input's share of the variance can be
// subtracted. For a form q = g·q_in + noise:
//   Var(q) = g²·v_in + ⟨noise²⟩.
struct ResidualEstimate {
  double gain_sq;
  double residual;
};

ResidualEstimate oracle_residual(const GaussianState& primary,
                                 const GaussianState& reference,
                                 const std::vector<LinearFormTerm>& form,
                                 double v1, double v2) {
  const double m1 = moment_of(primary, form);
  const double m2 = moment_of(reference, form);
  const double gain_sq = (m2 - m1) / (v2 - v1);
  return ResidualEstimate{gain_sq, m1 - gain_sq * v1};
}

void push_moment(ScenarioResult& res, std::string name, double symbolic,
                 std::optional<double> oracle) {
  if (oracle.has_value()) {
    res.engine_agreement =
        std::max(res.engine_agreement, std::abs(symbolic - *oracle));
  }
  res.moments.push_back(NamedMoment{std::move(name), symbolic, oracle});
}

// Per-quadrature variances of every output, in both views.
void push_output_variances(ScenarioResult& res, const CircuitState& cs,
                           const std::vector<int>& live_modes) {
  for (std::size_t k = 0; k < res.outputs.size(); ++k) {
    const OutputMode& out = res.outputs[k];
    for (Axis axis : {Axis::X, Axis::P}) {
      const QuadExpr& q = axis == Axis::X ? out.quads.x : out.quads.p;
      push_moment(res, std::string("var_") + axis_name(axis) + "_" + out.role,
                  second_moment(q, cs.registry()),
                  moment_of(cs.oracle(), {{live_modes[k], axis, 1.0}}));
    }
  }
}

ModeQuads input_snapshot(SourceId source, double x_mean = 0.0,
                         double p_mean = 0.0) {
  ModeQuads quads;
  quads.x = QuadExpr::variable(source, Axis::X);
  quads.x.set_offset(x_mean);
  quads.p = QuadExpr::variable(source, Axis::P);
  quads.p.set_offset(p_mean);
  return quads;
}

void append_fma_params(ScenarioResult& res, const QndBackend& backend) {
  if (backend.kind == BackendKind::Fma) {
    res.params.emplace_back("eta", backend.fma->eta());
    res.params.emplace_back("fma_r", backend.fma->r());
  }
}

// The common superdense stage on four live modes: a position channel from
// mode2 to mode4 and a momentum channel from mode1 to mode3, consuming the
// entanglement of the (mode3, mode4) pair.
void superdense_core(CircuitState& cs, int m1, int m2, int m3, int m4,
                     const QndBackend& backend, int& box_counter) {
  constexpr double pi = std::numbers::pi;
  apply_qnd(cs, m2, m3, Axis::X, backend, box_counter);
  cs.apply_swap(m1, m2);
  apply_qnd(cs, m2, m3, Axis::P, backend, box_counter);
  cs.apply_swap(m1, m2);
  cs.apply_phase(m3, pi);
  apply_qnd(cs, m3, m4, Axis::X, backend, box_counter);
  cs.apply_phase(m3, pi);
  cs.apply_phase(m4, pi);
}

}  // namespace

const char* protocol_name(Protocol protocol) {
  switch (protocol) {
    case Protocol::QndChannel:
      return "qnd_channel";
    case Protocol::Ccaecc:
      return "ccaecc";
    case Protocol::Superdense:
      return "superdense";
    case Protocol::ReductionCheck:
      return "reduction_check";
    case Protocol::Teleportation:
      return "teleportation";
  }
  return "unknown";
}

std::optional<Protocol> protocol_from_name(std::string_view name) {
  for (Protocol p : {Protocol::QndChannel, Protocol::Ccaecc,
                     Protocol::Superdense, Protocol::ReductionCheck,
                     Protocol::Teleportation}) {
    if (name == protocol_name(p)) return p;
  }
  return std::nullopt;
}

const char* backend_name(BackendKind kind) {
  return kind == BackendKind::Ideal ? "ideal" : "fma";
}

void set_scenario_param(ScenarioParams& params, std::string_view key,
                        double value) {
  if (key == "r") {
    params.r = value;
  } else if (key == "eta") {
    params.eta = value;
  } else if (key == "pair_r") {
    params.pair_r = value;
  } else if (key == "fma_r") {
    params.fma_r = value;
  } else if (key == "encode_r") {
    params.encode_r = value;
  } else if (key == "encode_x") {
    params.encode_x = value;
  } else if (key == "encode_p") {
    params.encode_p = value;
  } else {
    throw UsageError("unknown parameter key '" + std::string(key) + "'");
  }
}

const OutputMode& ScenarioResult::find_output(std::string_view role) const {
  for (const OutputMode& out : outputs) {
    if (out.role == role) return out;
  }
  throw UsageError("no output with role '" + std::string(role) + "'");
}

const OutputMode& ScenarioResult::find_input(std::string_view role) const {
  for (const OutputMode& in : inputs) {
    if (in.role == role) return in;
  }
  throw UsageError("no input with role '" + std::string(role) + "'");
}

double ScenarioResult::moment_value(std::string_view name) const {
  for (const NamedMoment& m : moments) {
    if (m.name == name) return m.symbolic;
  }
  throw UsageError("no moment named '" + std::string(name) + "'");
}

ScenarioResult qnd_coherent_channel(double r, const QndBackend& backend) {
  check_nonnegative(r, "channel squeezing");

  struct Build {
    CircuitState cs;
    SourceId in;
    int a = 0, b = 1;
  };
  auto build = [&](double vx, double vp) {
    Build bd;
    const auto in = bd.cs.add_source_mode(SourceKind::input_signal(vx, vp), "in_A");
    const auto anc = bd.cs.add_source_mode(SourceKind::vacuum(), "anc_B");
    bd.cs.apply_squeezer(anc.mode, r, Axis::X);
    int boxes = 0;
    apply_qnd(bd.cs, in.mode, anc.mode, Axis::X, backend, boxes);
    bd.in = in.source;
    return bd;
  };
  const Build run = build(kPrimaryVx, kPrimaryVp);
  const Build ref = build(kReferenceVx, kReferenceVp);

  ScenarioResult res;
  res.protocol = Protocol::QndChannel;
  res.backend = backend.kind;
  res.params = {{"r", r}};
  append_fma_params(res, backend);
  res.registry = run.cs.registry();
  res.inputs = {{"in_A", input_snapshot(run.in)}};
  res.input_sources = {run.in};
  res.outputs = {{"A_prime", run.cs.mode(run.a)}, {"B_prime", run.cs.mode(run.b)}};

  const ModeQuads& a_out = res.outputs[0].quads;
  const ModeQuads& b_out = res.outputs[1].quads;
  const QuadExpr& in_x = res.inputs[0].quads.x;
  const QuadExpr& in_p = res.inputs[0].quads.p;

  push_output_variances(res, run.cs, {run.a, run.b});

  // Copy fidelity of x̂ and back-action on p̂, with the input's share removed
  // on the oracle side by variance differencing.
  const QuadExpr copy_err = b_out.x - in_x;
  const QuadExpr back_err = a_out.p + b_out.p - in_p;
  const QuadExpr retain_err = a_out.x - in_x;
  const auto copy_est =
      oracle_residual(run.cs.oracle(), ref.cs.oracle(), {{run.b, Axis::X, 1.0}},
                      kPrimaryVx, kReferenceVx);
  const auto back_est = oracle_residual(
      run.cs.oracle(), ref.cs.oracle(),
      {{run.a, Axis::P, 1.0}, {run.b, Axis::P, 1.0}}, kPrimaryVp, kReferenceVp);
  const auto retain_est =
      oracle_residual(run.cs.oracle(), ref.cs.oracle(), {{run.a, Axis::X, 1.0}},
                      kPrimaryVx, kReferenceVx);

  const double copy_m = second_moment(copy_err, res.registry);
  const double back_m = second_moment(back_err, res.registry);
  push_moment(res, "residual_copy", copy_m, copy_est.residual);
  push_moment(res, "residual_backaction", back_m, back_est.residual);
  push_moment(res, "retained_deviation",
              second_moment(retain_err, res.registry), retain_est.residual);

  const double copy_gain = b_out.x.coefficient(run.in, Axis::X);
  const double back_gain = (a_out.p + b_out.p).coefficient(run.in, Axis::P);
  push_moment(res, "copy_gain_sq", copy_gain * copy_gain, copy_est.gain_sq);
  push_moment(res, "back_gain_sq", back_gain * back_gain, back_est.gain_sq);

  res.epsilon_measured = std::max(copy_m, back_m);
  res.epsilon = backend.kind == BackendKind::Ideal
                    ? std::exp(-2.0 * r)
                    : backend.fma->eta_f() + std::exp(-2.0 * r);
  res.max_commutator_error = worst_commutator_error(res.outputs);
  return res;
}

ScenarioResult ccaecc(double r, double eta) {
  check_nonnegative(r, "resource squeezing");
  if (!(eta > 0.0) || eta > 1.0) {
    throw ParameterError("detector efficiency must lie in (0, 1], got " +
                         std::to_string(eta));
  }

  struct Build {
    CircuitState cs;
    SourceId in;
    int a2 = 0, b = 1;  // final live indices
  };
  const double root2 = std::numbers::sqrt2;
  auto build = [&](double vx, double vp) {
    Build bd;
    const auto in = bd.cs.add_source_mode(SourceKind::input_signal(vx, vp), "in_A");
    const auto [a1, a2, b] = bd.cs.add_ghz_triple(r, "ghz");  // modes 1, 2, 3
    // Mix the input with resource mode A1; the a1 slot carries the (+)
    // combination and the input slot the (−) combination.
    bd.cs.apply_beamsplitter(a1, in.mode, 0.5);
    // x̂ homodyne on the (−) slot feeds both remote modes.
    bd.cs.apply_homodyne_feedforward(in.mode, Axis::X, eta,
                                     {{a2, Axis::X, root2}, {b, Axis::X, root2}},
                                     "hom_x_vac");
    // Indices after the removal: a1 → 0, a2 → 1, b → 2.
    bd.cs.apply_homodyne_feedforward(0, Axis::P, eta, {{1, Axis::P, root2}},
                                     "hom_p_vac");
    // Remaining live modes: a2 → 0, b → 1.
    bd.in = in.source;
    return bd;
  };
  const Build run = build(kPrimaryVx, kPrimaryVp);
  const Build ref = build(kReferenceVx, kReferenceVp);

  ScenarioResult res;
  res.protocol = Protocol::Ccaecc;
  res.backend = BackendKind::Ideal;  // the protocol has no QND stage
  res.params = {{"r", r}, {"eta", eta}};
  res.registry = run.cs.registry();
  res.inputs = {{"in_A", input_snapshot(run.in)}};
  res.input_sources = {run.in};
  res.outputs = {{"A_prime", run.cs.mode(run.a2)}, {"B_prime", run.cs.mode(run.b)}};

  const ModeQuads& a_out = res.outputs[0].quads;
  const ModeQuads& b_out = res.outputs[1].quads;
  const QuadExpr& in_x = res.inputs[0].quads.x;
  const QuadExpr& in_p = res.inputs[0].quads.p;

  push_output_variances(res, run.cs, {run.a2, run.b});

  // Published correlation of the two outputs (input content cancels, so the
  // oracle value is a direct covariance read).
  push_moment(res, "corr_x_diff", second_moment(a_out.x - b_out.x, res.registry),
              moment_of(run.cs.oracle(),
                        {{run.a2, Axis::X, 1.0}, {run.b, Axis::X, -1.0}}));

  const QuadExpr copy_err = b_out.x - in_x;
  const QuadExpr back_err = a_out.p + b_out.p - in_p;
  const QuadExpr retain_err = a_out.x - in_x;
  const auto copy_est =
      oracle_residual(run.cs.oracle(), ref.cs.oracle(), {{run.b, Axis::X, 1.0}},
                      kPrimaryVx, kReferenceVx);
  const auto back_est = oracle_residual(
      run.cs.oracle(), ref.cs.oracle(),
      {{run.a2, Axis::P, 1.0}, {run.b, Axis::P, 1.0}}, kPrimaryVp, kReferenceVp);
  const auto retain_est =
      oracle_residual(run.cs.oracle(), ref.cs.oracle(), {{run.a2, Axis::X, 1.0}},
                      kPrimaryVx, kReferenceVx);

  const double copy_m = second_moment(copy_err, res.registry);
  const double back_m = second_moment(back_err, res.registry);
  push_moment(res, "residual_copy", copy_m, copy_est.residual);
  push_moment(res, "residual_backaction", back_m, back_est.residual);
  push_moment(res, "retained_deviation",
              second_moment(retain_err, res.registry), retain_est.residual);

  const double copy_gain = b_out.x.coefficient(run.in, Axis::X);
  const double back_gain = (a_out.p + b_out.p).coefficient(run.in, Axis::P);
  push_moment(res, "copy_gain_sq", copy_gain * copy_gain, copy_est.gain_sq);
  push_moment(res, "back_gain_sq", back_gain * back_gain, back_est.gain_sq);

  res.epsilon_measured = std::max(copy_m, back_m);
  res.epsilon = 3.0 * std::exp(-2.0 * r) + 2.0 * (1.0 - eta) / eta;
  res.max_commutator_error = worst_commutator_error(res.outputs);
  return res;
}

ScenarioResult coherent_superdense(double pair_r, const QndBackend& backend) {
  check_nonnegative(pair_r, "pair squeezing");

  struct Build {
    CircuitState cs;
    SourceId in1, in2;
    EprReport pair;
  };
  auto build = [&](double vx, double vp) {
    Build bd;
    const auto in1 = bd.cs.add_source_mode(SourceKind::input_signal(vx, vp), "in_1");
    const auto in2 = bd.cs.add_source_mode(SourceKind::input_signal(vx, vp), "in_2");
    bd.cs.add_epr_pair(pair_r, "pair", &bd.pair);  // modes 2, 3
    int boxes = 0;
    superdense_core(bd.cs, in1.mode, in2.mode, 2, 3, backend, boxes);
    bd.in1 = in1.source;
    bd.in2 = in2.source;
    return bd;
  };
  const Build run = build(kPrimaryVx, kPrimaryVp);
  const Build ref = build(kReferenceVx, kReferenceVp);

  ScenarioResult res;
  res.protocol = Protocol::Superdense;
  res.backend = backend.kind;
  res.params = {{"pair_r", pair_r}};
  append_fma_params(res, backend);
  res.registry = run.cs.registry();
  res.inputs = {{"in_1", input_snapshot(run.in1)}, {"in_2", input_snapshot(run.in2)}};
  res.input_sources = {run.in1, run.in2};
  res.outputs = {{"out1", run.cs.mode(0)},
                 {"out2", run.cs.mode(1)},
                 {"out3", run.cs.mode(2)},
                 {"out4", run.cs.mode(3)}};

  push_output_variances(res, run.cs, {0, 1, 2, 3});

  const QuadExpr& in1_x = res.inputs[0].quads.x;
  const QuadExpr& in1_p = res.inputs[0].quads.p;
  const QuadExpr& in2_x = res.inputs[1].quads.x;
  const QuadExpr& in2_p = res.inputs[1].quads.p;
  const ModeQuads& out1 = res.outputs[0].quads;
  const ModeQuads& out2 = res.outputs[1].quads;
  const ModeQuads& out3 = res.outputs[2].quads;
  const ModeQuads& out4 = res.outputs[3].quads;

  // Momentum channel in_1 → out3: p̂ is copied, the conjugate condition
  // pairs the retained mode out1 with the copy.
  const QuadExpr copy_p = out3.p - in1_p;
  const QuadExpr back_p = out1.x - in1_x + out3.x;
  const auto copy_p_est =
      oracle_residual(run.cs.oracle(), ref.cs.oracle(), {{2, Axis::P, 1.0}},
                      kPrimaryVp, kReferenceVp);
  const auto back_p_est = oracle_residual(
      run.cs.oracle(), ref.cs.oracle(),
      {{0, Axis::X, 1.0}, {2, Axis::X, 1.0}}, kPrimaryVx, kReferenceVx);

  // Position channel in_2 → out4.
  const QuadExpr copy_x = out4.x - in2_x;
  const QuadExpr back_x = out2.p - in2_p + out4.p;
  const auto copy_x_est =
      oracle_residual(run.cs.oracle(), ref.cs.oracle(), {{3, Axis::X, 1.0}},
                      kPrimaryVx, kReferenceVx);
  const auto back_x_est = oracle_residual(
      run.cs.oracle(), ref.cs.oracle(),
      {{1, Axis::P, 1.0}, {3, Axis::P, 1.0}}, kPrimaryVp, kReferenceVp);

  const double copy_p_m = second_moment(copy_p, res.registry);
  const double back_p_m = second_moment(back_p, res.registry);
  const double copy_x_m = second_moment(copy_x, res.registry);
  const double back_x_m = second_moment(back_x, res.registry);
  push_moment(res, "residual_copy_p", copy_p_m, copy_p_est.residual);
  push_moment(res, "residual_back_p", back_p_m, back_p_est.residual);
  push_moment(res, "residual_copy_x", copy_x_m, copy_x_est.residual);
  push_moment(res, "residual_back_x", back_x_m, back_x_est.residual);

  const double gain_copy_p = out3.p.coefficient(run.in1, Axis::P);
  const double gain_back_p = (out1.x + out3.x).coefficient(run.in1, Axis::X);
  const double gain_copy_x = out4.x.coefficient(run.in2, Axis::X);
  const double gain_back_x = (out2.p + out4.p).coefficient(run.in2, Axis::P);
  push_moment(res, "copy_gain_sq_p", gain_copy_p * gain_copy_p, copy_p_est.gain_sq);
  push_moment(res, "back_gain_sq_p", gain_back_p * gain_back_p, back_p_est.gain_sq);
  push_moment(res, "copy_gain_sq_x", gain_copy_x * gain_copy_x, copy_x_est.gain_sq);
  push_moment(res, "back_gain_sq_x", gain_back_x * gain_back_x, back_x_est.gain_sq);

  const double eps_p = std::max(copy_p_m, back_p_m);
  const double eps_x = std::max(copy_x_m, back_x_m);
  push_moment(res, "epsilon_p_channel", eps_p, std::nullopt);
  push_moment(res, "epsilon_x_channel", eps_x, std::nullopt);

  res.delta = run.pair.delta;
  res.epsilon_measured = std::max(eps_p, eps_x);
  const double delta_closed = 2.0 * std::exp(-2.0 * pair_r);
  res.epsilon = backend.kind == BackendKind::Ideal
                    ? delta_closed
                    : delta_closed + 3.0 * backend.fma->eta_f();
  res.max_commutator_error = worst_commutator_error(res.outputs);
  return res;
}

ScenarioResult incoherent_reduction_check(double encode_p, double encode_x,
                                          double encode_r, double pair_r,
                                          const QndBackend& backend) {
  check_nonnegative(encode_r, "encoding squeezing");
  check_nonnegative(pair_r, "pair squeezing");

  CircuitState cs;
  const double tight = std::exp(-2.0 * encode_r);
  const double loose = std::exp(2.0 * encode_r);
  // Classical encoding: a p̂-squeezed carrier displaced in p̂ and an
  // x̂-squeezed carrier displaced in x̂.
  const auto in1 = cs.add_source_mode(SourceKind::input_signal(loose, tight),
                                      "in_1", 0.0, encode_p);
  const auto in2 = cs.add_source_mode(SourceKind::input_signal(tight, loose),
                                      "in_2", encode_x, 0.0);
  EprReport pair;
  cs.add_epr_pair(pair_r, "pair", &pair);  // modes 2, 3
  int boxes = 0;
  superdense_core(cs, in1.mode, in2.mode, 2, 3, backend, boxes);

  ScenarioResult res;
  res.protocol = Protocol::ReductionCheck;
  res.backend = backend.kind;
  res.params = {{"encode_p", encode_p},
                {"encode_x", encode_x},
                {"encode_r", encode_r},
                {"pair_r", pair_r}};
  append_fma_params(res, backend);
  res.registry = cs.registry();
  res.inputs = {{"in_1", input_snapshot(in1.source, 0.0, encode_p)},
                {"in_2", input_snapshot(in2.source, encode_x, 0.0)}};
  res.input_sources = {in1.source, in2.source};
  res.outputs = {{"out1", cs.mode(0)},
                 {"out2", cs.mode(1)},
                 {"out3", cs.mode(2)},
                 {"out4", cs.mode(3)}};

  push_output_variances(res, cs, {0, 1, 2, 3});
  push_moment(res, "mean_p_out3", res.outputs[2].quads.p.offset(),
              mean_of(cs.oracle(), {{2, Axis::P, 1.0}}));
  push_moment(res, "mean_x_out4", res.outputs[3].quads.x.offset(),
              mean_of(cs.oracle(), {{3, Axis::X, 1.0}}));

  res.delta = pair.delta;
  res.max_commutator_error = worst_commutator_error(res.outputs);
  return res;
}

ScenarioResult coherent_teleportation(double pair_r, const QndBackend& backend,
                                      double in_x, double in_p) {
  check_nonnegative(pair_r, "pair squeezing");

  CircuitState cs;
  const auto in = cs.add_source_mode(SourceKind::input_signal(1.0, 1.0), "in_1",
                                     in_x, in_p);
  EprReport pair1, pair2;
  cs.add_epr_pair(pair_r, "pair1", &pair1);  // modes 1, 2
  cs.add_epr_pair(pair_r, "pair2", &pair2);  // modes 3, 4
  int boxes = 0;
  cs.apply_phase(1, std::numbers::pi);
  apply_qnd(cs, in.mode, 1, Axis::X, backend, boxes);
  superdense_core(cs, in.mode, 1, 3, 4, backend, boxes);
  apply_qnd(cs, 4, 2, Axis::X, backend, boxes);
  apply_qnd(cs, 3, 2, Axis::P, backend, boxes);

  ScenarioResult res;
  res.protocol = Protocol::Teleportation;
  res.backend = backend.kind;
  res.params = {{"pair_r", pair_r}, {"encode_x", in_x}, {"encode_p", in_p}};
  append_fma_params(res, backend);
  res.registry = cs.registry();
  res.inputs = {{"in_1", input_snapshot(in.source, in_x, in_p)}};
  res.input_sources = {in.source};
  res.outputs = {{"out1", cs.mode(0)},
                 {"out2", cs.mode(1)},
                 {"out3", cs.mode(2)},
                 {"out4", cs.mode(3)},
                 {"out5", cs.mode(4)}};

  push_output_variances(res, cs, {0, 1, 2, 3, 4});

  const ModeQuads& out1 = res.outputs[0].quads;
  const ModeQuads& out2 = res.outputs[1].quads;
  const ModeQuads& out3 = res.outputs[2].quads;
  const ModeQuads& out4 = res.outputs[3].quads;
  const ModeQuads& out5 = res.outputs[4].quads;

  // Residual pair correlations diagnosing the consumed entanglement.
  push_moment(res, "corr_x_14", second_moment(out1.x + out4.x, res.registry),
              moment_of(cs.oracle(), {{0, Axis::X, 1.0}, {3, Axis::X, 1.0}}));
  push_moment(res, "corr_p_14", second_moment(out1.p - out4.p, res.registry),
              moment_of(cs.oracle(), {{0, Axis::P, 1.0}, {3, Axis::P, -1.0}}));
  push_moment(res, "corr_x_25", second_moment(out2.x - out5.x, res.registry),
              moment_of(cs.oracle(), {{1, Axis::X, 1.0}, {4, Axis::X, -1.0}}));
  push_moment(res, "corr_p_25", second_moment(out2.p + out5.p, res.registry),
              moment_of(cs.oracle(), {{1, Axis::P, 1.0}, {4, Axis::P, 1.0}}));

  push_moment(res, "mean_x_out3", out3.x.offset(),
              mean_of(cs.oracle(), {{2, Axis::X, 1.0}}));
  push_moment(res, "mean_p_out3", out3.p.offset(),
              mean_of(cs.oracle(), {{2, Axis::P, 1.0}}));

  // Teleported-mode spreads for a coherent input (unit input variances).
  const double delta_x = second_moment(out3.x, res.registry);
  const double delta_p = second_moment(out3.p, res.registry);
  res.fidelity = 2.0 / std::sqrt((delta_x + 1.0) * (delta_p + 1.0));

  res.delta = pair1.delta;
  const double delta_closed = 2.0 * std::exp(-2.0 * pair_r);
  if (backend.kind == BackendKind::Fma) {
    res.fidelity_bound = 1.0 / (1.0 + delta_closed + 6.0 * backend.fma->eta_f());
  } else {
    res.fidelity_bound = 1.0 / (1.0 + delta_closed);
  }
  res.max_commutator_error = worst_commutator_error(res.outputs);
  return res;
}

ScenarioResult run_scenario(const ScenarioParams& params) {
  const auto backend_for = [&params](double default_r) {
    if (params.backend == BackendKind::Ideal) return QndBackend::ideal();
    return QndBackend::with_fma(
        FmaParams::unity_gain(params.eta, params.fma_r.value_or(default_r)));
  };
  switch (params.protocol) {
    case Protocol::QndChannel:
      return qnd_coherent_channel(params.r, backend_for(params.r));
    case Protocol::Ccaecc:
      if (params.backend != BackendKind::Ideal) {
        throw UsageError("ccaecc uses no qnd stage; backend must be 'ideal'");
      }
      return ccaecc(params.r, params.eta);
    case Protocol::Superdense:
      return coherent_superdense(params.pair_r, backend_for(params.pair_r));
    case Protocol::ReductionCheck:
      return incoherent_reduction_check(params.encode_p, params.encode_x,
                                        params.encode_r, params.pair_r,
                                        backend_for(params.pair_r));
    case Protocol::Teleportation:
      return coherent_teleportation(params.pair_r, backend_for(params.pair_r),
                                    params.encode_x, params.encode_p);
  }
  throw UsageError("unknown protocol");
}

}  // namespace cvc

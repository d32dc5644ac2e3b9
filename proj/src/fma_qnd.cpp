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

#include "cvc/fma_qnd.hpp"

#include <array>
#include <cmath>
#include <vector>

namespace cvc {

namespace {

// Participants of the box's local input–output map.
enum class Role : int { Sig = 0, Tgt = 1, VacX = 2, VacP = 3, SqX = 4, SqP = 5 };

struct MapEntry {
  Role out_role;  // Sig or Tgt
  Axis out_axis;
  Role in_role;
  Axis in_axis;
  double coeff;
};

// Single source of truth for the box coefficients; both the symbolic rewrite
// and the numeric moment map are generated from this table.
std::vector<MapEntry> build_table(const FmaParams& params, Axis copy_axis) {
  const double g = params.gain();
  const double sqrt_a = std::sqrt(params.alpha());
  const double sqrt_at = std::sqrt(params.alpha() / params.interaction_t());
  const double sqrt_b = std::sqrt(params.beta());
  const double sqrt_tb = std::sqrt(params.interaction_t() * params.beta());

  using enum Role;
  constexpr Axis X = Axis::X;
  constexpr Axis P = Axis::P;
  if (copy_axis == Axis::X) {
    return {
        {Sig, X, Sig, X, 1.0},  {Sig, X, VacX, X, -sqrt_a},  {Sig, X, SqX, X, -sqrt_b},
        {Sig, P, Sig, P, 1.0},  {Sig, P, Tgt, P, -g},
        {Sig, P, VacP, P, sqrt_at},  {Sig, P, SqP, P, sqrt_tb},
        {Tgt, X, Tgt, X, 1.0},  {Tgt, X, Sig, X, g},
        {Tgt, X, VacX, X, -sqrt_at},  {Tgt, X, SqX, X, sqrt_tb},
        {Tgt, P, Tgt, P, 1.0},  {Tgt, P, VacP, P, -sqrt_a},  {Tgt, P, SqP, P, sqrt_b},
    };
  }
  return {
      {Sig, P, Sig, P, 1.0},  {Sig, P, VacP, P, -sqrt_a},  {Sig, P, SqP, P, -sqrt_b},
      {Sig, X, Sig, X, 1.0},  {Sig, X, Tgt, X, -g},
      {Sig, X, VacX, X, sqrt_at},  {Sig, X, SqX, X, sqrt_tb},
      {Tgt, P, Tgt, P, 1.0},  {Tgt, P, Sig, P, g},
      {Tgt, P, VacP, P, -sqrt_at},  {Tgt, P, SqP, P, sqrt_tb},
      {Tgt, X, Tgt, X, 1.0},  {Tgt, X, VacX, X, -sqrt_a},  {Tgt, X, SqX, X, sqrt_b},
  };
}

// Applies the table to six symbolic modes indexed by Role, producing the
// rewritten signal/target quadratures.
std::pair<ModeQuads, ModeQuads> rewrite_from_table(
    const std::vector<MapEntry>& table, const std::array<const ModeQuads*, 6>& in) {
  ModeQuads sig_out;
  ModeQuads tgt_out;
  for (const MapEntry& e : table) {
    const ModeQuads& src = *in[static_cast<int>(e.in_role)];
    const QuadExpr& src_q = e.in_axis == Axis::X ? src.x : src.p;
    ModeQuads& dst = e.out_role == Role::Sig ? sig_out : tgt_out;
    QuadExpr& dst_q = e.out_axis == Axis::X ? dst.x : dst.p;
    dst_q += e.coeff * src_q;
  }
  return {std::move(sig_out), std::move(tgt_out)};
}

}  // namespace

FmaParams::FmaParams(double interaction_t, double eta, double r)
    : t_(interaction_t), eta_(eta), r_(r) {
  if (!(t_ > 0.0) || !(t_ < 1.0)) {
    throw ParameterError("interaction beamsplitter parameter must lie in (0, 1), got " +
                         std::to_string(t_));
  }
  if (!(eta_ > 0.0) || eta_ > 1.0) {
    throw ParameterError("detector efficiency must lie in (0, 1], got " +
                         std::to_string(eta_));
  }
  if (!(r_ >= 0.0)) {
    throw ParameterError("offline squeezing must be nonnegative, got r = " +
                         std::to_string(r_));
  }
}

FmaParams FmaParams::unity_gain(double eta, double r) {
  return FmaParams(unity_gain_interaction_t(), eta, r);
}

double FmaParams::gain() const { return 1.0 / std::sqrt(t_) - std::sqrt(t_); }

double FmaParams::t1() const { return 1.0 / (1.0 + t_); }

double FmaParams::t2() const { return t_ / (1.0 + t_); }

double FmaParams::beta() const { return (1.0 - t_) / (1.0 + t_); }

double FmaParams::alpha() const { return beta() * (1.0 - eta_) / eta_; }

double FmaParams::eta_f() const {
  return beta() * ((1.0 - eta_) / (eta_ * t_) + std::exp(-2.0 * r_));
}

double unity_gain_interaction_t() { return (3.0 - std::sqrt(5.0)) / 2.0; }

FmaSources fma_map(SourceRegistry& registry, ModeQuads& signal,
                   ModeQuads& target, const FmaParams& params, Axis copy_axis,
                   const std::string& label_prefix) {
  const FmaSources sources{
      registry.allocate(SourceKind::vacuum(), label_prefix + "_vac_x"),
      registry.allocate(SourceKind::vacuum(), label_prefix + "_vac_p"),
      registry.allocate(SourceKind::squeezed_x(params.r()), label_prefix + "_sq_x"),
      registry.allocate(SourceKind::squeezed_p(params.r()), label_prefix + "_sq_p"),
  };
  const ModeQuads vac_x{QuadExpr::variable(sources.vac_x, Axis::X),
                        QuadExpr::variable(sources.vac_x, Axis::P)};
  const ModeQuads vac_p{QuadExpr::variable(sources.vac_p, Axis::X),
                        QuadExpr::variable(sources.vac_p, Axis::P)};
  const ModeQuads sq_x{QuadExpr::variable(sources.squeezed_x, Axis::X),
                       QuadExpr::variable(sources.squeezed_x, Axis::P)};
  const ModeQuads sq_p{QuadExpr::variable(sources.squeezed_p, Axis::X),
                       QuadExpr::variable(sources.squeezed_p, Axis::P)};

  auto [sig_out, tgt_out] =
      rewrite_from_table(build_table(params, copy_axis),
                         {&signal, &target, &vac_x, &vac_p, &sq_x, &sq_p});
  signal = std::move(sig_out);
  target = std::move(tgt_out);
  return sources;
}

FmaSources apply_fma_qnd(CircuitState& circuit, int signal, int target,
                         const FmaParams& params, Axis copy_axis,
                         const std::string& label_prefix) {
  if (signal == target) {
    throw UsageError("fma box requires two distinct modes");
  }
  const int n0 = circuit.num_modes();
  if (signal < 0 || signal >= n0 || target < 0 || target >= n0) {
    throw UsageError("fma box: mode index out of range");
  }

  const auto vac_x = circuit.add_source_mode(SourceKind::vacuum(),
                                             label_prefix + "_vac_x");
  const auto vac_p = circuit.add_source_mode(SourceKind::vacuum(),
                                             label_prefix + "_vac_p");
  const auto sq_x = circuit.add_source_mode(SourceKind::squeezed_x(params.r()),
                                            label_prefix + "_sq_x");
  const auto sq_p = circuit.add_source_mode(SourceKind::squeezed_p(params.r()),
                                            label_prefix + "_sq_p");
  const std::array<int, 6> role_mode = {signal,     target,     vac_x.mode,
                                        vac_p.mode, sq_x.mode,  sq_p.mode};

  const std::vector<MapEntry> table = build_table(params, copy_axis);

  // Symbolic rewrite from the current mode expressions.
  auto [sig_out, tgt_out] = rewrite_from_table(
      table, {&circuit.mode(signal), &circuit.mode(target),
              &circuit.mode(vac_x.mode), &circuit.mode(vac_p.mode),
              &circuit.mode(sq_x.mode), &circuit.mode(sq_p.mode)});

  // Matching moment map: survivors keep their rows, the box rows come from
  // the same table, and the four ancilla modes are consumed.
  const int n_in = circuit.num_modes();  // n0 + 4
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(2 * n0, 2 * n_in);
  for (int mode = 0; mode < n0; ++mode) {
    if (mode == signal || mode == target) continue;
    m(2 * mode, 2 * mode) = 1.0;
    m(2 * mode + 1, 2 * mode + 1) = 1.0;
  }
  for (const MapEntry& e : table) {
    const int out_mode = e.out_role == Role::Sig ? signal : target;
    const int row = 2 * out_mode + (e.out_axis == Axis::P ? 1 : 0);
    const int in_mode = role_mode[static_cast<int>(e.in_role)];
    const int col = 2 * in_mode + (e.in_axis == Axis::P ? 1 : 0);
    m(row, col) += e.coeff;
  }

  circuit.apply_channel({{signal, std::move(sig_out)}, {target, std::move(tgt_out)}},
                        {vac_x.mode, vac_p.mode, sq_x.mode, sq_p.mode}, m);
  return FmaSources{vac_x.source, vac_p.source, sq_x.source, sq_p.source};
}

}  // namespace cvc

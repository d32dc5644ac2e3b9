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

#include "cvc/elements.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace cvc {

void beamsplitter_exprs(ModeQuads& a, ModeQuads& b, double t) {
  if (!(t >= 0.0 && t <= 1.0)) {
    throw ParameterError("beamsplitter transmissivity must lie in [0, 1], got " +
                         std::to_string(t));
  }
  const double c = std::sqrt(t);
  const double s = std::sqrt(1.0 - t);
  const QuadExpr ax = a.x, ap = a.p, bx = b.x, bp = b.p;
  a.x = c * ax + s * bx;
  a.p = c * ap + s * bp;
  b.x = -s * ax + c * bx;
  b.p = -s * ap + c * bp;
}

namespace {

// cos/sin of rotation angles, with values within one ulp-cluster of {-1, 0, 1}
// snapped exactly so that quarter-turn rotations stay termwise exact.
double snap_trig(double v) {
  for (double exact : {-1.0, 0.0, 1.0}) {
    if (std::abs(v - exact) < 1e-15) return exact;
  }
  return v;
}

}  // namespace

void phase_exprs(ModeQuads& m, double theta) {
  const double c = snap_trig(std::cos(theta));
  const double s = snap_trig(std::sin(theta));
  const QuadExpr x = m.x, p = m.p;
  m.x = c * x + s * p;
  m.p = -s * x + c * p;
}

void squeezer_exprs(ModeQuads& m, double r, Axis axis) {
  const double contract = std::exp(-r);
  const double expand = std::exp(r);
  if (axis == Axis::X) {
    m.x *= contract;
    m.p *= expand;
  } else {
    m.x *= expand;
    m.p *= contract;
  }
}

void ideal_qnd_exprs(ModeQuads& signal, ModeQuads& target, double gain,
                     Axis copy_axis) {
  if (copy_axis == Axis::X) {
    target.x += gain * signal.x;
    signal.p -= gain * target.p;
  } else {
    target.p += gain * signal.p;
    signal.x -= gain * target.x;
  }
}

CircuitState::NewMode CircuitState::add_source_mode(const SourceKind& kind,
                                                    std::string label,
                                                    double x_mean,
                                                    double p_mean) {
  const SourceId id = registry_.allocate(kind, std::move(label));
  ModeQuads quads;
  quads.x = QuadExpr::variable(id, Axis::X);
  quads.x.set_offset(x_mean);
  quads.p = QuadExpr::variable(id, Axis::P);
  quads.p.set_offset(p_mean);
  modes_.push_back(std::move(quads));
  oracle_.append_mode(kind.moment(Axis::X), kind.moment(Axis::P), x_mean,
                      p_mean);
  return NewMode{num_modes() - 1, id};
}

const ModeQuads& CircuitState::mode(int m) const {
  check_mode(m, "mode access");
  return modes_[m];
}

double CircuitState::symbolic_variance(int m, Axis axis) const {
  check_mode(m, "variance");
  const QuadExpr& q = axis == Axis::X ? modes_[m].x : modes_[m].p;
  return second_moment(q, registry_);
}

void CircuitState::check_mode(int m, const char* what) const {
  if (m < 0 || m >= num_modes()) {
    throw UsageError(std::string(what) + ": mode index " + std::to_string(m) +
                     " out of range for " + std::to_string(num_modes()) +
                     " modes");
  }
}

void CircuitState::apply_oracle_matrix(const Eigen::MatrixXd& matrix) {
  oracle_ = apply_symplectic(
      oracle_, make_symplectic(matrix, Eigen::VectorXd::Zero(matrix.rows())));
}

void CircuitState::apply_beamsplitter(int a, int b, double t) {
  check_mode(a, "beamsplitter");
  check_mode(b, "beamsplitter");
  apply_oracle_matrix(beamsplitter_matrix(num_modes(), a, b, t));
  beamsplitter_exprs(modes_[a], modes_[b], t);
}

void CircuitState::apply_phase(int m, double theta) {
  check_mode(m, "phase");
  apply_oracle_matrix(phase_matrix(num_modes(), m, theta));
  phase_exprs(modes_[m], theta);
}

void CircuitState::apply_squeezer(int m, double r, Axis axis) {
  check_mode(m, "squeezer");
  apply_oracle_matrix(squeezer_matrix(num_modes(), m, r, axis));
  squeezer_exprs(modes_[m], r, axis);
}

void CircuitState::apply_ideal_qnd(int signal, int target, double gain,
                                   Axis copy_axis) {
  check_mode(signal, "qnd");
  check_mode(target, "qnd");
  apply_oracle_matrix(ideal_qnd_matrix(num_modes(), signal, target, gain, copy_axis));
  ideal_qnd_exprs(modes_[signal], modes_[target], gain, copy_axis);
}

void CircuitState::apply_swap(int a, int b) {
  check_mode(a, "swap");
  check_mode(b, "swap");
  apply_oracle_matrix(swap_matrix(num_modes(), a, b));
  std::swap(modes_[a], modes_[b]);
}

void CircuitState::apply_tritter(int a, int b, int c) {
  if (a == b || a == c || b == c) {
    throw UsageError("tritter requires three distinct modes");
  }
  apply_beamsplitter(a, b, 1.0 / 3.0);
  apply_phase(b, std::numbers::pi);
  apply_beamsplitter(b, c, 0.5);
  apply_phase(c, std::numbers::pi);
}

std::optional<SourceId> CircuitState::apply_homodyne_feedforward(
    int mode, Axis axis, double eta,
    const std::vector<FeedforwardTarget>& targets, std::string noise_label) {
  check_mode(mode, "homodyne");
  if (!(eta > 0.0) || eta > 1.0) {
    throw ParameterError("detector efficiency must lie in (0, 1], got " +
                         std::to_string(eta));
  }
  for (const FeedforwardTarget& t : targets) {
    check_mode(t.mode, "feedforward target");
    if (t.mode == mode) {
      throw UsageError("feedforward target cannot be the measured mode");
    }
  }

  // Numeric view first: it consumes the pre-measurement covariance.
  oracle_ = cvc::homodyne_feedforward(oracle_, mode, axis, eta, targets);

  // Symbolic view: each target gains the measured quadrature plus (for a
  // lossy detector) the matching share of calibrated vacuum noise. The same
  // fresh source serves every target of this detector, so their noise is
  // correlated exactly as the conditioning in the numeric view dictates.
  const QuadExpr measured = axis == Axis::X ? modes_[mode].x : modes_[mode].p;
  std::optional<SourceId> noise;
  double noise_scale = 0.0;
  if (eta < 1.0) {
    noise = registry_.allocate(SourceKind::vacuum(), std::move(noise_label));
    noise_scale = std::sqrt((1.0 - eta) / eta);
    if (axis == Axis::X) noise_scale = -noise_scale;
  }
  for (const FeedforwardTarget& t : targets) {
    QuadExpr& target_q = t.axis == Axis::X ? modes_[t.mode].x : modes_[t.mode].p;
    target_q += t.gain * measured;
    if (noise) {
      target_q.add_term(*noise, axis, t.gain * noise_scale);
    }
  }
  modes_.erase(modes_.begin() + mode);
  return noise;
}

void CircuitState::apply_channel(
    const std::vector<std::pair<int, ModeQuads>>& rewrites,
    std::vector<int> drop, const Eigen::MatrixXd& M) {
  for (const auto& [m, quads] : rewrites) check_mode(m, "channel rewrite");
  std::sort(drop.begin(), drop.end());
  if (std::adjacent_find(drop.begin(), drop.end()) != drop.end()) {
    throw UsageError("channel: duplicate dropped mode");
  }
  for (int m : drop) check_mode(m, "channel drop");
  const auto survivors = num_modes() - static_cast<int>(drop.size());
  if (M.rows() != 2 * survivors || M.cols() != 2 * num_modes()) {
    throw UsageError("channel: linear map shape does not match mode counts");
  }

  oracle_ = apply_linear(oracle_, M, Eigen::VectorXd::Zero(M.rows()));
  for (const auto& [m, quads] : rewrites) modes_[m] = quads;
  for (auto it = drop.rbegin(); it != drop.rend(); ++it) {
    modes_.erase(modes_.begin() + *it);
  }
}

std::pair<int, int> CircuitState::add_epr_pair(double r,
                                               const std::string& prefix,
                                               EprReport* report) {
  if (!(r >= 0.0)) {
    throw ParameterError("pair squeezing must be nonnegative, got r = " +
                         std::to_string(r));
  }
  const NewMode seed_x = add_source_mode(SourceKind::vacuum(), prefix + "_seed_x");
  const NewMode seed_p = add_source_mode(SourceKind::vacuum(), prefix + "_seed_p");
  apply_squeezer(seed_x.mode, r, Axis::X);
  apply_squeezer(seed_p.mode, r, Axis::P);
  apply_beamsplitter(seed_x.mode, seed_p.mode, 0.5);
  if (report != nullptr) {
    const QuadExpr diff = modes_[seed_x.mode].x - modes_[seed_p.mode].x;
    report->delta = second_moment(diff, registry_);
    report->entangled = report->delta < 1.0;
  }
  return {seed_x.mode, seed_p.mode};
}

std::tuple<int, int, int> CircuitState::add_ghz_triple(double r,
                                                       const std::string& prefix,
                                                       GhzReport* report) {
  if (!(r >= 0.0)) {
    throw ParameterError("resource squeezing must be nonnegative, got r = " +
                         std::to_string(r));
  }
  const NewMode m1 = add_source_mode(SourceKind::vacuum(), prefix + "_seed_p1");
  const NewMode m2 = add_source_mode(SourceKind::vacuum(), prefix + "_seed_x2");
  const NewMode m3 = add_source_mode(SourceKind::vacuum(), prefix + "_seed_x3");
  apply_squeezer(m1.mode, r, Axis::P);
  apply_squeezer(m2.mode, r, Axis::X);
  apply_squeezer(m3.mode, r, Axis::X);
  apply_tritter(m1.mode, m2.mode, m3.mode);
  if (report != nullptr) {
    report->x_a1_minus_a2 =
        second_moment(modes_[m1.mode].x - modes_[m2.mode].x, registry_);
    report->x_a2_minus_b =
        second_moment(modes_[m2.mode].x - modes_[m3.mode].x, registry_);
    report->p_total = second_moment(
        modes_[m1.mode].p + modes_[m2.mode].p + modes_[m3.mode].p, registry_);
  }
  return {m1.mode, m2.mode, m3.mode};
}

}  // namespace cvc

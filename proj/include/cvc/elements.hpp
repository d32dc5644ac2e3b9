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
#include <tuple>
#include <utility>
#include <vector>

#include "cvc/gaussian_oracle.hpp"
#include "cvc/quad_algebra.hpp"

namespace cvc {

// Heisenberg-picture rewrites of the circuit elements, acting in place on
// symbolic mode quadratures. The same conventions back the phase-space
// matrices in gaussian_oracle.hpp; CircuitState keeps the two in lockstep.

/** q̂_a ↦ √t·q̂_a + √(1−t)·q̂_b, q̂_b ↦ −√(1−t)·q̂_a + √t·q̂_b, t ∈ [0, 1]. */
void beamsplitter_exprs(ModeQuads& a, ModeQuads& b, double t);

/** Rotation by θ; θ = π is the inversion (x̂, p̂) ↦ (−x̂, −p̂). */
void phase_exprs(ModeQuads& m, double theta);

/** Squeezer along `axis`: squeezed quadrature × e^{-r}, conjugate × e^{r}. */
void squeezer_exprs(ModeQuads& m, double r, Axis axis);

/** Ideal QND copy of strength g along copy_axis (see ideal_qnd_matrix). */
void ideal_qnd_exprs(ModeQuads& signal, ModeQuads& target, double gain,
                     Axis copy_axis);

/** Correlation figures of a freshly prepared two-mode squeezed pair:
 *  delta = ⟨(x̂_a − x̂_b)²⟩ = ⟨(p̂_a + p̂_b)²⟩ = 2e^{-2r}. */
struct EprReport {
  double delta;
  bool entangled;  // delta < 1
};

/** Correlation moments of a freshly prepared three-mode (GHZ-type) resource:
 *  ⟨(x̂_{a1} − x̂_{a2})²⟩, ⟨(x̂_{a2} − x̂_b)²⟩ and ⟨(p̂_{a1} + p̂_{a2} + p̂_b)²⟩. */
struct GhzReport {
  double x_a1_minus_a2;
  double x_a2_minus_b;
  double p_total;
};

/** A circuit advanced simultaneously through two independent engines:
 *
 *   - symbolically, as Heisenberg-picture quadrature expressions over the
 *     elementary sources, and
 *   - numerically, as Gaussian moments under the matching phase-space maps
 *     (with measurements handled by explicit conditioning).
 *
 *  Mode indices are positional: removing a mode (homodyne detection, box
 *  internals) shifts higher indices down by one in both views. */
class CircuitState {
 public:
  CircuitState() : oracle_(GaussianState::vacuum(0)) {}

  struct NewMode {
    int mode;
    SourceId source;
  };

  /** Adds a fresh elementary source as a live mode, optionally displaced. */
  NewMode add_source_mode(const SourceKind& kind, std::string label,
                          double x_mean = 0.0, double p_mean = 0.0);

  int num_modes() const { return static_cast<int>(modes_.size()); }
  const ModeQuads& mode(int m) const;
  const GaussianState& oracle() const { return oracle_; }
  SourceRegistry& registry() { return registry_; }
  const SourceRegistry& registry() const { return registry_; }

  /** Symbolic variance of one live quadrature (offset excluded). */
  double symbolic_variance(int m, Axis axis) const;

  void apply_beamsplitter(int a, int b, double t);
  void apply_phase(int m, double theta);
  void apply_squeezer(int m, double r, Axis axis);
  void apply_ideal_qnd(int signal, int target, double gain, Axis copy_axis);
  void apply_swap(int a, int b);

  /** Balanced three-way splitter on (a, b, c), realized as
   *  BS(a, b, 1/3) · π(b) · BS(b, c, 1/2) · π(c). The resulting orthogonal
   *  mixing matrix has first column (1/√3, 1/√3, 1/√3). */
  void apply_tritter(int a, int b, int c);

  /** Homodyne detection of `axis` on `mode` with efficiency η ∈ (0, 1],
   *  feeding the (1/√η-calibrated) outcome forward onto the target
   *  quadratures. The measured mode is removed from both views.
   *
   *  Symbolically each target picks up gain·q̂_meas plus, when η < 1, a
   *  detector-noise term s·gain·√((1−η)/η)·q̂_vac from one fresh vacuum
   *  source shared by all targets of this detector (s = −1 for an x̂
   *  measurement, +1 for a p̂ measurement). Returns that source's id. */
  std::optional<SourceId> apply_homodyne_feedforward(
      int mode, Axis axis, double eta,
      const std::vector<FeedforwardTarget>& targets, std::string noise_label);

  /** Joint rewrite used by measurement-induced boxes: replaces the listed
   *  modes' symbolic quadratures, removes `drop` from the live set, and
   *  advances the oracle through the matching linear map M (ordered over
   *  the surviving quadratures). */
  void apply_channel(const std::vector<std::pair<int, ModeQuads>>& rewrites,
                     std::vector<int> drop, const Eigen::MatrixXd& M);

  /** Appends a two-mode squeezed (EPR-type) pair: two vacua squeezed along
   *  x̂ and p̂ respectively, mixed on a balanced beamsplitter. Sources are
   *  labeled prefix + "_seed_x" / "_seed_p". Returns the two mode indices. */
  std::pair<int, int> add_epr_pair(double r, const std::string& prefix,
                                   EprReport* report = nullptr);

  /** Appends a three-mode resource: a p̂-squeezed vacuum and two x̂-squeezed
   *  vacua combined on a tritter. Sources are labeled prefix + "_seed_p1" /
   *  "_seed_x2" / "_seed_x3". Returns modes in (a1, a2, b) order. */
  std::tuple<int, int, int> add_ghz_triple(double r, const std::string& prefix,
                                           GhzReport* report = nullptr);

 private:
  void check_mode(int m, const char* what) const;
  void apply_oracle_matrix(const Eigen::MatrixXd& matrix);

  SourceRegistry registry_;
  std::vector<ModeQuads> modes_;
  GaussianState oracle_;
};

}  // namespace cvc

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

#include "cvc/elements.hpp"
#include "cvc/quad_algebra.hpp"

namespace cvc {

/** Parameters of the feedforward-measurement-assisted (FMA) QND box: a QND
 *  coupling of two travelling modes built from beamsplitters, two offline
 *  squeezed ancillas and two homodyne detectors with feedforward.
 *
 *  The box is characterized by the beamsplitter parameter T ∈ (0, 1), the
 *  detector efficiency η ∈ (0, 1] and the offline squeezing strength r ≥ 0.
 *  Its effective QND gain is g = 1/√T − √T, and every output quadrature
 *  carries excess noise of variance at most
 *
 *      η_F = β·((1 − η)/(η·T) + e^{-2r}),   β = (1 − T)/(1 + T).
 */
class FmaParams {
 public:
  FmaParams(double interaction_t, double eta, double r);

  /** Unity-gain box: T chosen so that g = 1/√T − √T = 1. */
  static FmaParams unity_gain(double eta, double r);

  double interaction_t() const { return t_; }
  double eta() const { return eta_; }
  double r() const { return r_; }

  /** Effective QND gain g = 1/√T − √T. */
  double gain() const;
  /** Transmissivity 1/(1 + T) of the first internal beamsplitter. */
  double t1() const;
  /** Transmissivity T/(1 + T) of the second internal beamsplitter. */
  double t2() const;
  /** Squeezed-noise admixture β = (1 − T)/(1 + T). */
  double beta() const;
  /** Detector-noise admixture α = β·(1 − η)/η; zero for ideal detectors. */
  double alpha() const;
  /** Per-quadrature excess-noise ceiling η_F (see class comment). */
  double eta_f() const;

 private:
  double t_;
  double eta_;
  double r_;
};

/** The beamsplitter parameter (3 − √5)/2 for which g = 1/√T − √T = 1. */
double unity_gain_interaction_t();

/** Fresh noise sources consumed by one application of the box: calibrated
 *  detector vacuum (split between the two conserved quadrature sectors) and
 *  the two offline squeezed ancillas. */
struct FmaSources {
  SourceId vac_x;
  SourceId vac_p;
  SourceId squeezed_x;
  SourceId squeezed_p;
};

/** Effective input–output map of the box on two symbolic modes; allocates
 *  the box's noise sources in `registry` (labels prefixed by label_prefix)
 *  and rewrites signal/target in place. For copy_axis = X:
 *
 *    x̂_s ↦ x̂_s − √α·x̂_v − √β·x̂_B
 *    p̂_s ↦ p̂_s − g·p̂_t + √(α/T)·p̂_w + √(Tβ)·p̂_A
 *    x̂_t ↦ x̂_t + g·x̂_s − √(α/T)·x̂_v + √(Tβ)·x̂_B
 *    p̂_t ↦ p̂_t − √α·p̂_w + √β·p̂_A
 *
 *  where v̂/ŵ are independent calibrated detector vacua and B̂/Â are the
 *  x̂-/p̂-squeezed ancillas. copy_axis = P swaps the roles of x and p (and
 *  of the two ancillas). The map is canonical for every η. */
FmaSources fma_map(SourceRegistry& registry, ModeQuads& signal,
                   ModeQuads& target, const FmaParams& params, Axis copy_axis,
                   const std::string& label_prefix);

/** Applies the box to a dual-view circuit: symbolic rewrite plus the matching
 *  linear moment map, with the four internal ancilla modes consumed. */
FmaSources apply_fma_qnd(CircuitState& circuit, int signal, int target,
                         const FmaParams& params, Axis copy_axis,
                         const std::string& label_prefix);

}  // namespace cvc

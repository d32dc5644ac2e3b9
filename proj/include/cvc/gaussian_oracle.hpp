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

#include <vector>

#include <Eigen/Dense>

#include "cvc/errors.hpp"
#include "cvc/quad_algebra.hpp"

namespace cvc {

// Numeric moment engine. Quadratures are ordered (x₁, p₁, x₂, p₂, ...), so
// mode m occupies rows 2m and 2m+1. Units match the symbolic engine:
// [x̂, p̂] = i, vacuum covariance = identity.

/** The symplectic form Ω = ⊕ₘ [[0, 1], [−1, 0]] on n modes. */
Eigen::MatrixXd symplectic_form(int num_modes);

/** First and second moments of a Gaussian state. */
class GaussianState {
 public:
  /** Validates dimensions and symmetry (to 1e-9), then symmetrizes. */
  GaussianState(Eigen::VectorXd mean, Eigen::MatrixXd cov);

  static GaussianState vacuum(int num_modes);

  int num_modes() const { return static_cast<int>(mean_.size()) / 2; }
  const Eigen::VectorXd& mean() const { return mean_; }
  const Eigen::MatrixXd& cov() const { return cov_; }

  /** Appends an uncorrelated mode with the given diagonal moments. */
  void append_mode(double x_var, double p_var, double x_mean = 0.0,
                   double p_mean = 0.0);

  /** Smallest eigenvalue of the Hermitian matrix cov + iΩ; physical states
   *  have this ≥ 0 up to rounding. */
  double uncertainty_eigenvalue() const;
  bool satisfies_uncertainty(double tol = 1e-9) const {
    return uncertainty_eigenvalue() >= -tol;
  }

 private:
  Eigen::VectorXd mean_;
  Eigen::MatrixXd cov_;
};

/** A Gaussian unitary in phase space: quadratures map to S·q + d. */
struct SymplecticMap {
  Eigen::MatrixXd matrix;
  Eigen::VectorXd displacement;
};

/** Builds a SymplecticMap after checking S·Ω·Sᵀ = Ω entrywise to `tol`. */
SymplecticMap make_symplectic(Eigen::MatrixXd matrix,
                              Eigen::VectorXd displacement, double tol = 1e-9);

GaussianState apply_symplectic(const GaussianState& state,
                               const SymplecticMap& map);

/** Applies a general linear rewrite q ↦ M·q + d of the full quadrature
 *  vector (M may be rectangular: measurement-induced boxes consume modes).
 *  Only dimensions are validated; physicality is the caller's contract. */
GaussianState apply_linear(const GaussianState& state, const Eigen::MatrixXd& M,
                           const Eigen::VectorXd& d);

/** One addend of a linear form over live modes: coeff·q̂(mode, axis). */
struct LinearFormTerm {
  int mode;
  Axis axis;
  double coeff;
};

/** Variance vᵀ·Σ·v of the linear form (offsets/means excluded). */
double moment_of(const GaussianState& state,
                 const std::vector<LinearFormTerm>& form);

/** Mean vᵀ·μ of the linear form. */
double mean_of(const GaussianState& state,
               const std::vector<LinearFormTerm>& form);

/** Feedforward of a homodyne outcome onto another mode's quadrature. */
struct FeedforwardTarget {
  int mode;
  Axis axis;
  double gain;
};

/** Measures `axis` of `mode` with a detector of efficiency η ∈ (0, 1],
 *  displaces each target quadrature by gain·(outcome/√η), and discards the
 *  measured mode. Detector loss is modeled as a transmissivity-η beamsplitter
 *  against fresh vacuum in front of an ideal detector; the 1/√η outcome
 *  rescaling keeps the feedforward calibrated to the pre-loss quadrature.
 *  Mode indices above `mode` shift down by one in the returned state.
 *  Throws SingularityError when the measured variance is below 1e-12. */
GaussianState homodyne_feedforward(const GaussianState& state, int mode,
                                   Axis axis, double eta,
                                   const std::vector<FeedforwardTarget>& targets);

/** Partial trace: removes the listed modes (duplicates rejected). */
GaussianState drop_modes(const GaussianState& state, std::vector<int> modes);

// Phase-space matrices of the circuit elements, embedded in an n-mode
// identity. Parameter domains are validated (UsageError for bad indices,
// ParameterError for out-of-range values).

/** Beamsplitter of transmissivity t ∈ [0, 1] on modes (a, b):
 *  q̂_a ↦ √t·q̂_a + √(1−t)·q̂_b, q̂_b ↦ −√(1−t)·q̂_a + √t·q̂_b. */
Eigen::MatrixXd beamsplitter_matrix(int n, int a, int b, double t);

/** Phase-space rotation by θ: x̂ ↦ cosθ·x̂ + sinθ·p̂, p̂ ↦ −sinθ·x̂ + cosθ·p̂.
 *  θ = π gives the inversion (x̂, p̂) ↦ (−x̂, −p̂). */
Eigen::MatrixXd phase_matrix(int n, int m, double theta);

/** Single-mode squeezer along `axis`: the squeezed quadrature contracts by
 *  e^{-r}, the conjugate one expands by e^{r}. */
Eigen::MatrixXd squeezer_matrix(int n, int m, double r, Axis axis);

/** Ideal QND coupling of strength g copying `copy_axis` of the signal onto
 *  the target, with back-action confined to the conjugate signal quadrature.
 *  For copy_axis = X: x̂_s ↦ x̂_s, p̂_s ↦ p̂_s − g·p̂_t, x̂_t ↦ x̂_t + g·x̂_s,
 *  p̂_t ↦ p̂_t. For copy_axis = P the roles of x and p swap. */
Eigen::MatrixXd ideal_qnd_matrix(int n, int signal, int target, double gain,
                                 Axis copy_axis);

/** Relabeling that exchanges modes a and b. */
Eigen::MatrixXd swap_matrix(int n, int a, int b);

}  // namespace cvc

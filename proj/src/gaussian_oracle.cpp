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

#include "cvc/gaussian_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <string>

namespace cvc {

namespace {

constexpr double kSymmetryTol = 1e-9;
constexpr double kMeasurementFloor = 1e-12;

void check_mode_index(int n, int m, const char* what) {
  if (m < 0 || m >= n) {
    throw UsageError(std::string(what) + " mode index " + std::to_string(m) +
                     " out of range for " + std::to_string(n) + " modes");
  }
}

void check_distinct(int a, int b, const char* what) {
  if (a == b) {
    throw UsageError(std::string(what) + " requires two distinct modes, got " +
                     std::to_string(a) + " twice");
  }
}

int quad_index(int mode, Axis axis) {
  return 2 * mode + (axis == Axis::P ? 1 : 0);
}

// cos/sin of rotation angles, with values within one ulp-cluster of {-1, 0, 1}
// snapped exactly so that quarter-turn rotations stay termwise exact.
double snap_trig(double v) {
  for (double exact : {-1.0, 0.0, 1.0}) {
    if (std::abs(v - exact) < 1e-15) return exact;
  }
  return v;
}

Eigen::VectorXd form_vector(int dim, const std::vector<LinearFormTerm>& form) {
  Eigen::VectorXd v = Eigen::VectorXd::Zero(dim);
  for (const LinearFormTerm& t : form) {
    check_mode_index(dim / 2, t.mode, "linear form");
    v(quad_index(t.mode, t.axis)) += t.coeff;
  }
  return v;
}

}  // namespace

Eigen::MatrixXd symplectic_form(int num_modes) {
  Eigen::MatrixXd omega = Eigen::MatrixXd::Zero(2 * num_modes, 2 * num_modes);
  for (int m = 0; m < num_modes; ++m) {
    omega(2 * m, 2 * m + 1) = 1.0;
    omega(2 * m + 1, 2 * m) = -1.0;
  }
  return omega;
}

GaussianState::GaussianState(Eigen::VectorXd mean, Eigen::MatrixXd cov)
    : mean_(std::move(mean)), cov_(std::move(cov)) {
  const auto dim = mean_.size();
  if (dim % 2 != 0) {
    throw ValidationError("state dimension must be even, got " +
                          std::to_string(dim));
  }
  if (cov_.rows() != dim || cov_.cols() != dim) {
    throw ValidationError("covariance shape does not match mean dimension");
  }
  if (dim > 0 && (cov_ - cov_.transpose()).cwiseAbs().maxCoeff() > kSymmetryTol) {
    throw ValidationError("covariance matrix is not symmetric");
  }
  cov_ = ((cov_ + cov_.transpose()) / 2.0).eval();
}

GaussianState GaussianState::vacuum(int num_modes) {
  return GaussianState(Eigen::VectorXd::Zero(2 * num_modes),
                       Eigen::MatrixXd::Identity(2 * num_modes, 2 * num_modes));
}

void GaussianState::append_mode(double x_var, double p_var, double x_mean,
                                double p_mean) {
  const auto dim = mean_.size();
  mean_.conservativeResize(dim + 2);
  mean_(dim) = x_mean;
  mean_(dim + 1) = p_mean;
  cov_.conservativeResize(dim + 2, dim + 2);
  cov_.block(0, dim, dim, 2).setZero();
  cov_.block(dim, 0, 2, dim).setZero();
  cov_(dim, dim) = x_var;
  cov_(dim, dim + 1) = 0.0;
  cov_(dim + 1, dim) = 0.0;
  cov_(dim + 1, dim + 1) = p_var;
}

double GaussianState::uncertainty_eigenvalue() const {
  const auto dim = mean_.size();
  if (dim == 0) return 0.0;
  Eigen::MatrixXcd h = cov_.cast<std::complex<double>>();
  h += std::complex<double>(0.0, 1.0) * symplectic_form(num_modes()).cast<std::complex<double>>();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(h);
  return solver.eigenvalues().minCoeff();
}

SymplecticMap make_symplectic(Eigen::MatrixXd matrix,
                              Eigen::VectorXd displacement, double tol) {
  const auto dim = matrix.rows();
  if (dim != matrix.cols() || dim % 2 != 0) {
    throw ValidationError("symplectic matrix must be square and even-dimensional");
  }
  if (displacement.size() != dim) {
    throw ValidationError("displacement dimension does not match matrix");
  }
  const Eigen::MatrixXd omega = symplectic_form(static_cast<int>(dim) / 2);
  const double defect =
      (matrix * omega * matrix.transpose() - omega).cwiseAbs().maxCoeff();
  if (defect > tol) {
    throw ValidationError("matrix fails the symplectic condition (defect " +
                          std::to_string(defect) + ")");
  }
  return SymplecticMap{std::move(matrix), std::move(displacement)};
}

GaussianState apply_symplectic(const GaussianState& state,
                               const SymplecticMap& map) {
  if (map.matrix.cols() != state.mean().size()) {
    throw UsageError("symplectic map dimension does not match state");
  }
  return GaussianState(map.matrix * state.mean() + map.displacement,
                       map.matrix * state.cov() * map.matrix.transpose());
}

GaussianState apply_linear(const GaussianState& state, const Eigen::MatrixXd& M,
                           const Eigen::VectorXd& d) {
  if (M.cols() != state.mean().size()) {
    throw UsageError("linear map has " + std::to_string(M.cols()) +
                     " columns but the state has " +
                     std::to_string(state.mean().size()) + " quadratures");
  }
  if (M.rows() % 2 != 0 || d.size() != M.rows()) {
    throw UsageError("linear map output dimension must be even and match d");
  }
  return GaussianState(M * state.mean() + d, M * state.cov() * M.transpose());
}

double moment_of(const GaussianState& state,
                 const std::vector<LinearFormTerm>& form) {
  const Eigen::VectorXd v = form_vector(static_cast<int>(state.mean().size()), form);
  return v.dot(state.cov() * v);
}

double mean_of(const GaussianState& state,
               const std::vector<LinearFormTerm>& form) {
  const Eigen::VectorXd v = form_vector(static_cast<int>(state.mean().size()), form);
  return v.dot(state.mean());
}

GaussianState homodyne_feedforward(const GaussianState& state, int mode,
                                   Axis axis, double eta,
                                   const std::vector<FeedforwardTarget>& targets) {
  const int n = state.num_modes();
  check_mode_index(n, mode, "homodyne");
  if (!(eta > 0.0) || eta > 1.0) {
    throw ParameterError("detector efficiency must lie in (0, 1], got " +
                         std::to_string(eta));
  }
  for (const FeedforwardTarget& t : targets) {
    check_mode_index(n, t.mode, "feedforward target");
    if (t.mode == mode) {
      throw UsageError("feedforward target cannot be the measured mode");
    }
  }

  // Detector loss: mix the measured mode with fresh vacuum on a
  // transmissivity-η beamsplitter; the detector then reads the mixed mode.
  GaussianState work = state;
  if (eta < 1.0) {
    work.append_mode(1.0, 1.0);
    work = apply_symplectic(
        work, make_symplectic(beamsplitter_matrix(n + 1, mode, n, eta),
                              Eigen::VectorXd::Zero(2 * (n + 1))));
  }

  const auto dim = work.mean().size();
  const int q = quad_index(mode, axis);
  const double sigma = work.cov()(q, q);
  if (sigma < kMeasurementFloor) {
    throw SingularityError("measured quadrature variance " +
                           std::to_string(sigma) + " is numerically singular");
  }

  // Quadrature rows that survive: everything except the measured mode.
  std::vector<int> keep;
  keep.reserve(dim - 2);
  for (int i = 0; i < dim; ++i) {
    if (i != 2 * mode && i != 2 * mode + 1) keep.push_back(i);
  }
  const auto rest = static_cast<int>(keep.size());

  Eigen::VectorXd mu_rest(rest);
  Eigen::VectorXd c(rest);  // Cov(rest, measured quadrature)
  Eigen::MatrixXd sigma_rest(rest, rest);
  for (int i = 0; i < rest; ++i) {
    mu_rest(i) = work.mean()(keep[i]);
    c(i) = work.cov()(keep[i], q);
    for (int j = 0; j < rest; ++j) {
      sigma_rest(i, j) = work.cov()(keep[i], keep[j]);
    }
  }

  // Feedforward gains against the surviving rows. Dividing by √η calibrates
  // the recorded outcome to the pre-loss quadrature.
  Eigen::VectorXd gamma = Eigen::VectorXd::Zero(rest);
  for (const FeedforwardTarget& t : targets) {
    int row = quad_index(t.mode, t.axis);
    if (row > 2 * mode + 1) row -= 2;  // account for the removed mode's rows
    gamma(row) += t.gain / std::sqrt(eta);
  }

  // Conditioning on the outcome o: rest | o has covariance Σ − c·cᵀ/σ and
  // mean μ_rest + c·(o − μ_q)/σ. Adding Γ·o and averaging over o ~ (μ_q, σ)
  // restores a Gaussian with the moments assembled below.
  const Eigen::VectorXd w = c / sigma + gamma;
  Eigen::MatrixXd cov_out = sigma_rest - c * c.transpose() / sigma +
                            sigma * w * w.transpose();
  Eigen::VectorXd mean_out = mu_rest + gamma * work.mean()(q);

  GaussianState out(std::move(mean_out), std::move(cov_out));
  if (eta < 1.0) {
    // The loss vacuum was appended last; after removing the measured mode it
    // sits at the final index.
    out = drop_modes(out, {out.num_modes() - 1});
  }
  return out;
}

GaussianState drop_modes(const GaussianState& state, std::vector<int> modes) {
  const int n = state.num_modes();
  std::sort(modes.begin(), modes.end());
  if (std::adjacent_find(modes.begin(), modes.end()) != modes.end()) {
    throw UsageError("drop_modes: duplicate mode index");
  }
  for (int m : modes) check_mode_index(n, m, "drop");

  std::vector<int> keep;
  keep.reserve(2 * (n - modes.size()));
  std::size_t next = 0;
  for (int m = 0; m < n; ++m) {
    if (next < modes.size() && modes[next] == m) {
      ++next;
      continue;
    }
    keep.push_back(2 * m);
    keep.push_back(2 * m + 1);
  }

  const auto rest = static_cast<int>(keep.size());
  Eigen::VectorXd mean(rest);
  Eigen::MatrixXd cov(rest, rest);
  for (int i = 0; i < rest; ++i) {
    mean(i) = state.mean()(keep[i]);
    for (int j = 0; j < rest; ++j) {
      cov(i, j) = state.cov()(keep[i], keep[j]);
    }
  }
  return GaussianState(std::move(mean), std::move(cov));
}

Eigen::MatrixXd beamsplitter_matrix(int n, int a, int b, double t) {
  check_mode_index(n, a, "beamsplitter");
  check_mode_index(n, b, "beamsplitter");
  check_distinct(a, b, "beamsplitter");
  if (!(t >= 0.0 && t <= 1.0)) {
    throw ParameterError("beamsplitter transmissivity must lie in [0, 1], got " +
                         std::to_string(t));
  }
  const double c = std::sqrt(t);
  const double s = std::sqrt(1.0 - t);
  Eigen::MatrixXd m = Eigen::MatrixXd::Identity(2 * n, 2 * n);
  for (int off = 0; off < 2; ++off) {
    m(2 * a + off, 2 * a + off) = c;
    m(2 * a + off, 2 * b + off) = s;
    m(2 * b + off, 2 * a + off) = -s;
    m(2 * b + off, 2 * b + off) = c;
  }
  return m;
}

Eigen::MatrixXd phase_matrix(int n, int m, double theta) {
  check_mode_index(n, m, "phase");
  Eigen::MatrixXd out = Eigen::MatrixXd::Identity(2 * n, 2 * n);
  const double c = snap_trig(std::cos(theta));
  const double s = snap_trig(std::sin(theta));
  out(2 * m, 2 * m) = c;
  out(2 * m, 2 * m + 1) = s;
  out(2 * m + 1, 2 * m) = -s;
  out(2 * m + 1, 2 * m + 1) = c;
  return out;
}

Eigen::MatrixXd squeezer_matrix(int n, int m, double r, Axis axis) {
  check_mode_index(n, m, "squeezer");
  Eigen::MatrixXd out = Eigen::MatrixXd::Identity(2 * n, 2 * n);
  const double contract = std::exp(-r);
  const double expand = std::exp(r);
  if (axis == Axis::X) {
    out(2 * m, 2 * m) = contract;
    out(2 * m + 1, 2 * m + 1) = expand;
  } else {
    out(2 * m, 2 * m) = expand;
    out(2 * m + 1, 2 * m + 1) = contract;
  }
  return out;
}

Eigen::MatrixXd ideal_qnd_matrix(int n, int signal, int target, double gain,
                                 Axis copy_axis) {
  check_mode_index(n, signal, "qnd");
  check_mode_index(n, target, "qnd");
  check_distinct(signal, target, "qnd");
  Eigen::MatrixXd m = Eigen::MatrixXd::Identity(2 * n, 2 * n);
  if (copy_axis == Axis::X) {
    m(2 * target, 2 * signal) = gain;       // x_t += g·x_s
    m(2 * signal + 1, 2 * target + 1) = -gain;  // p_s -= g·p_t
  } else {
    m(2 * target + 1, 2 * signal + 1) = gain;  // p_t += g·p_s
    m(2 * signal, 2 * target) = -gain;         // x_s -= g·x_t
  }
  return m;
}

Eigen::MatrixXd swap_matrix(int n, int a, int b) {
  check_mode_index(n, a, "swap");
  check_mode_index(n, b, "swap");
  check_distinct(a, b, "swap");
  Eigen::MatrixXd m = Eigen::MatrixXd::Identity(2 * n, 2 * n);
  for (int off = 0; off < 2; ++off) {
    m(2 * a + off, 2 * a + off) = 0.0;
    m(2 * b + off, 2 * b + off) = 0.0;
    m(2 * a + off, 2 * b + off) = 1.0;
    m(2 * b + off, 2 * a + off) = 1.0;
  }
  return m;
}

}  // namespace cvc

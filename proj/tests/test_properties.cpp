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

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "cvc/analysis.hpp"
#include "cvc/elements.hpp"
#include "cvc/fma_qnd.hpp"
#include "cvc/protocols.hpp"
#include "cvc/quad_algebra.hpp"
#include "cvc/report.hpp"

using namespace cvc;
using Catch::Approx;

namespace {

// Worst disagreement between the symbolic and numeric views over every live
// quadrature: second moments, pairwise covariances, and means.
double dual_view_gap(const CircuitState& cs) {
  double worst = 0.0;
  const int n = cs.num_modes();
  for (int m = 0; m < n; ++m) {
    for (const Axis axis : {Axis::X, Axis::P}) {
      const QuadExpr& q = axis == Axis::X ? cs.mode(m).x : cs.mode(m).p;
      const double symbolic = second_moment(q, cs.registry());
      const double numeric = moment_of(cs.oracle(), {{m, axis, 1.0}});
      worst = std::max(worst, std::abs(symbolic - numeric));
      const double mean = mean_of(cs.oracle(), {{m, axis, 1.0}});
      worst = std::max(worst, std::abs(q.offset() - mean));
    }
  }
  return worst;
}

// Worst deviation of all pairwise commutators from the canonical values.
double commutator_gap(const CircuitState& cs) {
  double worst = 0.0;
  const int n = cs.num_modes();
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      const double expected = a == b ? 1.0 : 0.0;
      worst = std::max(worst, std::abs(commutator_im(cs.mode(a).x,
                                                     cs.mode(b).p) -
                                       expected));
      worst = std::max(
          worst, std::abs(commutator_im(cs.mode(a).x, cs.mode(b).x)));
      worst = std::max(
          worst, std::abs(commutator_im(cs.mode(a).p, cs.mode(b).p)));
    }
  }
  return worst;
}

// Robertson bound per live mode, symbolically: VxVp − C² ≥ 1.
double symbolic_uncertainty_min(const CircuitState& cs) {
  double worst = std::numeric_limits<double>::infinity();
  for (int m = 0; m < cs.num_modes(); ++m) {
    const QuadExpr& x = cs.mode(m).x;
    const QuadExpr& p = cs.mode(m).p;
    const double vx = second_moment(x, cs.registry());
    const double vp = second_moment(p, cs.registry());
    const double c = covariance(x, p, cs.registry());
    worst = std::min(worst, vx * vp - c * c);
  }
  return worst;
}

QuadExpr random_expr(std::mt19937& rng, const std::vector<SourceId>& sources) {
  std::uniform_real_distribution<double> coeff(-2.0, 2.0);
  QuadExpr e;
  for (const SourceId source : sources) {
    e = e + QuadExpr::variable(source, Axis::X, coeff(rng)) +
        QuadExpr::variable(source, Axis::P, coeff(rng));
  }
  e.set_offset(coeff(rng));
  return e;
}

}  // namespace

TEST_CASE("random element sequences preserve the canonical structure") {
  std::mt19937 rng(0xC0FFEE);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_int_distribution<int> mode_count(2, 4);
  std::uniform_int_distribution<int> op_count(3, 8);

  double worst_commutator = 0.0;
  double worst_gap = 0.0;
  double worst_uncertainty = std::numeric_limits<double>::infinity();

  for (int trial = 0; trial < 1000; ++trial) {
    CircuitState cs;
    const int n = mode_count(rng);
    for (int m = 0; m < n; ++m) {
      cs.add_source_mode(SourceKind::vacuum(),
                         "src" + std::to_string(trial) + "_" +
                             std::to_string(m));
      if (unit(rng) < 0.5) {
        cs.apply_squeezer(m, 0.6 * unit(rng),
                          unit(rng) < 0.5 ? Axis::X : Axis::P);
      }
    }

    int boxes = 0;
    const int ops = op_count(rng);
    for (int k = 0; k < ops; ++k) {
      const int live = cs.num_modes();
      std::uniform_int_distribution<int> pick_mode(0, live - 1);
      const int a = pick_mode(rng);
      int b = pick_mode(rng);
      while (b == a) b = pick_mode(rng);

      switch (std::uniform_int_distribution<int>(0, 7)(rng)) {
        case 0:
          cs.apply_beamsplitter(a, b, 0.05 + 0.9 * unit(rng));
          break;
        case 1:
          cs.apply_phase(a, 2.0 * std::numbers::pi * unit(rng));
          break;
        case 2:
          cs.apply_squeezer(a, 0.5 * unit(rng),
                            unit(rng) < 0.5 ? Axis::X : Axis::P);
          break;
        case 3:
          cs.apply_ideal_qnd(a, b, 0.5 + 0.75 * unit(rng),
                             unit(rng) < 0.5 ? Axis::X : Axis::P);
          break;
        case 4: {
          const FmaParams params =
              FmaParams::unity_gain(1.0, 0.5 + 1.5 * unit(rng));
          apply_fma_qnd(cs, a, b, params,
                        unit(rng) < 0.5 ? Axis::X : Axis::P,
                        "box" + std::to_string(trial) + "_" +
                            std::to_string(boxes++));
          break;
        }
        case 5:
          cs.apply_swap(a, b);
          break;
        case 6: {
          if (live < 3) break;
          int c = pick_mode(rng);
          while (c == a || c == b) c = pick_mode(rng);
          cs.apply_tritter(a, b, c);
          break;
        }
        case 7: {
          // Unit-efficiency homodyne with feedforward onto a survivor;
          // keep at least two live modes so later two-mode ops stay legal.
          if (live < 3) break;
          const int target = a == live - 1 ? b : a;
          const Axis axis = unit(rng) < 0.5 ? Axis::X : Axis::P;
          cs.apply_homodyne_feedforward(
              live - 1, axis, 1.0,
              {{target, axis, 2.0 * unit(rng) - 1.0}},
              "hom" + std::to_string(trial) + "_" + std::to_string(k));
          break;
        }
      }
    }

    worst_commutator = std::max(worst_commutator, commutator_gap(cs));
    worst_gap = std::max(worst_gap, dual_view_gap(cs));
    worst_uncertainty =
        std::min(worst_uncertainty, cs.oracle().uncertainty_eigenvalue());
    worst_uncertainty =
        std::min(worst_uncertainty, symbolic_uncertainty_min(cs) - 1.0);
  }

  CHECK(worst_commutator <= 1e-9);
  CHECK(worst_gap <= 1e-9);
  CHECK(worst_uncertainty >= -1e-9);
}

TEST_CASE("pi rotations are involutions, termwise") {
  std::mt19937 rng(17);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    CircuitState cs;
    cs.add_source_mode(SourceKind::vacuum(), "a");
    cs.add_source_mode(SourceKind::squeezed_x(0.7), "b");
    cs.apply_beamsplitter(0, 1, 0.2 + 0.6 * unit(rng));
    const ModeQuads before0 = cs.mode(0);
    const ModeQuads before1 = cs.mode(1);
    cs.apply_phase(0, std::numbers::pi);
    cs.apply_phase(0, std::numbers::pi);
    CHECK(max_term_delta(cs.mode(0).x, before0.x) == 0.0);
    CHECK(max_term_delta(cs.mode(0).p, before0.p) == 0.0);
    CHECK(max_term_delta(cs.mode(1).x, before1.x) == 0.0);
  }
}

TEST_CASE("a beamsplitter composed with its pi-conjugate is the identity") {
  std::mt19937 rng(23);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    CircuitState cs;
    cs.add_source_mode(SourceKind::vacuum(), "a");
    cs.add_source_mode(SourceKind::squeezed_p(0.9), "b");
    cs.apply_beamsplitter(0, 1, 0.3);  // scramble the starting point
    const ModeQuads before0 = cs.mode(0);
    const ModeQuads before1 = cs.mode(1);

    const double t = 0.05 + 0.9 * unit(rng);
    cs.apply_beamsplitter(0, 1, t);
    cs.apply_phase(1, std::numbers::pi);
    cs.apply_beamsplitter(0, 1, t);
    cs.apply_phase(1, std::numbers::pi);

    CHECK(max_term_delta(cs.mode(0).x, before0.x) <= 1e-12);
    CHECK(max_term_delta(cs.mode(0).p, before0.p) <= 1e-12);
    CHECK(max_term_delta(cs.mode(1).x, before1.x) <= 1e-12);
    CHECK(max_term_delta(cs.mode(1).p, before1.p) <= 1e-12);
  }
}

TEST_CASE("noise figures are monotone in squeezing and efficiency") {
  const std::vector<double> rs = {0.0, 0.25, 0.5, 0.75, 1.0, 1.5, 2.0, 2.5};
  const std::vector<double> etas = {0.7, 0.8, 0.9, 0.95, 1.0};

  SECTION("ideal qnd channel in r") {
    double prev = std::numeric_limits<double>::infinity();
    for (const double r : rs) {
      const ScenarioResult res = qnd_coherent_channel(r, QndBackend::ideal());
      CHECK(*res.epsilon <= prev + 1e-12);
      CHECK(*res.epsilon_measured <= prev + 1e-12);
      prev = *res.epsilon;
    }
  }

  SECTION("fma qnd channel in r at fixed eta") {
    double prev_cert = std::numeric_limits<double>::infinity();
    double prev_meas = std::numeric_limits<double>::infinity();
    for (const double r : rs) {
      const ScenarioResult res = qnd_coherent_channel(
          r, QndBackend::with_fma(FmaParams::unity_gain(0.9, r)));
      CHECK(*res.epsilon <= prev_cert + 1e-12);
      CHECK(*res.epsilon_measured <= prev_meas + 1e-12);
      prev_cert = *res.epsilon;
      prev_meas = *res.epsilon_measured;
    }
  }

  SECTION("fma qnd channel in eta at fixed r") {
    double prev_cert = std::numeric_limits<double>::infinity();
    double prev_meas = std::numeric_limits<double>::infinity();
    for (const double eta : etas) {
      const ScenarioResult res = qnd_coherent_channel(
          1.0, QndBackend::with_fma(FmaParams::unity_gain(eta, 1.0)));
      CHECK(*res.epsilon <= prev_cert + 1e-12);
      CHECK(*res.epsilon_measured <= prev_meas + 1e-12);
      prev_cert = *res.epsilon;
      prev_meas = *res.epsilon_measured;
    }
  }

  SECTION("ccaecc in r and in eta") {
    double prev = std::numeric_limits<double>::infinity();
    for (const double r : rs) {
      const ScenarioResult res = ccaecc(r, 0.9);
      CHECK(*res.epsilon_measured <= prev + 1e-12);
      prev = *res.epsilon_measured;
    }
    prev = std::numeric_limits<double>::infinity();
    for (const double eta : etas) {
      const ScenarioResult res = ccaecc(1.0, eta);
      CHECK(*res.epsilon_measured <= prev + 1e-12);
      prev = *res.epsilon_measured;
    }
  }

  SECTION("teleportation infidelity in pair squeezing") {
    double prev = std::numeric_limits<double>::infinity();
    for (const double r : rs) {
      const ScenarioResult res =
          coherent_teleportation(r, QndBackend::ideal());
      CHECK(1.0 - *res.fidelity <= prev + 1e-12);
      prev = 1.0 - *res.fidelity;
    }
    prev = std::numeric_limits<double>::infinity();
    for (const double r : rs) {
      const ScenarioResult res = coherent_teleportation(
          r, QndBackend::with_fma(FmaParams::unity_gain(1.0, std::max(r, 0.1))));
      CHECK(1.0 - *res.fidelity <= prev + 1e-12);
      prev = 1.0 - *res.fidelity;
    }
  }
}

TEST_CASE("a strongly squeezed fma box recovers the ideal scenarios") {
  const FmaParams params = FmaParams::unity_gain(1.0, 20.0);

  const ScenarioResult sd_ideal = coherent_superdense(1.0, QndBackend::ideal());
  const ScenarioResult sd_fma =
      coherent_superdense(1.0, QndBackend::with_fma(params));
  REQUIRE(sd_ideal.moments.size() <= sd_fma.moments.size());
  for (const NamedMoment& moment : sd_ideal.moments) {
    CHECK(sd_fma.moment_value(moment.name) ==
          Approx(moment.symbolic).margin(1e-6));
  }
  CHECK(*sd_fma.epsilon_measured ==
        Approx(*sd_ideal.epsilon_measured).margin(1e-6));

  const ScenarioResult tp_ideal =
      coherent_teleportation(1.0, QndBackend::ideal(), 0.3, -0.6);
  const ScenarioResult tp_fma =
      coherent_teleportation(1.0, QndBackend::with_fma(params), 0.3, -0.6);
  for (const NamedMoment& moment : tp_ideal.moments) {
    CHECK(tp_fma.moment_value(moment.name) ==
          Approx(moment.symbolic).margin(1e-6));
  }
  CHECK(*tp_fma.fidelity == Approx(*tp_ideal.fidelity).margin(1e-6));
}

TEST_CASE("commutators are antisymmetric and bilinear") {
  std::mt19937 rng(4242);
  SourceRegistry registry;
  std::vector<SourceId> sources;
  for (int k = 0; k < 4; ++k) {
    sources.push_back(
        registry.allocate(SourceKind::vacuum(), "s" + std::to_string(k)));
  }
  std::uniform_real_distribution<double> coeff(-2.0, 2.0);

  for (int trial = 0; trial < 200; ++trial) {
    const QuadExpr a = random_expr(rng, sources);
    const QuadExpr b = random_expr(rng, sources);
    const QuadExpr c = random_expr(rng, sources);
    const double alpha = coeff(rng);
    const double beta = coeff(rng);

    CHECK(commutator_im(a, b) == Approx(-commutator_im(b, a)).margin(1e-15));
    CHECK(commutator_im(alpha * a + beta * b, c) ==
          Approx(alpha * commutator_im(a, c) + beta * commutator_im(b, c))
              .margin(1e-12));
  }
}

TEST_CASE("covariances satisfy the Cauchy-Schwarz bound") {
  std::mt19937 rng(77);
  SourceRegistry registry;
  std::vector<SourceId> sources;
  sources.push_back(registry.allocate(SourceKind::vacuum(), "v"));
  sources.push_back(registry.allocate(SourceKind::squeezed_x(0.8), "sx"));
  sources.push_back(registry.allocate(SourceKind::squeezed_p(1.1), "sp"));

  for (int trial = 0; trial < 200; ++trial) {
    const QuadExpr a = random_expr(rng, sources);
    const QuadExpr b = random_expr(rng, sources);
    const double cov = covariance(a, b, registry);
    const double va = second_moment(a, registry);
    const double vb = second_moment(b, registry);
    CHECK(cov * cov <= va * vb * (1.0 + 1e-12) + 1e-12);
  }
}

TEST_CASE("the entanglement witness is symmetric in its two modes") {
  CircuitState cs;
  const auto [a, b] = cs.add_epr_pair(0.8, "pair");
  const ModeQuads qa = cs.mode(a);
  const ModeQuads qb = cs.mode(b);
  const EntanglementReport fwd =
      duan_check(qa.x, qa.p, qb.x, qb.p, -1, +1, cs.registry());
  const EntanglementReport rev =
      duan_check(qb.x, qb.p, qa.x, qa.p, -1, +1, cs.registry());
  CHECK(fwd.x_moment == Approx(rev.x_moment).margin(1e-15));
  CHECK(fwd.p_moment == Approx(rev.p_moment).margin(1e-15));
  CHECK(fwd.entangled == rev.entangled);
}

TEST_CASE("reports are byte-identical across independent evaluations") {
  ScenarioParams params;
  params.protocol = Protocol::Teleportation;
  params.backend = BackendKind::Fma;
  params.pair_r = 1.0;
  params.eta = 0.9;
  params.encode_x = 0.5;

  const ScenarioResult first = run_scenario(params);
  const ScenarioResult second = run_scenario(params);
  CHECK(emit_json(first, 12) == emit_json(second, 12));
  CHECK(emit_csv({first}, 12) == emit_csv({second}, 12));

  const std::vector<SweepAxis> axes = {{"pair_r", {0.5, 1.0}}};
  CHECK(emit_json_sweep(sweep(params, axes), 12) ==
        emit_json_sweep(sweep(params, axes), 12));
}

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
#include <string>

#include "cvc/analysis.hpp"
#include "cvc/elements.hpp"
#include "cvc/errors.hpp"
#include "cvc/protocols.hpp"

using namespace cvc;
using Catch::Approx;

TEST_CASE("epsilon threshold classes split at 1/2 and 1") {
  CHECK(epsilon_threshold_class(0.0) == ThresholdClass::BeatsTwoThirds);
  CHECK(epsilon_threshold_class(0.4999) == ThresholdClass::BeatsTwoThirds);
  CHECK(epsilon_threshold_class(0.5) == ThresholdClass::BeatsOneHalf);
  CHECK(epsilon_threshold_class(0.9999) == ThresholdClass::BeatsOneHalf);
  CHECK(epsilon_threshold_class(1.0) == ThresholdClass::None);
  CHECK(epsilon_threshold_class(7.5) == ThresholdClass::None);
  CHECK_THROWS_AS(epsilon_threshold_class(-0.1), ParameterError);
  CHECK_THROWS_AS(epsilon_threshold_class(std::nan("")), ParameterError);
}

TEST_CASE("fidelity threshold classes split at 1/2 and 2/3, strictly") {
  CHECK(fidelity_threshold_class(1.0) == ThresholdClass::BeatsTwoThirds);
  CHECK(fidelity_threshold_class(0.667) == ThresholdClass::BeatsTwoThirds);
  CHECK(fidelity_threshold_class(2.0 / 3.0) == ThresholdClass::BeatsOneHalf);
  CHECK(fidelity_threshold_class(0.51) == ThresholdClass::BeatsOneHalf);
  CHECK(fidelity_threshold_class(0.5) == ThresholdClass::None);
  CHECK(fidelity_threshold_class(0.0) == ThresholdClass::None);
  CHECK_THROWS_AS(fidelity_threshold_class(1.01), ParameterError);
  CHECK_THROWS_AS(fidelity_threshold_class(-0.01), ParameterError);
}

TEST_CASE("threshold labels") {
  CHECK(std::string(epsilon_threshold_label(ThresholdClass::None)) == "none");
  CHECK(std::string(epsilon_threshold_label(ThresholdClass::BeatsOneHalf)) ==
        "beats_1/2");
  CHECK(std::string(epsilon_threshold_label(ThresholdClass::BeatsTwoThirds)) ==
        "beats_2/3");
  CHECK(std::string(fidelity_threshold_label(ThresholdClass::None)) ==
        "below_classical");
  CHECK(std::string(fidelity_threshold_label(ThresholdClass::BeatsOneHalf)) ==
        "beats_1/2");
  CHECK(std::string(fidelity_threshold_label(ThresholdClass::BeatsTwoThirds)) ==
        "beats_2/3");
}

TEST_CASE("teleport fidelity from output spreads") {
  // A perfect copy of a coherent input has unit spreads on both axes.
  const FidelityReport perfect = teleport_fidelity(1.0, 1.0);
  CHECK(perfect.fidelity == Approx(1.0).margin(1e-15));
  CHECK(perfect.threshold == ThresholdClass::BeatsTwoThirds);

  // One extra vacuum unit per axis sits exactly on the 2/3 boundary, which
  // the strict comparison does not credit.
  const FidelityReport boundary = teleport_fidelity(2.0, 2.0);
  CHECK(boundary.fidelity == Approx(2.0 / 3.0).margin(1e-15));
  CHECK(boundary.threshold == ThresholdClass::BeatsOneHalf);
  CHECK(boundary.delta_x == 2.0);
  CHECK(boundary.delta_p == 2.0);

  const FidelityReport skew = teleport_fidelity(0.5, 2.0);
  CHECK(skew.fidelity == Approx(2.0 / std::sqrt(4.5)).margin(1e-15));

  CHECK_THROWS_AS(teleport_fidelity(-1.0, 1.0), ParameterError);
  CHECK_THROWS_AS(teleport_fidelity(1.0, -1.0), ParameterError);
}

TEST_CASE("duan check flags two-mode squeezing below the vacuum line") {
  CircuitState cs;
  const auto [a, b] = cs.add_epr_pair(1.0, "pair");
  const ModeQuads qa = cs.mode(a);
  const ModeQuads qb = cs.mode(b);

  const EntanglementReport rep =
      duan_check(qa.x, qa.p, qb.x, qb.p, -1, +1, cs.registry());
  const double delta = 2.0 * std::exp(-2.0);
  CHECK(rep.x_moment == Approx(delta).margin(1e-12));
  CHECK(rep.p_moment == Approx(delta).margin(1e-12));
  CHECK(rep.total == Approx(2.0 * delta).margin(1e-12));
  CHECK(rep.entangled);

  CHECK_THROWS_AS(duan_check(qa.x, qa.p, qb.x, qb.p, 0, 1, cs.registry()),
                  UsageError);
  CHECK_THROWS_AS(duan_check(qa.x, qa.p, qb.x, qb.p, 1, 2, cs.registry()),
                  UsageError);
}

TEST_CASE("duan check rejects weakly squeezed pairs") {
  CircuitState cs;
  const auto [a, b] = cs.add_epr_pair(0.3, "pair");
  const EntanglementReport rep = duan_check(cs.mode(a).x, cs.mode(a).p,
                                            cs.mode(b).x, cs.mode(b).p, -1, +1,
                                            cs.registry());
  CHECK(rep.x_moment == Approx(2.0 * std::exp(-0.6)).margin(1e-12));
  CHECK(rep.x_moment > 1.0);
  CHECK_FALSE(rep.entangled);
}

TEST_CASE("duan check needs both combinations below 1") {
  // Two independent squeezed modes give a sub-vacuum x̂ combination while
  // the p̂ combination sits at the anti-squeezed level; one sub-vacuum
  // moment alone must not count as entanglement.
  CircuitState cs;
  const auto ma = cs.add_source_mode(SourceKind::vacuum(), "a");
  const auto mb = cs.add_source_mode(SourceKind::vacuum(), "b");
  cs.apply_squeezer(ma.mode, 1.0, Axis::X);
  cs.apply_squeezer(mb.mode, 1.0, Axis::X);
  const EntanglementReport rep = duan_check(cs.mode(0).x, cs.mode(0).p,
                                            cs.mode(1).x, cs.mode(1).p, -1, +1,
                                            cs.registry());
  CHECK(rep.x_moment == Approx(2.0 * std::exp(-2.0)).margin(1e-12));
  CHECK(rep.p_moment == Approx(2.0 * std::exp(2.0)).margin(1e-9));
  CHECK_FALSE(rep.entangled);
}

TEST_CASE("ideal qnd channel satisfies the channel definition exactly") {
  const ScenarioResult res = qnd_coherent_channel(1.0, QndBackend::ideal());
  const ChannelReport rep =
      verify_coherent_channel(res, "in_A", "A_prime", "B_prime", Axis::X);

  CHECK(rep.copy_axis == Axis::X);
  CHECK(rep.residual_copy == Approx(std::exp(-2.0)).margin(1e-12));
  CHECK(rep.residual_backaction == Approx(0.0).margin(1e-15));
  CHECK(rep.epsilon == Approx(std::exp(-2.0)).margin(1e-12));
  CHECK(rep.retained_deviation == 0.0);
  CHECK(rep.input_leakage <= 1e-12);
  CHECK(rep.copy_gain_unit);
  CHECK(rep.identity_retention);
  CHECK(rep.identity_exact);  // the retained quadrature is untouched
  CHECK(rep.mean_conditions_ok);
  CHECK(rep.commutators_canonical);
  CHECK(rep.definition_satisfied);
  CHECK(rep.threshold == ThresholdClass::BeatsTwoThirds);
}

TEST_CASE("fma backend keeps the definition but not exact retention") {
  const FmaParams params = FmaParams::unity_gain(1.0, 1.0);
  const ScenarioResult res =
      qnd_coherent_channel(1.0, QndBackend::with_fma(params));
  const ChannelReport rep =
      verify_coherent_channel(res, "in_A", "A_prime", "B_prime", Axis::X);

  CHECK_FALSE(rep.identity_exact);  // box noise rides on the retained mode
  CHECK(rep.identity_retention);    // ...but it is input-free and zero-mean
  CHECK(rep.definition_satisfied);
  CHECK(rep.threshold == ThresholdClass::BeatsTwoThirds);
  const double beta = params.beta();
  const double t = params.interaction_t();
  CHECK(rep.retained_deviation ==
        Approx(beta * std::exp(-2.0)).margin(1e-12));
  CHECK(rep.epsilon ==
        Approx((beta / t) * std::exp(-2.0)).margin(1e-12));
}

TEST_CASE("lossy ccaecc crosses into the weaker threshold class") {
  const ScenarioResult res = ccaecc(1.0, 0.95);
  const ChannelReport rep =
      verify_coherent_channel(res, "in_A", "A_prime", "B_prime", Axis::X);

  CHECK_FALSE(rep.identity_exact);
  CHECK(rep.identity_retention);
  CHECK(rep.definition_satisfied);
  CHECK(rep.epsilon == Approx(0.5112690076151055).margin(1e-12));
  CHECK(rep.threshold == ThresholdClass::BeatsOneHalf);
  CHECK(rep.input_leakage <= 1e-12);
}

TEST_CASE("a mismatched axis fails the definition with visible leakage") {
  const ScenarioResult res = coherent_superdense(1.0, QndBackend::ideal());
  // The in_1 → out3 channel copies p̂; asking for x̂ must be rejected.
  const ChannelReport rep =
      verify_coherent_channel(res, "in_1", "out1", "out3", Axis::X);
  CHECK_FALSE(rep.copy_gain_unit);
  CHECK_FALSE(rep.definition_satisfied);
  CHECK(rep.input_leakage == Approx(1.0).margin(1e-12));
}

TEST_CASE("channel verification rejects unknown roles") {
  const ScenarioResult res = qnd_coherent_channel(1.0, QndBackend::ideal());
  CHECK_THROWS_AS(
      verify_coherent_channel(res, "in_A", "nope", "B_prime", Axis::X),
      UsageError);
  CHECK_THROWS_AS(
      verify_coherent_channel(res, "nope", "A_prime", "B_prime", Axis::X),
      UsageError);
}

TEST_CASE("verify_scenario_channels enumerates each protocol's claims") {
  const auto qnd = verify_scenario_channels(
      qnd_coherent_channel(1.0, QndBackend::ideal()));
  REQUIRE(qnd.size() == 1);
  CHECK(qnd[0].copy_axis == Axis::X);
  CHECK(qnd[0].definition_satisfied);

  const auto cc = verify_scenario_channels(ccaecc(1.0, 0.9));
  REQUIRE(cc.size() == 1);
  CHECK(cc[0].definition_satisfied);

  const auto sd = verify_scenario_channels(
      coherent_superdense(1.0, QndBackend::ideal()));
  REQUIRE(sd.size() == 2);
  CHECK(sd[0].copy_axis == Axis::P);
  CHECK(sd[0].input_role == "in_1");
  CHECK(sd[0].copy_role == "out3");
  CHECK(sd[1].copy_axis == Axis::X);
  CHECK(sd[1].input_role == "in_2");
  CHECK(sd[1].copy_role == "out4");
  CHECK(sd[0].definition_satisfied);
  CHECK(sd[1].definition_satisfied);
  const double delta = 2.0 * std::exp(-2.0);
  CHECK(sd[0].epsilon == Approx(delta).margin(1e-12));
  CHECK(sd[1].epsilon == Approx(delta).margin(1e-12));

  const auto red = verify_scenario_channels(incoherent_reduction_check(
      0.7, -0.3, 2.0, 1.5, QndBackend::ideal()));
  REQUIRE(red.size() == 2);
  // The classical displacements ride along with unit gain, so the deviation
  // means still vanish.
  CHECK(red[0].mean_conditions_ok);
  CHECK(red[1].mean_conditions_ok);
  CHECK(red[0].definition_satisfied);
  CHECK(red[1].definition_satisfied);

  const auto tp = verify_scenario_channels(
      coherent_teleportation(1.0, QndBackend::ideal()));
  CHECK(tp.empty());
}

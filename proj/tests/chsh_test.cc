// Copyright 2026 The fuzzybell Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "fuzzybell/chsh.h"
#include "fuzzybell/error.h"
#include "oracles.h"

namespace {

using namespace fuzzybell;
constexpr double kPi = std::numbers::pi;

TEST(Correlation, PerfectAnticorrelation) {
    const Correlation c = correlation_E(SingletSpec{1}, 0.0, 0.0, MeasurementScheme::dichotomic(), LossChannel{1.0});
    EXPECT_NEAR(c.value, -1.0, 1e-15);
    EXPECT_NEAR(c.conclusive, 1.0, 1e-15);
}

TEST(Correlation, SinglePairCosine) {
    for (double theta : {0.1, 0.6, 1.4, 2.2}) {
        const Correlation c =
            correlation_E(SingletSpec{1}, 0.3, 0.3 + theta, MeasurementScheme::dichotomic(), LossChannel{1.0});
        EXPECT_NEAR(c.value, -std::cos(2 * theta), 1e-14);
    }
}

TEST(Correlation, ParityLimit) {
    const Correlation c = correlation_E(SingletSpec{4}, 0.2, 0.2, MeasurementScheme::parity(), LossChannel{1.0});
    EXPECT_DOUBLE_EQ(c.value, 1.0);
    EXPECT_DOUBLE_EQ(c.conclusive, 1.0);
}

TEST(Correlation, ParityRequiresLosslessExactPath) {
    EXPECT_THROW(CorrelationModel(SingletSpec{3}, MeasurementScheme::parity(), LossChannel{0.9}), Error);
    EXPECT_THROW(CorrelationModel(SingletSpec{3}, MeasurementScheme::parity(), LossChannel{1.0}, McConfig{}), Error);
}

TEST(Correlation, ConditionedOnConclusiveEvents) {
    const int n = 6;
    const double theta = 0.7;
    const oracle::Scheme of{oracle::Kind::kOF, 2, false};
    const auto j = oracle::joint(n, theta, of, of, 0.5);
    const double conclusive = j[0][0] + j[0][1] + j[1][0] + j[1][1];
    const double expected = (j[0][0] + j[1][1] - j[0][1] - j[1][0]) / conclusive;
    const Correlation c =
        correlation_E(SingletSpec{n}, 0.0, theta, MeasurementScheme::orthogonality_filter(2), LossChannel{0.5});
    EXPECT_NEAR(c.value, expected, 1e-12);
    EXPECT_NEAR(c.conclusive, conclusive, 1e-12);
}

TEST(Correlation, UndefinedWhenNothingConclusive) {
    try {
        correlation_E(SingletSpec{2}, 0.0, 0.3, MeasurementScheme::threshold_detector(5), LossChannel{1.0});
        FAIL();
    } catch (const Error &e) {
        EXPECT_EQ(e.code(), ErrorCode::kUndefinedCorrelation);
    }
}

TEST(Chsh, TwoQubitOptimum) {
    const CHSHResult r = maximize_chsh(SingletSpec{1}, MeasurementScheme::dichotomic(), LossChannel{1.0});
    EXPECT_NEAR(r.s_value, 2 * std::numbers::sqrt2, 1e-6);
    EXPECT_EQ(r.method, EvaluationMethod::kExact);
    // Optimal separations are odd multiples of pi/8 modulo pi/2.
    const double sep = std::fmod(std::abs(r.settings.b - r.settings.a), kPi / 4);
    EXPECT_NEAR(std::min(sep, kPi / 4 - sep), kPi / 8, 1e-3);
}

TEST(Chsh, StoredCorrelationsReproduceS) {
    const CHSHResult r =
        maximize_chsh(SingletSpec{5}, MeasurementScheme::threshold_detector(2), LossChannel{0.7});
    EXPECT_NEAR(r.recomputed_s(), r.s_value, 1e-12);
    for (double e : r.correlations) EXPECT_LE(std::abs(e), 1.0 + 1e-12);
    for (double p : r.conclusive_probs) {
        EXPECT_GT(p, 0.0);
        EXPECT_LE(p, 1.0 + 1e-12);
    }
    for (double angle : {r.settings.a, r.settings.a_prime, r.settings.b, r.settings.b_prime}) {
        EXPECT_GE(angle, 0.0);
        EXPECT_LT(angle, kPi);
    }
}

TEST(Chsh, CommonRotationLeavesSUnchanged) {
    const CorrelationModel model(SingletSpec{7}, MeasurementScheme::dichotomic(), LossChannel{0.8});
    oracle::Gen gen(211);
    for (int trial = 0; trial < 20; ++trial) {
        AngleSettings s{gen.real(0, kPi), gen.real(0, kPi), gen.real(0, kPi), gen.real(0, kPi)};
        const double offset = gen.real(-3.0, 3.0);
        AngleSettings t{s.a + offset, s.a_prime + offset, s.b + offset, s.b_prime + offset};
        EXPECT_NEAR(evaluate_chsh(model, s).s_value, evaluate_chsh(model, t).s_value, 1e-9);
    }
}

TEST(Chsh, RepeatedMaximizationIsStable) {
    const CorrelationModel model(SingletSpec{9}, MeasurementScheme::dichotomic(), LossChannel{1.0});
    const double s1 = maximize_chsh(model).s_value;
    const double s2 = maximize_chsh(model).s_value;
    ChshOptions threaded;
    threaded.workers = 3;
    const double s3 = maximize_chsh(model, threaded).s_value;
    EXPECT_LT(std::abs(s1 - s2), 1e-6);
    EXPECT_LT(std::abs(s1 - s3), 1e-6);
}

TEST(Chsh, NoSettingBeatsTheOptimum) {
    const CorrelationModel model(SingletSpec{3}, MeasurementScheme::dichotomic(), LossChannel{1.0});
    const double best = maximize_chsh(model).s_value;
    oracle::Gen gen(223);
    for (int trial = 0; trial < 500; ++trial) {
        AngleSettings s{gen.real(0, kPi), gen.real(0, kPi), gen.real(0, kPi), gen.real(0, kPi)};
        ASSERT_LE(evaluate_chsh(model, s).s_value, best + 1e-9);
    }
}

TEST(Chsh, DichotomicDecaysButViolates) {
    double previous = 3.0;
    for (int n : {1, 3, 5, 11}) {
        const double s = maximize_chsh(SingletSpec{n}, MeasurementScheme::dichotomic(), LossChannel{1.0}).s_value;
        EXPECT_LT(s, previous);
        EXPECT_GT(s, 2.0);
        previous = s;
    }
}

TEST(Chsh, ParityApproachesLimit) {
    const CHSHResult r = maximize_chsh(SingletSpec{200}, MeasurementScheme::parity(), LossChannel{1.0});
    EXPECT_NEAR(r.s_value, 2.481, 0.005);
    // n = 1 parity is the two-qubit correlation -cos(2 theta).
    const CHSHResult r1 = maximize_chsh(SingletSpec{1}, MeasurementScheme::parity(), LossChannel{1.0});
    EXPECT_NEAR(r1.s_value, 2 * std::numbers::sqrt2, 1e-6);
}

TEST(Chsh, MonteCarloModelIsDeterministic) {
    const McConfig mc{5000, 3, 1};
    const CHSHResult a =
        maximize_chsh(SingletSpec{4}, MeasurementScheme::dichotomic(), LossChannel{0.9}, mc);
    const CHSHResult b =
        maximize_chsh(SingletSpec{4}, MeasurementScheme::dichotomic(), LossChannel{0.9}, mc);
    EXPECT_EQ(a.method, EvaluationMethod::kMonteCarlo);
    EXPECT_EQ(a.s_value, b.s_value);
    const double exact =
        maximize_chsh(SingletSpec{4}, MeasurementScheme::dichotomic(), LossChannel{0.9}).s_value;
    EXPECT_NEAR(a.s_value, exact, 0.05);
}

TEST(Chsh, SpdcStateWithParity) {
    const SpdcWeights w = spdc_weights(0.3, 1e-12);
    const CorrelationModel model(w, MeasurementScheme::parity(), LossChannel{1.0});
    double expected = 0.0, mass = 0.0;
    for (int n = 0; n <= w.n_max; ++n) {
        expected += w.weight[n] * parity_correlation(n, 0.8);
        mass += w.weight[n];
    }
    EXPECT_NEAR(model.at_relative(0.4).value, expected / mass, 1e-14);
}

TEST(Chsh, OptionsAreValidated) {
    const CorrelationModel model(SingletSpec{1}, MeasurementScheme::dichotomic(), LossChannel{1.0});
    ChshOptions bad;
    bad.restarts = -1;
    EXPECT_THROW(maximize_chsh(model, bad), Error);
    bad = {};
    bad.workers = 0;
    EXPECT_THROW(maximize_chsh(model, bad), Error);
}

}  // namespace

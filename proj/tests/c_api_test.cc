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
#include <cstring>
#include <numbers>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "fuzzybell/fuzzybell.h"
#include "fuzzybell/version.h"

namespace {

constexpr double kPi = std::numbers::pi;

fb_state singlet(int n) { return fb_state{FB_STATE_SINGLET, n, 0.0, 0.0, 0}; }

TEST(CApi, VersionAndStatusNames) {
    EXPECT_STREQ(fb_version(), FUZZYBELL_VERSION);
    EXPECT_STREQ(fb_status_name(FB_OK), "OK");
    EXPECT_STREQ(fb_status_name(FB_E_SIZE_CAP), "E_SIZE_CAP");
}

TEST(CApi, CoefficientHandle) {
    fb_coefficients *c = nullptr;
    ASSERT_EQ(fb_coefficients_create(1, 0.0, 0, &c), FB_OK);
    EXPECT_EQ(fb_coefficients_n(c), 1);
    EXPECT_EQ(fb_coefficients_theta(c), 0.0);
    double amp = 0.0;
    ASSERT_EQ(fb_coefficients_get(c, 1, 1, &amp), FB_OK);
    EXPECT_NEAR(amp, -1.0 / std::sqrt(2.0), 1e-15);
    EXPECT_EQ(fb_coefficients_get(c, 2, 0, &amp), FB_E_CONFIG);
    EXPECT_NE(std::strlen(fb_last_error()), 0u);
    fb_coefficients_destroy(c);
    fb_coefficients_destroy(nullptr);
}

TEST(CApi, SizeCapIsReported) {
    fb_coefficients *c = nullptr;
    EXPECT_EQ(fb_coefficients_create(401, 0.1, 0, &c), FB_E_SIZE_CAP);
    EXPECT_EQ(c, nullptr);
    EXPECT_NE(std::string(fb_last_error()).find("cap"), std::string::npos);
    ASSERT_EQ(fb_coefficients_create(401, 0.1, 401, &c), FB_OK);
    fb_coefficients_destroy(c);
}

TEST(CApi, NullArgumentsAreConfigErrors) {
    EXPECT_EQ(fb_coefficients_create(1, 0.0, 0, nullptr), FB_E_CONFIG);
    EXPECT_EQ(fb_mean_photons(1.0, nullptr), FB_E_CONFIG);
    EXPECT_EQ(fb_success_probability(nullptr, nullptr, 1.0, nullptr), FB_E_CONFIG);
}

TEST(CApi, JointProbabilitiesSumToOne) {
    fb_coefficients *c = nullptr;
    ASSERT_EQ(fb_coefficients_create(2, kPi / 3, 0, &c), FB_OK);
    const fb_scheme td{FB_SCHEME_THRESHOLD_DETECTOR, 1, 0};
    double p[9];
    ASSERT_EQ(fb_joint_probabilities(c, &td, &td, p), FB_OK);
    double total = 0.0;
    for (double x : p) total += x;
    EXPECT_NEAR(total, 1.0, 1e-12);
    const fb_scheme parity{FB_SCHEME_PARITY, 0, 0};
    EXPECT_EQ(fb_joint_probabilities(c, &parity, &td, p), FB_E_CONFIG);
    fb_coefficients_destroy(c);
}

TEST(CApi, ThinningAndParity) {
    const double in[3] = {0.0, 0.0, 1.0};
    double out[3];
    ASSERT_EQ(fb_thin_binomial(in, 3, 0.5, out), FB_OK);
    EXPECT_NEAR(out[0], 0.25, 1e-15);
    EXPECT_NEAR(out[1], 0.5, 1e-15);
    EXPECT_NEAR(out[2], 0.25, 1e-15);
    EXPECT_EQ(fb_thin_binomial(in, 3, 1.5, out), FB_E_CONFIG);
    double e = 0.0;
    ASSERT_EQ(fb_parity_correlation(1, 0.4, &e), FB_OK);
    EXPECT_NEAR(e, -std::cos(0.4), 1e-14);
}

TEST(CApi, FringeThroughOutcomeMatrixMatchesSweep) {
    const fb_scheme of{FB_SCHEME_ORTHOGONALITY_FILTER, 1, 0};
    const fb_sampling exact{0, 0, 0, 1};
    fb_outcome_matrix *mat = nullptr;
    ASSERT_EQ(fb_outcome_matrix_create(4, &of, &of, 0.7, &exact, 0, &mat), FB_OK);
    fb_coefficients *c = nullptr;
    ASSERT_EQ(fb_coefficients_create(4, 0.5, 0, &c), FB_OK);
    double direct[9];
    ASSERT_EQ(fb_fringe_point(c, mat, direct), FB_OK);

    const fb_state st = singlet(4);
    const double theta = 0.5;
    fb_fringe *f = nullptr;
    ASSERT_EQ(fb_fringe_sweep(&st, &of, &of, 0.7, &theta, 1, &exact, &f), FB_OK);
    ASSERT_EQ(fb_fringe_size(f), 1u);
    double t = 0.0, probs[9], err[9];
    ASSERT_EQ(fb_fringe_point_at(f, 0, &t, probs, err), FB_OK);
    EXPECT_EQ(t, 0.5);
    for (int i = 0; i < 9; ++i) {
        EXPECT_NEAR(probs[i], direct[i], 1e-14);
        EXPECT_EQ(err[i], 0.0);
    }
    EXPECT_EQ(fb_fringe_point_at(f, 1, &t, probs, err), FB_E_CONFIG);

    double value = 0.0, std_error = 0.0;
    EXPECT_EQ(fb_outcome_matrix_get(mat, 0, 1, 4, 0, &value, &std_error), FB_OK);
    EXPECT_EQ(std_error, 0.0);
    fb_fringe_destroy(f);
    fb_coefficients_destroy(c);
    fb_outcome_matrix_destroy(mat);
}

TEST(CApi, FringeAnalyses) {
    const fb_state st = singlet(3);
    const fb_scheme d{FB_SCHEME_DICHOTOMIC, 0, 0};
    std::vector<double> grid(16);
    for (std::size_t i = 0; i < grid.size(); ++i) grid[i] = kPi * i / grid.size();
    fb_fringe *f = nullptr;
    ASSERT_EQ(fb_fringe_sweep(&st, &d, &d, 1.0, grid.data(), grid.size(), nullptr, &f), FB_OK);

    double v = 0.0, v_err = -1.0;
    ASSERT_EQ(fb_fringe_visibility(f, 0, 0, &v, &v_err), FB_OK);
    EXPECT_NEAR(v, 1.0, 1e-9);
    EXPECT_EQ(v_err, 0.0);
    EXPECT_EQ(fb_fringe_visibility(f, 3, 0, &v, &v_err), FB_E_CONFIG);

    int idx[16];
    double mag[16];
    std::size_t count = 0;
    ASSERT_EQ(fb_fringe_harmonics(f, 0, 0, idx, mag, 16, &count), FB_OK);
    ASSERT_GE(count, 4u);
    EXPECT_EQ(idx[1], 2);
    for (std::size_t i = 0; i < count; ++i)
        if (idx[i] > 6) EXPECT_LT(mag[i], 1e-12);

    std::vector<double> ratio(grid.size());
    int crossings = -1;
    ASSERT_EQ(fb_fringe_linear_ratio(f, 0, 0, ratio.data(), ratio.size(), &crossings), FB_OK);
    EXPECT_TRUE(std::isnan(ratio[0]));
    EXPECT_GE(crossings, 0);
    fb_fringe_destroy(f);
}

TEST(CApi, SpdcWeightsAndSuccess) {
    fb_spdc_weights *w = nullptr;
    ASSERT_EQ(fb_spdc_weights_create(1.0, 1e-9, &w), FB_OK);
    double total = fb_spdc_weights_truncation_mass(w);
    for (int n = 0; n <= fb_spdc_weights_n_max(w); ++n) {
        double x = 0.0;
        ASSERT_EQ(fb_spdc_weights_get(w, n, &x), FB_OK);
        total += x;
    }
    EXPECT_NEAR(total, 1.0, 1e-12);
    fb_spdc_weights_destroy(w);
    EXPECT_EQ(fb_spdc_weights_create(-1.0, 1e-9, &w), FB_E_CONFIG);

    double mean = 0.0;
    ASSERT_EQ(fb_mean_photons(3.49, &mean), FB_OK);
    EXPECT_NEAR(mean, 268.23, 0.01);

    const fb_state spdc{FB_STATE_SPDC, 0, 1.0, 0.0, 0};
    const fb_scheme none{FB_SCHEME_ORTHOGONALITY_FILTER, 0, 0};
    double p = 0.0;
    ASSERT_EQ(fb_success_probability(&spdc, &none, 0.5, &p), FB_OK);
    EXPECT_NEAR(p, 1.0, 1e-12);
}

TEST(CApi, ChshAndCorrelation) {
    const fb_state st = singlet(1);
    const fb_scheme d{FB_SCHEME_DICHOTOMIC, 0, 0};
    fb_chsh_result r;
    ASSERT_EQ(fb_maximize_chsh(&st, &d, 1.0, nullptr, 16, &r), FB_OK);
    EXPECT_NEAR(r.s_value, 2 * std::numbers::sqrt2, 1e-6);
    EXPECT_EQ(r.monte_carlo, 0);
    EXPECT_NEAR(r.correlations[0] + r.correlations[1] + r.correlations[2] - r.correlations[3], r.s_value, 1e-12);

    double e = 0.0, conclusive = 0.0;
    ASSERT_EQ(fb_correlation(&st, &d, 1.0, 0.0, 0.0, nullptr, &e, &conclusive), FB_OK);
    EXPECT_NEAR(e, -1.0, 1e-15);
    EXPECT_NEAR(conclusive, 1.0, 1e-15);

    const fb_state two = singlet(2);
    const fb_scheme td{FB_SCHEME_THRESHOLD_DETECTOR, 5, 0};
    EXPECT_EQ(fb_correlation(&two, &td, 1.0, 0.0, 0.3, nullptr, &e, &conclusive), FB_E_UNDEFINED_CORRELATION);
}

TEST(CApi, MonteCarloIsReproducible) {
    const fb_scheme d{FB_SCHEME_DICHOTOMIC, 0, 0};
    const fb_sampling mc{1, 2000, 99, 1};
    const fb_sampling mc2{1, 2000, 99, 2};
    fb_outcome_matrix *a = nullptr, *b = nullptr;
    ASSERT_EQ(fb_outcome_matrix_create(3, &d, &d, 0.6, &mc, 0, &a), FB_OK);
    ASSERT_EQ(fb_outcome_matrix_create(3, &d, &d, 0.6, &mc2, 0, &b), FB_OK);
    for (int m = 0; m <= 3; ++m) {
        for (int p = 0; p <= 3; ++p) {
            double va, ea, vb, eb;
            ASSERT_EQ(fb_outcome_matrix_get(a, 0, 1, m, p, &va, &ea), FB_OK);
            ASSERT_EQ(fb_outcome_matrix_get(b, 0, 1, m, p, &vb, &eb), FB_OK);
            EXPECT_EQ(va, vb);
            EXPECT_GT(ea, 0.0);
        }
    }
    fb_outcome_matrix_destroy(a);
    fb_outcome_matrix_destroy(b);
}

}  // namespace

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

/* C interface to the fuzzybell engine.
 *
 * Every fallible call returns an fb_status; on failure a one-line message is
 * available from fb_last_error() until the next failing call on the same
 * thread. Objects are opaque handles released with their _destroy function.
 *
 * Outcome indices: 0 = (+1), 1 = (-1), 2 = inconclusive (0). Joint tables
 * are 9 doubles in row-major order, entry [3*a + b].
 */
#ifndef FUZZYBELL_FUZZYBELL_H_
#define FUZZYBELL_FUZZYBELL_H_

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define FB_API __declspec(dllexport)
#else
#define FB_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum fb_status {
    FB_OK = 0,
    FB_E_CONFIG = 1,
    FB_E_SIZE_CAP = 2,
    FB_E_UNDEFINED_CORRELATION = 3,
    FB_E_NUMERICAL = 4,
    FB_E_INTERNAL = 5
} fb_status;

typedef enum fb_scheme_kind {
    FB_SCHEME_DICHOTOMIC = 0,
    FB_SCHEME_ORTHOGONALITY_FILTER = 1,
    FB_SCHEME_THRESHOLD_DETECTOR = 2,
    FB_SCHEME_PARITY = 3
} fb_scheme_kind;

typedef struct fb_scheme {
    fb_scheme_kind kind;
    int threshold; /* k for OF, h for TD, 0 otherwise */
    int strict;    /* nonzero: threshold must be exceeded, not just reached */
} fb_scheme;

typedef enum fb_state_kind { FB_STATE_SINGLET = 0, FB_STATE_SPDC = 1 } fb_state_kind;

typedef struct fb_state {
    fb_state_kind kind;
    int n;                        /* FB_STATE_SINGLET */
    double gain;                  /* FB_STATE_SPDC */
    double truncation_tolerance;  /* FB_STATE_SPDC; <= 0 selects the default */
    int pair_cap;                 /* <= 0 selects the default cap */
} fb_state;

typedef struct fb_sampling {
    int monte_carlo; /* zero: exact path, remaining fields ignored */
    uint64_t shots;
    uint64_t seed;
    int workers;
} fb_sampling;

typedef struct fb_chsh_result {
    double s_value;
    double a, a_prime, b, b_prime;
    double correlations[4]; /* E(a,b), E(a,b'), E(a',b), E(a',b') */
    double conclusive[4];
    int monte_carlo;
} fb_chsh_result;

typedef struct fb_coefficients fb_coefficients;
typedef struct fb_spdc_weights fb_spdc_weights;
typedef struct fb_outcome_matrix fb_outcome_matrix;
typedef struct fb_fringe fb_fringe;

FB_API const char *fb_version(void);
FB_API const char *fb_last_error(void);
FB_API const char *fb_status_name(fb_status status);

/* state */
FB_API fb_status fb_coefficients_create(int n, double theta, int pair_cap, fb_coefficients **out);
FB_API int fb_coefficients_n(const fb_coefficients *c);
FB_API double fb_coefficients_theta(const fb_coefficients *c);
FB_API fb_status fb_coefficients_get(const fb_coefficients *c, int m, int p, double *amplitude);
FB_API void fb_coefficients_destroy(fb_coefficients *c);

FB_API fb_status fb_spdc_weights_create(double gain, double truncation_tolerance, fb_spdc_weights **out);
FB_API int fb_spdc_weights_n_max(const fb_spdc_weights *w);
FB_API double fb_spdc_weights_truncation_mass(const fb_spdc_weights *w);
FB_API fb_status fb_spdc_weights_get(const fb_spdc_weights *w, int n, double *weight);
FB_API void fb_spdc_weights_destroy(fb_spdc_weights *w);

FB_API fb_status fb_mean_photons(double gain, double *out);

/* measure */
FB_API fb_status fb_outcome_weights(int n_pi, int m_perp, const fb_scheme *scheme, double out[3]);
FB_API fb_status fb_joint_probabilities(const fb_coefficients *c, const fb_scheme *scheme_a,
                                        const fb_scheme *scheme_b, double out[9]);
FB_API fb_status fb_parity_correlation(int n, double theta, double *out);

/* loss */
FB_API fb_status fb_thin_binomial(const double *probs, size_t count, double eta, double *out);
FB_API fb_status fb_outcome_matrix_create(int n, const fb_scheme *scheme_a, const fb_scheme *scheme_b, double eta,
                                          const fb_sampling *sampling, int pair_cap, fb_outcome_matrix **out);
FB_API fb_status fb_outcome_matrix_get(const fb_outcome_matrix *mat, int a, int b, int m, int p, double *value,
                                       double *std_error);
FB_API void fb_outcome_matrix_destroy(fb_outcome_matrix *mat);
FB_API fb_status fb_fringe_point(const fb_coefficients *c, const fb_outcome_matrix *mat, double out[9]);

/* analysis */
FB_API fb_status fb_fringe_sweep(const fb_state *state, const fb_scheme *scheme_a, const fb_scheme *scheme_b,
                                 double eta, const double *thetas, size_t count, const fb_sampling *sampling,
                                 fb_fringe **out);
FB_API size_t fb_fringe_size(const fb_fringe *f);
FB_API fb_status fb_fringe_point_at(const fb_fringe *f, size_t i, double *theta, double probs[9],
                                    double std_error[9]);
FB_API fb_status fb_fringe_visibility(const fb_fringe *f, int a, int b, double *value, double *std_error);
/* Magnitudes of harmonics 0, 2, 4, ...; *count receives the number available. */
FB_API fb_status fb_fringe_harmonics(const fb_fringe *f, int a, int b, int *indices, double *magnitudes,
                                     size_t capacity, size_t *count);
/* ratio[i] is NaN where the reference vanishes. */
FB_API fb_status fb_fringe_linear_ratio(const fb_fringe *f, int a, int b, double *ratio, size_t capacity,
                                        int *crossings);
FB_API void fb_fringe_destroy(fb_fringe *f);

FB_API fb_status fb_success_probability(const fb_state *state, const fb_scheme *scheme, double eta, double *out);

/* chsh */
FB_API fb_status fb_correlation(const fb_state *state, const fb_scheme *scheme, double eta, double angle_a,
                                double angle_b, const fb_sampling *sampling, double *value, double *conclusive);
FB_API fb_status fb_maximize_chsh(const fb_state *state, const fb_scheme *scheme, double eta,
                                  const fb_sampling *sampling, int restarts, fb_chsh_result *out);

#ifdef __cplusplus
}
#endif

#endif /* FUZZYBELL_FUZZYBELL_H_ */

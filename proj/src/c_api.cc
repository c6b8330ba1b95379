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

#include "fuzzybell/fuzzybell.h"

#include <cmath>
#include <limits>
#include <new>
#include <string>

#include "fuzzybell/analysis.h"
#include "fuzzybell/chsh.h"
#include "fuzzybell/error.h"
#include "fuzzybell/loss.h"
#include "fuzzybell/measure.h"
#include "fuzzybell/state.h"
#include "fuzzybell/version.h"

struct fb_coefficients {
    fuzzybell::CoefficientMatrix value;
};
struct fb_spdc_weights {
    fuzzybell::SpdcWeights value;
};
struct fb_outcome_matrix {
    fuzzybell::OutcomeMatrix value;
};
struct fb_fringe {
    fuzzybell::FringePattern value;
};

namespace {

using namespace fuzzybell;

thread_local std::string last_error;

fb_status status_of(ErrorCode code) {
    switch (code) {
        case ErrorCode::kInvalidArgument:
            return FB_E_CONFIG;
        case ErrorCode::kSizeCap:
            return FB_E_SIZE_CAP;
        case ErrorCode::kUndefinedCorrelation:
            return FB_E_UNDEFINED_CORRELATION;
        case ErrorCode::kNumerical:
            return FB_E_NUMERICAL;
    }
    return FB_E_INTERNAL;
}

template <typename Fn>
fb_status guarded(Fn &&fn) {
    try {
        fn();
        return FB_OK;
    } catch (const Error &e) {
        last_error = e.what();
        return status_of(e.code());
    } catch (const std::bad_alloc &) {
        last_error = "out of memory";
        return FB_E_INTERNAL;
    } catch (const std::exception &e) {
        last_error = e.what();
        return FB_E_INTERNAL;
    } catch (...) {
        last_error = "unknown failure";
        return FB_E_INTERNAL;
    }
}

void require_ptr(const void *p, const char *what) {
    if (p == nullptr) fail(ErrorCode::kInvalidArgument, std::string(what) + " must not be null");
}

MeasurementScheme to_scheme(const fb_scheme *s) {
    require_ptr(s, "scheme");
    MeasurementScheme out;
    switch (s->kind) {
        case FB_SCHEME_DICHOTOMIC:
            out.kind = SchemeKind::kPureDichotomic;
            break;
        case FB_SCHEME_ORTHOGONALITY_FILTER:
            out.kind = SchemeKind::kOrthogonalityFilter;
            break;
        case FB_SCHEME_THRESHOLD_DETECTOR:
            out.kind = SchemeKind::kThresholdDetector;
            break;
        case FB_SCHEME_PARITY:
            out.kind = SchemeKind::kParity;
            break;
        default:
            fail(ErrorCode::kInvalidArgument, "unknown scheme kind");
    }
    out.threshold = s->threshold;
    out.strict = s->strict != 0;
    validate(out);
    return out;
}

int pair_cap_of(int cap) { return cap > 0 ? cap : kDefaultPairCap; }

StateSpec to_state(const fb_state *s) {
    require_ptr(s, "state");
    if (s->kind == FB_STATE_SINGLET) {
        require(s->n >= 0, "photon-pair number must be non-negative");
        return SingletSpec{s->n};
    }
    require(s->kind == FB_STATE_SPDC, "unknown state kind");
    const double tol = s->truncation_tolerance > 0.0 ? s->truncation_tolerance : kDefaultTruncationTolerance;
    return spdc_weights(s->gain, tol);
}

std::optional<McConfig> to_mc(const fb_sampling *s) {
    if (s == nullptr || s->monte_carlo == 0) return std::nullopt;
    McConfig cfg{s->shots, s->seed, s->workers};
    validate(cfg);
    return cfg;
}

Outcome to_outcome(int index) {
    require(index >= 0 && index <= 2, "outcome index must be 0, 1 or 2");
    return static_cast<Outcome>(index);
}

void copy_table(const std::array<std::array<double, 3>, 3> &t, double *out) {
    for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b) out[a * 3 + b] = t[a][b];
}

}  // namespace

extern "C" {

const char *fb_version(void) { return FUZZYBELL_VERSION; }

const char *fb_last_error(void) { return last_error.c_str(); }

const char *fb_status_name(fb_status status) {
    switch (status) {
        case FB_OK:
            return "OK";
        case FB_E_CONFIG:
            return error_code_name(ErrorCode::kInvalidArgument);
        case FB_E_SIZE_CAP:
            return error_code_name(ErrorCode::kSizeCap);
        case FB_E_UNDEFINED_CORRELATION:
            return error_code_name(ErrorCode::kUndefinedCorrelation);
        case FB_E_NUMERICAL:
            return error_code_name(ErrorCode::kNumerical);
        case FB_E_INTERNAL:
            return "E_INTERNAL";
    }
    return "E_UNKNOWN";
}

fb_status fb_coefficients_create(int n, double theta, int pair_cap, fb_coefficients **out) {
    return guarded([&] {
        require_ptr(out, "out");
        *out = new fb_coefficients{singlet_coefficients(n, theta, pair_cap_of(pair_cap))};
    });
}

int fb_coefficients_n(const fb_coefficients *c) { return c ? c->value.n() : -1; }

double fb_coefficients_theta(const fb_coefficients *c) {
    return c ? c->value.theta() : std::numeric_limits<double>::quiet_NaN();
}

fb_status fb_coefficients_get(const fb_coefficients *c, int m, int p, double *amplitude) {
    return guarded([&] {
        require_ptr(c, "coefficients");
        require_ptr(amplitude, "amplitude");
        const int n = c->value.n();
        require(m >= 0 && m <= n && p >= 0 && p <= n, "coefficient index out of range");
        *amplitude = c->value(m, p);
    });
}

void fb_coefficients_destroy(fb_coefficients *c) { delete c; }

fb_status fb_spdc_weights_create(double gain, double truncation_tolerance, fb_spdc_weights **out) {
    return guarded([&] {
        require_ptr(out, "out");
        const double tol = truncation_tolerance > 0.0 ? truncation_tolerance : kDefaultTruncationTolerance;
        *out = new fb_spdc_weights{spdc_weights(gain, tol)};
    });
}

int fb_spdc_weights_n_max(const fb_spdc_weights *w) { return w ? w->value.n_max : -1; }

double fb_spdc_weights_truncation_mass(const fb_spdc_weights *w) {
    return w ? w->value.truncation_mass : std::numeric_limits<double>::quiet_NaN();
}

fb_status fb_spdc_weights_get(const fb_spdc_weights *w, int n, double *weight) {
    return guarded([&] {
        require_ptr(w, "weights");
        require_ptr(weight, "weight");
        require(n >= 0 && n <= w->value.n_max, "sector index out of range");
        *weight = w->value.weight[n];
    });
}

void fb_spdc_weights_destroy(fb_spdc_weights *w) { delete w; }

fb_status fb_mean_photons(double gain, double *out) {
    return guarded([&] {
        require_ptr(out, "out");
        *out = mean_photons(gain);
    });
}

fb_status fb_outcome_weights(int n_pi, int m_perp, const fb_scheme *scheme, double out[3]) {
    return guarded([&] {
        require_ptr(out, "out");
        const OutcomeWeights w = outcome_weights(n_pi, m_perp, to_scheme(scheme));
        out[0] = w.plus;
        out[1] = w.minus;
        out[2] = w.zero;
    });
}

fb_status fb_joint_probabilities(const fb_coefficients *c, const fb_scheme *scheme_a, const fb_scheme *scheme_b,
                                 double out[9]) {
    return guarded([&] {
        require_ptr(c, "coefficients");
        require_ptr(out, "out");
        copy_table(joint_probabilities(c->value, to_scheme(scheme_a), to_scheme(scheme_b)).p, out);
    });
}

fb_status fb_parity_correlation(int n, double theta, double *out) {
    return guarded([&] {
        require_ptr(out, "out");
        *out = parity_correlation(n, theta);
    });
}

fb_status fb_thin_binomial(const double *probs, size_t count, double eta, double *out) {
    return guarded([&] {
        require_ptr(probs, "probs");
        require_ptr(out, "out");
        const auto thinned = thin_binomial_exact(std::span<const double>(probs, count), eta);
        std::copy(thinned.begin(), thinned.end(), out);
    });
}

fb_status fb_outcome_matrix_create(int n, const fb_scheme *scheme_a, const fb_scheme *scheme_b, double eta,
                                   const fb_sampling *sampling, int pair_cap, fb_outcome_matrix **out) {
    return guarded([&] {
        require_ptr(out, "out");
        const auto mc = to_mc(sampling);
        const LossChannel channel{eta};
        const int cap = pair_cap_of(pair_cap);
        if (mc) {
            *out = new fb_outcome_matrix{
                outcome_matrix_mc(n, to_scheme(scheme_a), to_scheme(scheme_b), channel, *mc, cap)};
        } else {
            *out = new fb_outcome_matrix{
                outcome_matrix_exact(n, to_scheme(scheme_a), to_scheme(scheme_b), channel, cap)};
        }
    });
}

fb_status fb_outcome_matrix_get(const fb_outcome_matrix *mat, int a, int b, int m, int p, double *value,
                                double *std_error) {
    return guarded([&] {
        require_ptr(mat, "outcome matrix");
        const int n = mat->value.n();
        require(m >= 0 && m <= n && p >= 0 && p <= n, "cell index out of range");
        const Outcome oa = to_outcome(a), ob = to_outcome(b);
        if (value) *value = mat->value(oa, ob, m, p);
        if (std_error) *std_error = mat->value.std_error(oa, ob, m, p);
    });
}

void fb_outcome_matrix_destroy(fb_outcome_matrix *mat) { delete mat; }

fb_status fb_fringe_point(const fb_coefficients *c, const fb_outcome_matrix *mat, double out[9]) {
    return guarded([&] {
        require_ptr(c, "coefficients");
        require_ptr(mat, "outcome matrix");
        require_ptr(out, "out");
        copy_table(fringe_point(c->value, mat->value).p, out);
    });
}

fb_status fb_fringe_sweep(const fb_state *state, const fb_scheme *scheme_a, const fb_scheme *scheme_b, double eta,
                          const double *thetas, size_t count, const fb_sampling *sampling, fb_fringe **out) {
    return guarded([&] {
        require_ptr(out, "out");
        require_ptr(thetas, "thetas");
        FringeConfig config;
        config.state = to_state(state);
        config.scheme_a = to_scheme(scheme_a);
        config.scheme_b = to_scheme(scheme_b);
        config.channel = LossChannel{eta};
        config.mc = to_mc(sampling);
        config.pair_cap = pair_cap_of(state->pair_cap);
        config.workers = (sampling && sampling->workers > 0) ? sampling->workers : 1;
        *out = new fb_fringe{fringe_sweep(config, std::span<const double>(thetas, count))};
    });
}

size_t fb_fringe_size(const fb_fringe *f) { return f ? f->value.theta.size() : 0; }

fb_status fb_fringe_point_at(const fb_fringe *f, size_t i, double *theta, double probs[9], double std_error[9]) {
    return guarded([&] {
        require_ptr(f, "fringe");
        require(i < f->value.theta.size(), "fringe index out of range");
        if (theta) *theta = f->value.theta[i];
        if (probs) copy_table(f->value.points[i].p, probs);
        if (std_error) copy_table(f->value.points[i].std_error, std_error);
    });
}

fb_status fb_fringe_visibility(const fb_fringe *f, int a, int b, double *value, double *std_error) {
    return guarded([&] {
        require_ptr(f, "fringe");
        const OutcomePair pair{to_outcome(a), to_outcome(b)};
        if (value) *value = visibility(f->value, pair);
        if (std_error) *std_error = visibility_std_error(f->value, pair);
    });
}

fb_status fb_fringe_harmonics(const fb_fringe *f, int a, int b, int *indices, double *magnitudes, size_t capacity,
                              size_t *count) {
    return guarded([&] {
        require_ptr(f, "fringe");
        const auto harmonics = harmonic_content(f->value, {to_outcome(a), to_outcome(b)});
        if (count) *count = harmonics.size();
        for (size_t i = 0; i < harmonics.size() && i < capacity; ++i) {
            if (indices) indices[i] = harmonics[i].index;
            if (magnitudes) magnitudes[i] = harmonics[i].magnitude;
        }
    });
}

fb_status fb_fringe_linear_ratio(const fb_fringe *f, int a, int b, double *ratio, size_t capacity, int *crossings) {
    return guarded([&] {
        require_ptr(f, "fringe");
        const auto result = linear_reference_ratio(f->value, {to_outcome(a), to_outcome(b)});
        if (crossings) *crossings = result.crossings;
        if (ratio) {
            const auto &grid = f->value.theta;
            std::size_t j = 0;
            for (std::size_t i = 0; i < grid.size() && i < capacity; ++i) {
                if (j < result.theta.size() && result.theta[j] == grid[i]) {
                    ratio[i] = result.ratio[j++];
                } else {
                    ratio[i] = std::numeric_limits<double>::quiet_NaN();
                }
            }
        }
    });
}

void fb_fringe_destroy(fb_fringe *f) { delete f; }

fb_status fb_success_probability(const fb_state *state, const fb_scheme *scheme, double eta, double *out) {
    return guarded([&] {
        require_ptr(out, "out");
        *out = success_probability(to_state(state), to_scheme(scheme), LossChannel{eta});
    });
}

fb_status fb_correlation(const fb_state *state, const fb_scheme *scheme, double eta, double angle_a, double angle_b,
                         const fb_sampling *sampling, double *value, double *conclusive) {
    return guarded([&] {
        const Correlation c = correlation_E(to_state(state), angle_a, angle_b, to_scheme(scheme), LossChannel{eta},
                                            to_mc(sampling), pair_cap_of(state->pair_cap));
        if (value) *value = c.value;
        if (conclusive) *conclusive = c.conclusive;
    });
}

fb_status fb_maximize_chsh(const fb_state *state, const fb_scheme *scheme, double eta, const fb_sampling *sampling,
                           int restarts, fb_chsh_result *out) {
    return guarded([&] {
        require_ptr(out, "out");
        ChshOptions options;
        if (restarts >= 0) options.restarts = restarts;
        if (sampling && sampling->workers > 0) options.workers = sampling->workers;
        const CHSHResult r =
            maximize_chsh(to_state(state), to_scheme(scheme), LossChannel{eta}, to_mc(sampling), options,
                          pair_cap_of(state->pair_cap));
        out->s_value = r.s_value;
        out->a = r.settings.a;
        out->a_prime = r.settings.a_prime;
        out->b = r.settings.b;
        out->b_prime = r.settings.b_prime;
        for (int i = 0; i < 4; ++i) {
            out->correlations[i] = r.correlations[i];
            out->conclusive[i] = r.conclusive_probs[i];
        }
        out->monte_carlo = r.method == EvaluationMethod::kMonteCarlo ? 1 : 0;
    });
}

}  // extern "C"

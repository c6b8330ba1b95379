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

#include "fuzzybell/chsh.h"

#include <gsl/gsl_errno.h>
#include <gsl/gsl_multimin.h>

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>
#include <numbers>
#include <random>
#include <vector>

#include "fuzzybell/error.h"

namespace fuzzybell {

namespace {

constexpr double kPi = std::numbers::pi;

double reduce_angle(double x) {
    double r = std::fmod(x, kPi);
    if (r < 0.0) r += kPi;
    if (r >= kPi) r = 0.0;
    return r;
}

// Angle differences (b-a, b'-a, b-a') parameterize the settings up to a
// common rotation; b'-a' follows from the other three.
using Differences = std::array<double, 3>;

AngleSettings settings_from(const Differences &d) {
    return AngleSettings{.a = 0.0, .a_prime = d[0] - d[2], .b = d[0], .b_prime = d[1]};
}

double s_from(const CorrelationModel &model, const Differences &d) {
    return model.at_relative(d[0]).value + model.at_relative(d[1]).value + model.at_relative(d[2]).value -
           model.at_relative(d[1] + d[2] - d[0]).value;
}

struct Candidate {
    Differences x{};
    double s = -std::numeric_limits<double>::infinity();
};

struct GslMinimizerDeleter {
    void operator()(gsl_multimin_fminimizer *m) const { gsl_multimin_fminimizer_free(m); }
};
struct GslVectorDeleter {
    void operator()(gsl_vector *v) const { gsl_vector_free(v); }
};

struct Objective {
    const CorrelationModel *model;
    std::exception_ptr error;
};

double negative_s(const gsl_vector *v, void *params) {
    auto *objective = static_cast<Objective *>(params);
    if (objective->error) return GSL_NAN;
    try {
        return -s_from(*objective->model, {gsl_vector_get(v, 0), gsl_vector_get(v, 1), gsl_vector_get(v, 2)});
    } catch (...) {
        objective->error = std::current_exception();
        return GSL_NAN;
    }
}

Candidate nelder_mead(const CorrelationModel &model, const Differences &start, double step,
                      const ChshOptions &options) {
    Objective objective{&model, nullptr};
    gsl_multimin_function fn{&negative_s, 3, &objective};
    std::unique_ptr<gsl_vector, GslVectorDeleter> x(gsl_vector_alloc(3));
    std::unique_ptr<gsl_vector, GslVectorDeleter> steps(gsl_vector_alloc(3));
    for (int i = 0; i < 3; ++i) {
        gsl_vector_set(x.get(), i, start[i]);
        gsl_vector_set(steps.get(), i, step);
    }
    std::unique_ptr<gsl_multimin_fminimizer, GslMinimizerDeleter> minimizer(
        gsl_multimin_fminimizer_alloc(gsl_multimin_fminimizer_nmsimplex2, 3));
    gsl_multimin_fminimizer_set(minimizer.get(), &fn, x.get(), steps.get());
    if (objective.error) std::rethrow_exception(objective.error);

    for (int iter = 0; iter < options.max_iterations; ++iter) {
        const int status = gsl_multimin_fminimizer_iterate(minimizer.get());
        if (objective.error) std::rethrow_exception(objective.error);
        if (status != GSL_SUCCESS) break;
        const double size = gsl_multimin_fminimizer_size(minimizer.get());
        if (gsl_multimin_test_size(size, options.angle_tolerance) == GSL_SUCCESS) break;
    }
    Candidate best;
    for (int i = 0; i < 3; ++i) best.x[i] = gsl_vector_get(minimizer->x, i);
    best.s = -minimizer->fval;
    return best;
}

// Spacing of the seeding scan. Correlation features shrink like 1/n, so the
// scan refines below one degree for large single sectors.
double scan_step(const StateSpec &state) {
    constexpr double kDegree = kPi / 180.0;
    if (const auto *singlet = std::get_if<SingletSpec>(&state)) {
        return std::min(kDegree, kPi / (4.0 * (singlet->n + 1)));
    }
    return kDegree;
}

}  // namespace

AngleSettings AngleSettings::reduced() const {
    return {reduce_angle(a), reduce_angle(a_prime), reduce_angle(b), reduce_angle(b_prime)};
}

CorrelationModel::CorrelationModel(StateSpec state, const MeasurementScheme &scheme, const LossChannel &channel,
                                   std::optional<McConfig> mc, int pair_cap)
    : state_(std::move(state)), scheme_(scheme), mc_(mc) {
    validate(scheme_);
    validate(channel);
    if (scheme_.kind == SchemeKind::kParity) {
        require(channel.eta == 1.0, "parity correlation is a lossless benchmark; eta must be 1");
        require(!mc_, "parity correlation has no Monte Carlo path");
        const int n = max_pairs(state_);
        if (n > pair_cap) fail(ErrorCode::kSizeCap, "photon-pair number exceeds the configured cap");
        return;
    }
    response_ = std::make_shared<const FrozenResponse>(state_, scheme_, scheme_, channel, mc_, pair_cap);
}

Correlation CorrelationModel::at_relative(double theta) const {
    if (!response_) {
        // The closed form is written in the doubled (Bloch-sphere) angle.
        const double bloch = 2.0 * theta;
        if (const auto *singlet = std::get_if<SingletSpec>(&state_)) {
            return {parity_correlation(singlet->n, bloch), 1.0};
        }
        const auto &weights = std::get<SpdcWeights>(state_);
        double value = 0.0, mass = 0.0;
        for (int n = 0; n <= weights.n_max; ++n) {
            value += weights.weight[n] * parity_correlation(n, bloch);
            mass += weights.weight[n];
        }
        return {value / mass, 1.0};
    }
    const JointOutcomeProbs probs = response_->evaluate(theta);
    const double conclusive = probs.conclusive();
    if (!(conclusive > 0.0)) {
        fail(ErrorCode::kUndefinedCorrelation, "no conclusive events at this setting; correlation undefined");
    }
    return {probs.correlation_sum() / conclusive, conclusive};
}

Correlation correlation_E(const StateSpec &state, double angle_a, double angle_b, const MeasurementScheme &scheme,
                          const LossChannel &channel, std::optional<McConfig> mc, int pair_cap) {
    return CorrelationModel(state, scheme, channel, mc, pair_cap)(angle_a, angle_b);
}

CHSHResult evaluate_chsh(const CorrelationModel &model, const AngleSettings &settings) {
    CHSHResult out;
    out.settings = settings;
    out.method = model.method();
    const std::array<std::pair<double, double>, 4> pairs = {{{settings.a, settings.b},
                                                             {settings.a, settings.b_prime},
                                                             {settings.a_prime, settings.b},
                                                             {settings.a_prime, settings.b_prime}}};
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        const Correlation c = model(pairs[i].first, pairs[i].second);
        out.correlations[i] = c.value;
        out.conclusive_probs[i] = c.conclusive;
    }
    out.s_value = out.recomputed_s();
    return out;
}

CHSHResult maximize_chsh(const CorrelationModel &model, const ChshOptions &options) {
    require(options.restarts >= 0, "maximize_chsh: restarts must be non-negative");
    require(options.angle_tolerance > 0.0, "maximize_chsh: angle tolerance must be positive");
    require(options.workers >= 1, "maximize_chsh: worker count must be >= 1");
    gsl_set_error_handler_off();

    // Stage 1: scan phi over equally spaced settings. Each family is tried as
    // is and with both B angles turned by pi/2, which flips the sign of
    // anti-correlated fringes.
    const double step = scan_step(model.state());
    Candidate seed;
    for (double phi = 0.0; phi < kPi; phi += step) {
        const std::array<Differences, 2> families = {{
            {phi, -phi, -phi},          // a = 0, b = phi, a' = 2 phi, b' = -phi
            {phi, 3.0 * phi, -phi},     // a = 0, b = phi, a' = 2 phi, b' = 3 phi
        }};
        for (const Differences &base : families) {
            for (double shift : {0.0, kPi / 2.0}) {
                const Differences d = {base[0] + shift, base[1] + shift, base[2] + shift};
                const double s = s_from(model, d);
                if (s > seed.s) seed = {d, s};
            }
        }
    }

    // Stage 2: simplex refinement from the scan optimum and from random restarts.
    std::vector<std::pair<Differences, double>> starts;
    starts.emplace_back(seed.x, std::max(2.0 * step, 1e-3));
    std::mt19937_64 rng(options.seed);
    std::uniform_real_distribution<double> angle(-kPi / 2.0, kPi / 2.0);
    for (int r = 0; r < options.restarts; ++r) {
        Differences d{};
        for (double &v : d) v = angle(rng);
        starts.emplace_back(d, 0.2);
    }

    std::vector<Candidate> found(starts.size());
    if (options.workers <= 1) {
        for (std::size_t i = 0; i < starts.size(); ++i)
            found[i] = nelder_mead(model, starts[i].first, starts[i].second, options);
    } else {
        for (std::size_t begin = 0; begin < starts.size(); begin += options.workers) {
            std::vector<std::future<Candidate>> batch;
            const std::size_t end = std::min(starts.size(), begin + options.workers);
            for (std::size_t i = begin; i < end; ++i) {
                batch.push_back(std::async(std::launch::async, [&, i] {
                    return nelder_mead(model, starts[i].first, starts[i].second, options);
                }));
            }
            for (std::size_t i = begin; i < end; ++i) found[i] = batch[i - begin].get();
        }
    }

    Candidate best = seed;
    for (const Candidate &c : found) {
        if (std::isfinite(c.s) && c.s > best.s) best = c;
    }
    return evaluate_chsh(model, settings_from(best.x).reduced());
}

CHSHResult maximize_chsh(const StateSpec &state, const MeasurementScheme &scheme, const LossChannel &channel,
                         std::optional<McConfig> mc, const ChshOptions &options, int pair_cap) {
    return maximize_chsh(CorrelationModel(state, scheme, channel, mc, pair_cap), options);
}

}  // namespace fuzzybell

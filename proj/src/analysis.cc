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

#include "fuzzybell/analysis.h"

#include <gsl/gsl_fft_real.h>

#include <algorithm>
#include <cmath>
#include <memory>
#include <numbers>
#include <string>
#include <thread>

#include "fuzzybell/error.h"

namespace fuzzybell {

namespace {

constexpr double kPi = std::numbers::pi;

void check_grid(std::span<const double> grid) {
    require(!grid.empty(), "angle grid is empty");
    for (std::size_t i = 0; i < grid.size(); ++i) {
        require(std::isfinite(grid[i]), "angle grid contains a non-finite value");
        if (i > 0) require(grid[i] > grid[i - 1], "angle grid must be strictly increasing");
    }
}

// True when the grid, extended by its mean spacing, spans a full period.
bool covers_period(std::span<const double> grid) {
    if (grid.size() < 2) return false;
    const double spacing = (grid.back() - grid.front()) / static_cast<double>(grid.size() - 1);
    return grid.back() - grid.front() + spacing >= kPi * (1.0 - 1e-9);
}

double conclusive_probability_of(const std::array<double, 3> &r) { return r[kPlus] + r[kMinus]; }

// One side of an SPDC source is a product of two thermal modes; after loss
// each has mean eta sinh^2 g, i.e. geometric with ratio mu / (1 + mu).
double thermal_success(double gain, const MeasurementScheme &scheme, double eta) {
    const double mu = eta * mean_photons(gain);
    const double ratio = mu / (1.0 + mu);
    const int margin = scheme.strict ? 1 : 0;
    switch (scheme.kind) {
        case SchemeKind::kPureDichotomic:
        case SchemeKind::kParity:
            return 1.0;
        case SchemeKind::kOrthogonalityFilter: {
            const int needed = scheme.threshold + margin;
            if (needed == 0) return 1.0;
            // P(|X - Y| >= d) = 2 r^d / (1 + r) for i.i.d. geometric X, Y.
            return 2.0 * std::pow(ratio, needed) / (1.0 + ratio);
        }
        case SchemeKind::kThresholdDetector: {
            const int needed = scheme.threshold + margin;
            // X + Y is negative binomial of order 2: P(X + Y >= t) = r^t (1 + t (1 - r)).
            return std::pow(ratio, needed) * (1.0 + needed * (1.0 - ratio));
        }
    }
    return 1.0;
}

}  // namespace

std::vector<double> uniform_grid(std::size_t count, double start, double span) {
    require(count >= 1, "uniform_grid: need at least one point");
    require(std::isfinite(start) && std::isfinite(span) && span > 0.0, "uniform_grid: invalid range");
    std::vector<double> grid(count);
    for (std::size_t i = 0; i < count; ++i) grid[i] = start + span * static_cast<double>(i) / static_cast<double>(count);
    return grid;
}

FringePattern fringe_sweep(const FringeConfig &config, std::span<const double> grid) {
    check_grid(grid);
    require(config.workers >= 1, "fringe_sweep: worker count must be >= 1");
    const FrozenResponse response(config.state, config.scheme_a, config.scheme_b, config.channel, config.mc,
                                  config.pair_cap);
    FringePattern out;
    out.config = config;
    out.theta.assign(grid.begin(), grid.end());
    out.points.resize(grid.size());

    const int workers = std::min<int>(config.workers, static_cast<int>(grid.size()));
    if (workers <= 1) {
        for (std::size_t i = 0; i < grid.size(); ++i) out.points[i] = response.evaluate(grid[i]);
        return out;
    }
    std::vector<std::exception_ptr> errors(workers);
    {
        std::vector<std::jthread> pool;
        for (int w = 0; w < workers; ++w) {
            pool.emplace_back([&, w] {
                try {
                    for (std::size_t i = w; i < grid.size(); i += workers) out.points[i] = response.evaluate(grid[i]);
                } catch (...) {
                    errors[w] = std::current_exception();
                }
            });
        }
    }
    for (const auto &e : errors)
        if (e) std::rethrow_exception(e);
    return out;
}

std::vector<double> fringe_values(const FringePattern &fringe, OutcomePair pair, bool normalized) {
    std::vector<double> values(fringe.points.size());
    for (std::size_t i = 0; i < values.size(); ++i) {
        const JointOutcomeProbs &point = fringe.points[i];
        double v = point(pair.a, pair.b);
        if (normalized && pair.a != kZero && pair.b != kZero) {
            const double conclusive = point.conclusive();
            if (!(conclusive > 0.0)) {
                fail(ErrorCode::kNumerical, "fringe point without conclusive events cannot be normalized");
            }
            v /= conclusive;
        }
        values[i] = v;
    }
    return values;
}

double visibility(const FringePattern &fringe, OutcomePair pair) {
    require(covers_period(fringe.theta), "visibility: grid must cover a full period [0, pi)");
    const auto values = fringe_values(fringe, pair, true);
    const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
    const double sum = *hi + *lo;
    if (!(sum > 0.0)) fail(ErrorCode::kNumerical, "visibility: degenerate fringe (max + min = 0)");
    return (*hi - *lo) / sum;
}

double visibility_std_error(const FringePattern &fringe, OutcomePair pair) {
    const auto values = fringe_values(fringe, pair, true);
    const auto lo = std::min_element(values.begin(), values.end()) - values.begin();
    const auto hi = std::max_element(values.begin(), values.end()) - values.begin();
    const double vmin = values[lo];
    const double vmax = values[hi];
    const double sum = vmax + vmin;
    if (!(sum > 0.0)) return 0.0;
    auto se_of = [&](std::ptrdiff_t i) {
        const JointOutcomeProbs &point = fringe.points[i];
        const double conclusive = (pair.a != kZero && pair.b != kZero) ? point.conclusive() : 1.0;
        return point.std_error[pair.a][pair.b] / conclusive;
    };
    const double d_max = 2.0 * vmin / (sum * sum);
    const double d_min = -2.0 * vmax / (sum * sum);
    return std::hypot(d_max * se_of(hi), d_min * se_of(lo));
}

double success_probability(const StateSpec &state, const MeasurementScheme &scheme, const LossChannel &channel) {
    validate(scheme);
    validate(channel);
    if (scheme.kind == SchemeKind::kParity) return 1.0;
    if (const auto *weights = std::get_if<SpdcWeights>(&state)) {
        return thermal_success(weights->gain, scheme, channel.eta);
    }
    // A singlet side holds (n-m, m) with m uniform in 0..n, in any basis.
    const int n = std::get<SingletSpec>(state).n;
    require(n >= 0, "success_probability: n must be non-negative");
    const auto response = side_response(n, scheme, channel.eta);
    double total = 0.0;
    for (const auto &r : response) total += conclusive_probability_of(r);
    return total / static_cast<double>(n + 1);
}

double success_probability_by_sectors(const SpdcWeights &weights, const MeasurementScheme &scheme,
                                      const LossChannel &channel) {
    double total = 0.0, mass = 0.0;
    for (int n = 0; n <= weights.n_max; ++n) {
        const double w = weights.weight[n];
        mass += w;
        if (w == 0.0) continue;
        total += w * success_probability(SingletSpec{n}, scheme, channel);
    }
    return total / mass;
}

std::vector<Harmonic> harmonic_content(const FringePattern &fringe, OutcomePair pair) {
    const std::size_t count = fringe.theta.size();
    require(count >= 2, "harmonic_content: grid too small");
    const double spacing = kPi / static_cast<double>(count);
    for (std::size_t i = 1; i < count; ++i) {
        if (std::abs(fringe.theta[i] - fringe.theta[i - 1] - spacing) > 1e-9) {
            fail(ErrorCode::kInvalidArgument, "harmonic_content: grid must be uniform over [0, pi) without endpoint");
        }
    }
    const int n = max_pairs(fringe.config.state);
    if (count < static_cast<std::size_t>(2 * n + 1)) {
        fail(ErrorCode::kInvalidArgument, "harmonic_content: grid of " + std::to_string(count) +
                                              " points aliases harmonics of an n = " + std::to_string(n) +
                                              " state; need at least " + std::to_string(2 * n + 1));
    }

    std::vector<double> data = fringe_values(fringe, pair, false);
    std::unique_ptr<gsl_fft_real_wavetable, decltype(&gsl_fft_real_wavetable_free)> wavetable(
        gsl_fft_real_wavetable_alloc(count), &gsl_fft_real_wavetable_free);
    std::unique_ptr<gsl_fft_real_workspace, decltype(&gsl_fft_real_workspace_free)> workspace(
        gsl_fft_real_workspace_alloc(count), &gsl_fft_real_workspace_free);
    if (gsl_fft_real_transform(data.data(), 1, count, wavetable.get(), workspace.get()) != 0) {
        fail(ErrorCode::kNumerical, "harmonic_content: FFT failed");
    }

    // Half-complex layout: data[0] = F_0, then (Re F_k, Im F_k) pairs, and
    // Re F_{N/2} last when N is even.
    const double scale = 1.0 / static_cast<double>(count);
    std::vector<Harmonic> out;
    out.push_back({0, std::abs(data[0]) * scale});
    for (std::size_t k = 1; k <= count / 2; ++k) {
        double magnitude;
        if (2 * k == count) {
            magnitude = std::abs(data[count - 1]) * scale;
        } else {
            magnitude = 2.0 * std::hypot(data[2 * k - 1], data[2 * k]) * scale;
        }
        // A fringe over [0, pi) sampled at N points: bin k is cos(2k theta).
        out.push_back({static_cast<int>(2 * k), magnitude});
    }
    return out;
}

double second_harmonic_share(std::span<const Harmonic> harmonics) {
    double total = 0.0, second = 0.0;
    for (const Harmonic &h : harmonics) {
        if (h.index == 0) continue;
        total += h.magnitude * h.magnitude;
        if (h.index == 2) second = h.magnitude * h.magnitude;
    }
    if (!(total > 0.0)) fail(ErrorCode::kNumerical, "second_harmonic_share: fringe has no non-DC content");
    return second / total;
}

double linear_reference(double theta, double theta_min) {
    double d = std::fmod(theta - theta_min, kPi);
    if (d < 0.0) d += kPi;
    return std::min(d, kPi - d) / kPi;
}

LinearReferenceRatio linear_reference_ratio(const FringePattern &fringe, OutcomePair pair) {
    require(covers_period(fringe.theta), "linear_reference_ratio: grid must cover a full period [0, pi)");
    const auto values = fringe_values(fringe, pair, false);
    const auto lowest = std::min_element(values.begin(), values.end()) - values.begin();
    const double theta_min = fringe.theta[lowest];

    LinearReferenceRatio out;
    for (std::size_t i = 0; i < values.size(); ++i) {
        const double reference = linear_reference(fringe.theta[i], theta_min);
        if (reference < 1e-12) continue;
        out.theta.push_back(fringe.theta[i]);
        out.ratio.push_back(values[i] / reference);
    }
    int previous_sign = 0;
    for (double r : out.ratio) {
        const double d = r - 1.0;
        if (std::abs(d) < 1e-9) continue;  // touching the line is not a crossing
        const int sign = d > 0.0 ? 1 : -1;
        if (previous_sign != 0 && sign != previous_sign) ++out.crossings;
        previous_sign = sign;
    }
    return out;
}

VisibilityCurve visibility_curve(const StateSpec &state, SchemeKind kind, std::span<const int> thresholds,
                                 const LossChannel &channel, std::span<const double> grid, OutcomePair pair,
                                 std::optional<McConfig> mc, int pair_cap, bool strict) {
    require(kind == SchemeKind::kOrthogonalityFilter || kind == SchemeKind::kThresholdDetector,
            "visibility_curve: thresholds apply to the OF and TD schemes only");
    VisibilityCurve out;
    for (int threshold : thresholds) {
        const MeasurementScheme scheme{kind, threshold, strict};
        FringeConfig config{state, scheme, scheme, channel, mc, pair_cap, mc ? mc->workers : 1};
        const FringePattern fringe = fringe_sweep(config, grid);
        out.thresholds.push_back(threshold);
        out.visibility.push_back(visibility(fringe, pair));
        out.visibility_std_error.push_back(visibility_std_error(fringe, pair));
        out.success_probability.push_back(success_probability(state, scheme, channel));
    }
    return out;
}

}  // namespace fuzzybell

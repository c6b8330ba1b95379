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

#include "fuzzybell/state.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "fuzzybell/error.h"
#include "fuzzybell/numeric.h"

namespace fuzzybell {

namespace {

// Beyond this n_max a single SPDC sweep is hopeless anyway.
constexpr int kSpdcSectorLimit = 10'000'000;

void check_sector(int n, int pair_cap) {
    require(n >= 0, "photon-pair number must be non-negative");
    if (n > pair_cap) {
        fail(ErrorCode::kSizeCap, "photon-pair number " + std::to_string(n) +
                                      " exceeds the configured cap " + std::to_string(pair_cap));
    }
}

// Overlap table of the basis rotation restricted to k photons:
// u[p * (k+1) + j] = <p theta, (k-p) theta_perp | j pi_+, (k-j) pi_->.
//
// These are Wigner small-d elements d^{k/2}_{j-k/2, p-k/2}(2 theta). Each one
// is sin^a cos^b times a normalized Jacobi polynomial P_s^{(a,b)}(cos 2 theta)
// with a = |p - j|, b = |p + j - k| and s = (k - a - b) / 2. For fixed (a, b)
// consecutive degrees s live in sectors k and k + 2, so one three-term
// recurrence per (a, b) walks every sector in lockstep.
class RotationLadder {
   public:
    explicit RotationLadder(double theta)
        : c_(std::cos(theta)),
          s_(std::sin(theta)),
          x_(std::cos(2.0 * theta)),
          level_(0),
          u_{1.0},
          chains_{{Chain{0, 1.0, 0.0}}} {}

    int level() const { return level_; }
    double at(int p, int j) const { return u_[static_cast<std::size_t>(p) * (level_ + 1) + j]; }

    void advance() {
        const int k = level_ + 1;
        const int dim = k + 1;
        chains_.emplace_back();
        chains_[k].reserve(static_cast<std::size_t>(k) + 1);
        for (int a = 0; a <= k; ++a) chains_[k].push_back(start(a, k - a));
        u_.assign(static_cast<std::size_t>(dim) * dim, 0.0);
        for (int sum = k % 2; sum <= k; sum += 2) {
            for (int a = 0; a <= sum; ++a) {
                Chain &chain = chains_[sum][a];
                if (sum < k) step(chain, a, sum - a);
                emit(k, a, sum - a, chain.current);
            }
        }
        level_ = k;
    }

    CoefficientMatrix singlet(double theta) const {
        const int n = level_;
        const int dim = n + 1;
        const double norm = 1.0 / std::sqrt(static_cast<double>(dim));
        std::vector<double> amp(static_cast<std::size_t>(dim) * dim);
        for (int m = 0; m <= n; ++m) {
            const double sign = (m % 2 == 0) ? norm : -norm;
            for (int p = 0; p <= n; ++p) amp[static_cast<std::size_t>(m) * dim + p] = sign * at(p, m);
        }
        return CoefficientMatrix(n, theta, std::move(amp));
    }

   private:
    // sin^a cos^b times the normalized Jacobi polynomial of degree `degree`.
    struct Chain {
        int degree;
        double current;
        double previous;
    };

    Chain start(int a, int b) const {
        if ((a > 0 && s_ == 0.0) || (b > 0 && c_ == 0.0)) return Chain{0, 0.0, 0.0};
        double log_value = 0.5 * log_binomial(a + b, a);
        if (a > 0) log_value += a * std::log(std::abs(s_));
        if (b > 0) log_value += b * std::log(std::abs(c_));
        double value = std::exp(log_value);
        if ((s_ < 0.0 && a % 2 == 1) != (c_ < 0.0 && b % 2 == 1)) value = -value;
        return Chain{0, value, 0.0};
    }

    void step(Chain &chain, int a, int b) const {
        const double s = chain.degree + 1.0;
        const double ab = a + b;
        double next;
        if (chain.degree == 0) {
            const double p1 = (a + 1.0) + (ab + 2.0) * (x_ - 1.0) / 2.0;
            next = std::sqrt((1.0 + ab) / ((1.0 + a) * (1.0 + b))) * p1 * chain.current;
        } else {
            const double denom = 2.0 * s * (s + ab) * (2.0 * s + ab - 2.0);
            const double alpha =
                (2.0 * s + ab - 1.0) * ((2.0 * s + ab) * (2.0 * s + ab - 2.0) * x_ + a * a - b * b) / denom;
            const double beta = 2.0 * (s + a - 1.0) * (s + b - 1.0) * (2.0 * s + ab) / denom;
            const double ratio = std::sqrt(s * (s + ab) / ((s + a) * (s + b)));
            const double prior =
                std::sqrt((s - 1.0) * (s - 1.0 + ab) / ((s - 1.0 + a) * (s - 1.0 + b)));
            next = ratio * (alpha * chain.current - beta * prior * chain.previous);
        }
        chain.previous = chain.current;
        chain.current = next;
        ++chain.degree;
    }

    void emit(int k, int a, int b, double value) {
        const int dim = k + 1;
        for (int sa : {1, -1}) {
            for (int sb : {1, -1}) {
                if ((sa < 0 && a == 0) || (sb < 0 && b == 0)) continue;
                const int p = (k + sa * a + sb * b) / 2;
                const int j = (k - sa * a + sb * b) / 2;
                const int low = std::min(std::min(p, k - p), std::min(j, k - j));
                const bool flip = (low == p || (low != k - p && low != j)) && (j - p) % 2 != 0;
                u_[static_cast<std::size_t>(p) * dim + j] = flip ? -value : value;
            }
        }
    }

    double c_;
    double s_;
    double x_;
    int level_;
    std::vector<double> u_;
    std::vector<std::vector<Chain>> chains_;  // chains_[a + b][a]
};

double log_cosh(double g) { return g + std::log1p(std::exp(-2.0 * g)) - std::log(2.0); }

}  // namespace

CoefficientMatrix::CoefficientMatrix(int n, double theta, std::vector<double> amplitudes)
    : n_(n), theta_(theta), amp_(std::move(amplitudes)) {
    require(n >= 0, "CoefficientMatrix: negative n");
    require(amp_.size() == static_cast<std::size_t>(n + 1) * (n + 1),
            "CoefficientMatrix: amplitude count does not match (n+1)^2");
}

double CoefficientMatrix::norm_squared() const {
    double total = 0.0;
    for (double a : amp_) total += a * a;
    return total;
}

CoefficientMatrix singlet_coefficients(int n, double theta, int pair_cap) {
    check_sector(n, pair_cap);
    require(std::isfinite(theta), "singlet_coefficients: theta must be finite");
    RotationLadder ladder(theta);
    while (ladder.level() < n) ladder.advance();
    return ladder.singlet(theta);
}

void for_each_singlet_sector(int n_max, double theta,
                             const std::function<void(const CoefficientMatrix &)> &visit,
                             int pair_cap) {
    check_sector(n_max, pair_cap);
    require(std::isfinite(theta), "for_each_singlet_sector: theta must be finite");
    RotationLadder ladder(theta);
    visit(ladder.singlet(theta));
    while (ladder.level() < n_max) {
        ladder.advance();
        visit(ladder.singlet(theta));
    }
}

CoefficientMatrix singlet_coefficients_direct(int n, double theta) {
    check_sector(n, kDirectSumCap);
    require(std::isfinite(theta), "singlet_coefficients_direct: theta must be finite");
    const double c = std::cos(theta);
    const double s = std::sin(theta);
    const double log_c = std::log(std::abs(c));
    const double log_s = std::log(std::abs(s));
    const int dim = n + 1;
    std::vector<double> amp(static_cast<std::size_t>(dim) * dim, 0.0);
    const double log_norm = -0.5 * std::log(static_cast<double>(dim));

    for (int m = 0; m <= n; ++m) {
        for (int p = 0; p <= n; ++p) {
            // Normalization of the Fock states before and after the rotation.
            const double log_fock = 0.5 * (std::lgamma(p + 1.0) + std::lgamma(n - p + 1.0) -
                                           std::lgamma(m + 1.0) - std::lgamma(n - m + 1.0));
            double sum = 0.0;
            for (int q = std::max(0, m + p - n); q <= std::min(m, p); ++q) {
                const int cos_power = n - m - p + 2 * q;
                const int sin_power = m + p - 2 * q;
                if ((cos_power > 0 && c == 0.0) || (sin_power > 0 && s == 0.0)) continue;
                double log_term = log_binomial(m, q) + log_binomial(n - m, p - q) + log_fock;
                int sign_parity = m - q;
                if (cos_power > 0) {
                    log_term += cos_power * log_c;
                    if (c < 0.0) sign_parity += cos_power;
                }
                if (sin_power > 0) {
                    log_term += sin_power * log_s;
                    if (s < 0.0) sign_parity += sin_power;
                }
                const double term = std::exp(log_term + log_norm);
                sum += (sign_parity % 2 == 0) ? term : -term;
            }
            amp[static_cast<std::size_t>(m) * dim + p] = (m % 2 == 0) ? sum : -sum;
        }
    }
    return CoefficientMatrix(n, theta, std::move(amp));
}

double SpdcWeights::mean_pairs() const {
    double mean = 0.0;
    for (std::size_t n = 0; n < weight.size(); ++n) mean += static_cast<double>(n) * weight[n];
    return mean;
}

SpdcWeights spdc_weights(double gain, double truncation_tolerance) {
    require(std::isfinite(gain) && gain >= 0.0, "spdc_weights: gain must be finite and >= 0");
    require(truncation_tolerance > 0.0 && truncation_tolerance < 1.0,
            "spdc_weights: truncation tolerance must lie in (0, 1)");
    SpdcWeights out;
    out.gain = gain;
    out.truncation_tolerance = truncation_tolerance;

    const double ratio = std::tanh(gain) * std::tanh(gain);  // Gamma^2
    if (ratio == 0.0) {
        out.n_max = 0;
        out.weight = {1.0};
        out.truncation_mass = 0.0;
        return out;
    }
    require(ratio < 1.0, "spdc_weights: gain too large for double precision");

    // Tail mass above N: ratio^{N+1} (N + 2 - (N+1) ratio).
    const double log_ratio = std::log(ratio);
    auto log_tail = [&](int last) {
        return (last + 1.0) * log_ratio + std::log((last + 2.0) - (last + 1.0) * ratio);
    };
    const double log_tol = std::log(truncation_tolerance);
    int n_max = 0;
    while (log_tail(n_max) > log_tol) {
        if (++n_max > kSpdcSectorLimit) {
            fail(ErrorCode::kSizeCap, "spdc_weights: truncation needs more than " +
                                          std::to_string(kSpdcSectorLimit) + " sectors");
        }
    }
    out.n_max = n_max;
    out.truncation_mass = std::exp(log_tail(n_max));
    out.weight.resize(static_cast<std::size_t>(n_max) + 1);
    const double log_norm = -4.0 * log_cosh(gain);
    for (int n = 0; n <= n_max; ++n) {
        out.weight[n] = std::exp(std::log(n + 1.0) + n * log_ratio + log_norm);
    }
    return out;
}

double mean_photons(double gain) {
    require(std::isfinite(gain) && gain >= 0.0, "mean_photons: gain must be finite and >= 0");
    const double s = std::sinh(gain);
    return s * s;
}

int max_pairs(const StateSpec &state) {
    if (const auto *singlet = std::get_if<SingletSpec>(&state)) return singlet->n;
    return std::get<SpdcWeights>(state).n_max;
}

}  // namespace fuzzybell

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

#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "fuzzybell/measure.h"
#include "fuzzybell/state.h"

namespace fuzzybell {

/// Polarization-independent beam-splitter loss with intensity transmittivity
/// eta, applied to all four modes.
struct LossChannel {
    double eta = 1.0;
};

void validate(const LossChannel &channel);

struct McConfig {
    std::uint64_t shots = 100'000;  // per Fock cell
    std::uint64_t seed = 0x5eed;
    int workers = 1;
};

void validate(const McConfig &cfg);

/// Largest SPDC truncation accepted on the Monte Carlo path. Each sector
/// keeps its full outcome matrix alive for the whole sweep.
inline constexpr int kSpdcMonteCarloCap = 120;

/// Photon-number distribution after binomial thinning with transmittivity eta.
std::vector<double> thin_binomial_exact(std::span<const double> count_probs, double eta);

/// Outcome probabilities of one side holding (j pi, (n-j) pi_perp) photons
/// before loss, indexed by j. Exact binomial convolution of both counts.
std::vector<std::array<double, 3>> side_response(int n, const MeasurementScheme &scheme, double eta);

/// M[a][b][m][p]: probability that Fock cell (m, p) of an n-pair singlet gives
/// joint outcome (a, b) after loss and measurement.
class OutcomeMatrix {
   public:
    OutcomeMatrix(int n, std::uint64_t shots);

    int n() const { return n_; }
    /// Zero for matrices computed exactly.
    std::uint64_t shots() const { return shots_; }
    bool monte_carlo() const { return shots_ > 0; }

    double operator()(Outcome a, Outcome b, int m, int p) const { return prob_[index(a, b, m, p)]; }
    /// Agresti-Coull standard error of a sampled entry; zero when exact.
    double std_error(Outcome a, Outcome b, int m, int p) const { return std_error_[index(a, b, m, p)]; }

    void set(Outcome a, Outcome b, int m, int p, double value, double std_error = 0.0) {
        prob_[index(a, b, m, p)] = value;
        std_error_[index(a, b, m, p)] = std_error;
    }

   private:
    std::size_t index(int a, int b, int m, int p) const {
        const std::size_t dim = static_cast<std::size_t>(n_) + 1;
        return ((static_cast<std::size_t>(a) * 3 + b) * dim + m) * dim + p;
    }

    int n_;
    std::uint64_t shots_;
    std::vector<double> prob_;
    std::vector<double> std_error_;
};

/// Exact outcome matrix. The four thinnings are independent and each side's
/// outcome depends only on its own two counts, so every cell is the product
/// of two side responses.
OutcomeMatrix outcome_matrix_exact(int n, const MeasurementScheme &scheme_a, const MeasurementScheme &scheme_b,
                                   const LossChannel &channel, int pair_cap = kDefaultPairCap);
OutcomeMatrix outcome_matrix_exact(int n, const MeasurementScheme &scheme, const LossChannel &channel,
                                   int pair_cap = kDefaultPairCap);

/// Monte Carlo outcome matrix: per cell and shot, four binomial draws with
/// trial counts (n-m, m, p, n-p), then the outcome map on each side with ties
/// settled by a fair coin from the same stream.
///
/// Cell c = m (n+1) + p draws from mt19937_64 seeded with
/// splitmix64(seed + splitmix64(c)); binomial variates use inverse-CDF lookup.
/// The result therefore depends only on (seed, shots), not on `workers`.
OutcomeMatrix outcome_matrix_mc(int n, const MeasurementScheme &scheme_a, const MeasurementScheme &scheme_b,
                                const LossChannel &channel, const McConfig &cfg, int pair_cap = kDefaultPairCap);
OutcomeMatrix outcome_matrix_mc(int n, const MeasurementScheme &scheme, const LossChannel &channel,
                                const McConfig &cfg, int pair_cap = kDefaultPairCap);

/// p[a][b] = sum_{m,p} M[a][b][m][p] |amp(m,p)|^2. Standard errors assume
/// independent cells.
JointOutcomeProbs fringe_point(const CoefficientMatrix &coeffs, const OutcomeMatrix &matrix);

/// Angle-independent response of one singlet sector: either two exact side
/// responses or a frozen Monte Carlo outcome matrix.
class SectorResponse {
   public:
    static SectorResponse exact(int n, const MeasurementScheme &scheme_a, const MeasurementScheme &scheme_b,
                                const LossChannel &channel);
    static SectorResponse sampled(OutcomeMatrix matrix);

    int n() const { return n_; }
    JointOutcomeProbs apply(const CoefficientMatrix &coeffs) const;

   private:
    SectorResponse() = default;

    int n_ = 0;
    std::vector<std::array<double, 3>> side_a_;  // indexed by m: A holds (n-m, m)
    std::vector<std::array<double, 3>> side_b_;  // indexed by p: B holds (p, n-p)
    std::optional<OutcomeMatrix> matrix_;
};

/// A state pushed through a lossy channel into a pair of measurement schemes,
/// with every sector's response frozen. Evaluating it at an angle only costs
/// the coefficient recursion, so sweeps and optimizers reuse one instance.
class FrozenResponse {
   public:
    FrozenResponse(StateSpec state, const MeasurementScheme &scheme_a, const MeasurementScheme &scheme_b,
                   const LossChannel &channel, std::optional<McConfig> mc = std::nullopt,
                   int pair_cap = kDefaultPairCap);

    const StateSpec &state() const { return state_; }
    bool monte_carlo() const { return monte_carlo_; }
    int pair_cap() const { return pair_cap_; }

    /// Joint outcome probabilities with side B rotated by theta relative to A.
    JointOutcomeProbs evaluate(double theta) const;

   private:
    StateSpec state_;
    bool monte_carlo_;
    int pair_cap_;
    std::vector<SectorResponse> sectors_;  // one per n in 0..max_pairs(state)
};

/// Fringe point of the SPDC mixture: sum_n weight[n] * (fringe point of sector n).
/// Sectors do not interfere because every measurement is number-diagonal.
JointOutcomeProbs spdc_fringe_point(const SpdcWeights &weights, double theta, const MeasurementScheme &scheme_a,
                                    const MeasurementScheme &scheme_b, const LossChannel &channel,
                                    std::optional<McConfig> mc = std::nullopt, int pair_cap = kDefaultPairCap);

}  // namespace fuzzybell

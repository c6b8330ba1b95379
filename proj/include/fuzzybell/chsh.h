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
#include <memory>
#include <optional>

#include "fuzzybell/loss.h"
#include "fuzzybell/measure.h"
#include "fuzzybell/state.h"

namespace fuzzybell {

/// Analyzer angles in radians: side A uses a or a', side B uses b or b'.
struct AngleSettings {
    double a = 0.0;
    double a_prime = 0.0;
    double b = 0.0;
    double b_prime = 0.0;

    /// Every angle reduced into [0, pi).
    AngleSettings reduced() const;
};

struct Correlation {
    double value = 0.0;       // conditional expectation of the outcome product
    double conclusive = 1.0;  // probability that both sides were conclusive
};

enum class EvaluationMethod { kExact, kMonteCarlo };

struct CHSHResult {
    double s_value = 0.0;
    AngleSettings settings;
    /// E(a,b), E(a,b'), E(a',b), E(a',b').
    std::array<double, 4> correlations{};
    std::array<double, 4> conclusive_probs{};
    EvaluationMethod method = EvaluationMethod::kExact;

    double recomputed_s() const {
        return correlations[0] + correlations[1] + correlations[2] - correlations[3];
    }
};

/// Correlation function of a state under one scheme applied on both sides.
/// The state's rotational invariance means only angle_b - angle_a matters.
/// Outcome products are averaged over conclusive events only; for schemes
/// without a discard outcome the conditioning is a no-op. Angles are
/// polarization angles for every scheme, parity included, so parity sees
/// parity_correlation at twice the relative angle.
class CorrelationModel {
   public:
    CorrelationModel(StateSpec state, const MeasurementScheme &scheme, const LossChannel &channel,
                     std::optional<McConfig> mc = std::nullopt, int pair_cap = kDefaultPairCap);

    Correlation at_relative(double theta) const;
    Correlation operator()(double angle_a, double angle_b) const { return at_relative(angle_b - angle_a); }

    const StateSpec &state() const { return state_; }
    const MeasurementScheme &scheme() const { return scheme_; }
    EvaluationMethod method() const { return mc_ ? EvaluationMethod::kMonteCarlo : EvaluationMethod::kExact; }

   private:
    StateSpec state_;
    MeasurementScheme scheme_;
    std::optional<McConfig> mc_;
    std::shared_ptr<const FrozenResponse> response_;  // null for parity
};

Correlation correlation_E(const StateSpec &state, double angle_a, double angle_b, const MeasurementScheme &scheme,
                          const LossChannel &channel, std::optional<McConfig> mc = std::nullopt,
                          int pair_cap = kDefaultPairCap);

struct ChshOptions {
    int restarts = 16;
    double angle_tolerance = 1e-6;  // simplex size at convergence, radians
    int max_iterations = 20'000;
    std::uint64_t seed = 0xC45;     // restart positions
    int workers = 1;
};

/// Maximizes S = E(a,b) + E(a,b') + E(a',b) - E(a',b') over the analyzer
/// angles. A one-dimensional scan over equally spaced settings seeds a
/// Nelder-Mead search over the three independent angle differences, which is
/// repeated from random restarts; the best optimum wins.
CHSHResult maximize_chsh(const CorrelationModel &model, const ChshOptions &options = {});

CHSHResult maximize_chsh(const StateSpec &state, const MeasurementScheme &scheme, const LossChannel &channel,
                         std::optional<McConfig> mc = std::nullopt, const ChshOptions &options = {},
                         int pair_cap = kDefaultPairCap);

/// S at the given settings, with the per-pair correlations filled in.
CHSHResult evaluate_chsh(const CorrelationModel &model, const AngleSettings &settings);

}  // namespace fuzzybell

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

#include <optional>
#include <span>
#include <vector>

#include "fuzzybell/loss.h"
#include "fuzzybell/measure.h"
#include "fuzzybell/state.h"

namespace fuzzybell {

/// Everything that determines a fringe, kept next to the data for provenance.
struct FringeConfig {
    StateSpec state;
    MeasurementScheme scheme_a;
    MeasurementScheme scheme_b;
    LossChannel channel;
    std::optional<McConfig> mc;
    int pair_cap = kDefaultPairCap;
    int workers = 1;  // threads across grid points
};

struct FringePattern {
    FringeConfig config;
    std::vector<double> theta;              // radians, strictly increasing
    std::vector<JointOutcomeProbs> points;  // one per theta
};

/// `count` equally spaced angles over [start, start + span), endpoint excluded.
std::vector<double> uniform_grid(std::size_t count, double start = 0.0, double span = 3.141592653589793);

/// Fringe of side B's rotating basis against side A's fixed one. The channel
/// response is frozen once and reused for every angle.
FringePattern fringe_sweep(const FringeConfig &config, std::span<const double> grid);

/// Joint outcome a fringe tracks. The correlated default vanishes at theta = 0
/// on the lossless singlet.
struct OutcomePair {
    Outcome a = kPlus;
    Outcome b = kPlus;
};

/// Selected joint outcome per grid point, divided by that point's
/// conclusive probability when `normalized`.
std::vector<double> fringe_values(const FringePattern &fringe, OutcomePair pair, bool normalized);

/// (max - min) / (max + min) of the normalized fringe over the grid.
double visibility(const FringePattern &fringe, OutcomePair pair);

/// Standard error of the visibility propagated from the two extreme points;
/// zero on exact paths.
double visibility_std_error(const FringePattern &fringe, OutcomePair pair);

/// Single-side probability of a conclusive +-1 outcome, i.e. the expectation
/// of the (+1) plus (-1) POVM elements on one spatial mode after loss. Both
/// sides share the same marginal, and it does not depend on the analyzer angle.
double success_probability(const StateSpec &state, const MeasurementScheme &scheme, const LossChannel &channel);

/// Same quantity for the SPDC state summed sector by sector (exact thinning of
/// each sector's marginal). Independent of the thermal closed form used by
/// success_probability; cost grows as n_max^3.
double success_probability_by_sectors(const SpdcWeights &weights, const MeasurementScheme &scheme,
                                      const LossChannel &channel);

struct Harmonic {
    int index = 0;  // multiplier of theta; only even indices fit a pi-periodic fringe
    double magnitude = 0.0;
};

/// Fourier amplitudes of the raw fringe over [0, pi): DC is the mean, index j
/// carries sqrt(a_j^2 + b_j^2) of a_j cos(j theta) + b_j sin(j theta).
/// Requires a uniform grid covering [0, pi) with more than 2n points, n
/// being the largest photon-pair number of the state.
std::vector<Harmonic> harmonic_content(const FringePattern &fringe, OutcomePair pair);

/// Fraction of non-DC power carried by the index-2 harmonic.
double second_harmonic_share(std::span<const Harmonic> harmonics);

struct LinearReferenceRatio {
    std::vector<double> theta;  // grid points where the reference is non-zero
    std::vector<double> ratio;  // fringe / L
    int crossings = 0;          // sign changes of ratio - 1
};

/// Fringe divided by the classical sign-measurement response L: the
/// period-pi triangular wave that is 0 at the fringe minimum and 0.5 half
/// a period away.
LinearReferenceRatio linear_reference_ratio(const FringePattern &fringe, OutcomePair pair);

/// Triangular reference L(theta) with its zero at `theta_min`.
double linear_reference(double theta, double theta_min);

struct VisibilityCurve {
    std::vector<int> thresholds;
    std::vector<double> visibility;
    std::vector<double> visibility_std_error;
    std::vector<double> success_probability;
};

/// Visibility and single-side success probability as the OF or TD threshold
/// varies; the same scheme is used on both sides.
VisibilityCurve visibility_curve(const StateSpec &state, SchemeKind kind, std::span<const int> thresholds,
                                 const LossChannel &channel, std::span<const double> grid, OutcomePair pair,
                                 std::optional<McConfig> mc = std::nullopt, int pair_cap = kDefaultPairCap,
                                 bool strict = false);

}  // namespace fuzzybell

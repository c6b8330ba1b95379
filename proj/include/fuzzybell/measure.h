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
#include <string>

#include "fuzzybell/state.h"

namespace fuzzybell {

enum class SchemeKind {
    kPureDichotomic,
    kOrthogonalityFilter,  // discard when |n_pi - m_perp| is below k
    kThresholdDetector,    // discard when n_pi + m_perp is below h
    kParity,
};

/// Dichotomization of the photon counts (n_pi, m_perp) measured on one side.
///
/// `threshold` is k for the orthogonality filter and h for the threshold
/// detector. With `strict` unset a count pair passes the threshold when the
/// difference (resp. total) is >= threshold; with `strict` set it must exceed
/// it. OF(0) and TD(0) in the default convention coincide with the pure
/// dichotomic scheme.
struct MeasurementScheme {
    SchemeKind kind = SchemeKind::kPureDichotomic;
    int threshold = 0;
    bool strict = false;

    static MeasurementScheme dichotomic() { return {}; }
    static MeasurementScheme orthogonality_filter(int k, bool strict = false) {
        return {SchemeKind::kOrthogonalityFilter, k, strict};
    }
    static MeasurementScheme threshold_detector(int h, bool strict = false) {
        return {SchemeKind::kThresholdDetector, h, strict};
    }
    static MeasurementScheme parity() { return {SchemeKind::kParity, 0, false}; }

    bool operator==(const MeasurementScheme &) const = default;
};

void validate(const MeasurementScheme &scheme);
std::string describe(const MeasurementScheme &scheme);

/// Index of a measurement outcome in every 3-way table.
enum Outcome : int { kPlus = 0, kMinus = 1, kZero = 2 };

inline constexpr std::array<Outcome, 3> kOutcomes = {kPlus, kMinus, kZero};

/// Probability of each outcome for one count pair. Entries are 0, 1/2 or 1.
struct OutcomeWeights {
    double plus = 0.0;
    double minus = 0.0;
    double zero = 0.0;

    double operator[](Outcome o) const { return o == kPlus ? plus : (o == kMinus ? minus : zero); }
};

OutcomeWeights outcome_weights(int n_pi, int m_perp, const MeasurementScheme &scheme);

/// Joint distribution of the outcomes on sides A and B.
struct JointOutcomeProbs {
    std::array<std::array<double, 3>, 3> p{};
    std::array<std::array<double, 3>, 3> std_error{};  // zero on exact paths

    double operator()(Outcome a, Outcome b) const { return p[a][b]; }
    double total() const;
    /// Probability that both sides return a conclusive +-1.
    double conclusive() const;
    /// Unnormalized correlation p++ + p-- - p+- - p-+.
    double correlation_sum() const;
    std::array<double, 3> marginal_a() const;
    std::array<double, 3> marginal_b() const;
};

/// Exact lossless joint outcome probabilities for one singlet sector with side
/// A in {pi_+, pi_-} and side B in the rotated basis of `coeffs`.
JointOutcomeProbs joint_probabilities(const CoefficientMatrix &coeffs, const MeasurementScheme &scheme_a,
                                      const MeasurementScheme &scheme_b);

/// Parity-parity correlation of the n-pair singlet at relative angle theta:
/// (-1)^n sin((n+1) theta) / ((n+1) sin theta), with its limit at theta = 0 mod pi.
double parity_correlation(int n, double theta);

}  // namespace fuzzybell

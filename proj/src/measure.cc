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

#include "fuzzybell/measure.h"

#include <cmath>
#include <numbers>

#include "fuzzybell/error.h"

namespace fuzzybell {

namespace {

OutcomeWeights by_sign(int n_pi, int m_perp) {
    if (n_pi > m_perp) return {1.0, 0.0, 0.0};
    if (n_pi < m_perp) return {0.0, 1.0, 0.0};
    return {0.5, 0.5, 0.0};
}

constexpr OutcomeWeights kInconclusive{0.0, 0.0, 1.0};

}  // namespace

void validate(const MeasurementScheme &scheme) {
    require(scheme.threshold >= 0, "measurement threshold must be non-negative");
    if (scheme.kind == SchemeKind::kPureDichotomic || scheme.kind == SchemeKind::kParity) {
        require(scheme.threshold == 0, "threshold is only meaningful for OF and TD schemes");
    }
}

std::string describe(const MeasurementScheme &scheme) {
    const std::string cmp = scheme.strict ? ">" : ">=";
    switch (scheme.kind) {
        case SchemeKind::kPureDichotomic:
            return "dichotomic";
        case SchemeKind::kOrthogonalityFilter:
            return "of(k" + cmp + std::to_string(scheme.threshold) + ")";
        case SchemeKind::kThresholdDetector:
            return "td(h" + cmp + std::to_string(scheme.threshold) + ")";
        case SchemeKind::kParity:
            return "parity";
    }
    return "unknown";
}

OutcomeWeights outcome_weights(int n_pi, int m_perp, const MeasurementScheme &scheme) {
    require(n_pi >= 0 && m_perp >= 0, "outcome_weights: photon counts must be non-negative");
    validate(scheme);
    const int margin = scheme.strict ? 1 : 0;
    switch (scheme.kind) {
        case SchemeKind::kPureDichotomic:
            return by_sign(n_pi, m_perp);
        case SchemeKind::kOrthogonalityFilter: {
            const int k = scheme.threshold;
            if (k == 0 && !scheme.strict) return by_sign(n_pi, m_perp);
            const int needed = k + margin;
            if (n_pi - m_perp >= needed) return {1.0, 0.0, 0.0};
            if (m_perp - n_pi >= needed) return {0.0, 1.0, 0.0};
            return kInconclusive;
        }
        case SchemeKind::kThresholdDetector:
            if (n_pi + m_perp < scheme.threshold + margin) return kInconclusive;
            return by_sign(n_pi, m_perp);
        case SchemeKind::kParity:
            break;
    }
    fail(ErrorCode::kInvalidArgument, "outcome_weights: parity has no outcome map; use parity_correlation");
}

double JointOutcomeProbs::total() const {
    double sum = 0.0;
    for (const auto &row : p)
        for (double v : row) sum += v;
    return sum;
}

double JointOutcomeProbs::conclusive() const {
    return p[kPlus][kPlus] + p[kPlus][kMinus] + p[kMinus][kPlus] + p[kMinus][kMinus];
}

double JointOutcomeProbs::correlation_sum() const {
    return p[kPlus][kPlus] + p[kMinus][kMinus] - p[kPlus][kMinus] - p[kMinus][kPlus];
}

std::array<double, 3> JointOutcomeProbs::marginal_a() const {
    std::array<double, 3> out{};
    for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b) out[a] += p[a][b];
    return out;
}

std::array<double, 3> JointOutcomeProbs::marginal_b() const {
    std::array<double, 3> out{};
    for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b) out[b] += p[a][b];
    return out;
}

JointOutcomeProbs joint_probabilities(const CoefficientMatrix &coeffs, const MeasurementScheme &scheme_a,
                                      const MeasurementScheme &scheme_b) {
    require(scheme_a.kind != SchemeKind::kParity && scheme_b.kind != SchemeKind::kParity,
            "joint_probabilities: parity is handled by parity_correlation");
    const int n = coeffs.n();
    std::vector<OutcomeWeights> side_a(n + 1), side_b(n + 1);
    for (int i = 0; i <= n; ++i) {
        side_a[i] = outcome_weights(n - i, i, scheme_a);
        side_b[i] = outcome_weights(i, n - i, scheme_b);
    }
    JointOutcomeProbs out;
    for (int m = 0; m <= n; ++m) {
        for (int p = 0; p <= n; ++p) {
            const double w = coeffs.probability(m, p);
            if (w == 0.0) continue;
            for (Outcome a : kOutcomes) {
                const double wa = side_a[m][a];
                if (wa == 0.0) continue;
                for (Outcome b : kOutcomes) out.p[a][b] += w * wa * side_b[p][b];
            }
        }
    }
    return out;
}

double parity_correlation(int n, double theta) {
    require(n >= 0, "parity_correlation: n must be non-negative");
    require(std::isfinite(theta), "parity_correlation: theta must be finite");
    const double sign = (n % 2 == 0) ? 1.0 : -1.0;
    const double s = std::sin(theta);
    if (std::abs(s) < 1e-12) {
        // theta = j pi: the ratio tends to (-1)^{n j}.
        const long long j = std::llround(theta / std::numbers::pi);
        const bool flip = (n % 2 != 0) && (j % 2 != 0);
        return sign * (flip ? -1.0 : 1.0);
    }
    return sign * std::sin((n + 1) * theta) / ((n + 1) * s);
}

}  // namespace fuzzybell

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

#include <functional>
#include <span>
#include <variant>
#include <vector>

namespace fuzzybell {

/// Default hard cap on the number of photon pairs in one singlet sector.
inline constexpr int kDefaultPairCap = 400;

/// Largest n accepted by the direct (binomial q-sum) coefficient route.
/// Beyond this the alternating sum cancels catastrophically in double.
inline constexpr int kDirectSumCap = 32;

/// The n-pair polarization singlet: each spatial mode carries n photons.
struct SingletSpec {
    int n = 0;
};

/// Amplitudes of an n-pair singlet with side A in the fixed {pi_+, pi_-}
/// basis and side B in the basis rotated by theta.
///
/// Entry (m, p) multiplies |(n-m) pi_+, m pi_->_A |p pi_theta, (n-p) pi_theta_perp>_B.
/// At theta = 0 the matrix is diagonal with amp(m, m) = (-1)^m / sqrt(n+1).
class CoefficientMatrix {
   public:
    CoefficientMatrix(int n, double theta, std::vector<double> amplitudes);

    int n() const { return n_; }
    double theta() const { return theta_; }
    int dim() const { return n_ + 1; }

    double operator()(int m, int p) const { return amp_[static_cast<std::size_t>(m) * dim() + p]; }
    double probability(int m, int p) const {
        const double a = (*this)(m, p);
        return a * a;
    }
    std::span<const double> row(int m) const {
        return std::span<const double>(amp_).subspan(static_cast<std::size_t>(m) * dim(), dim());
    }
    std::span<const double> amplitudes() const { return amp_; }

    /// Sum of squared amplitudes; 1 up to rounding.
    double norm_squared() const;

   private:
    int n_;
    double theta_;
    std::vector<double> amp_;
};

/// Rotated-basis amplitudes from Jacobi-polynomial recurrences, which stay
/// accurate to rounding at every supported n. Cost O(n^3); rejects n above
/// `pair_cap` with a size error.
CoefficientMatrix singlet_coefficients(int n, double theta, int pair_cap = kDefaultPairCap);

/// Same amplitudes via the closed binomial q-sum, evaluated with log-gamma
/// magnitudes and tracked signs. Accurate only for small n (<= kDirectSumCap);
/// kept as an independent route for cross-checks.
CoefficientMatrix singlet_coefficients_direct(int n, double theta);

/// Calls `visit` with the coefficient matrix of every sector 0..n_max at one
/// angle, in increasing n. Shares the recursion, so the total cost is that of
/// the largest sector.
void for_each_singlet_sector(int n_max, double theta,
                             const std::function<void(const CoefficientMatrix &)> &visit,
                             int pair_cap = kDefaultPairCap);

/// Photon-pair-number distribution of the two-mode SPDC output state.
struct SpdcWeights {
    double gain = 0.0;
    double truncation_tolerance = 1e-6;
    int n_max = 0;
    std::vector<double> weight;   // weight[n] = (n+1) tanh(g)^{2n} / cosh(g)^4
    double truncation_mass = 0.0; // probability of the sectors above n_max

    double mean_pairs() const;
};

inline constexpr double kDefaultTruncationTolerance = 1e-6;

SpdcWeights spdc_weights(double gain, double truncation_tolerance = kDefaultTruncationTolerance);

/// Mean photon number per polarization mode, sinh^2(g). Per spatial mode the
/// mean is twice this.
double mean_photons(double gain);

/// Either a single singlet sector or the full SPDC superposition.
using StateSpec = std::variant<SingletSpec, SpdcWeights>;

/// Largest photon-pair number that carries weight in the state.
int max_pairs(const StateSpec &state);

}  // namespace fuzzybell

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

#include <cstdint>
#include <span>
#include <vector>

namespace fuzzybell {

/// log C(n, k) via log-gamma; -inf outside 0 <= k <= n.
double log_binomial(int n, int k);

/// Binomial(trials, eta) probability mass function for k = 0..trials.
/// The degenerate cases eta = 0 and eta = 1 return exact point masses.
std::vector<double> binomial_pmf(int trials, double eta);

/// Row table of binomial pmfs for every trial count 0..max_trials at one eta,
/// together with upper-tail sums. `survival(t)[k]` is P(X >= k) and has
/// trials + 2 entries so that survival(t)[trials + 1] == 0.
class BinomialTable {
   public:
    BinomialTable(int max_trials, double eta);

    int max_trials() const { return static_cast<int>(pmf_.size()) - 1; }
    double eta() const { return eta_; }
    std::span<const double> pmf(int trials) const;
    std::span<const double> survival(int trials) const;

   private:
    double eta_;
    std::vector<std::vector<double>> pmf_;
    std::vector<std::vector<double>> survival_;
};

/// splitmix64 finalizer; used to derive independent per-cell seeds.
std::uint64_t splitmix64(std::uint64_t x);

/// Uniform double in [0, 1) from the top 53 bits of a 64-bit draw.
inline double unit_interval(std::uint64_t bits) {
    return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

}  // namespace fuzzybell

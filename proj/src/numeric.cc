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

#include "fuzzybell/numeric.h"

#include <cmath>
#include <limits>

#include "fuzzybell/error.h"

namespace fuzzybell {

const char *error_code_name(ErrorCode code) {
    switch (code) {
        case ErrorCode::kInvalidArgument:
            return "E_CONFIG";
        case ErrorCode::kSizeCap:
            return "E_SIZE_CAP";
        case ErrorCode::kUndefinedCorrelation:
            return "E_UNDEFINED_CORRELATION";
        case ErrorCode::kNumerical:
            return "E_NUMERICAL";
    }
    return "E_UNKNOWN";
}

double log_binomial(int n, int k) {
    if (k < 0 || k > n) return -std::numeric_limits<double>::infinity();
    return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

std::vector<double> binomial_pmf(int trials, double eta) {
    require(trials >= 0, "binomial_pmf: negative trial count");
    require(eta >= 0.0 && eta <= 1.0, "binomial_pmf: eta outside [0, 1]");
    std::vector<double> pmf(static_cast<std::size_t>(trials) + 1, 0.0);
    if (eta == 0.0) {
        pmf.front() = 1.0;
        return pmf;
    }
    if (eta == 1.0) {
        pmf.back() = 1.0;
        return pmf;
    }
    const double log_eta = std::log(eta);
    const double log_loss = std::log1p(-eta);
    for (int k = 0; k <= trials; ++k) {
        pmf[k] = std::exp(log_binomial(trials, k) + k * log_eta + (trials - k) * log_loss);
    }
    return pmf;
}

BinomialTable::BinomialTable(int max_trials, double eta) : eta_(eta) {
    require(max_trials >= 0, "BinomialTable: negative trial count");
    pmf_.reserve(max_trials + 1);
    survival_.reserve(max_trials + 1);
    for (int t = 0; t <= max_trials; ++t) {
        pmf_.push_back(binomial_pmf(t, eta));
        std::vector<double> tail(static_cast<std::size_t>(t) + 2, 0.0);
        for (int k = t; k >= 0; --k) tail[k] = tail[k + 1] + pmf_.back()[k];
        survival_.push_back(std::move(tail));
    }
}

std::span<const double> BinomialTable::pmf(int trials) const {
    return pmf_.at(static_cast<std::size_t>(trials));
}

std::span<const double> BinomialTable::survival(int trials) const {
    return survival_.at(static_cast<std::size_t>(trials));
}

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

}  // namespace fuzzybell

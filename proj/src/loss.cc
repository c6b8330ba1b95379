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

#include "fuzzybell/loss.h"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>
#include <thread>

#include "fuzzybell/error.h"
#include "fuzzybell/numeric.h"

namespace fuzzybell {

namespace {

void check_pairs(int n, int pair_cap) {
    require(n >= 0, "photon-pair number must be non-negative");
    if (n > pair_cap) {
        fail(ErrorCode::kSizeCap,
             "photon-pair number " + std::to_string(n) + " exceeds the configured cap " + std::to_string(pair_cap));
    }
}

void check_not_parity(const MeasurementScheme &scheme) {
    validate(scheme);
    require(scheme.kind != SchemeKind::kParity, "parity has no outcome map under loss");
}

// P(X >= k) from a survival table padded with a trailing zero.
double tail(std::span<const double> survival, int k) {
    if (k <= 0) return 1.0;
    if (k >= static_cast<int>(survival.size())) return 0.0;
    return survival[k];
}

double clamp_unit(double v) { return std::clamp(v, 0.0, 1.0); }

// Outcome probabilities for X ~ Bin(first, eta) pi photons against
// Y ~ Bin(second, eta) pi_perp photons.
std::array<double, 3> response_for_counts(int first, int second, const MeasurementScheme &scheme,
                                          const BinomialTable &table) {
    const auto px = table.pmf(first);
    const auto py = table.pmf(second);
    const auto sx = table.survival(first);
    const auto sy = table.survival(second);
    const int margin = scheme.strict ? 1 : 0;

    // Probabilities of X > Y and X < Y restricted to totals >= min_total, and of ties.
    auto split_by_sign = [&](int min_total) {
        double above = 0.0, below = 0.0, tie = 0.0;
        for (int y = 0; y <= second; ++y) above += py[y] * tail(sx, std::max(y + 1, min_total - y));
        for (int x = 0; x <= first; ++x) below += px[x] * tail(sy, std::max(x + 1, min_total - x));
        for (int v = 0; v <= std::min(first, second); ++v) {
            if (2 * v >= min_total) tie += px[v] * py[v];
        }
        const double plus = above + 0.5 * tie;
        const double minus = below + 0.5 * tie;
        return std::array<double, 3>{plus, minus, clamp_unit(1.0 - plus - minus)};
    };

    switch (scheme.kind) {
        case SchemeKind::kPureDichotomic:
            return split_by_sign(0);
        case SchemeKind::kOrthogonalityFilter: {
            if (scheme.threshold == 0 && !scheme.strict) return split_by_sign(0);
            const int needed = scheme.threshold + margin;
            double plus = 0.0, minus = 0.0;
            for (int y = 0; y <= second; ++y) plus += py[y] * tail(sx, y + needed);
            for (int x = 0; x <= first; ++x) minus += px[x] * tail(sy, x + needed);
            return {plus, minus, clamp_unit(1.0 - plus - minus)};
        }
        case SchemeKind::kThresholdDetector:
            return split_by_sign(scheme.threshold + margin);
        case SchemeKind::kParity:
            break;
    }
    fail(ErrorCode::kInvalidArgument, "parity has no outcome map under loss");
}

// Inverse-CDF binomial sampler for every trial count up to max_trials.
class BinomialSampler {
   public:
    BinomialSampler(int max_trials, double eta) {
        cdf_.reserve(max_trials + 1);
        for (int t = 0; t <= max_trials; ++t) {
            const auto pmf = binomial_pmf(t, eta);
            std::vector<double> cdf(pmf.size());
            double acc = 0.0;
            for (std::size_t k = 0; k < pmf.size(); ++k) cdf[k] = acc += pmf[k];
            cdf.back() = 1.0;
            cdf_.push_back(std::move(cdf));
        }
    }

    int draw(int trials, std::uint64_t bits) const {
        const auto &cdf = cdf_[trials];
        const double u = unit_interval(bits);
        const auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
        return std::min(static_cast<int>(it - cdf.begin()), trials);
    }

   private:
    std::vector<std::vector<double>> cdf_;
};

// Outcome map as a lookup table; code 3 marks a tie resolved by a coin.
class OutcomeTable {
   public:
    OutcomeTable(int n, const MeasurementScheme &scheme) : dim_(n + 1), code_(dim_ * dim_) {
        for (int x = 0; x <= n; ++x) {
            for (int y = 0; y <= n; ++y) {
                const OutcomeWeights w = outcome_weights(x, y, scheme);
                std::uint8_t code = kZero;
                if (w.plus == 1.0) code = kPlus;
                else if (w.minus == 1.0) code = kMinus;
                else if (w.plus > 0.0) code = 3;
                code_[x * dim_ + y] = code;
            }
        }
    }

    std::uint8_t operator()(int x, int y) const { return code_[x * dim_ + y]; }

   private:
    std::size_t dim_;
    std::vector<std::uint8_t> code_;
};

}  // namespace

void validate(const LossChannel &channel) {
    require(channel.eta >= 0.0 && channel.eta <= 1.0, "channel transmittivity eta must lie in [0, 1]");
}

void validate(const McConfig &cfg) {
    require(cfg.shots >= 1, "Monte Carlo shots must be >= 1");
    require(cfg.workers >= 1, "worker count must be >= 1");
}

std::vector<double> thin_binomial_exact(std::span<const double> count_probs, double eta) {
    require(eta >= 0.0 && eta <= 1.0, "thin_binomial_exact: eta must lie in [0, 1]");
    require(!count_probs.empty(), "thin_binomial_exact: empty distribution");
    const int n = static_cast<int>(count_probs.size()) - 1;
    const BinomialTable table(n, eta);
    std::vector<double> out(count_probs.size(), 0.0);
    for (int j = 0; j <= n; ++j) {
        const double w = count_probs[j];
        if (w == 0.0) continue;
        const auto pmf = table.pmf(j);
        for (int k = 0; k <= j; ++k) out[k] += w * pmf[k];
    }
    return out;
}

std::vector<std::array<double, 3>> side_response(int n, const MeasurementScheme &scheme, double eta) {
    require(n >= 0, "side_response: n must be non-negative");
    check_not_parity(scheme);
    require(eta >= 0.0 && eta <= 1.0, "side_response: eta must lie in [0, 1]");
    const BinomialTable table(n, eta);
    std::vector<std::array<double, 3>> out(static_cast<std::size_t>(n) + 1);
    for (int j = 0; j <= n; ++j) out[j] = response_for_counts(j, n - j, scheme, table);
    return out;
}

OutcomeMatrix::OutcomeMatrix(int n, std::uint64_t shots)
    : n_(n),
      shots_(shots),
      prob_(9 * static_cast<std::size_t>(n + 1) * (n + 1), 0.0),
      std_error_(prob_.size(), 0.0) {
    require(n >= 0, "OutcomeMatrix: n must be non-negative");
}

OutcomeMatrix outcome_matrix_exact(int n, const MeasurementScheme &scheme_a, const MeasurementScheme &scheme_b,
                                   const LossChannel &channel, int pair_cap) {
    check_pairs(n, pair_cap);
    validate(channel);
    const auto side_a = side_response(n, scheme_a, channel.eta);
    const auto side_b = side_response(n, scheme_b, channel.eta);
    OutcomeMatrix out(n, 0);
    for (int m = 0; m <= n; ++m) {
        const auto &ra = side_a[n - m];
        for (int p = 0; p <= n; ++p) {
            const auto &rb = side_b[p];
            for (Outcome a : kOutcomes)
                for (Outcome b : kOutcomes) out.set(a, b, m, p, ra[a] * rb[b]);
        }
    }
    return out;
}

OutcomeMatrix outcome_matrix_exact(int n, const MeasurementScheme &scheme, const LossChannel &channel,
                                   int pair_cap) {
    return outcome_matrix_exact(n, scheme, scheme, channel, pair_cap);
}

OutcomeMatrix outcome_matrix_mc(int n, const MeasurementScheme &scheme_a, const MeasurementScheme &scheme_b,
                                const LossChannel &channel, const McConfig &cfg, int pair_cap) {
    check_pairs(n, pair_cap);
    check_not_parity(scheme_a);
    check_not_parity(scheme_b);
    validate(channel);
    validate(cfg);

    const BinomialSampler sampler(n, channel.eta);
    const OutcomeTable table_a(n, scheme_a);
    const OutcomeTable table_b(n, scheme_b);
    const int dim = n + 1;
    const int cells = dim * dim;
    OutcomeMatrix out(n, cfg.shots);

    auto run_cell = [&](int cell) {
        const int m = cell / dim;
        const int p = cell % dim;
        std::mt19937_64 gen(splitmix64(cfg.seed + splitmix64(static_cast<std::uint64_t>(cell))));
        std::array<std::uint64_t, 9> counts{};
        for (std::uint64_t shot = 0; shot < cfg.shots; ++shot) {
            const int a_pi = sampler.draw(n - m, gen());
            const int a_perp = sampler.draw(m, gen());
            const int b_pi = sampler.draw(p, gen());
            const int b_perp = sampler.draw(n - p, gen());
            int a = table_a(a_pi, a_perp);
            if (a == 3) a = static_cast<int>(gen() >> 63);
            int b = table_b(b_pi, b_perp);
            if (b == 3) b = static_cast<int>(gen() >> 63);
            ++counts[a * 3 + b];
        }
        const double shots = static_cast<double>(cfg.shots);
        for (Outcome a : kOutcomes) {
            for (Outcome b : kOutcomes) {
                const double count = static_cast<double>(counts[a * 3 + b]);
                // Agresti-Coull: the Wald form collapses to zero for empty or
                // full cells, which rare outcomes hit routinely.
                const double shrunk = (count + 2.0) / (shots + 4.0);
                out.set(a, b, m, p, count / shots, std::sqrt(shrunk * (1.0 - shrunk) / (shots + 4.0)));
            }
        }
    };

    const int workers = std::min(cfg.workers, cells);
    if (workers <= 1) {
        for (int cell = 0; cell < cells; ++cell) run_cell(cell);
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (int w = 0; w < workers; ++w) {
            pool.emplace_back([&, w] {
                for (int cell = w; cell < cells; cell += workers) run_cell(cell);
            });
        }
    }
    return out;
}

OutcomeMatrix outcome_matrix_mc(int n, const MeasurementScheme &scheme, const LossChannel &channel,
                                const McConfig &cfg, int pair_cap) {
    return outcome_matrix_mc(n, scheme, scheme, channel, cfg, pair_cap);
}

JointOutcomeProbs fringe_point(const CoefficientMatrix &coeffs, const OutcomeMatrix &matrix) {
    require(coeffs.n() == matrix.n(), "fringe_point: coefficient and outcome matrices disagree on n");
    const int n = coeffs.n();
    JointOutcomeProbs out;
    std::array<std::array<double, 3>, 3> variance{};
    for (int m = 0; m <= n; ++m) {
        for (int p = 0; p <= n; ++p) {
            const double w = coeffs.probability(m, p);
            if (w == 0.0) continue;
            for (Outcome a : kOutcomes) {
                for (Outcome b : kOutcomes) {
                    out.p[a][b] += w * matrix(a, b, m, p);
                    const double se = matrix.std_error(a, b, m, p);
                    variance[a][b] += w * w * se * se;
                }
            }
        }
    }
    for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b) out.std_error[a][b] = std::sqrt(variance[a][b]);
    return out;
}

SectorResponse SectorResponse::exact(int n, const MeasurementScheme &scheme_a, const MeasurementScheme &scheme_b,
                                     const LossChannel &channel) {
    validate(channel);
    SectorResponse out;
    out.n_ = n;
    const auto a = side_response(n, scheme_a, channel.eta);
    out.side_a_.resize(a.size());
    for (int m = 0; m <= n; ++m) out.side_a_[m] = a[n - m];
    out.side_b_ = side_response(n, scheme_b, channel.eta);
    return out;
}

SectorResponse SectorResponse::sampled(OutcomeMatrix matrix) {
    SectorResponse out;
    out.n_ = matrix.n();
    out.matrix_ = std::move(matrix);
    return out;
}

JointOutcomeProbs SectorResponse::apply(const CoefficientMatrix &coeffs) const {
    if (matrix_) return fringe_point(coeffs, *matrix_);
    require(coeffs.n() == n_, "SectorResponse: coefficient matrix has the wrong n");
    // sum_{m,p} |amp|^2 ra[m][a] rb[p][b] = sum_m ra[m][a] * (sum_p |amp|^2 rb[p][b]).
    JointOutcomeProbs out;
    for (int m = 0; m <= n_; ++m) {
        const auto row = coeffs.row(m);
        std::array<double, 3> inner{};
        for (int p = 0; p <= n_; ++p) {
            const double w = row[p] * row[p];
            inner[0] += w * side_b_[p][0];
            inner[1] += w * side_b_[p][1];
            inner[2] += w * side_b_[p][2];
        }
        const auto &ra = side_a_[m];
        for (int a = 0; a < 3; ++a)
            for (int b = 0; b < 3; ++b) out.p[a][b] += ra[a] * inner[b];
    }
    return out;
}

FrozenResponse::FrozenResponse(StateSpec state, const MeasurementScheme &scheme_a,
                               const MeasurementScheme &scheme_b, const LossChannel &channel,
                               std::optional<McConfig> mc, int pair_cap)
    : state_(std::move(state)), monte_carlo_(mc.has_value()), pair_cap_(pair_cap) {
    check_not_parity(scheme_a);
    check_not_parity(scheme_b);
    validate(channel);
    if (mc) validate(*mc);

    std::vector<int> sector_ns;
    if (const auto *singlet = std::get_if<SingletSpec>(&state_)) {
        check_pairs(singlet->n, pair_cap_);
        sector_ns.push_back(singlet->n);
    } else {
        const auto &weights = std::get<SpdcWeights>(state_);
        require(weights.weight.size() == static_cast<std::size_t>(weights.n_max) + 1,
                "SPDC weights are inconsistent with n_max");
        if (weights.truncation_mass > weights.truncation_tolerance * (1.0 + 1e-9)) {
            fail(ErrorCode::kInvalidArgument, "SPDC truncation mass exceeds its tolerance");
        }
        check_pairs(weights.n_max, pair_cap_);
        if (mc && weights.n_max > kSpdcMonteCarloCap) {
            fail(ErrorCode::kSizeCap, "SPDC truncation n_max = " + std::to_string(weights.n_max) +
                                          " exceeds the Monte Carlo cap " + std::to_string(kSpdcMonteCarloCap));
        }
        for (int n = 0; n <= weights.n_max; ++n) sector_ns.push_back(n);
    }

    sectors_.reserve(sector_ns.size());
    for (int n : sector_ns) {
        if (mc) {
            McConfig sector_cfg = *mc;
            sector_cfg.seed = splitmix64(mc->seed ^ (0xA5A5A5A5ULL + static_cast<std::uint64_t>(n)));
            if (std::holds_alternative<SingletSpec>(state_)) sector_cfg.seed = mc->seed;
            sectors_.push_back(
                SectorResponse::sampled(outcome_matrix_mc(n, scheme_a, scheme_b, channel, sector_cfg, pair_cap_)));
        } else {
            sectors_.push_back(SectorResponse::exact(n, scheme_a, scheme_b, channel));
        }
    }
}

JointOutcomeProbs FrozenResponse::evaluate(double theta) const {
    require(std::isfinite(theta), "evaluate: theta must be finite");
    if (const auto *singlet = std::get_if<SingletSpec>(&state_)) {
        return sectors_.front().apply(singlet_coefficients(singlet->n, theta, pair_cap_));
    }
    const auto &weights = std::get<SpdcWeights>(state_);
    double retained = 0.0;
    for (double w : weights.weight) retained += w;
    JointOutcomeProbs out;
    std::array<std::array<double, 3>, 3> variance{};
    for_each_singlet_sector(
        weights.n_max, theta,
        [&](const CoefficientMatrix &coeffs) {
            const double w = weights.weight[coeffs.n()];
            if (w == 0.0) return;
            const JointOutcomeProbs sector = sectors_[coeffs.n()].apply(coeffs);
            for (int a = 0; a < 3; ++a) {
                for (int b = 0; b < 3; ++b) {
                    out.p[a][b] += w * sector.p[a][b];
                    variance[a][b] += w * w * sector.std_error[a][b] * sector.std_error[a][b];
                }
            }
        },
        pair_cap_);
    // Condition on the retained sectors so the table stays normalized.
    for (int a = 0; a < 3; ++a) {
        for (int b = 0; b < 3; ++b) {
            out.p[a][b] /= retained;
            out.std_error[a][b] = std::sqrt(variance[a][b]) / retained;
        }
    }
    return out;
}

JointOutcomeProbs spdc_fringe_point(const SpdcWeights &weights, double theta, const MeasurementScheme &scheme_a,
                                    const MeasurementScheme &scheme_b, const LossChannel &channel,
                                    std::optional<McConfig> mc, int pair_cap) {
    return FrozenResponse(weights, scheme_a, scheme_b, channel, mc, pair_cap).evaluate(theta);
}

}  // namespace fuzzybell

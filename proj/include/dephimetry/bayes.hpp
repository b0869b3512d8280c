// Copyright 2026 The Dephimetry Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <ostream>
#include <span>
#include <vector>

#include "dephimetry/core.hpp"
#include "dephimetry/covariance.hpp"
#include "dephimetry/fisher.hpp"

namespace dephimetry {

/// One interferometry experiment: the phases are drawn from
/// N((prior_mean + fluctuation) * 1, C), encoded into `state` through the
/// local generators, and `povm` is measured. Estimators are built at the
/// informed guess phi = prior_mean; `fluctuation` only enters simulate().
struct ExperimentConfig {
    DensityMatrix state;
    GeneratorSpec generator;
    CovarianceMatrix covariance;
    Povm povm;
    double prior_mean = 0.0;
    double fluctuation = 0.0;
};

/// Throws InvalidArgument if the components do not fit together.
void validate(const ExperimentConfig &cfg);

/// Per-outcome Bayesian estimates at the informed guess.
struct EstimatorTable {
    double prior_mean = 0.0;
    double delta2 = 0.0;
    /// Averaged outcome probabilities at the prior mean.
    std::vector<double> probabilities;
    /// False where the probability is at or below kProbabilityFloor; those
    /// outcomes carry the prior mean as their estimate.
    std::vector<bool> included;
    /// (outcome, site) posterior mean of each random phase.
    RealMatrix site_estimates;
    /// Weighted average sum_j gamma_j * site estimate.
    std::vector<double> estimate;
    /// Locally unbiased rescaling, filled by best_estimator().
    std::optional<std::vector<double>> best;

    [[nodiscard]] std::size_t outcome_count() const { return probabilities.size(); }
    [[nodiscard]] std::vector<std::size_t> excluded() const;
};

/// Tr(encode_phase(dephase(rho, C), phi) Pi_x) for every outcome.
std::vector<double> averaged_probabilities(const ExperimentConfig &cfg, double phi);

/// Posterior means via the Gaussian integration-by-parts identity
///   E[phi_j | x] - phi_0 = sum_k C_jk Tr(-i[H_k, rho_bar] Pi_x) / p(x),
/// which is exact for a Gaussian prior.
EstimatorTable bayes_estimators(const ExperimentConfig &cfg);

/// sum_x p(x) (estimate(x) - phi_0)^2 of the table's weighted estimator.
double local_error(const EstimatorTable &table);
double local_error(const ExperimentConfig &cfg);

/// Adds the locally unbiased estimator phi_0 + (estimate - phi_0) * delta2 / local_error.
/// Throws UninformativeMeasurement when the local error vanishes.
EstimatorTable best_estimator(const ExperimentConfig &cfg);

/// Prior-averaged squared error of the weighted estimator about the
/// weighted phase, delta2 - local_error.
double bayes_mse(const ExperimentConfig &cfg);

struct QbcrGap {
    double lhs; ///< bayes_mse
    double rhs; ///< (1 / delta2 + F_rho)^{-1}
    double gap;
};

QbcrGap qbcr_gap(const ExperimentConfig &cfg);

/// Local error of the locally unbiased estimator built from an arbitrary
/// unit-sum weight vector instead of the optimal one.
double weighted_estimator_error(const ExperimentConfig &cfg, std::span<const double> weights);

struct MonteCarloEstimate {
    double mean;
    double std_error;
};

/// Direct sampling of (estimate(x) - sum_j gamma_j phi_j)^2 with phi drawn
/// from the prior at the informed guess.
MonteCarloEstimate bayes_mse_monte_carlo(const ExperimentConfig &cfg, std::size_t shots,
                                         std::uint64_t seed);

struct ShotRecord {
    std::size_t index;
    std::vector<double> phases;
    std::size_t outcome;
    double estimate;
};

struct SimulationResult {
    std::uint64_t seed = 0;
    std::size_t shots = 0;
    double true_phase = 0.0;
    double empirical_mean = 0.0;
    double mean_std_error = 0.0;
    /// Mean of (best estimate - true phase)^2.
    double empirical_mse = 0.0;
    double mse_std_error = 0.0;
    /// False for a single shot: no sample variance.
    bool variance_defined = false;
    /// 1 / classical Fisher information of the dephased model.
    double predicted_mse = 0.0;
    std::vector<ShotRecord> log;
};

/// Runs `shots` experiments and applies the locally unbiased estimator.
/// Shots are split into fixed-size blocks with derived seeds, so the result
/// depends only on (cfg, shots, seed).
SimulationResult simulate(const ExperimentConfig &cfg, std::size_t shots, std::uint64_t seed,
                          bool keep_log = false);

/// CSV rows: shot, phase_1..phase_N, outcome, estimate.
void write_shot_log_csv(std::ostream &out, const SimulationResult &result);

} // namespace dephimetry

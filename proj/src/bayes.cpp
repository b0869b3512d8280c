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

#include "dephimetry/bayes.hpp"

#include <cmath>
#include <iomanip>
#include <limits>
#include <random>

#include "dephimetry/dephasing.hpp"
#include "dephimetry/errors.hpp"
#include "dephimetry/parallel.hpp"

namespace dephimetry {

namespace {

constexpr double kNegativeProbabilityTolerance = 1e-12;
constexpr double kUninformativeRatio = 1e-15;

double prior_variance(const ExperimentConfig &cfg) {
    const double d2 = delta2_c(cfg.covariance);
    if (!(d2 > 0.0)) {
        throw InvalidArgument("Bayesian estimation needs a non-zero phase prior variance");
    }
    return d2;
}

/// Outcome probabilities of the undephased state for a given phase vector:
/// p_x = Re sum_mn u_m conj(u_n) rho_mn (Pi_x)_nm with u_m = exp(-i theta_m).
class PhaseResolvedModel {
  public:
    PhaseResolvedModel(const DensityMatrix &rho, const GeneratorSpec &gen, const Povm &povm)
        : energies_(gen.local_energies()) {
        weighted_.reserve(povm.size());
        for (const auto &e : povm.effects()) {
            weighted_.emplace_back(rho.matrix().cwiseProduct(e.transpose()));
        }
    }

    void probabilities(const RealVector &phases, std::vector<double> &out) const {
        const RealVector theta = energies_ * phases;
        ComplexVector u(theta.size());
        for (Eigen::Index m = 0; m < theta.size(); ++m) {
            u(m) = std::polar(1.0, -theta(m));
        }
        const ComplexVector uc = u.conjugate();
        out.resize(weighted_.size());
        for (std::size_t x = 0; x < weighted_.size(); ++x) {
            out[x] = (u.array() * (weighted_[x] * uc).array()).sum().real();
        }
    }

  private:
    RealMatrix energies_;
    std::vector<ComplexMatrix> weighted_;
};

/// Inverse-CDF draw. Tiny negative probabilities are clamped and the vector
/// renormalized; anything below -1e-12 is a numerical failure.
std::size_t sample_outcome(std::vector<double> &p, double uniform) {
    double total = 0.0;
    for (double &v : p) {
        if (v < -kNegativeProbabilityTolerance) {
            throw NumericalError("outcome probability is negative");
        }
        v = std::max(v, 0.0);
        total += v;
    }
    if (!(total > 0.0)) {
        throw NumericalError("outcome probabilities sum to zero");
    }
    const double target = uniform * total;
    double acc = 0.0;
    for (std::size_t x = 0; x < p.size(); ++x) {
        acc += p[x];
        if (target < acc) {
            return x;
        }
    }
    // Round-off can leave target == total; fall back to the last positive outcome.
    for (std::size_t x = p.size(); x-- > 0;) {
        if (p[x] > 0.0) {
            return x;
        }
    }
    return p.size() - 1;
}

struct Moments {
    double sum = 0.0;
    double sum_sq = 0.0;
};

} // namespace

void validate(const ExperimentConfig &cfg) {
    require_same_dim(cfg.state, cfg.generator);
    if (cfg.generator.site_count() != cfg.covariance.size()) {
        throw InvalidArgument("covariance size does not match the site count");
    }
    if (cfg.povm.dim() != cfg.state.dim()) {
        throw InvalidArgument("POVM dimension does not match the state");
    }
    if (!std::isfinite(cfg.prior_mean) || !std::isfinite(cfg.fluctuation)) {
        throw InvalidArgument("phases must be finite");
    }
}

std::vector<std::size_t> EstimatorTable::excluded() const {
    std::vector<std::size_t> out;
    for (std::size_t x = 0; x < included.size(); ++x) {
        if (!included[x]) {
            out.push_back(x);
        }
    }
    return out;
}

std::vector<double> averaged_probabilities(const ExperimentConfig &cfg, double phi) {
    validate(cfg);
    const auto rho_bar = encode_phase(dephase(cfg.state, cfg.generator, cfg.covariance),
                                      cfg.generator, phi);
    auto p = outcome_traces(rho_bar.matrix(), cfg.povm);
    for (double &v : p) {
        v = std::max(v, 0.0);
    }
    return p;
}

EstimatorTable bayes_estimators(const ExperimentConfig &cfg) {
    validate(cfg);
    const double d2 = prior_variance(cfg);
    const RealVector gamma = weights(cfg.covariance).gamma;
    const RealMatrix &c = cfg.covariance.matrix();
    const auto sites = static_cast<Eigen::Index>(cfg.generator.site_count());

    const auto rho_bar = encode_phase(dephase(cfg.state, cfg.generator, cfg.covariance),
                                      cfg.generator, cfg.prior_mean);
    const auto p = outcome_traces(rho_bar.matrix(), cfg.povm);
    const auto outcomes = static_cast<Eigen::Index>(p.size());

    // (outcome, site) = Tr(-i[H_k, rho_bar] Pi_x).
    RealMatrix site_slopes(outcomes, sites);
    for (Eigen::Index k = 0; k < sites; ++k) {
        const auto d = outcome_traces(
            site_derivative_state(rho_bar, cfg.generator, static_cast<std::size_t>(k)).matrix(),
            cfg.povm);
        for (Eigen::Index x = 0; x < outcomes; ++x) {
            site_slopes(x, k) = d[static_cast<std::size_t>(x)];
        }
    }

    EstimatorTable t;
    t.prior_mean = cfg.prior_mean;
    t.delta2 = d2;
    t.probabilities.resize(p.size());
    t.included.resize(p.size());
    t.estimate.resize(p.size());
    t.site_estimates = RealMatrix::Constant(outcomes, sites, cfg.prior_mean);
    bool any = false;
    for (Eigen::Index x = 0; x < outcomes; ++x) {
        const auto xi = static_cast<std::size_t>(x);
        t.probabilities[xi] = std::max(p[xi], 0.0);
        t.included[xi] = p[xi] > kProbabilityFloor;
        t.estimate[xi] = cfg.prior_mean;
        if (!t.included[xi]) {
            continue;
        }
        any = true;
        const RealVector shift = c * site_slopes.row(x).transpose() / p[xi];
        t.site_estimates.row(x) = (shift.array() + cfg.prior_mean).transpose();
        t.estimate[xi] = cfg.prior_mean + gamma.dot(shift);
    }
    if (!any) {
        throw DegenerateMeasurement("every outcome has negligible probability");
    }
    return t;
}

double local_error(const EstimatorTable &table) {
    double err = 0.0;
    for (std::size_t x = 0; x < table.outcome_count(); ++x) {
        const double dev = table.estimate[x] - table.prior_mean;
        err += table.probabilities[x] * dev * dev;
    }
    return err;
}

double local_error(const ExperimentConfig &cfg) { return local_error(bayes_estimators(cfg)); }

EstimatorTable best_estimator(const ExperimentConfig &cfg) {
    auto t = bayes_estimators(cfg);
    const double err = local_error(t);
    if (!(err > kUninformativeRatio * t.delta2)) {
        throw UninformativeMeasurement("measurement carries no phase information");
    }
    const double scale = err / t.delta2;
    std::vector<double> best(t.outcome_count());
    for (std::size_t x = 0; x < best.size(); ++x) {
        best[x] = t.prior_mean + (t.estimate[x] - t.prior_mean) / scale;
    }
    t.best = std::move(best);
    return t;
}

double bayes_mse(const ExperimentConfig &cfg) {
    const auto t = bayes_estimators(cfg);
    return t.delta2 - local_error(t);
}

QbcrGap qbcr_gap(const ExperimentConfig &cfg) {
    const auto t = bayes_estimators(cfg);
    const double lhs = t.delta2 - local_error(t);
    const double rhs = 1.0 / (1.0 / t.delta2 + qfi(cfg.state, cfg.generator));
    return {lhs, rhs, lhs - rhs};
}

double weighted_estimator_error(const ExperimentConfig &cfg, std::span<const double> w) {
    validate(cfg);
    const auto sites = cfg.generator.site_count();
    if (w.size() != sites) {
        throw InvalidArgument("weight vector length does not match the site count");
    }
    double total = 0.0;
    for (double v : w) {
        total += v;
    }
    if (std::abs(total - 1.0) > 1e-10) {
        throw InvalidArgument("weights must sum to one");
    }
    const Eigen::Map<const RealVector> weights_vec(w.data(), static_cast<Eigen::Index>(sites));
    const RealVector cw = cfg.covariance.matrix() * weights_vec;

    const auto rho_bar = encode_phase(dephase(cfg.state, cfg.generator, cfg.covariance),
                                      cfg.generator, cfg.prior_mean);
    const auto p = outcome_traces(rho_bar.matrix(), cfg.povm);
    std::vector<double> shift(p.size(), 0.0); // (w^T C d(x)) / p(x)
    std::vector<double> slope(p.size(), 0.0); // Tr(-i[H, rho_bar] Pi_x)
    for (std::size_t k = 0; k < sites; ++k) {
        const auto d = outcome_traces(site_derivative_state(rho_bar, cfg.generator, k).matrix(),
                                      cfg.povm);
        for (std::size_t x = 0; x < p.size(); ++x) {
            shift[x] += cw(static_cast<Eigen::Index>(k)) * d[x];
            slope[x] += d[x];
        }
    }
    double second = 0.0;
    double response = 0.0; // d/dphi E_phi[estimate] at the prior mean
    for (std::size_t x = 0; x < p.size(); ++x) {
        if (p[x] > kProbabilityFloor) {
            second += shift[x] * shift[x] / p[x];
            response += slope[x] * shift[x] / p[x];
        }
    }
    if (!(std::abs(response) > 0.0)) {
        throw UninformativeMeasurement("weighted estimator has no phase response");
    }
    return second / (response * response);
}

MonteCarloEstimate bayes_mse_monte_carlo(const ExperimentConfig &cfg, std::size_t shots,
                                         std::uint64_t seed) {
    if (shots < 2) {
        throw InvalidArgument("bayes_mse_monte_carlo: shots must be >= 2");
    }
    const auto table = bayes_estimators(cfg);
    const RealVector gamma = weights(cfg.covariance).gamma;
    const RealMatrix root = cfg.covariance.square_root();
    const PhaseResolvedModel model(cfg.state, cfg.generator, cfg.povm);
    const auto sites = static_cast<Eigen::Index>(cfg.generator.site_count());
    const std::size_t blocks = (shots + kShotBlockSize - 1) / kShotBlockSize;

    std::vector<Moments> partial(blocks);
    parallel_for(blocks, [&](std::size_t b) {
        std::mt19937_64 rng(derive_seed(seed, b));
        std::normal_distribution<double> normal;
        std::uniform_real_distribution<double> uniform;
        RealVector z(sites);
        std::vector<double> p;
        Moments m;
        const std::size_t end = std::min(shots, (b + 1) * kShotBlockSize);
        for (std::size_t shot = b * kShotBlockSize; shot < end; ++shot) {
            for (Eigen::Index j = 0; j < sites; ++j) {
                z(j) = normal(rng);
            }
            const RealVector offsets = root * z;
            const RealVector phases = offsets.array() + cfg.prior_mean;
            model.probabilities(phases, p);
            const std::size_t x = sample_outcome(p, uniform(rng));
            // estimate - gamma^T phi, with the common prior mean cancelled.
            const double err = (table.estimate[x] - cfg.prior_mean) - gamma.dot(offsets);
            m.sum += err * err;
            m.sum_sq += err * err * err * err;
        }
        partial[b] = m;
    });

    Moments total;
    for (const auto &m : partial) {
        total.sum += m.sum;
        total.sum_sq += m.sum_sq;
    }
    const double n = static_cast<double>(shots);
    const double mean = total.sum / n;
    const double var = std::max(0.0, (total.sum_sq / n - mean * mean) * n / (n - 1.0));
    return {mean, std::sqrt(var / n)};
}

SimulationResult simulate(const ExperimentConfig &cfg, std::size_t shots, std::uint64_t seed,
                          bool keep_log) {
    if (shots == 0) {
        throw InvalidArgument("simulate: shots must be >= 1");
    }
    const auto table = best_estimator(cfg);
    const auto &best = *table.best;
    const double true_phase = cfg.prior_mean + cfg.fluctuation;
    const RealMatrix root = cfg.covariance.square_root();
    const PhaseResolvedModel model(cfg.state, cfg.generator, cfg.povm);
    const auto sites = static_cast<Eigen::Index>(cfg.generator.site_count());
    const std::size_t blocks = (shots + kShotBlockSize - 1) / kShotBlockSize;

    struct Block {
        Moments deviation;
        Moments squared;
        std::vector<ShotRecord> log;
    };
    std::vector<Block> partial(blocks);
    parallel_for(blocks, [&](std::size_t b) {
        std::mt19937_64 rng(derive_seed(seed, b));
        std::normal_distribution<double> normal;
        std::uniform_real_distribution<double> uniform;
        RealVector z(sites);
        std::vector<double> p;
        Block blk;
        const std::size_t end = std::min(shots, (b + 1) * kShotBlockSize);
        if (keep_log) {
            blk.log.reserve(end - b * kShotBlockSize);
        }
        for (std::size_t shot = b * kShotBlockSize; shot < end; ++shot) {
            for (Eigen::Index j = 0; j < sites; ++j) {
                z(j) = normal(rng);
            }
            const RealVector phases = (root * z).array() + true_phase;
            model.probabilities(phases, p);
            const std::size_t x = sample_outcome(p, uniform(rng));
            const double dev = best[x] - true_phase;
            blk.deviation.sum += dev;
            blk.deviation.sum_sq += dev * dev;
            blk.squared.sum += dev * dev;
            blk.squared.sum_sq += dev * dev * dev * dev;
            if (keep_log) {
                blk.log.push_back({shot, std::vector<double>(phases.data(), phases.data() + sites),
                                   x, best[x]});
            }
        }
        partial[b] = std::move(blk);
    });

    Moments dev;
    Moments sq;
    SimulationResult r;
    for (auto &blk : partial) {
        dev.sum += blk.deviation.sum;
        dev.sum_sq += blk.deviation.sum_sq;
        sq.sum += blk.squared.sum;
        sq.sum_sq += blk.squared.sum_sq;
        if (keep_log) {
            r.log.insert(r.log.end(), std::make_move_iterator(blk.log.begin()),
                         std::make_move_iterator(blk.log.end()));
        }
    }
    const double n = static_cast<double>(shots);
    r.seed = seed;
    r.shots = shots;
    r.true_phase = true_phase;
    const double mean_dev = dev.sum / n;
    r.empirical_mean = true_phase + mean_dev;
    r.empirical_mse = sq.sum / n;
    r.variance_defined = shots > 1;
    if (r.variance_defined) {
        const double var_dev = std::max(0.0, (dev.sum_sq / n - mean_dev * mean_dev) * n / (n - 1.0));
        const double var_sq =
            std::max(0.0, (sq.sum_sq / n - r.empirical_mse * r.empirical_mse) * n / (n - 1.0));
        r.mean_std_error = std::sqrt(var_dev / n);
        r.mse_std_error = std::sqrt(var_sq / n);
    } else {
        r.mean_std_error = std::numeric_limits<double>::quiet_NaN();
        r.mse_std_error = std::numeric_limits<double>::quiet_NaN();
    }
    const auto rho_bar = encode_phase(dephase(cfg.state, cfg.generator, cfg.covariance),
                                      cfg.generator, cfg.prior_mean);
    r.predicted_mse = 1.0 / classical_fi(rho_bar, cfg.generator, cfg.povm);
    return r;
}

void write_shot_log_csv(std::ostream &out, const SimulationResult &result) {
    const std::size_t sites = result.log.empty() ? 0 : result.log.front().phases.size();
    out << "shot";
    for (std::size_t j = 0; j < sites; ++j) {
        out << ",phase_" << (j + 1);
    }
    out << ",outcome,estimate\n";
    const auto old_precision = out.precision(17);
    for (const auto &rec : result.log) {
        out << rec.index;
        for (double ph : rec.phases) {
            out << ',' << ph;
        }
        out << ',' << rec.outcome << ',' << rec.estimate << '\n';
    }
    out.precision(old_precision);
}

} // namespace dephimetry

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

#include "dephimetry/cli.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <limits>
#include <optional>
#include <random>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "dephimetry/bayes.hpp"
#include "dephimetry/covariance.hpp"
#include "dephimetry/dephasing.hpp"
#include "dephimetry/errors.hpp"
#include "dephimetry/fisher.hpp"
#include "dephimetry/parallel.hpp"
#include "dephimetry/report.hpp"

namespace dephimetry::cli {

namespace {

using ordered_json = nlohmann::ordered_json;

struct StateFlags {
    std::string state = "ghz";
    std::size_t n = 2;
    std::string family = "identity";
    double alpha = 0.0;
    double two_beta2 = 0.5;
};

void add_state_flags(CLI::App *cmd, StateFlags &f) {
    cmd->add_option("--state", f.state, "Initial state")
        ->check(CLI::IsMember({"ghz", "product-plus", "heisenberg"}))
        ->capture_default_str();
    cmd->add_option("--n", f.n, "Number of subsystems")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    cmd->add_option("--family", f.family, "Covariance family")
        ->check(CLI::IsMember({"c1", "c2", "identity"}))
        ->capture_default_str();
    cmd->add_option("--alpha", f.alpha, "Correlation parameter in [0, 1]")
        ->check(CLI::Range(0.0, 1.0))
        ->capture_default_str();
    cmd->add_option("--two-beta2", f.two_beta2, "Phase variance 2 beta^2")
        ->check(CLI::NonNegativeNumber)
        ->capture_default_str();
}

GridPoint to_grid_point(const StateFlags &f) {
    return {parse_family(f.family), parse_state(f.state), f.n, f.alpha, f.two_beta2};
}

DensityMatrix make_state(StateKind kind, std::size_t n) {
    if (n > kExactMaxN) {
        throw InvalidArgument("explicit states are limited to n <= " + std::to_string(kExactMaxN));
    }
    switch (kind) {
    case StateKind::Ghz:
        return ghz_state(n);
    case StateKind::ProductPlus:
        return product_plus_state(n);
    case StateKind::Heisenberg:
        break;
    }
    throw InvalidArgument("state 'heisenberg' has no explicit density matrix");
}

CovarianceMatrix make_covariance(Family family, std::size_t n, double two_beta2, double alpha) {
    switch (family) {
    case Family::C1:
        return build_c1(n, two_beta2, alpha);
    case Family::C2:
        return build_c2(n, two_beta2, alpha);
    case Family::Identity:
        return CovarianceMatrix::independent(n, two_beta2);
    case Family::Custom:
        break;
    }
    throw InvalidArgument("custom covariances are not available from the command line");
}

double analytic_qfi(StateKind kind, std::size_t n) {
    const double nn = static_cast<double>(n);
    return kind == StateKind::ProductPlus ? nn : nn * nn;
}

/// Writes to --out when given, otherwise to `fallback`.
void emit(const std::string &path, std::ostream &fallback,
          const std::function<void(std::ostream &)> &write) {
    if (path.empty()) {
        write(fallback);
        return;
    }
    std::ofstream file(path, std::ios::binary);
    if (!file) {
        throw InvalidArgument("cannot open output file '" + path + "'");
    }
    write(file);
    if (!file) {
        throw NumericalError("failed writing output file '" + path + "'");
    }
}

void write_json(std::ostream &out, const ordered_json &j) { out << j.dump(2) << '\n'; }

void write_reports(std::ostream &out, const std::vector<BoundReport> &rows,
                   const std::string &format) {
    if (format == "json") {
        ordered_json arr = ordered_json::array();
        for (const auto &r : rows) {
            arr.push_back(to_json(r));
        }
        write_json(out, arr);
        return;
    }
    out << kBoundReportHeader << '\n';
    for (const auto &r : rows) {
        write_csv_row(out, r);
    }
}

std::vector<BoundReport> compute_rows(const std::vector<GridPoint> &points) {
    std::vector<BoundReport> rows(points.size());
    parallel_for(points.size(), [&](std::size_t i) { rows[i] = bound_row(points[i]); });
    return rows;
}

int any_violation(const std::vector<BoundReport> &rows, std::ostream &err) {
    for (const auto &r : rows) {
        if (r.violation) {
            err << "bound violation: n=" << r.n << " f_rho_bar=" << format_optional(r.f_rho_bar)
                << " main_bound=" << format_double(r.main_bound_value) << '\n';
            return kViolation;
        }
    }
    return kSuccess;
}

struct Options {
    std::string out;
    std::string format = "csv";
};

int cmd_bound(const StateFlags &f, const Options &o, std::ostream &out, std::ostream &err) {
    const auto rows = compute_rows({to_grid_point(f)});
    emit(o.out, out, [&](std::ostream &s) { write_reports(s, rows, o.format); });
    return any_violation(rows, err);
}

int cmd_qfi(const StateFlags &f, const Options &o, std::ostream &out) {
    const auto p = to_grid_point(f);
    const auto rho = make_state(p.state, p.n);
    const auto gen = GeneratorSpec::qubits(p.n);
    const auto c = make_covariance(p.family, p.n, p.two_beta2, p.alpha);
    const double f_rho = qfi(rho, gen);
    const double f_bar = qfi(dephase(rho, gen, c), gen);
    const double d2 = delta2_c(c);
    ordered_json j;
    j["state"] = f.state;
    j["n"] = p.n;
    j["family"] = f.family;
    j["alpha"] = p.alpha;
    j["two_beta2"] = p.two_beta2;
    j["delta2_c"] = json_number(d2);
    j["f_rho"] = json_number(f_rho);
    j["f_rho_bar"] = json_number(f_bar);
    emit(o.out, out, [&](std::ostream &s) {
        if (o.format == "json") {
            write_json(s, j);
        } else {
            s << "state,n,family,alpha,two_beta2,delta2_c,f_rho,f_rho_bar\n"
              << f.state << ',' << p.n << ',' << f.family << ',' << format_double(p.alpha) << ','
              << format_double(p.two_beta2) << ',' << format_double(d2) << ','
              << format_double(f_rho) << ',' << format_double(f_bar) << '\n';
        }
    });
    return kSuccess;
}

int cmd_dephase(const StateFlags &f, const Options &o, std::ostream &out) {
    const auto p = to_grid_point(f);
    const auto rho = make_state(p.state, p.n);
    const auto gen = GeneratorSpec::qubits(p.n);
    const auto c = make_covariance(p.family, p.n, p.two_beta2, p.alpha);
    const auto bar = dephase(rho, gen, c);
    const auto &m = bar.matrix();
    emit(o.out, out, [&](std::ostream &s) {
        if (o.format == "json") {
            ordered_json re = ordered_json::array();
            ordered_json im = ordered_json::array();
            for (Eigen::Index r = 0; r < m.rows(); ++r) {
                ordered_json rr = ordered_json::array();
                ordered_json ii = ordered_json::array();
                for (Eigen::Index k = 0; k < m.cols(); ++k) {
                    rr.push_back(m(r, k).real());
                    ii.push_back(m(r, k).imag());
                }
                re.push_back(std::move(rr));
                im.push_back(std::move(ii));
            }
            ordered_json j;
            j["state"] = f.state;
            j["n"] = p.n;
            j["family"] = f.family;
            j["alpha"] = p.alpha;
            j["two_beta2"] = p.two_beta2;
            j["dim"] = m.rows();
            j["trace"] = m.trace().real();
            j["purity"] = bar.purity();
            j["real"] = std::move(re);
            j["imag"] = std::move(im);
            write_json(s, j);
        } else {
            s << "row,col,real,imag\n";
            for (Eigen::Index r = 0; r < m.rows(); ++r) {
                for (Eigen::Index k = 0; k < m.cols(); ++k) {
                    s << r << ',' << k << ',' << format_double(m(r, k).real()) << ','
                      << format_double(m(r, k).imag()) << '\n';
                }
            }
        }
    });
    return kSuccess;
}

/// (value - expected) / std_error. A zero standard error happens when every
/// shot has the same squared error; differences at rounding level then score 0.
double z_score(double value, double expected, double std_error) {
    const double diff = value - expected;
    if (std_error > 0.0) {
        return diff / std_error;
    }
    if (std::abs(diff) <= 1e-12 * std::max(1.0, std::abs(expected))) {
        return 0.0;
    }
    return std::copysign(std::numeric_limits<double>::infinity(), diff);
}

struct SimulateFlags {
    std::size_t shots = 100000;
    std::optional<std::uint64_t> seed;
    double phi0 = 0.0;
    double delta_phi = 0.0;
    std::string log;
};

int cmd_simulate(const StateFlags &f, const SimulateFlags &sf, const Options &o,
                 std::ostream &out, std::ostream &err) {
    const auto p = to_grid_point(f);
    const auto rho = make_state(p.state, p.n);
    const auto gen = GeneratorSpec::qubits(p.n);
    auto c = make_covariance(p.family, p.n, p.two_beta2, p.alpha);
    auto povm = optimal_povm(dephase(rho, gen, c), gen);
    const ExperimentConfig cfg{rho, gen, std::move(c), std::move(povm), sf.phi0, sf.delta_phi};

    std::uint64_t seed = 0;
    if (sf.seed) {
        seed = *sf.seed;
    } else {
        std::random_device rd;
        seed = (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
        err << "seed: " << seed << '\n';
    }
    const auto r = simulate(cfg, sf.shots, seed, !sf.log.empty());

    ordered_json j;
    j["state"] = f.state;
    j["n"] = p.n;
    j["family"] = f.family;
    j["alpha"] = p.alpha;
    j["two_beta2"] = p.two_beta2;
    j["phi0"] = sf.phi0;
    j["delta_phi"] = sf.delta_phi;
    j["seed"] = seed;
    j["shots"] = r.shots;
    j["variance_defined"] = r.variance_defined;
    j["empirical_mean"] = json_number(r.empirical_mean);
    j["mean_std_error"] = r.variance_defined ? json_number(r.mean_std_error) : ordered_json();
    j["mean_z_score"] = r.variance_defined
                            ? json_number(z_score(r.empirical_mean, r.true_phase, r.mean_std_error))
                            : ordered_json();
    j["empirical_mse"] = json_number(r.empirical_mse);
    j["mse_std_error"] = r.variance_defined ? json_number(r.mse_std_error) : ordered_json();
    j["predicted_mse"] = json_number(r.predicted_mse);
    j["z_score"] = r.variance_defined
                       ? json_number(z_score(r.empirical_mse, r.predicted_mse, r.mse_std_error))
                       : ordered_json();

    emit(o.out, out, [&](std::ostream &s) {
        if (o.format == "json") {
            write_json(s, j);
            return;
        }
        std::string header;
        std::string row;
        for (const auto &[key, value] : j.items()) {
            header += (header.empty() ? "" : ",") + key;
            std::string cell;
            if (value.is_number_float()) {
                cell = format_double(value.get<double>());
            } else if (value.is_string()) {
                cell = value.get<std::string>();
            } else if (!value.is_null()) {
                cell = value.dump();
            }
            row += (row.empty() && header == key ? "" : ",") + cell;
        }
        s << header << '\n' << row << '\n';
    });
    if (!sf.log.empty()) {
        emit(sf.log, out, [&](std::ostream &s) { write_shot_log_csv(s, r); });
    }
    return kSuccess;
}

std::vector<GridPoint> expand(const SweepConfig &cfg) {
    std::vector<GridPoint> points;
    points.reserve(cfg.size());
    for (auto family : cfg.family) {
        for (auto state : cfg.state) {
            for (auto n : cfg.n) {
                for (auto alpha : cfg.alpha) {
                    for (auto x : cfg.two_beta2) {
                        points.push_back({family, state, n, alpha, x});
                    }
                }
            }
        }
    }
    return points;
}

int cmd_sweep(const std::string &path, const Options &o, std::ostream &out, std::ostream &err) {
    std::ifstream in(path);
    if (!in) {
        err << "error: cannot open config file '" << path << "'\n";
        return kUsage;
    }
    const auto cfg = parse_sweep_config(in);
    const auto rows = compute_rows(expand(cfg));
    emit(o.out, out, [&](std::ostream &s) { write_reports(s, rows, o.format); });
    return any_violation(rows, err);
}

struct FigureFlags {
    std::size_t n_max = 10000;
    std::size_t per_decade = 10;
    double two_beta2 = 0.5;
    double c1_alpha = 0.9;
    double c2_alpha = 0.2;
    double x_min = 1e-3;
    double x_max = 2.0;
    std::size_t x_points = 41;
    std::string boundary_out;
};

/// Rows of the scaling panel: independent, collective, constant correlations
/// (C1) and exponentially decaying correlations (C2), curve-major.
std::vector<GridPoint> scaling_points(const FigureFlags &ff) {
    const auto ns = log_grid(ff.n_max, ff.per_decade);
    const std::vector<std::pair<Family, double>> curves = {
        {Family::Identity, 0.0},
        {Family::C1, 1.0},
        {Family::C1, ff.c1_alpha},
        {Family::C2, ff.c2_alpha},
    };
    std::vector<GridPoint> points;
    for (const auto &[family, alpha] : curves) {
        for (auto n : ns) {
            points.push_back({family, StateKind::Heisenberg, n, alpha, ff.two_beta2});
        }
    }
    return points;
}

int cmd_figure(const std::string &panel, const FigureFlags &ff, const Options &o,
               std::ostream &out) {
    if (panel == "scaling" || panel == "scaling-panel") {
        if (ff.c2_alpha >= 1.0) {
            throw InvalidArgument("--c2-alpha must be < 1");
        }
        const auto rows = compute_rows(scaling_points(ff));
        emit(o.out, out, [&](std::ostream &s) { write_reports(s, rows, "csv"); });
        return kSuccess;
    }
    if (panel != "comparison" && panel != "comparison-panel") {
        throw InvalidArgument("unknown panel '" + panel + "' (expected scaling or comparison)");
    }
    if (!(ff.x_min > 0.0) || !(ff.x_max > ff.x_min) || ff.x_points < 2) {
        throw InvalidArgument("need 0 < --two-beta2-min < --two-beta2-max and >= 2 points");
    }
    const auto ns = log_grid(ff.n_max, ff.per_decade);
    std::vector<double> xs(ff.x_points);
    const double ratio = std::log(ff.x_max / ff.x_min) / static_cast<double>(ff.x_points - 1);
    for (std::size_t i = 0; i < xs.size(); ++i) {
        xs[i] = ff.x_min * std::exp(ratio * static_cast<double>(i));
    }
    xs.back() = ff.x_max;
    const auto region = crossover(ns, xs);

    auto write_grid = [&](std::ostream &s) {
        s << "n,two_beta2,independent_bound,reference_g,independent_tighter\n";
        for (const auto &g : region.grid) {
            s << g.n << ',' << format_double(g.two_beta2) << ','
              << format_double(g.independent_bound) << ',' << format_double(g.reference_bound)
              << ',' << (g.independent_tighter ? 1 : 0) << '\n';
        }
    };
    auto write_boundary = [&](std::ostream &s) {
        s << "n,two_beta2,approximation,ratio\n";
        for (const auto &b : region.boundary) {
            s << b.n << ',' << format_double(b.two_beta2) << ','
              << format_double(b.approximation) << ',' << format_double(b.ratio) << '\n';
        }
    };

    if (o.out.empty()) {
        write_grid(out);
        out << '\n';
        write_boundary(out);
        return kSuccess;
    }
    emit(o.out, out, write_grid);
    emit(ff.boundary_out.empty() ? o.out + ".boundary.csv" : ff.boundary_out, out,
         write_boundary);
    return kSuccess;
}

} // namespace

BoundReport bound_row(const GridPoint &p) {
    if (p.n == 0) {
        throw InvalidArgument("n must be >= 1");
    }
    const double alpha = p.family == Family::Identity ? 0.0 : p.alpha;
    BoundReport r;
    if (p.state != StateKind::Heisenberg && p.n <= kExactMaxN) {
        r = verify_bound(make_state(p.state, p.n), GeneratorSpec::qubits(p.n),
                         make_covariance(p.family, p.n, p.two_beta2, alpha));
    } else {
        r.n = p.n;
        r.delta2_c = family_delta2(p.family, p.n, p.two_beta2, alpha);
        r.f_rho = analytic_qfi(p.state, p.n);
        r.main_bound_value = main_bound(r.delta2_c, r.f_rho);
        r.error_bound_value = error_bound(r.delta2_c, r.f_rho);
    }
    r.family = p.family;
    r.alpha = alpha;
    r.two_beta2 = p.two_beta2;
    if (alpha == 0.0) {
        r.reference_g_value = reference_bound_g(p.n, p.two_beta2);
    }
    return r;
}

std::vector<std::size_t> log_grid(std::size_t max_n, std::size_t per_decade) {
    if (max_n == 0 || per_decade == 0) {
        throw InvalidArgument("log_grid: max_n and per_decade must be >= 1");
    }
    std::vector<std::size_t> ns;
    const double top = std::log10(static_cast<double>(max_n));
    const auto steps = static_cast<std::size_t>(std::ceil(top * static_cast<double>(per_decade)));
    for (std::size_t i = 0; i <= steps; ++i) {
        const double e = std::min(top, static_cast<double>(i) / static_cast<double>(per_decade));
        const auto n = static_cast<std::size_t>(std::llround(std::pow(10.0, e)));
        if (ns.empty() || n > ns.back()) {
            ns.push_back(std::min(n, max_n));
        }
    }
    if (ns.back() != max_n) {
        ns.push_back(max_n);
    }
    return ns;
}

int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err) {
    CLI::App app{"Phase-estimation precision limits under correlated Gaussian dephasing",
                 "dephimetry"};
    app.require_subcommand(1);
    Options opts;
    StateFlags state;
    SimulateFlags sim;
    FigureFlags fig;
    std::string config_path;
    std::string panel;

    auto *bound = app.add_subcommand("bound", "Bound report for one configuration");
    add_state_flags(bound, state);
    bound->add_option("--format", opts.format, "Output format (default csv)")
        ->check(CLI::IsMember({"csv", "json"}));
    bound->add_option("--out", opts.out, "Output file (default: stdout)");

    auto *qfi_cmd = app.add_subcommand("qfi", "Fisher information of a state before and after dephasing");
    add_state_flags(qfi_cmd, state);
    qfi_cmd->add_option("--format", opts.format, "Output format (default json)")
        ->check(CLI::IsMember({"csv", "json"}));
    qfi_cmd->add_option("--out", opts.out, "Output file (default: stdout)");

    auto *deph = app.add_subcommand("dephase", "Dephased density matrix");
    add_state_flags(deph, state);
    deph->add_option("--format", opts.format, "Output format (default json)")
        ->check(CLI::IsMember({"csv", "json"}));
    deph->add_option("--out", opts.out, "Output file (default: stdout)");

    auto *simc = app.add_subcommand("simulate", "Monte Carlo run of the locally unbiased estimator");
    add_state_flags(simc, state);
    simc->add_option("--format", opts.format, "Output format (default json)")
        ->check(CLI::IsMember({"csv", "json"}));
    simc->add_option("--out", opts.out, "Output file (default: stdout)");
    simc->add_option("--shots", sim.shots, "Number of experiment runs")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    simc->add_option("--seed", sim.seed, "RNG seed (random and echoed when omitted)");
    simc->add_option("--phi0", sim.phi0, "Known reference phase")->capture_default_str();
    simc->add_option("--delta-phi", sim.delta_phi, "True phase fluctuation")
        ->capture_default_str();
    simc->add_option("--log", sim.log, "Per-shot CSV log path");

    auto *sweep = app.add_subcommand("sweep", "Bound reports over a configuration grid");
    sweep->add_option("config", config_path, "key = value grid file")->required();
    sweep->add_option("--format", opts.format, "Output format (default csv)")
        ->check(CLI::IsMember({"csv", "json"}));
    sweep->add_option("--out", opts.out, "Output file (default: stdout)");

    auto *figure = app.add_subcommand("figure", "Figure data: scaling or comparison panel");
    figure->add_option("panel", panel, "scaling | comparison")->required();
    figure->add_option("--out", opts.out, "Output file (default: stdout)");
    figure->add_option("--boundary-out", fig.boundary_out,
                       "Comparison boundary CSV (default: <out>.boundary.csv)");
    figure->add_option("--n-max", fig.n_max, "Largest N")->check(CLI::PositiveNumber)
        ->capture_default_str();
    figure->add_option("--points-per-decade", fig.per_decade, "N grid density")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    figure->add_option("--two-beta2", fig.two_beta2, "Scaling panel 2 beta^2")
        ->check(CLI::NonNegativeNumber)
        ->capture_default_str();
    figure->add_option("--c1-alpha", fig.c1_alpha, "Constant-correlation curve alpha")
        ->check(CLI::Range(0.0, 1.0))
        ->capture_default_str();
    figure->add_option("--c2-alpha", fig.c2_alpha, "Exponential-correlation curve alpha")
        ->check(CLI::Range(0.0, 1.0))
        ->capture_default_str();
    figure->add_option("--two-beta2-min", fig.x_min, "Comparison grid lower 2 beta^2")
        ->capture_default_str();
    figure->add_option("--two-beta2-max", fig.x_max, "Comparison grid upper 2 beta^2")
        ->capture_default_str();
    figure->add_option("--two-beta2-points", fig.x_points, "Comparison grid size")
        ->capture_default_str();

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(std::move(reversed));
    } catch (const CLI::CallForHelp &) {
        out << app.help();
        return kSuccess;
    } catch (const CLI::CallForAllHelp &) {
        out << app.help("", CLI::AppFormatMode::All);
        return kSuccess;
    } catch (const CLI::ParseError &e) {
        err << "error: " << e.what() << '\n' << app.help();
        return kUsage;
    }

    // Default formats differ per command: tables for bound/sweep, JSON for
    // single-record commands.
    const bool format_given = std::any_of(args.begin(), args.end(), [](const std::string &a) {
        return a == "--format" || a.rfind("--format=", 0) == 0;
    });
    if (!format_given) {
        opts.format = (qfi_cmd->parsed() || deph->parsed() || simc->parsed()) ? "json" : "csv";
    }

    try {
        if (bound->parsed()) {
            return cmd_bound(state, opts, out, err);
        }
        if (qfi_cmd->parsed()) {
            return cmd_qfi(state, opts, out);
        }
        if (deph->parsed()) {
            return cmd_dephase(state, opts, out);
        }
        if (simc->parsed()) {
            return cmd_simulate(state, sim, opts, out, err);
        }
        if (sweep->parsed()) {
            return cmd_sweep(config_path, opts, out, err);
        }
        if (figure->parsed()) {
            return cmd_figure(panel, fig, opts, out);
        }
    } catch (const InvalidArgument &e) {
        err << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const Error &e) {
        err << "numerical failure: " << e.what() << '\n';
        return kNumericalFailure;
    } catch (const std::exception &e) {
        err << "numerical failure: " << e.what() << '\n';
        return kNumericalFailure;
    }
    err << "error: no command given\n";
    return kUsage;
}

} // namespace dephimetry::cli

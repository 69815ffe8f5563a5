// SPDX-License-Identifier: Apache-2.0
//
// cvmdi - key-rate engine for continuous-variable MDI QKD over fading satellite links
// Copyright (C) 2026 cvmdi authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include "cvmdi/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <ostream>
#include <stdexcept>

#include "cvmdi/oracle.hpp"
#include "cvmdi/parallel.hpp"
#include "cvmdi/rng.hpp"

namespace cvmdi::sweep {

namespace {

std::vector<double> loss_grid(const RunConfig& config) {
    std::vector<double> grid(static_cast<std::size_t>(config.steps));
    const double span = config.loss_db_max - config.loss_db_min;
    for (int i = 0; i < config.steps; ++i)
        grid[static_cast<std::size_t>(i)] =
            config.loss_db_min + span * i / static_cast<double>(config.steps - 1);
    return grid;
}

void check_floor(double total_loss_db, double beta, double w, const char* where) {
    const double floor_db = total_loss_floor_db(beta, w);
    if (total_loss_db < floor_db - 1e-9)
        throw ConfigError(std::string(where) + ": total loss target " +
                          format_sig12(total_loss_db) +
                          " dB is below the zero-wander floor -10*log10(eta0^4) = " +
                          format_sig12(floor_db) + " dB");
}

double clipped_for_report(double rate) { return std::max(rate, 0.0); }

ProtocolParams params_for(const RunConfig& config, Scheme scheme, DetectionKind detection,
                          ReferenceParty reference, double xi) {
    ProtocolParams p = config.protocol_params();
    p.scheme = scheme;
    p.detection = detection;
    p.reference = scheme == Scheme::DirectTransmission ? ReferenceParty::Bob : reference;
    p.xi = xi;
    return p;
}

}  // namespace

void SweepResult::write_csv(std::ostream& os) const {
    for (const auto& [key, value] : metadata) os << "# " << key << "=" << value << "\n";
    for (std::size_t i = 0; i < columns.size(); ++i) os << (i ? "," : "") << columns[i];
    os << "\n";
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i)
            os << (i ? "," : "") << format_sig12(row[i]);
        os << "\n";
    }
}

void SweepResult::write_csv_file(const std::string& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open output file '" + path + "'");
    write_csv(out);
}

double total_loss_floor_db(double beta, double w) {
    const FadingParams p = weibull_params(beta, w, 0.0);
    return -20.0 * std::log10(p.eta0 * p.eta0);
}

double solve_symmetric_leg_sigma(double total_loss_db, double beta, double w,
                                 const QuadratureRule& rule) {
    check_floor(total_loss_db, beta, w, "symmetric sweep");
    return solve_sigma_b(0.5 * total_loss_db, beta, w, rule);
}

double solve_asymmetric_sigma_b(double total_loss_db, double k, double beta, double w,
                                const QuadratureRule& rule) {
    check_floor(total_loss_db, beta, w, "asymmetric sweep");
    auto total_loss = [&](double sigma_b_b) {
        return mean_loss_db(weibull_params(beta, w, asymmetry_ratio(k, sigma_b_b)), rule) +
               mean_loss_db(weibull_params(beta, w, sigma_b_b), rule);
    };
    const double floor_db = total_loss_floor_db(beta, w);
    if (total_loss_db <= floor_db + 1e-9) return 0.0;

    double lo = 1e-9 * beta;
    while (total_loss(lo) > total_loss_db) lo *= 0.5;
    double hi = std::max(beta, 2.0 * lo);
    while (total_loss(hi) < total_loss_db) {
        hi *= 2.0;
        if (hi > 1e12 * beta)
            throw std::runtime_error("solve_asymmetric_sigma_b: failed to bracket target loss");
    }
    double log_lo = std::log(lo), log_hi = std::log(hi);
    double mid = 0.5 * (log_lo + log_hi);
    for (int iter = 0; iter < 200; ++iter) {
        mid = 0.5 * (log_lo + log_hi);
        const double achieved = total_loss(std::exp(mid));
        if (std::abs(achieved - total_loss_db) <= 1e-6) break;
        if (achieved < total_loss_db)
            log_lo = mid;
        else
            log_hi = mid;
    }
    return std::exp(mid);
}

KeyrateResult run_keyrate(const RunConfig& config) {
    config.validate();
    const QuadratureRule rule{config.nodes};
    KeyrateResult result;
    result.metadata = config.metadata();

    if (config.channel_mode() == ChannelMode::Fixed) {
        result.bits_per_pulse = point_key_rate(config.protocol_params(), config.tau_a, config.tau_b);
    } else {
        check_floor(config.loss_db, config.beta, config.w, "keyrate");
        const double sigma_b_b =
            config.k == 1.0
                ? solve_symmetric_leg_sigma(config.loss_db, config.beta, config.w, rule)
                : solve_asymmetric_sigma_b(config.loss_db, config.k, config.beta, config.w, rule);
        const double sigma_b_a =
            config.k == 1.0 ? sigma_b_b : asymmetry_ratio(config.k, sigma_b_b);
        const FadingParams fa = weibull_params(config.beta, config.w, sigma_b_a);
        const FadingParams fb = weibull_params(config.beta, config.w, sigma_b_b);
        result.metadata.emplace_back("sigma_b_a", format_sig12(sigma_b_a));
        result.metadata.emplace_back("sigma_b_b", format_sig12(sigma_b_b));
        result.metadata.emplace_back("achieved_loss_db",
                                     format_sig12(mean_loss_db(fa, rule) + mean_loss_db(fb, rule)));
        result.bits_per_pulse =
            averaged_key_rate(config.protocol_params(), fa, fb, rule, config.clip);
    }
    result.bits_per_second = result.bits_per_pulse * config.pulse_rate_hz;
    return result;
}

void KeyrateResult::print(std::ostream& os) const {
    for (const auto& [key, value] : metadata) os << key << "=" << value << "\n";
    os << "key_rate_bits_per_pulse=" << format_sig12(bits_per_pulse) << "\n";
    os << "key_rate_bits_per_second=" << format_sig12(bits_per_second) << "\n";
}

Figure1Result run_figure1(const RunConfig& config) {
    config.validate();
    if (config.k != 1.0)
        throw ConfigError("figure1: the symmetric sweep requires k=1 (got k=" +
                          format_sig12(config.k) + ")");
    const QuadratureRule rule{config.nodes};
    const auto grid = loss_grid(config);
    const ReferenceParty reference = config.reference_party();

    const ProtocolParams mdi_hom =
        params_for(config, Scheme::Mdi, DetectionKind::Homodyne, reference, config.xi);
    const ProtocolParams mdi_het =
        params_for(config, Scheme::Mdi, DetectionKind::Heterodyne, reference, config.xi);
    const ProtocolParams dir_hom = params_for(config, Scheme::DirectTransmission,
                                              DetectionKind::Homodyne, reference, config.xi);
    const ProtocolParams dir_het = params_for(config, Scheme::DirectTransmission,
                                              DetectionKind::Heterodyne, reference, config.xi);

    Figure1Result result;
    result.fading.metadata = config.metadata();
    result.fading.metadata.emplace_back("loss_split", "equal-db-per-leg");
    result.fading.metadata.emplace_back("table", "fading");
    result.fixed.metadata = config.metadata();
    result.fixed.metadata.emplace_back("loss_split", "equal-db-per-leg");
    result.fixed.metadata.emplace_back("table", "fixed-attenuation");
    result.fading.columns = {"loss_db", "mdi_homodyne", "mdi_heterodyne", "direct_homodyne",
                             "direct_heterodyne"};
    result.fixed.columns = result.fading.columns;
    result.fading.rows.resize(grid.size());
    result.fixed.rows.resize(grid.size());

    parallel_for(grid.size(), [&](std::size_t i) {
        const double total_db = grid[i];
        const double sigma = solve_symmetric_leg_sigma(total_db, config.beta, config.w, rule);
        const FadingParams leg = weibull_params(config.beta, config.w, sigma);
        const double tau_leg = mean_transmissivity(leg, rule);

        result.fading.rows[i] = {
            total_db,
            averaged_key_rate(mdi_hom, leg, leg, rule, config.clip),
            averaged_key_rate(mdi_het, leg, leg, rule, config.clip),
            averaged_key_rate(dir_hom, leg, leg, rule, config.clip),
            averaged_key_rate(dir_het, leg, leg, rule, config.clip),
        };
        result.fixed.rows[i] = {
            total_db,
            clipped_for_report(point_key_rate(mdi_hom, tau_leg, tau_leg)),
            clipped_for_report(point_key_rate(mdi_het, tau_leg, tau_leg)),
            clipped_for_report(point_key_rate(dir_hom, tau_leg, tau_leg)),
            clipped_for_report(point_key_rate(dir_het, tau_leg, tau_leg)),
        };
    });
    return result;
}

SweepResult run_figure2(const RunConfig& config) {
    config.validate();
    const QuadratureRule rule{config.nodes};
    const auto grid = loss_grid(config);
    const DetectionKind detection = config.detection_kind();
    static constexpr double kXis[3] = {1.0, 0.95, 0.8};

    SweepResult result;
    result.metadata = config.metadata();
    result.metadata.emplace_back("loss_split", "solve-sigma-b-b-with-sigma-b-a=k*sigma-b-b");
    result.columns = {"loss_db",       "xi1.00_alice", "xi1.00_bob", "xi0.95_alice",
                      "xi0.95_bob",    "xi0.80_alice", "xi0.80_bob"};
    result.rows.resize(grid.size());

    parallel_for(grid.size(), [&](std::size_t i) {
        const double total_db = grid[i];
        const double sigma_b_b =
            solve_asymmetric_sigma_b(total_db, config.k, config.beta, config.w, rule);
        const FadingParams fa =
            weibull_params(config.beta, config.w, asymmetry_ratio(config.k, sigma_b_b));
        const FadingParams fb = weibull_params(config.beta, config.w, sigma_b_b);

        std::vector<double> row = {total_db};
        for (const double xi : kXis) {
            for (const ReferenceParty ref : {ReferenceParty::Alice, ReferenceParty::Bob}) {
                const ProtocolParams p = params_for(config, Scheme::Mdi, detection, ref, xi);
                row.push_back(averaged_key_rate(p, fa, fb, rule, config.clip));
            }
        }
        result.rows[i] = std::move(row);
    });
    return result;
}

int run_validate(const RunConfig& config, std::ostream& os) {
    config.validate();
    std::vector<oracle::CheckLine> lines;

    // Deterministic brute force against the closed-form conditional state.
    {
        Xoshiro256 rng(config.seed, 0xfeed);
        double worst = 0.0;
        for (int draw = 0; draw < 100; ++draw) {
            const double v = 1.0 + 99.0 * rng.next_double();
            const double ta = rng.next_double(), tb = rng.next_double();
            const double ea = 0.1 * rng.next_double(), eb = 0.1 * rng.next_double();
            const Eigen::Matrix4d brute =
                oracle::conditional_kept_cm(oracle::build_network_cm(v, ta, tb, ea, eb));
            const TwoModeCM closed = mdi_conditional_cm(v, ta, tb, ea, eb);
            Eigen::Matrix4d expected;
            expected << closed.a, 0, closed.c_plus, 0,  //
                0, closed.a, 0, closed.c_minus,         //
                closed.c_plus, 0, closed.b, 0,          //
                0, closed.c_minus, 0, closed.b;
            worst = std::max(worst, (brute - expected).cwiseAbs().maxCoeff());
        }
        lines.push_back({"bell_conditioning_vs_closed_form", worst, 1e-10, worst < 1e-10});
    }

    const ProtocolParams p = params_for(config, Scheme::Mdi, config.detection_kind(),
                                        config.reference_party(), config.xi);
    const auto eb = oracle::simulate_eb_scheme(p, config.tau_a, config.tau_b, config.samples,
                                               config.seed);

    // Sampler second moments against the analytic network covariance.
    {
        const auto empirical = oracle::final_data_covariance(eb);
        const auto analytic = oracle::analytic_final_data_covariance(eb);
        double worst_z = 0.0;
        const double n = static_cast<double>(eb.n);
        for (int i = 0; i < 6; ++i) {
            for (int j = i; j < 6; ++j) {
                const double se = std::sqrt(
                    (analytic(i, i) * analytic(j, j) + analytic(i, j) * analytic(i, j)) / n);
                worst_z = std::max(worst_z, std::abs(empirical(i, j) - analytic(i, j)) / se);
            }
        }
        lines.push_back({"eb_sampler_covariance_vs_analytic", worst_z, 5.0, worst_z < 5.0});
    }

    // Fitted gain against the analytic regression coefficient.
    {
        const auto net = oracle::build_network_cm(eb.v, eb.tau_a, eb.tau_b, eb.eps_a, eb.eps_b);
        const double expected_gain = -net(6, 2) / net(2, 2);
        const double residual_var = net(6, 6) - net(6, 2) * net(6, 2) / net(2, 2);
        const double se = std::sqrt(residual_var / (net(2, 2) * static_cast<double>(eb.n)));
        const double z = std::abs(eb.gain - expected_gain) / se;
        lines.push_back({"eb_fit_gain_vs_analytic", z, 5.0, z < 5.0});
    }

    // Prepare-and-measure equivalence at the fitted gain, and the mismatched
    // negative control that must fail.
    {
        const auto pm = oracle::simulate_pm_scheme(p, config.tau_a, config.tau_b, config.samples,
                                                   config.seed + 1, eb.gain);
        const auto report = oracle::compare_schemes(pm, eb);
        double worst_z = 0.0;
        for (const auto& check : report.checks) worst_z = std::max(worst_z, check.statistic);
        lines.push_back({"pm_eb_equivalence_at_fit_gain", worst_z, 5.0, report.pass});

        const auto pm_bad = oracle::simulate_pm_scheme(p, config.tau_a, config.tau_b,
                                                       config.samples, config.seed + 2,
                                                       eb.gain * 1.25);
        const auto bad_report = oracle::compare_schemes(pm_bad, eb);
        double bad_z = 0.0;
        for (const auto& check : bad_report.checks) bad_z = std::max(bad_z, check.statistic);
        lines.push_back({"pm_eb_negative_control_detected", bad_z, 5.0, !bad_report.pass});
    }

    // Bit-identical rerun under the same seed.
    {
        const auto eb2 = oracle::simulate_eb_scheme(p, config.tau_a, config.tau_b, config.samples,
                                                    config.seed);
        const bool identical = eb2.alice_q == eb.alice_q && eb2.alice_p == eb.alice_p &&
                               eb2.bob_q == eb.bob_q && eb2.bob_p == eb.bob_p &&
                               eb2.relay_qs == eb.relay_qs && eb2.relay_pt == eb.relay_pt &&
                               eb2.gain == eb.gain;
        lines.push_back({"seed_determinism_bit_identical", identical ? 0.0 : 1.0, 0.5, identical});
    }

    int failures = 0;
    for (const auto& line : lines) {
        os << "check=" << line.name << " statistic=" << format_sig12(line.statistic)
           << " threshold=" << format_sig12(line.threshold)
           << " result=" << (line.pass ? "pass" : "fail") << "\n";
        if (!line.pass) ++failures;
    }
    os << (failures == 0 ? "validation=pass" : "validation=fail") << "\n";
    return failures;
}

}  // namespace cvmdi::sweep

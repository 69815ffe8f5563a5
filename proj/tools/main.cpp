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

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "cvmdi/config.hpp"
#include "cvmdi/sweep.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidationFailure = 1;
constexpr int kExitConfigError = 2;

struct CliOverrides {
    std::string config_path;
    std::string out;
    int nodes = 0;
    bool no_clip = false;
    std::uint64_t seed = 0;
    bool seed_set = false;
    double pulse_rate = 0.0;

    void apply(cvmdi::RunConfig& config) const {
        if (!config_path.empty()) config.load_file(config_path);
        if (!out.empty()) config.out = out;
        if (nodes > 0) config.nodes = nodes;
        if (no_clip) config.clip = false;
        if (seed_set) config.seed = seed;
        if (pulse_rate > 0.0) config.pulse_rate_hz = pulse_rate;
    }
};

void add_common_flags(CLI::App* app, CliOverrides& overrides) {
    app->add_option("--config", overrides.config_path, "flat key=value config file");
    app->add_option("--out", overrides.out, "output path (CSV prefix for sweeps)");
    app->add_option("--nodes", overrides.nodes, "quadrature nodes per dimension");
    app->add_flag("--no-clip", overrides.no_clip,
                  "average the literal key-rate integrand instead of max(K, 0)");
    app->add_option("--seed", overrides.seed, "RNG seed")->each([&overrides](const std::string&) {
        overrides.seed_set = true;
    });
    app->add_option("--pulse-rate", overrides.pulse_rate, "pulse rate in Hz for bits/s output");
}

int run(cvmdi::Subcommand sub, const CliOverrides& overrides) {
    cvmdi::RunConfig config = cvmdi::RunConfig::defaults_for(sub);
    overrides.apply(config);
    config.validate();

    using cvmdi::sweep::run_figure1;
    using cvmdi::sweep::run_figure2;
    using cvmdi::sweep::run_keyrate;
    using cvmdi::sweep::run_validate;

    switch (sub) {
        case cvmdi::Subcommand::Keyrate: {
            const auto result = run_keyrate(config);
            result.print(std::cout);
            if (!config.out.empty()) {
                std::ofstream file(config.out, std::ios::binary);
                if (!file) throw std::runtime_error("cannot open output file '" + config.out + "'");
                result.print(file);
            }
            return kExitOk;
        }
        case cvmdi::Subcommand::Figure1: {
            const auto result = run_figure1(config);
            const std::string prefix = config.out.empty() ? "figure1" : config.out;
            result.fading.write_csv_file(prefix + "_fading.csv");
            result.fixed.write_csv_file(prefix + "_fixed.csv");
            std::cout << "wrote " << prefix << "_fading.csv and " << prefix << "_fixed.csv\n";
            return kExitOk;
        }
        case cvmdi::Subcommand::Figure2: {
            const auto result = run_figure2(config);
            const std::string path =
                (config.out.empty() ? std::string("figure2") : config.out) + ".csv";
            result.write_csv_file(path);
            std::cout << "wrote " << path << "\n";
            return kExitOk;
        }
        case cvmdi::Subcommand::Validate: {
            std::ostringstream report;
            const int failures = run_validate(config, report);
            std::cout << report.str();
            if (!config.out.empty()) {
                std::ofstream file(config.out, std::ios::binary);
                if (!file) throw std::runtime_error("cannot open output file '" + config.out + "'");
                file << report.str();
            }
            return failures == 0 ? kExitOk : kExitValidationFailure;
        }
    }
    return kExitConfigError;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"CV-MDI QKD key rates over beam-wander fading satellite channels"};
    app.require_subcommand(1);

    CliOverrides overrides;
    cvmdi::Subcommand selected = cvmdi::Subcommand::Keyrate;

    auto* keyrate = app.add_subcommand(
        "keyrate", "single key rate at a fixed channel or a target mean fading loss");
    auto* figure1 = app.add_subcommand(
        "figure1", "symmetric loss sweep, fading and matched fixed-attenuation CSV tables");
    auto* figure2 = app.add_subcommand(
        "figure2", "asymmetric-geometry sweep over reconciliation reference and efficiency");
    auto* validate = app.add_subcommand(
        "validate", "run the conditioning brute force and sampler equivalence checks");

    add_common_flags(keyrate, overrides);
    add_common_flags(figure1, overrides);
    add_common_flags(figure2, overrides);
    add_common_flags(validate, overrides);

    keyrate->callback([&selected] { selected = cvmdi::Subcommand::Keyrate; });
    figure1->callback([&selected] { selected = cvmdi::Subcommand::Figure1; });
    figure2->callback([&selected] { selected = cvmdi::Subcommand::Figure2; });
    validate->callback([&selected] { selected = cvmdi::Subcommand::Validate; });

    CLI11_PARSE(app, argc, argv);

    try {
        return run(selected, overrides);
    } catch (const cvmdi::ConfigError& err) {
        std::cerr << "config error: " << err.what() << "\n";
        return kExitConfigError;
    } catch (const std::exception& err) {
        std::cerr << "error: " << err.what() << "\n";
        return kExitConfigError;
    }
}

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

#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "cvmdi/protocol.hpp"

namespace cvmdi {

/// Errors from config parsing or validation; the CLI maps them to exit code 2.
struct ConfigError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

enum class Subcommand { Keyrate, Figure1, Figure2, Validate };

enum class ChannelMode { Fading, Fixed };

/// Every knob that affects emitted numbers. Flat key=value config file, CLI
/// flags override file values; the full set is echoed into output metadata.
struct RunConfig {
    Subcommand subcommand = Subcommand::Keyrate;

    // protocol
    std::string scheme = "mdi";  // mdi | direct
    double v = 60.0;
    double eps_a = 0.02;
    double eps_b = 0.02;
    double xi = 1.0;
    std::string detection = "homodyne";  // homodyne | heterodyne
    std::string reference = "alice";     // alice | bob

    // fading geometry
    double beta = 1.0;
    double w = 1.0;
    double k = 1.0;  // sigma_b_A = k * sigma_b_B

    // keyrate channel
    std::string channel = "fading";  // fading | fixed
    double tau_a = 1.0;
    double tau_b = 1.0;
    double loss_db = 5.0;  // total mean loss target for the fading keyrate

    // sweeps
    double loss_db_min = 2.0;
    double loss_db_max = 30.0;
    int steps = 15;

    // numerics / reproducibility
    int nodes = 64;
    bool clip = true;
    std::uint64_t seed = 20260810;
    std::uint64_t samples = 1000000;
    double pulse_rate_hz = 1e8;
    std::string out;

    /// Subcommand-specific defaults (figure2 uses the overhead-satellite
    /// geometry k = 0.54 and validate the 10 dB-squeezing source v = 5.05
    /// with half-transmissive channels).
    static RunConfig defaults_for(Subcommand sub);

    /// Parses a flat key=value file into *this. Unknown keys and malformed
    /// values raise ConfigError.
    void load_file(const std::string& path);

    /// Applies one key=value override (same keys as the file).
    void set(const std::string& key, const std::string& value);

    /// Full range validation; raises ConfigError with an actionable message.
    void validate() const;

    DetectionKind detection_kind() const;
    ReferenceParty reference_party() const;
    Scheme scheme_kind() const;
    ChannelMode channel_mode() const;
    ProtocolParams protocol_params() const;

    /// Every knob as key=value pairs, prefixed by version and RNG provenance.
    std::vector<std::pair<std::string, std::string>> metadata() const;
};

/// Twelve-significant-digit float formatting used for all emitted numbers.
std::string format_sig12(double value);

const char* subcommand_name(Subcommand sub);

}  // namespace cvmdi

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

#include "cvmdi/config.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "cvmdi/rng.hpp"

namespace cvmdi {

namespace {

constexpr const char* kVersion = "0.1.0";

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r\n");
    if (begin == std::string::npos) return "";
    const auto end = s.find_last_not_of(" \t\r\n");
    return s.substr(begin, end - begin + 1);
}

double parse_double(const std::string& key, const std::string& value) {
    std::size_t used = 0;
    double parsed = 0.0;
    try {
        parsed = std::stod(value, &used);
    } catch (const std::exception&) {
        throw ConfigError("config: key '" + key + "' expects a number, got '" + value + "'");
    }
    if (used != value.size())
        throw ConfigError("config: key '" + key + "' has trailing junk in '" + value + "'");
    return parsed;
}

std::uint64_t parse_u64(const std::string& key, const std::string& value) {
    try {
        std::size_t used = 0;
        const auto parsed = std::stoull(value, &used);
        if (used != value.size()) throw std::invalid_argument(value);
        return parsed;
    } catch (const std::exception&) {
        throw ConfigError("config: key '" + key + "' expects an unsigned integer, got '" + value +
                          "'");
    }
}

int parse_int(const std::string& key, const std::string& value) {
    try {
        std::size_t used = 0;
        const int parsed = std::stoi(value, &used);
        if (used != value.size()) throw std::invalid_argument(value);
        return parsed;
    } catch (const std::exception&) {
        throw ConfigError("config: key '" + key + "' expects an integer, got '" + value + "'");
    }
}

bool parse_bool(const std::string& key, const std::string& value) {
    if (value == "true" || value == "1" || value == "yes") return true;
    if (value == "false" || value == "0" || value == "no") return false;
    throw ConfigError("config: key '" + key + "' expects a boolean, got '" + value + "'");
}

std::string expect_one_of(const std::string& key, const std::string& value,
                          std::initializer_list<const char*> allowed) {
    for (const char* a : allowed)
        if (value == a) return value;
    std::string msg = "config: key '" + key + "' must be one of {";
    bool first = true;
    for (const char* a : allowed) {
        if (!first) msg += ", ";
        msg += a;
        first = false;
    }
    msg += "}, got '" + value + "'";
    throw ConfigError(msg);
}

}  // namespace

std::string format_sig12(double value) {
    char buffer[64];
    std::snprintf(buffer, sizeof buffer, "%.12g", value);
    return buffer;
}

const char* subcommand_name(Subcommand sub) {
    switch (sub) {
        case Subcommand::Keyrate: return "keyrate";
        case Subcommand::Figure1: return "figure1";
        case Subcommand::Figure2: return "figure2";
        case Subcommand::Validate: return "validate";
    }
    return "?";
}

RunConfig RunConfig::defaults_for(Subcommand sub) {
    RunConfig config;
    config.subcommand = sub;
    switch (sub) {
        case Subcommand::Figure2:
            config.k = 0.54;  // satellite directly overhead Alice
            break;
        case Subcommand::Validate:
            config.v = 5.05;  // 10 dB two-mode squeezing
            config.tau_a = 0.5;
            config.tau_b = 0.5;
            break;
        default:
            break;
    }
    return config;
}

void RunConfig::load_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config: cannot open '" + path + "'");
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config: line " + std::to_string(line_no) + " of '" + path +
                              "' is not key=value");
        set(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    }
}

void RunConfig::set(const std::string& key, const std::string& value) {
    if (key == "scheme") scheme = expect_one_of(key, value, {"mdi", "direct"});
    else if (key == "v") v = parse_double(key, value);
    else if (key == "eps_a") eps_a = parse_double(key, value);
    else if (key == "eps_b") eps_b = parse_double(key, value);
    else if (key == "xi") xi = parse_double(key, value);
    else if (key == "detection") detection = expect_one_of(key, value, {"homodyne", "heterodyne"});
    else if (key == "reference") reference = expect_one_of(key, value, {"alice", "bob"});
    else if (key == "beta") beta = parse_double(key, value);
    else if (key == "w") w = parse_double(key, value);
    else if (key == "k") k = parse_double(key, value);
    else if (key == "channel") channel = expect_one_of(key, value, {"fading", "fixed"});
    else if (key == "tau_a") tau_a = parse_double(key, value);
    else if (key == "tau_b") tau_b = parse_double(key, value);
    else if (key == "loss_db") loss_db = parse_double(key, value);
    else if (key == "loss_db_min") loss_db_min = parse_double(key, value);
    else if (key == "loss_db_max") loss_db_max = parse_double(key, value);
    else if (key == "steps") steps = parse_int(key, value);
    else if (key == "nodes") nodes = parse_int(key, value);
    else if (key == "clip") clip = parse_bool(key, value);
    else if (key == "seed") seed = parse_u64(key, value);
    else if (key == "samples") samples = parse_u64(key, value);
    else if (key == "pulse_rate_hz") pulse_rate_hz = parse_double(key, value);
    else if (key == "out") out = value;
    else throw ConfigError("config: unknown key '" + key + "'");
}

void RunConfig::validate() const {
    if (!(v >= 1.0)) throw ConfigError("config: v must be >= 1 (shot-noise units)");
    if (!(eps_a >= 0.0) || !(eps_b >= 0.0)) throw ConfigError("config: excess noise must be >= 0");
    if (!(xi > 0.0) || !(xi <= 1.0)) throw ConfigError("config: xi must be in (0, 1]");
    if (!(beta > 0.0) || !(w > 0.0)) throw ConfigError("config: beta and w must be positive");
    if (!(k > 0.0)) throw ConfigError("config: asymmetry ratio k must be positive");
    if (!(tau_a >= 0.0 && tau_a <= 1.0) || !(tau_b >= 0.0 && tau_b <= 1.0))
        throw ConfigError("config: transmissivities must be in [0, 1]");
    if (!(loss_db >= 0.0)) throw ConfigError("config: loss_db must be >= 0");
    if (!(loss_db_min < loss_db_max))
        throw ConfigError("config: loss_db_min must be strictly below loss_db_max");
    if (!(loss_db_min >= 0.0)) throw ConfigError("config: loss_db_min must be >= 0");
    if (steps < 2) throw ConfigError("config: steps must be >= 2");
    if (nodes < 2) throw ConfigError("config: nodes must be >= 2");
    if (samples < 10000) throw ConfigError("config: samples must be >= 10^4");
    if (!(pulse_rate_hz > 0.0)) throw ConfigError("config: pulse_rate_hz must be positive");
    if (scheme_kind() == Scheme::DirectTransmission && reference_party() != ReferenceParty::Bob)
        throw ConfigError(
            "config: the direct-transmission scheme is evaluated with reverse reconciliation "
            "only; set reference=bob");
}

DetectionKind RunConfig::detection_kind() const {
    return detection == "heterodyne" ? DetectionKind::Heterodyne : DetectionKind::Homodyne;
}

ReferenceParty RunConfig::reference_party() const {
    return reference == "bob" ? ReferenceParty::Bob : ReferenceParty::Alice;
}

Scheme RunConfig::scheme_kind() const {
    return scheme == "direct" ? Scheme::DirectTransmission : Scheme::Mdi;
}

ChannelMode RunConfig::channel_mode() const {
    return channel == "fixed" ? ChannelMode::Fixed : ChannelMode::Fading;
}

ProtocolParams RunConfig::protocol_params() const {
    ProtocolParams p;
    p.v = v;
    p.eps_a = eps_a;
    p.eps_b = eps_b;
    p.detection = detection_kind();
    p.reference = reference_party();
    p.xi = xi;
    p.scheme = scheme_kind();
    return p;
}

std::vector<std::pair<std::string, std::string>> RunConfig::metadata() const {
    std::vector<std::pair<std::string, std::string>> meta;
    meta.emplace_back("tool", "cvmdi");
    meta.emplace_back("version", kVersion);
    meta.emplace_back("subcommand", subcommand_name(subcommand));
    meta.emplace_back("rng", Xoshiro256::algorithm_name());
    meta.emplace_back("scheme", scheme);
    meta.emplace_back("v", format_sig12(v));
    meta.emplace_back("eps_a", format_sig12(eps_a));
    meta.emplace_back("eps_b", format_sig12(eps_b));
    meta.emplace_back("xi", format_sig12(xi));
    meta.emplace_back("detection", detection);
    meta.emplace_back("reference", reference);
    meta.emplace_back("beta", format_sig12(beta));
    meta.emplace_back("w", format_sig12(w));
    meta.emplace_back("k", format_sig12(k));
    meta.emplace_back("channel", channel);
    meta.emplace_back("tau_a", format_sig12(tau_a));
    meta.emplace_back("tau_b", format_sig12(tau_b));
    meta.emplace_back("loss_db", format_sig12(loss_db));
    meta.emplace_back("loss_db_min", format_sig12(loss_db_min));
    meta.emplace_back("loss_db_max", format_sig12(loss_db_max));
    meta.emplace_back("steps", std::to_string(steps));
    meta.emplace_back("nodes", std::to_string(nodes));
    meta.emplace_back("clip", clip ? "true" : "false");
    meta.emplace_back("seed", std::to_string(seed));
    meta.emplace_back("samples", std::to_string(samples));
    meta.emplace_back("pulse_rate_hz", format_sig12(pulse_rate_hz));
    return meta;
}

}  // namespace cvmdi

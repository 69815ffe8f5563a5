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

#include <iosfwd>
#include <string>
#include <vector>

#include "cvmdi/config.hpp"
#include "cvmdi/fading.hpp"

namespace cvmdi::sweep {

/// One emitted table: metadata echo, named columns (loss_db first), rows in
/// strictly increasing loss order, rates reported clipped at zero.
struct SweepResult {
    std::vector<std::pair<std::string, std::string>> metadata;
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;

    void write_csv(std::ostream& os) const;
    void write_csv_file(const std::string& path) const;
};

/// Total mean fading loss of two zero-wander channels, the feasibility floor
/// -10 log10(eta0^4) for every loss target.
double total_loss_floor_db(double beta, double w);

/// sigma_b of one leg for the symmetric setting (each leg carries half the
/// total dB loss).
double solve_symmetric_leg_sigma(double total_loss_db, double beta, double w,
                                 const QuadratureRule& rule);

/// sigma_b_B such that the two legs with sigma_b_A = k sigma_b_B reach the
/// total target loss; 1-D bisection, 1e-6 dB tolerance.
double solve_asymmetric_sigma_b(double total_loss_db, double k, double beta, double w,
                                const QuadratureRule& rule);

struct KeyrateResult {
    double bits_per_pulse = 0.0;
    double bits_per_second = 0.0;
    std::vector<std::pair<std::string, std::string>> metadata;

    void print(std::ostream& os) const;
};

/// Single key rate at the configured channel (fading target loss or fixed
/// transmissivities), with the full config echoed.
KeyrateResult run_keyrate(const RunConfig& config);

struct Figure1Result {
    SweepResult fading;
    SweepResult fixed;
};

/// Symmetric-setting loss sweep: per total mean loss, the fading-averaged and
/// matched fixed-attenuation rates of MDI and direct transmission under both
/// detection kinds. Requires k = 1.
Figure1Result run_figure1(const RunConfig& config);

/// Asymmetric sweep at sigma_b_A = k sigma_b_B: MDI rates for both
/// reconciliation references at xi in {1, 0.95, 0.8}.
SweepResult run_figure2(const RunConfig& config);

/// Oracle validation battery; prints one line per check and returns the
/// number of failures (CLI exit 1 when nonzero).
int run_validate(const RunConfig& config, std::ostream& os);

}  // namespace cvmdi::sweep

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

#include <Eigen/Dense>

#include <cstdint>
#include <string>
#include <vector>

#include "cvmdi/protocol.hpp"

// Independent validation machinery: a deterministic Gaussian-conditioning
// brute force for the relay's Bell measurement, and stochastic phase-space
// samplers for the prepare-and-measure vs entanglement-based equivalence.
// Nothing here shares a code path with the closed-form conditional state.

namespace cvmdi::oracle {

/// Full covariance matrix of the four-mode network, mode order (1, 2, 3, 4),
/// quadrature order (q, p) within each mode. Modes 2 and 3 are the ones sent
/// to the relay; after the balanced beam splitter their slots hold the output
/// modes s = (2 - 3)/sqrt(2) and t = (2 + 3)/sqrt(2).
using FourModeCM = Eigen::Matrix<double, 8, 8>;

/// Two TMSV sources, loss + excess noise on the transmitted modes, then the
/// balanced beam splitter on (2, 3).
FourModeCM build_network_cm(double v, double tau_a, double tau_b, double eps_a, double eps_b);

/// As build_network_cm but stopping before the beam splitter; the (1,2) and
/// (3,4) marginals equal the lossy two-mode states.
FourModeCM build_lossy_pair_cm(double v, double tau_a, double tau_b, double eps_a, double eps_b);

/// Gaussian conditioning of the kept modes (1, 4) on homodyne outcomes of
/// q_s and p_t: A - C (Pi B Pi)^+ C^T with Pi projecting onto the measured
/// quadratures. Raw 4x4 result, kept-mode order (1, 4).
Eigen::Matrix4d conditional_kept_cm(const FourModeCM& m);

/// conditional_kept_cm reduced to standard two-mode form. Throws if the raw
/// matrix is not of that shape (it always is for valid inputs).
TwoModeCM condition_on_bell(const FourModeCM& m);

/// Phase-space sample record of one simulated protocol run batch.
///
/// Columns hold, per realization, the parties' data-equivalent values and the
/// relay outcomes. For homodyne-detection protocols these are the kept-mode
/// quadratures themselves; for heterodyne they carry the extra unit of
/// detection noise. bob_q/bob_p are raw (pre-correction); the corrected data
/// are bob_q + gain * relay_qs and bob_p - gain * relay_pt.
struct SampleBatch {
    std::size_t n = 0;
    std::uint64_t seed = 0;
    DetectionKind detection = DetectionKind::Homodyne;
    double v = 0, tau_a = 0, tau_b = 0, eps_a = 0, eps_b = 0;
    double gain = 0.0;

    std::vector<double> alice_q, alice_p;
    std::vector<double> bob_q, bob_p;
    std::vector<double> relay_qs, relay_pt;

    double bob_q_corrected(std::size_t i) const { return bob_q[i] + gain * relay_qs[i]; }
    double bob_p_corrected(std::size_t i) const { return bob_p[i] - gain * relay_pt[i]; }
};

/// Entanglement-based run: both TMSVs propagated through loss, noise and the
/// beam splitter at the Wigner level; the correction gain is fitted by least
/// squares of Bob's raw q on the q_s outcome (sign chosen so the correction
/// recentres the conditional state). Refuses n < 10^4.
SampleBatch simulate_eb_scheme(const ProtocolParams& p, double tau_a, double tau_b, std::size_t n,
                               std::uint64_t seed);

/// Prepare-and-measure run: the parties' classical data are drawn first, the
/// transmitted modes are built from the encodings plus preparation noise
/// (squeezed states under homodyne, coherent states under heterodyne), and
/// Bob corrects with the supplied gain. Data are recorded in the
/// entanglement-based normalization so moments are directly comparable.
SampleBatch simulate_pm_scheme(const ProtocolParams& p, double tau_a, double tau_b, std::size_t n,
                               std::uint64_t seed, double gain);

struct CheckLine {
    std::string name;
    double statistic = 0.0;
    double threshold = 0.0;
    bool pass = false;
};

struct ComparisonReport {
    std::vector<CheckLine> checks;
    bool pass = true;
};

/// Moment-by-moment comparison of two batches: z-scores of all six means and
/// all 21 second moments of (alice, corrected bob, relay) data; passes iff
/// every |z| < 5. Refuses mismatched parameters or detection kinds.
ComparisonReport compare_schemes(const SampleBatch& pm, const SampleBatch& eb);

/// Covariance matrix of the batch's corrected final-data vector
/// (alice_q, alice_p, Bob corrected q/p, relay_qs, relay_pt).
Eigen::Matrix<double, 6, 6> final_data_covariance(const SampleBatch& batch);

/// Analytic counterpart of final_data_covariance derived from
/// build_network_cm and the batch's gain/detection kind.
Eigen::Matrix<double, 6, 6> analytic_final_data_covariance(const SampleBatch& batch);

}  // namespace cvmdi::oracle

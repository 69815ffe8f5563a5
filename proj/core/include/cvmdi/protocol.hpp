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

#include "cvmdi/gaussian.hpp"

namespace cvmdi {

enum class Scheme {
    Mdi,                 // untrusted relay performs the CV Bell measurement
    DirectTransmission,  // trusted reflecting relay, reverse reconciliation
};

enum class TransmittedMode { First, Second };

struct ProtocolParams {
    double v = 60.0;      // TMSV quadrature variance
    double eps_a = 0.02;  // excess noise on Alice's link, shot-noise units
    double eps_b = 0.02;  // excess noise on Bob's link / Bob's receiver
    DetectionKind detection = DetectionKind::Homodyne;
    ReferenceParty reference = ReferenceParty::Alice;
    double xi = 1.0;      // reconciliation efficiency in (0, 1]
    Scheme scheme = Scheme::Mdi;

    /// Throws std::invalid_argument on out-of-range values, and rejects
    /// direct transmission with Alice as reference (reverse reconciliation
    /// is the only evaluated mode for that scheme).
    void validate() const;
};

/// TMSV after one mode passed a lossy channel of transmissivity tau with
/// additive excess noise eps at the output. The kept mode keeps variance v,
/// the transmitted one becomes tau*v + (1-tau) + eps, the correlation scales
/// by sqrt(tau).
TwoModeCM lossy_tmsv_cm(double v, double tau, double eps, TransmittedMode transmitted);

/// Conditional state of the two kept modes after the relay's Bell measurement
/// on the transmitted modes:
///   a = v - (v^2-1) tau_a / theta,  b = v - (v^2-1) tau_b / theta,
///   c = (v^2-1) sqrt(tau_a tau_b) / theta,
///   theta = (v-1)(tau_a + tau_b) + (eps_a + eps_b) + 2.
TwoModeCM mdi_conditional_cm(double v, double tau_a, double tau_b, double eps_a, double eps_b);

/// One-way lossy TMSV for the reflecting-relay baseline: total transmissivity
/// tau_total, single excess-noise contribution at the receiver.
TwoModeCM direct_transmission_cm(double v, double tau_total, double eps);

/// Key rate of the configured scheme at fixed channel transmissivities.
/// For direct transmission the two legs compose multiplicatively and only
/// eps_b (the receiver noise) applies. Unclipped.
double point_key_rate(const ProtocolParams& p, double tau_a, double tau_b);

/// Gaussian modulation variance of the equivalent prepare-and-measure source:
/// v - 1/v for the squeezed-state (homodyne) protocol, v - 1 per quadrature
/// for the coherent-state (heterodyne) protocol.
double modulation_variance(double v, DetectionKind detection);

}  // namespace cvmdi

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

#include "cvmdi/protocol.hpp"

#include <cmath>
#include <stdexcept>

namespace cvmdi {

namespace {

void check_tau(double tau, const char* what) {
    if (!(tau >= 0.0) || !(tau <= 1.0))
        throw std::domain_error(std::string(what) + ": transmissivity outside [0, 1]");
}

void check_source(double v, double eps, const char* what) {
    if (!(v >= 1.0)) throw std::domain_error(std::string(what) + ": source variance below vacuum");
    if (!(eps >= 0.0)) throw std::domain_error(std::string(what) + ": negative excess noise");
}

}  // namespace

void ProtocolParams::validate() const {
    if (!(v >= 1.0)) throw std::invalid_argument("ProtocolParams: v must be >= 1");
    if (!(eps_a >= 0.0) || !(eps_b >= 0.0))
        throw std::invalid_argument("ProtocolParams: excess noise must be >= 0");
    if (!(xi > 0.0) || !(xi <= 1.0))
        throw std::invalid_argument("ProtocolParams: xi must be in (0, 1]");
    if (scheme == Scheme::DirectTransmission && reference != ReferenceParty::Bob)
        throw std::invalid_argument(
            "ProtocolParams: direct transmission is evaluated with reverse reconciliation only "
            "(reference must be Bob)");
}

TwoModeCM lossy_tmsv_cm(double v, double tau, double eps, TransmittedMode transmitted) {
    check_source(v, eps, "lossy_tmsv_cm");
    check_tau(tau, "lossy_tmsv_cm");
    const double kept = v;
    const double sent = tau * v + (1.0 - tau) + eps;
    const double c = std::sqrt(tau) * std::sqrt((v - 1.0) * (v + 1.0));
    if (transmitted == TransmittedMode::Second) return TwoModeCM{kept, sent, c, -c};
    return TwoModeCM{sent, kept, c, -c};
}

TwoModeCM mdi_conditional_cm(double v, double tau_a, double tau_b, double eps_a, double eps_b) {
    check_source(v, eps_a, "mdi_conditional_cm");
    check_source(v, eps_b, "mdi_conditional_cm");
    check_tau(tau_a, "mdi_conditional_cm");
    check_tau(tau_b, "mdi_conditional_cm");
    // (v-1)(tau_a+tau_b) first: keeps theta exact when v is close to 1.
    const double theta = (v - 1.0) * (tau_a + tau_b) + (eps_a + eps_b) + 2.0;
    if (!(theta > 0.0)) throw std::runtime_error("mdi_conditional_cm: nonpositive theta");
    const double v2m1 = (v - 1.0) * (v + 1.0);
    const double a = v - v2m1 * tau_a / theta;
    const double b = v - v2m1 * tau_b / theta;
    const double c = v2m1 * std::sqrt(tau_a * tau_b) / theta;
    return TwoModeCM{a, b, c, -c};
}

TwoModeCM direct_transmission_cm(double v, double tau_total, double eps) {
    return lossy_tmsv_cm(v, tau_total, eps, TransmittedMode::Second);
}

double point_key_rate(const ProtocolParams& p, double tau_a, double tau_b) {
    p.validate();
    if (p.scheme == Scheme::Mdi) {
        const TwoModeCM m = mdi_conditional_cm(p.v, tau_a, tau_b, p.eps_a, p.eps_b);
        return key_rate_from_cm(m, p.detection, p.reference, p.xi);
    }
    // Reflecting relay: the legs compose multiplicatively, excess noise enters
    // once at Bob's receiver.
    const TwoModeCM m = direct_transmission_cm(p.v, tau_a * tau_b, p.eps_b);
    return key_rate_from_cm(m, p.detection, ReferenceParty::Bob, p.xi);
}

double modulation_variance(double v, DetectionKind detection) {
    if (!(v >= 1.0)) throw std::domain_error("modulation_variance: v must be >= 1");
    return detection == DetectionKind::Homodyne ? v - 1.0 / v : v - 1.0;
}

}  // namespace cvmdi

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

#include <functional>
#include <utility>
#include <vector>

#include "cvmdi/protocol.hpp"
#include "cvmdi/quadrature.hpp"

namespace cvmdi {

/// Beam-wander fading channel: the transmission coefficient eta follows a
/// log-negative Weibull law on (0, eta0], induced by Gaussian wandering of
/// the beam centroid over a circular aperture.
///
/// beta, w and sigma_b share one arbitrary length unit; only ratios enter the
/// model. The derived triple (gamma_s, l_scale, eta0) is a pure function of
/// the inputs; construct through weibull_params only.
struct FadingParams {
    double beta = 1.0;     // receiver aperture radius
    double w = 1.0;        // beam-spot radius
    double sigma_b = 0.0;  // beam-wander standard deviation

    double h = 1.0;        // (beta/w)^2
    double gamma_s = 0.0;  // Weibull shape
    double l_scale = 0.0;  // Weibull scale
    double eta0 = 0.0;     // maximum transmission coefficient, sqrt(1-exp(-2h))
};

/// Derives the Weibull triple from the geometry. sigma_b = 0 is the
/// degenerate no-wander channel (eta = eta0 with certainty).
FadingParams weibull_params(double beta, double w, double sigma_b);

/// Log-negative Weibull density at eta; zero outside (0, eta0]. Requires
/// sigma_b > 0 (the degenerate channel has no density).
double fading_pdf(double eta, const FadingParams& p);

/// P(transmission coefficient <= eta), in closed form.
double fading_cdf(double eta, const FadingParams& p);

/// The exact change of variable under which the fading measure becomes
/// e^{-x} dx on [0, inf): eta(x) = eta0 * exp(-(1/2) (2 sigma_b^2 x / L^2)^{gamma_s/2}).
double eta_from_exponential_x(double x, const FadingParams& p);

/// E[g(eta)] over the fading law via the exact substitution plus
/// Gauss-Laguerre. sigma_b = 0 returns g(eta0) directly.
double expectation_over_fading(const std::function<double(double)>& g, const FadingParams& p,
                               const QuadratureRule& rule);

/// E[eta^2], the mean channel transmissivity, in (0, eta0^2].
double mean_transmissivity(const FadingParams& p, const QuadratureRule& rule);

/// -10 log10 E[eta^2], the mean fading loss of one channel in dB.
double mean_loss_db(const FadingParams& p, const QuadratureRule& rule);

/// Beam-wander sigma_b whose mean loss matches target_loss_db to 1e-6 dB
/// (bisection on log sigma_b). Targets below the zero-wander floor
/// -10 log10(eta0^2) are infeasible and throw.
double solve_sigma_b(double target_loss_db, double beta, double w,
                     const QuadratureRule& rule = QuadratureRule{});

/// sigma_b of Alice's uplink given Bob's and the geometry ratio k > 0.
double asymmetry_ratio(double k, double sigma_b_b);

/// Key rate averaged over the two independent fading channels,
/// E[K(eta_a^2, eta_b^2)], in bits per pulse, reported floored at 0.
///
/// With clip (the default) the integrand is max(K, 0): real-time channel
/// monitoring lets the parties discard nonpositive-rate realizations. The
/// clipped integrand has a kink along the K = 0 contour, so it is integrated
/// over its positive support: segment boundaries are located on a fixed scan
/// grid and bisected, then each segment gets a mapped Gauss-Legendre panel of
/// order rule.node_count. Without clip the literal (smooth) integral is
/// evaluated with tensor Gauss-Laguerre.
double averaged_key_rate(const ProtocolParams& pp, const FadingParams& fa, const FadingParams& fb,
                         const QuadratureRule& rule, bool clip = true);

namespace detail {

/// Maximal intervals where h > 0 within the fixed scan window, boundaries
/// refined by bisection. h must be continuous.
std::vector<std::pair<double, double>> positive_segments(const std::function<double(double)>& h);

/// Integral of h(x) e^{-x} over the given segments, one Gauss-Legendre panel
/// of the given order per segment.
double integrate_segments_exp_weighted(const std::function<double(double)>& h,
                                       const std::vector<std::pair<double, double>>& segments,
                                       int order);

/// Scan abscissae shared by all segment searches (independent of the
/// quadrature order so node-count changes cannot move segment boundaries).
const std::vector<double>& scan_grid();

}  // namespace detail

}  // namespace cvmdi

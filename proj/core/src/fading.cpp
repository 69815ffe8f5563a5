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

#include "cvmdi/fading.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "cvmdi/special_functions.hpp"

namespace cvmdi {

namespace {

// Contributions beyond the scan window carry total weight e^{-x} < 1e-18;
// with |K| of order 10 the truncation error is < 1e-17 bits per pulse.
constexpr double kScanWeightCap = 1e-18;
constexpr int kScanDenseCount = 128;  // uniform in e^{-x} down to ~5.6
constexpr int kScanTailCount = 32;    // uniform in x out to the cap

double sigma_sq_scale(const FadingParams& p) {
    return 2.0 * p.sigma_b * p.sigma_b / (p.l_scale * p.l_scale);
}

}  // namespace

FadingParams weibull_params(double beta, double w, double sigma_b) {
    if (!(beta > 0.0) || !(w > 0.0))
        throw std::domain_error("weibull_params: aperture and beam-spot radii must be positive");
    if (!(sigma_b >= 0.0)) throw std::domain_error("weibull_params: negative beam-wander sigma");

    FadingParams p;
    p.beta = beta;
    p.w = w;
    p.sigma_b = sigma_b;
    p.h = (beta / w) * (beta / w);

    const double x = 4.0 * p.h;
    p.eta0 = std::sqrt(-std::expm1(-2.0 * p.h));
    // 1 - e^{-4h} I0(4h), assembled cancellation-free for small h where both
    // factors approach 1.
    double denom;
    if (x < 0.5) {
        double i0m1 = 0.0, term = 1.0;
        for (int k = 1; k < 30; ++k) {
            term *= 0.25 * x * x / (static_cast<double>(k) * k);
            i0m1 += term;
            if (term < 1e-20) break;
        }
        denom = -std::expm1(-x) - std::exp(-x) * i0m1;
    } else {
        denom = 1.0 - bessel_i0_scaled(x);
    }
    if (!(denom > 0.0))
        throw std::runtime_error("weibull_params: degenerate Weibull denominator");

    const double log_ratio = std::log(2.0 * p.eta0 * p.eta0 / denom);
    if (!(log_ratio > 0.0))
        throw std::runtime_error("weibull_params: nonpositive Weibull log ratio");
    p.gamma_s = 8.0 * p.h * (bessel_i1_scaled(x) / denom) / log_ratio;
    p.l_scale = beta * std::pow(log_ratio, -1.0 / p.gamma_s);
    return p;
}

double fading_pdf(double eta, const FadingParams& p) {
    if (!(p.sigma_b > 0.0))
        throw std::domain_error("fading_pdf: degenerate channel (sigma_b = 0) has no density");
    if (!(eta > 0.0) || eta > p.eta0) return 0.0;
    const double l2 = p.l_scale * p.l_scale;
    const double s2 = p.sigma_b * p.sigma_b;
    const double t = 2.0 * std::log(p.eta0 / eta);
    return (2.0 * l2 / (s2 * p.gamma_s * eta)) * std::pow(t, 2.0 / p.gamma_s - 1.0) *
           std::exp(-(l2 / (2.0 * s2)) * std::pow(t, 2.0 / p.gamma_s));
}

double fading_cdf(double eta, const FadingParams& p) {
    if (!(p.sigma_b > 0.0))
        throw std::domain_error("fading_cdf: degenerate channel (sigma_b = 0) has no density");
    if (!(eta > 0.0)) return 0.0;
    if (eta >= p.eta0) return 1.0;
    const double t = 2.0 * std::log(p.eta0 / eta);
    const double x = (p.l_scale * p.l_scale / (2.0 * p.sigma_b * p.sigma_b)) *
                     std::pow(t, 2.0 / p.gamma_s);
    return std::exp(-x);
}

double eta_from_exponential_x(double x, const FadingParams& p) {
    if (!(x >= 0.0)) throw std::domain_error("eta_from_exponential_x: negative abscissa");
    if (p.sigma_b == 0.0) return p.eta0;
    const double u = sigma_sq_scale(p) * x;
    return p.eta0 * std::exp(-0.5 * std::pow(u, 0.5 * p.gamma_s));
}

double expectation_over_fading(const std::function<double(double)>& g, const FadingParams& p,
                               const QuadratureRule& rule) {
    if (p.sigma_b == 0.0) return g(p.eta0);
    const NodeTable& table = gauss_laguerre(rule.node_count);
    // Neumaier-compensated sum in fixed node order for reproducibility.
    double sum = 0.0, comp = 0.0;
    for (std::size_t i = 0; i < table.nodes.size(); ++i) {
        const double term = table.weights[i] * g(eta_from_exponential_x(table.nodes[i], p));
        const double t = sum + term;
        comp += (std::abs(sum) >= std::abs(term)) ? (sum - t) + term : (term - t) + sum;
        sum = t;
    }
    return sum + comp;
}

double mean_transmissivity(const FadingParams& p, const QuadratureRule& rule) {
    return expectation_over_fading([](double eta) { return eta * eta; }, p, rule);
}

double mean_loss_db(const FadingParams& p, const QuadratureRule& rule) {
    return -10.0 * std::log10(mean_transmissivity(p, rule));
}

double solve_sigma_b(double target_loss_db, double beta, double w, const QuadratureRule& rule) {
    const FadingParams at_zero = weibull_params(beta, w, 0.0);
    const double floor_db = -10.0 * std::log10(at_zero.eta0 * at_zero.eta0);
    if (target_loss_db < floor_db - 1e-9)
        throw std::domain_error("solve_sigma_b: target " + std::to_string(target_loss_db) +
                                " dB is below the zero-wander floor of " +
                                std::to_string(floor_db) + " dB");
    if (target_loss_db <= floor_db + 1e-9) return 0.0;

    auto loss_at = [&](double sigma) { return mean_loss_db(weibull_params(beta, w, sigma), rule); };

    double lo = 1e-9 * beta;
    while (loss_at(lo) > target_loss_db) lo *= 0.5;  // pathological only for targets ~floor
    double hi = std::max(beta, 2.0 * lo);
    while (loss_at(hi) < target_loss_db) {
        hi *= 2.0;
        if (hi > 1e12 * beta)
            throw std::runtime_error("solve_sigma_b: failed to bracket the target loss");
    }
    double log_lo = std::log(lo), log_hi = std::log(hi);
    double mid = 0.5 * (log_lo + log_hi);
    for (int iter = 0; iter < 200; ++iter) {
        mid = 0.5 * (log_lo + log_hi);
        const double achieved = loss_at(std::exp(mid));
        if (std::abs(achieved - target_loss_db) <= 1e-6) break;
        if (achieved < target_loss_db)
            log_lo = mid;
        else
            log_hi = mid;
    }
    return std::exp(mid);
}

double asymmetry_ratio(double k, double sigma_b_b) {
    if (!(k > 0.0)) throw std::domain_error("asymmetry_ratio: ratio k must be positive");
    if (!(sigma_b_b >= 0.0)) throw std::domain_error("asymmetry_ratio: negative sigma_b");
    return k * sigma_b_b;
}

namespace detail {

const std::vector<double>& scan_grid() {
    static const std::vector<double> grid = [] {
        std::vector<double> xs;
        xs.reserve(kScanDenseCount + kScanTailCount + 1);
        xs.push_back(0.0);
        for (int j = kScanDenseCount; j >= 1; --j)
            xs.push_back(-std::log(static_cast<double>(j) / (kScanDenseCount + 1)));
        const double x_dense_end = xs.back();
        const double x_cap = -std::log(kScanWeightCap);
        for (int j = 1; j <= kScanTailCount; ++j)
            xs.push_back(x_dense_end + (x_cap - x_dense_end) * j / kScanTailCount);
        return xs;
    }();
    return grid;
}

std::vector<std::pair<double, double>> positive_segments(const std::function<double(double)>& h) {
    const std::vector<double>& xs = scan_grid();
    std::vector<double> hv(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) hv[i] = h(xs[i]);

    auto refine = [&h](double a, double b, bool a_positive) {
        for (int iter = 0; iter < 60; ++iter) {
            const double m = 0.5 * (a + b);
            if ((h(m) > 0.0) == a_positive)
                a = m;
            else
                b = m;
        }
        return 0.5 * (a + b);
    };

    std::vector<std::pair<double, double>> segments;
    bool inside = hv[0] > 0.0;
    double open_lo = inside ? xs[0] : 0.0;
    for (std::size_t i = 1; i < xs.size(); ++i) {
        const bool positive = hv[i] > 0.0;
        if (positive == inside) continue;
        const double boundary = refine(xs[i - 1], xs[i], inside);
        if (inside)
            segments.emplace_back(open_lo, boundary);
        else
            open_lo = boundary;
        inside = positive;
    }
    if (inside) segments.emplace_back(open_lo, xs.back());
    return segments;
}

double integrate_segments_exp_weighted(const std::function<double(double)>& h,
                                       const std::vector<std::pair<double, double>>& segments,
                                       int order) {
    const NodeTable& gl = gauss_legendre(order);
    double total = 0.0;
    for (const auto& [lo, hi] : segments) {
        const double half = 0.5 * (hi - lo);
        const double mid = 0.5 * (hi + lo);
        double sum = 0.0, comp = 0.0;
        for (std::size_t i = 0; i < gl.nodes.size(); ++i) {
            const double x = mid + half * gl.nodes[i];
            const double term = gl.weights[i] * h(x) * std::exp(-x);
            const double t = sum + term;
            comp += (std::abs(sum) >= std::abs(term)) ? (sum - t) + term : (term - t) + sum;
            sum = t;
        }
        total += half * (sum + comp);
    }
    return total;
}

}  // namespace detail

double averaged_key_rate(const ProtocolParams& pp, const FadingParams& fa, const FadingParams& fb,
                         const QuadratureRule& rule, bool clip) {
    pp.validate();

    auto rate_at = [&pp](double eta_a, double eta_b) {
        return point_key_rate(pp, eta_a * eta_a, eta_b * eta_b);
    };

    if (!clip) {
        // Smooth integrand: tensor Gauss-Laguerre through the 1-D expectation.
        auto inner = [&](double eta_a) {
            return expectation_over_fading(
                [&](double eta_b) { return rate_at(eta_a, eta_b); }, fb, rule);
        };
        const double value = expectation_over_fading(inner, fa, rule);
        return std::max(value, 0.0);
    }

    if (fa.sigma_b == 0.0 && fb.sigma_b == 0.0)
        return std::max(rate_at(fa.eta0, fb.eta0), 0.0);

    // Clipped integral of one leg at a fixed eta of the other.
    auto clipped_inner = [&rule](const std::function<double(double)>& h) {
        return detail::integrate_segments_exp_weighted(h, detail::positive_segments(h), rule.node_count);
    };

    if (fb.sigma_b == 0.0 || fa.sigma_b == 0.0) {
        const bool b_degenerate = fb.sigma_b == 0.0;
        const FadingParams& fixed = b_degenerate ? fb : fa;
        const FadingParams& varying = b_degenerate ? fa : fb;
        auto h = [&](double x) {
            const double eta = eta_from_exponential_x(x, varying);
            return b_degenerate ? rate_at(eta, fixed.eta0) : rate_at(fixed.eta0, eta);
        };
        return std::max(clipped_inner(h), 0.0);
    }

    // The reference party's leg is the outer dimension. For identical legs
    // this makes the Bob-reference evaluation the arithmetic mirror image of
    // the Alice-reference one, so their results agree to rounding rather
    // than to quadrature error.
    const bool outer_is_b = pp.reference == ReferenceParty::Bob;
    const FadingParams& fo = outer_is_b ? fb : fa;
    const FadingParams& fi = outer_is_b ? fa : fb;
    auto rate_ordered = [&](double eta_outer, double eta_inner) {
        return outer_is_b ? rate_at(eta_inner, eta_outer) : rate_at(eta_outer, eta_inner);
    };

    auto inner_at = [&](double x_o) {
        const double eta_o = eta_from_exponential_x(x_o, fo);
        auto h = [&](double x_i) { return rate_ordered(eta_o, eta_from_exponential_x(x_i, fi)); };
        return clipped_inner(h);
    };

    // Support of the outer integrand from the best rate reachable over the
    // inner scan grid; its sign changes exactly where the inner integral's
    // support starts and ends.
    const std::vector<double>& xs = detail::scan_grid();
    auto support_proxy = [&](double x_o) {
        const double eta_o = eta_from_exponential_x(x_o, fo);
        double best = -std::numeric_limits<double>::infinity();
        for (const double x_i : xs)
            best = std::max(best, rate_ordered(eta_o, eta_from_exponential_x(x_i, fi)));
        return best;
    };

    const auto outer_segments = detail::positive_segments(support_proxy);
    const double value = detail::integrate_segments_exp_weighted(inner_at, outer_segments,
                                                                 rule.node_count);
    return std::max(value, 0.0);
}

}  // namespace cvmdi

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

#include "cvmdi/gaussian.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace cvmdi {

namespace {

constexpr double kLn2 = 0.6931471805599453094;

[[noreturn]] void domain_fail(const std::string& what) { throw std::domain_error(what); }

double checked_log2(double x, const char* what) {
    if (!(x >= kLogFloor)) domain_fail(std::string(what) + ": log2 argument " + std::to_string(x) + " below floor");
    return std::log2(x);
}

// nu in [1 - kNuClampTol, 1) is rounding debris from near-pure conditional
// states; snap it to 1. Lower values are a genuine physicality violation.
double clamp_nu(double nu, const char* what) {
    if (nu >= 1.0) return nu;
    if (nu >= 1.0 - kNuClampTol) return 1.0;
    domain_fail(std::string(what) + ": symplectic value " + std::to_string(nu) + " below 1");
}

double mutual_info_cz(double a, double b, double c, DetectionKind detection) {
    if (detection == DetectionKind::Homodyne) {
        const double denom = a - (c * c) / b;
        if (!(denom > 0.0)) domain_fail("mutual_info: nonpositive conditional variance");
        return 0.5 * checked_log2(a / denom, "mutual_info");
    }
    const double denom = (b + 1.0) - (c * c) / (a + 1.0);
    if (!(denom > 0.0)) domain_fail("mutual_info: nonpositive conditional variance");
    return checked_log2((b + 1.0) / denom, "mutual_info");
}

double conditional_nu_cz(double a, double b, double c, DetectionKind detection,
                         ReferenceParty reference) {
    if (detection == DetectionKind::Homodyne) {
        const double nu2 = (reference == ReferenceParty::Alice) ? b * (b - (c * c) / a)
                                                                : a * (a - (c * c) / b);
        if (!(nu2 > 0.0)) domain_fail("holevo_bound: nonpositive conditional spectrum");
        return std::sqrt(nu2);
    }
    return (reference == ReferenceParty::Alice) ? b - (c * c) / (a + 1.0)
                                                : a - (c * c) / (b + 1.0);
}

}  // namespace

bool TwoModeCM::is_cz_form(double tol) const {
    const double scale = std::max({1.0, std::abs(c_plus), std::abs(c_minus)});
    return std::abs(c_plus + c_minus) <= tol * scale;
}

double TwoModeCM::c() const {
    if (!is_cz_form())
        throw std::invalid_argument("TwoModeCM: correlation block is not of the c Z shape");
    return c_plus;
}

TwoModeCM tmsv_cm(double v) {
    if (!(v >= 1.0)) domain_fail("tmsv_cm: quadrature variance below vacuum (v < 1)");
    const double c = std::sqrt((v - 1.0) * (v + 1.0));
    return TwoModeCM{v, v, c, -c};
}

double entropy_f(double x) {
    if (!(x >= 1.0)) domain_fail("entropy_f: argument below 1");
    const double z = 0.5 * (x - 1.0);
    if (z == 0.0) return 0.0;
    // (1+z) log2(1+z) - z log2(z), with log1p keeping the x -> 1 limit exact.
    return (1.0 + z) * (std::log1p(z) / kLn2) - z * std::log2(z);
}

SymplecticSpectrum symplectic_eigenvalues(const TwoModeCM& m) {
    const double a = m.a, b = m.b, cp = m.c_plus, cm = m.c_minus;
    const double delta = a * a + b * b + 2.0 * cp * cm;
    const double det = (a * b - cp * cp) * (a * b - cm * cm);
    const double scale = std::max(1.0, delta * delta);
    if (det < -1e-9 * scale)
        domain_fail("symplectic_eigenvalues: negative determinant, unphysical covariance matrix");
    // Delta^2 - 4 det expanded to the factored form; the naive difference
    // cancels catastrophically for near-pure states.
    double disc = (a * a - b * b) * (a * a - b * b) + 4.0 * (a * cp + b * cm) * (a * cm + b * cp);
    if (disc < 0.0) {
        if (disc < -1e-9 * scale)
            domain_fail("symplectic_eigenvalues: negative discriminant, unphysical covariance matrix");
        disc = 0.0;
    }
    const double root = std::sqrt(disc);
    const double nu_plus2 = 0.5 * (delta + root);
    const double nu_minus2 = 0.5 * (delta - root);
    if (!(nu_plus2 > 0.0) || !(nu_minus2 > 0.0))
        domain_fail("symplectic_eigenvalues: nonpositive symplectic spectrum");
    return {std::sqrt(nu_plus2), std::sqrt(nu_minus2)};
}

double von_neumann_entropy(const TwoModeCM& m) {
    const auto nu = symplectic_eigenvalues(m);
    return entropy_f(clamp_nu(nu.nu_plus, "von_neumann_entropy")) +
           entropy_f(clamp_nu(nu.nu_minus, "von_neumann_entropy"));
}

double mutual_info(const TwoModeCM& m, DetectionKind detection) {
    return mutual_info_cz(m.a, m.b, m.c(), detection);
}

double holevo_bound(const TwoModeCM& m, DetectionKind detection, ReferenceParty reference) {
    const double c = m.c();
    const double s = von_neumann_entropy(m);
    const double nu_cond = clamp_nu(conditional_nu_cz(m.a, m.b, c, detection, reference),
                                    "holevo_bound");
    return s - entropy_f(nu_cond);
}

double key_rate_from_cm(const TwoModeCM& m, DetectionKind detection, ReferenceParty reference,
                        double xi) {
    if (!(xi > 0.0) || !(xi <= 1.0))
        domain_fail("key_rate_from_cm: reconciliation efficiency must be in (0, 1]");
    return xi * mutual_info(m, detection) - holevo_bound(m, detection, reference);
}

double tmsv_variance_for_squeezing_db(double squeezing_db) {
    if (!(squeezing_db >= 0.0)) domain_fail("tmsv_variance_for_squeezing_db: negative squeezing");
    const double e2r = std::pow(10.0, squeezing_db / 10.0);
    return 0.5 * (e2r + 1.0 / e2r);
}

}  // namespace cvmdi

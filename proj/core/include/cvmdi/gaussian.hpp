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

namespace cvmdi {

// Shot-noise units throughout: [q,p] = 2i, vacuum quadrature variance = 1.

// Symplectic eigenvalues within [1 - kNuClampTol, 1) are treated as exactly 1;
// anything lower is rejected as unphysical.
inline constexpr double kNuClampTol = 1e-9;

// Arguments of log2/sqrt below this floor raise a domain error instead of
// silently producing -inf/NaN.
inline constexpr double kLogFloor = 1e-30;

enum class DetectionKind { Homodyne, Heterodyne };
enum class ReferenceParty { Alice, Bob };

/// Two-mode Gaussian covariance matrix in standard form
///
///     [ a I    C  ]            C = diag(c_plus, c_minus)
///     [ C^T   b I ]
///
/// States shared by the trusted parties additionally have c_plus = -c_minus
/// (correlation block c Z with Z = diag(1,-1)); c() exposes that form.
struct TwoModeCM {
    double a = 1.0;
    double b = 1.0;
    double c_plus = 0.0;
    double c_minus = 0.0;

    /// True when the correlation block is of the c Z shape within tolerance.
    bool is_cz_form(double tol = 1e-9) const;

    /// Correlation amplitude c for c Z shaped states. Throws
    /// std::invalid_argument when the matrix is not of that shape.
    double c() const;
};

struct SymplecticSpectrum {
    double nu_plus;
    double nu_minus;
};

/// Covariance matrix of a two-mode squeezed vacuum with quadrature variance v.
/// v = 1 is the two-mode vacuum. Throws std::domain_error for v < 1.
TwoModeCM tmsv_cm(double v);

/// Bosonic entropy function in bits,
/// f(x) = ((x+1)/2) log2((x+1)/2) - ((x-1)/2) log2((x-1)/2), f(1) = 0.
double entropy_f(double x);

/// Symplectic eigenvalues nu_plus >= nu_minus of a standard-form CM.
/// Uses the general Delta = a^2 + b^2 + 2 c_plus c_minus so non-symmetric
/// correlation blocks are handled; the discriminant is evaluated in the
/// cancellation-free factored form so pure states come out exact.
SymplecticSpectrum symplectic_eigenvalues(const TwoModeCM& m);

/// Von Neumann entropy f(nu_plus) + f(nu_minus) in bits; zero for pure states.
double von_neumann_entropy(const TwoModeCM& m);

/// Mutual information of the trusted parties' measurement data in bits.
/// Requires the c Z correlation shape. Symmetric in the two parties.
double mutual_info(const TwoModeCM& m, DetectionKind detection);

/// Holevo bound on the eavesdropper's information with the reconciliation
/// reference party, S(rho_AB) - f(nu_cond), in bits.
double holevo_bound(const TwoModeCM& m, DetectionKind detection, ReferenceParty reference);

/// Raw key rate xi * I_AB - I_E in bits per pulse. May be negative; clipping
/// is the caller's policy (the fading average needs per-realization values).
double key_rate_from_cm(const TwoModeCM& m, DetectionKind detection, ReferenceParty reference,
                        double xi);

/// TMSV quadrature variance equivalent to a given two-mode squeezing in dB:
/// v = cosh(2r) with 10 log10(e^{2r}) = squeezing_db. 10 dB gives v = 5.05.
double tmsv_variance_for_squeezing_db(double squeezing_db);

}  // namespace cvmdi

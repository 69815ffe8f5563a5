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

#include <doctest.h>

#include <boost/multiprecision/cpp_bin_float.hpp>

#include <cmath>
#include <stdexcept>

#include "cvmdi/gaussian.hpp"
#include "cvmdi/protocol.hpp"
#include "cvmdi/rng.hpp"

using namespace cvmdi;

namespace {

// 50-digit reference for the bosonic entropy function, evaluated straight
// from the definition. Independent of the double-precision code path.
double entropy_f_reference(double x) {
    using mp50 = boost::multiprecision::cpp_bin_float_50;
    const mp50 xx(x);
    const mp50 zp = (xx + 1) / 2;
    const mp50 zm = (xx - 1) / 2;
    const mp50 ln2 = log(mp50(2));
    mp50 value = zp * log(zp) / ln2;
    if (zm > 0) value -= zm * log(zm) / ln2;
    return value.convert_to<double>();
}

}  // namespace

TEST_CASE("tmsv covariance matrix") {
    SUBCASE("zero squeezing is the two-mode vacuum") {
        const TwoModeCM vac = tmsv_cm(1.0);
        CHECK(vac.a == 1.0);
        CHECK(vac.b == 1.0);
        CHECK(vac.c_plus == 0.0);
        CHECK(vac.c_minus == 0.0);
    }
    SUBCASE("10 dB squeezing value") {
        // v = 5.05: c = sqrt(5.05^2 - 1) = 4.95 exactly.
        const TwoModeCM m = tmsv_cm(5.05);
        CHECK(m.a == 5.05);
        CHECK(m.c_plus == doctest::Approx(4.95).epsilon(1e-15));
        CHECK(m.c_minus == doctest::Approx(-4.95).epsilon(1e-15));
    }
    SUBCASE("v = 60") {
        const TwoModeCM m = tmsv_cm(60.0);
        CHECK(m.c_plus * m.c_plus == doctest::Approx(3599.0).epsilon(1e-15));
        CHECK(m.c_plus == doctest::Approx(59.9916661).epsilon(1e-9));
    }
    SUBCASE("sub-vacuum variance is rejected") {
        CHECK_THROWS_AS(tmsv_cm(0.999), std::domain_error);
    }
}

TEST_CASE("entropy function") {
    CHECK(entropy_f(1.0) == 0.0);
    CHECK(entropy_f(3.0) == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(entropy_f(1.0 + 1e-12) == doctest::Approx(0.0).epsilon(1e-9));
    CHECK(entropy_f(std::sqrt(3.0)) == doctest::Approx(1.14542109733473012).epsilon(1e-14));
    CHECK_THROWS_AS(entropy_f(0.999999), std::domain_error);

    SUBCASE("matches the 50-digit reference over [1+1e-8, 1e4]") {
        for (int j = 0; j <= 120; ++j) {
            const double x = 1.0 + 1e-8 * std::pow(1e12, j / 120.0);
            const double got = entropy_f(x);
            const double want = entropy_f_reference(x);
            CHECK(std::abs(got - want) <= 1e-10 * std::abs(want));
        }
    }
    SUBCASE("strictly increasing above 1") {
        double prev = entropy_f(1.0);
        for (double x = 1.01; x < 50.0; x *= 1.3) {
            const double fx = entropy_f(x);
            CHECK(fx > prev);
            prev = fx;
        }
    }
}

TEST_CASE("symplectic eigenvalues") {
    SUBCASE("vacuum") {
        const auto nu = symplectic_eigenvalues(TwoModeCM{1, 1, 0, 0});
        CHECK(nu.nu_plus == doctest::Approx(1.0).epsilon(1e-15));
        CHECK(nu.nu_minus == doctest::Approx(1.0).epsilon(1e-15));
    }
    SUBCASE("hand-evaluated asymmetric-free case") {
        // (a=2, b=2, c=1): Delta = 6, det = 9, nu+- = sqrt(3).
        const auto nu = symplectic_eigenvalues(TwoModeCM{2, 2, 1, -1});
        CHECK(nu.nu_plus == doctest::Approx(std::sqrt(3.0)).epsilon(1e-14));
        CHECK(nu.nu_minus == doctest::Approx(std::sqrt(3.0)).epsilon(1e-14));
    }
    SUBCASE("purity of the TMSV family across a log grid") {
        for (int j = 0; j <= 40; ++j) {
            const double v = std::pow(10.0, 3.0 * j / 40.0);
            const auto nu = symplectic_eigenvalues(tmsv_cm(v));
            CHECK(std::abs(nu.nu_plus - 1.0) < 1e-9);
            CHECK(std::abs(nu.nu_minus - 1.0) < 1e-9);
        }
    }
    SUBCASE("negative determinant is rejected") {
        CHECK_THROWS_AS(symplectic_eigenvalues(TwoModeCM{1, 1, 2.0, -0.1}), std::domain_error);
    }
}

TEST_CASE("von Neumann entropy") {
    CHECK(von_neumann_entropy(TwoModeCM{1, 1, 0, 0}) == 0.0);
    CHECK(von_neumann_entropy(tmsv_cm(60.0)) == doctest::Approx(0.0).epsilon(1e-8));
    CHECK(von_neumann_entropy(TwoModeCM{2, 2, 1, -1}) ==
          doctest::Approx(2.0 * entropy_f(std::sqrt(3.0))).epsilon(1e-13));
}

TEST_CASE("mutual information") {
    SUBCASE("uncorrelated modes carry none") {
        CHECK(mutual_info(TwoModeCM{7, 3, 0, 0}, DetectionKind::Homodyne) == 0.0);
        CHECK(mutual_info(TwoModeCM{7, 3, 0, 0}, DetectionKind::Heterodyne) == 0.0);
    }
    SUBCASE("hand-evaluated values") {
        const TwoModeCM m{2, 2, 1, -1};
        // homodyne: (1/2) log2(2 / 1.5); heterodyne: log2(3 / (3 - 1/3)).
        CHECK(mutual_info(m, DetectionKind::Homodyne) ==
              doctest::Approx(0.20751874963942185).epsilon(1e-14));
        CHECK(mutual_info(m, DetectionKind::Heterodyne) ==
              doctest::Approx(0.16992500144231237).epsilon(1e-14));
    }
    SUBCASE("party-symmetric") {
        Xoshiro256 rng(11);
        for (int trial = 0; trial < 200; ++trial) {
            const double a = 1.0 + 20.0 * rng.next_double();
            const double b = 1.0 + 20.0 * rng.next_double();
            const double cmax = std::sqrt(std::min((a - 1) * (b + 1), (a + 1) * (b - 1)));
            const double c = 0.98 * cmax * rng.next_double();
            for (const auto kind : {DetectionKind::Homodyne, DetectionKind::Heterodyne}) {
                const double ab = mutual_info(TwoModeCM{a, b, c, -c}, kind);
                const double ba = mutual_info(TwoModeCM{b, a, c, -c}, kind);
                CHECK(ab == doctest::Approx(ba).epsilon(1e-12));
            }
        }
    }
    SUBCASE("strictly increasing in the correlation amplitude") {
        Xoshiro256 rng(12);
        for (int trial = 0; trial < 50; ++trial) {
            const double a = 1.0 + 20.0 * rng.next_double();
            const double b = 1.0 + 20.0 * rng.next_double();
            const double cmax =
                0.98 * std::sqrt(std::min((a - 1) * (b + 1), (a + 1) * (b - 1)));
            for (const auto kind : {DetectionKind::Homodyne, DetectionKind::Heterodyne}) {
                double prev = -1.0;
                for (int j = 0; j <= 20; ++j) {
                    const double c = cmax * j / 20.0;
                    const double info = mutual_info(TwoModeCM{a, b, c, -c}, kind);
                    CHECK(info > prev);
                    prev = info;
                }
            }
        }
    }
    SUBCASE("rejects matrices outside the c Z shape") {
        CHECK_THROWS_AS(mutual_info(TwoModeCM{2, 2, 1.0, -0.5}, DetectionKind::Homodyne),
                        std::invalid_argument);
    }
    SUBCASE("rejects nonpositive conditional denominators") {
        CHECK_THROWS_AS(mutual_info(TwoModeCM{2, 2, 2, -2}, DetectionKind::Homodyne),
                        std::domain_error);
    }
}

TEST_CASE("Holevo bound") {
    SUBCASE("zero correlation reduces to the entropy difference") {
        const TwoModeCM m{3, 2, 0, 0};
        // nu_cond = b for homodyne/Alice, so the bound is f(3) + f(2) - f(2).
        CHECK(holevo_bound(m, DetectionKind::Homodyne, ReferenceParty::Alice) ==
              doctest::Approx(entropy_f(3.0)).epsilon(1e-13));
    }
    SUBCASE("pure shared state decouples the eavesdropper") {
        for (const double v : {1.0, 5.05, 60.0}) {
            CHECK(std::abs(holevo_bound(tmsv_cm(v), DetectionKind::Homodyne,
                                        ReferenceParty::Alice)) < 1e-8);
        }
    }
    SUBCASE("hand-evaluated case") {
        // nu_cond^2 = 2 (2 - 1/2) = 3, S = 2 f(sqrt 3), bound = f(sqrt 3).
        CHECK(holevo_bound(TwoModeCM{2, 2, 1, -1}, DetectionKind::Homodyne,
                           ReferenceParty::Alice) ==
              doctest::Approx(entropy_f(std::sqrt(3.0))).epsilon(1e-12));
    }
    SUBCASE("heterodyne branch") {
        // nu_cond = 2 - 1/3 = 5/3.
        CHECK(holevo_bound(TwoModeCM{2, 2, 1, -1}, DetectionKind::Heterodyne,
                           ReferenceParty::Alice) ==
              doctest::Approx(2.0 * entropy_f(std::sqrt(3.0)) - entropy_f(5.0 / 3.0))
                  .epsilon(1e-12));
    }
    SUBCASE("unphysical conditional spectrum is rejected") {
        CHECK_THROWS_AS(holevo_bound(TwoModeCM{1, 1, 0.99, -0.99}, DetectionKind::Homodyne,
                                     ReferenceParty::Alice),
                        std::domain_error);
    }
}

TEST_CASE("key rate from a covariance matrix") {
    SUBCASE("no correlations, no key") {
        CHECK(key_rate_from_cm(TwoModeCM{3, 2, 0, 0}, DetectionKind::Homodyne,
                               ReferenceParty::Alice, 1.0) <= 0.0);
    }
    SUBCASE("pure state keeps the full mutual information") {
        const TwoModeCM m = tmsv_cm(60.0);
        const double k = key_rate_from_cm(m, DetectionKind::Homodyne, ReferenceParty::Alice, 1.0);
        CHECK(k == doctest::Approx(mutual_info(m, DetectionKind::Homodyne)).epsilon(1e-8));
        CHECK(k > 0.0);
    }
    SUBCASE("relay output cross-checked against an independent evaluation") {
        const TwoModeCM m = mdi_conditional_cm(60.0, 1.0, 1.0, 0.02, 0.02);
        const double k = key_rate_from_cm(m, DetectionKind::Homodyne, ReferenceParty::Alice, 1.0);
        CHECK(k == doctest::Approx(3.456764476882773).epsilon(1e-10));
    }
    SUBCASE("linear in the reconciliation efficiency") {
        const TwoModeCM m = mdi_conditional_cm(20.0, 0.8, 0.6, 0.01, 0.03);
        const double i_ab = mutual_info(m, DetectionKind::Homodyne);
        const double i_e = holevo_bound(m, DetectionKind::Homodyne, ReferenceParty::Alice);
        CHECK(key_rate_from_cm(m, DetectionKind::Homodyne, ReferenceParty::Alice, 0.8) ==
              doctest::Approx(0.8 * i_ab - i_e).epsilon(1e-14));
    }
    SUBCASE("reference symmetry for balanced states") {
        Xoshiro256 rng(13);
        for (int trial = 0; trial < 100; ++trial) {
            const double a = 1.0 + 30.0 * rng.next_double();
            const double c = 0.97 * std::sqrt((a - 1) * (a + 1)) * rng.next_double();
            const TwoModeCM m{a, a, c, -c};
            for (const auto kind : {DetectionKind::Homodyne, DetectionKind::Heterodyne}) {
                const double ka = key_rate_from_cm(m, kind, ReferenceParty::Alice, 1.0);
                const double kb = key_rate_from_cm(m, kind, ReferenceParty::Bob, 1.0);
                CHECK(std::abs(ka - kb) < 1e-12);
            }
        }
    }
    SUBCASE("efficiency domain") {
        CHECK_THROWS_AS(key_rate_from_cm(tmsv_cm(2.0), DetectionKind::Homodyne,
                                         ReferenceParty::Alice, 0.0),
                        std::domain_error);
        CHECK_THROWS_AS(key_rate_from_cm(tmsv_cm(2.0), DetectionKind::Homodyne,
                                         ReferenceParty::Alice, 1.2),
                        std::domain_error);
    }
}

TEST_CASE("squeezing-to-variance dictionary") {
    CHECK(tmsv_variance_for_squeezing_db(10.0) == doctest::Approx(5.05).epsilon(1e-14));
    CHECK(tmsv_variance_for_squeezing_db(0.0) == 1.0);
    CHECK_THROWS_AS(tmsv_variance_for_squeezing_db(-1.0), std::domain_error);
}

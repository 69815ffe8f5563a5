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

#include "cvmdi/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "cvmdi/parallel.hpp"
#include "cvmdi/rng.hpp"

namespace cvmdi::oracle {

namespace {

constexpr std::size_t kMinSamples = 10000;
constexpr std::size_t kChunk = 1 << 14;
constexpr double kInvSqrt2 = 0.70710678118654752440;

// Mode m (1-based) occupies slots 2(m-1), 2(m-1)+1.
void place_tmsv(FourModeCM& m, int first_mode, int second_mode, double v) {
    const double c = std::sqrt((v - 1.0) * (v + 1.0));
    const int f = 2 * (first_mode - 1), s = 2 * (second_mode - 1);
    m(f, f) = m(f + 1, f + 1) = v;
    m(s, s) = m(s + 1, s + 1) = v;
    m(f, s) = m(s, f) = c;
    m(f + 1, s + 1) = m(s + 1, f + 1) = -c;
}

void apply_loss(FourModeCM& m, int mode, double tau, double eps) {
    const int q = 2 * (mode - 1);
    const double r = std::sqrt(tau);
    m.row(q) *= r;
    m.row(q + 1) *= r;
    m.col(q) *= r;
    m.col(q + 1) *= r;
    m(q, q) += (1.0 - tau) + eps;
    m(q + 1, q + 1) += (1.0 - tau) + eps;
}

void check_network_args(double v, double tau_a, double tau_b, double eps_a, double eps_b) {
    if (!(v >= 1.0)) throw std::domain_error("build_network_cm: v must be >= 1");
    if (!(tau_a >= 0.0 && tau_a <= 1.0) || !(tau_b >= 0.0 && tau_b <= 1.0))
        throw std::domain_error("build_network_cm: transmissivity outside [0, 1]");
    if (!(eps_a >= 0.0) || !(eps_b >= 0.0))
        throw std::domain_error("build_network_cm: negative excess noise");
}

Eigen::Matrix2d pseudo_inverse_2x2(const Eigen::Matrix2d& b) {
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> solver(b);
    const double scale = std::max(std::abs(solver.eigenvalues()(0)),
                                  std::abs(solver.eigenvalues()(1)));
    Eigen::Vector2d inv = Eigen::Vector2d::Zero();
    for (int i = 0; i < 2; ++i)
        if (std::abs(solver.eigenvalues()(i)) > 1e-13 * std::max(scale, 1.0))
            inv(i) = 1.0 / solver.eigenvalues()(i);
    return solver.eigenvectors() * inv.asDiagonal() * solver.eigenvectors().transpose();
}

struct MomentAccumulator {
    double sum = 0.0, comp = 0.0;
    void add(double x) {
        const double t = sum + x;
        comp += (std::abs(sum) >= std::abs(x)) ? (sum - t) + x : (x - t) + sum;
        sum = t;
    }
    double value() const { return sum + comp; }
};

double column_mean(const std::vector<double>& xs) {
    MomentAccumulator acc;
    for (double x : xs) acc.add(x);
    return acc.value() / static_cast<double>(xs.size());
}

double covariance(const std::vector<double>& xs, const std::vector<double>& ys) {
    const double mx = column_mean(xs), my = column_mean(ys);
    MomentAccumulator acc;
    for (std::size_t i = 0; i < xs.size(); ++i) acc.add((xs[i] - mx) * (ys[i] - my));
    return acc.value() / static_cast<double>(xs.size() - 1);
}

void resize_batch(SampleBatch& b, std::size_t n) {
    b.n = n;
    for (auto* col : {&b.alice_q, &b.alice_p, &b.bob_q, &b.bob_p, &b.relay_qs, &b.relay_pt})
        col->resize(n);
}

struct ChannelStep {
    double root_tau, vac_sd, eps_sd;
};

ChannelStep channel_step(double tau, double eps) {
    return {std::sqrt(tau), std::sqrt(1.0 - tau), std::sqrt(eps)};
}

// Loss via a vacuum ancilla plus an independent excess-noise Gaussian, then
// the balanced beam splitter; writes the relay outcomes.
void propagate_and_record(SampleBatch& batch, std::size_t i, Xoshiro256& rng, double q2, double p2,
                          double q3, double p3, const ChannelStep& ca, const ChannelStep& cb) {
    const double q2c = ca.root_tau * q2 + ca.vac_sd * rng.next_gaussian() +
                       ca.eps_sd * rng.next_gaussian();
    const double p2c = ca.root_tau * p2 + ca.vac_sd * rng.next_gaussian() +
                       ca.eps_sd * rng.next_gaussian();
    const double q3c = cb.root_tau * q3 + cb.vac_sd * rng.next_gaussian() +
                       cb.eps_sd * rng.next_gaussian();
    const double p3c = cb.root_tau * p3 + cb.vac_sd * rng.next_gaussian() +
                       cb.eps_sd * rng.next_gaussian();
    batch.relay_qs[i] = kInvSqrt2 * (q2c - q3c);
    batch.relay_pt[i] = kInvSqrt2 * (p2c + p3c);
}

void check_sample_args(const ProtocolParams& p, double tau_a, double tau_b, std::size_t n) {
    p.validate();
    if (p.scheme != Scheme::Mdi)
        throw std::invalid_argument("samplers simulate the relay network (MDI scheme only)");
    if (!(tau_a >= 0.0 && tau_a <= 1.0) || !(tau_b >= 0.0 && tau_b <= 1.0))
        throw std::domain_error("sampler: transmissivity outside [0, 1]");
    if (n < kMinSamples)
        throw std::invalid_argument("sampler: n below 10^4 gives meaningless statistics");
}

void fill_params(SampleBatch& b, const ProtocolParams& p, double tau_a, double tau_b,
                 std::size_t n, std::uint64_t seed) {
    b.seed = seed;
    b.detection = p.detection;
    b.v = p.v;
    b.tau_a = tau_a;
    b.tau_b = tau_b;
    b.eps_a = p.eps_a;
    b.eps_b = p.eps_b;
    resize_batch(b, n);
}

double fit_gain(const SampleBatch& b) {
    // Least-squares slope of Bob's raw q on q_s, negated so that
    // bob_q + gain * relay_qs removes the conditional mean.
    return -covariance(b.bob_q, b.relay_qs) / covariance(b.relay_qs, b.relay_qs);
}

}  // namespace

FourModeCM build_lossy_pair_cm(double v, double tau_a, double tau_b, double eps_a, double eps_b) {
    check_network_args(v, tau_a, tau_b, eps_a, eps_b);
    FourModeCM m = FourModeCM::Zero();
    place_tmsv(m, 1, 2, v);
    place_tmsv(m, 3, 4, v);
    apply_loss(m, 2, tau_a, eps_a);
    apply_loss(m, 3, tau_b, eps_b);
    return m;
}

FourModeCM build_network_cm(double v, double tau_a, double tau_b, double eps_a, double eps_b) {
    FourModeCM m = build_lossy_pair_cm(v, tau_a, tau_b, eps_a, eps_b);
    FourModeCM bs = FourModeCM::Identity();
    bs.block<4, 4>(2, 2) << kInvSqrt2, 0, -kInvSqrt2, 0,  //
        0, kInvSqrt2, 0, -kInvSqrt2,                      //
        kInvSqrt2, 0, kInvSqrt2, 0,                       //
        0, kInvSqrt2, 0, kInvSqrt2;
    return bs * m * bs.transpose();
}

Eigen::Matrix4d conditional_kept_cm(const FourModeCM& m) {
    const int kept[4] = {0, 1, 6, 7};
    const int meas[2] = {2, 5};  // q of mode s, p of mode t

    Eigen::Matrix4d a;
    Eigen::Matrix2d b;
    Eigen::Matrix<double, 4, 2> c;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) a(i, j) = m(kept[i], kept[j]);
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) b(i, j) = m(meas[i], meas[j]);
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 2; ++j) c(i, j) = m(kept[i], meas[j]);

    return a - c * pseudo_inverse_2x2(b) * c.transpose();
}

TwoModeCM condition_on_bell(const FourModeCM& m) {
    const Eigen::Matrix4d k = conditional_kept_cm(m);
    const double scale = std::max(1.0, k.cwiseAbs().maxCoeff());
    auto near_zero = [scale](double x) { return std::abs(x) <= 1e-10 * scale; };
    if (!near_zero(k(0, 1)) || !near_zero(k(0, 3)) || !near_zero(k(1, 2)) || !near_zero(k(2, 3)) ||
        std::abs(k(0, 0) - k(1, 1)) > 1e-10 * scale || std::abs(k(2, 2) - k(3, 3)) > 1e-10 * scale)
        throw std::runtime_error("condition_on_bell: conditional state not in standard form");
    return TwoModeCM{k(0, 0), k(2, 2), k(0, 2), k(1, 3)};
}

SampleBatch simulate_eb_scheme(const ProtocolParams& p, double tau_a, double tau_b, std::size_t n,
                               std::uint64_t seed) {
    check_sample_args(p, tau_a, tau_b, n);
    SampleBatch batch;
    fill_params(batch, p, tau_a, tau_b, n, seed);

    const double v = p.v;
    const double root_v = std::sqrt(v);
    const double c_over_rv = std::sqrt((v - 1.0) * (v + 1.0)) / root_v;
    const double squeeze_sd = 1.0 / root_v;
    const ChannelStep ca = channel_step(tau_a, p.eps_a);
    const ChannelStep cb = channel_step(tau_b, p.eps_b);
    const bool heterodyne = p.detection == DetectionKind::Heterodyne;

    const std::size_t chunks = (n + kChunk - 1) / kChunk;
    parallel_for(chunks, [&](std::size_t chunk) {
        Xoshiro256 rng(seed, chunk);
        const std::size_t begin = chunk * kChunk;
        const std::size_t end = std::min(begin + kChunk, n);
        for (std::size_t i = begin; i < end; ++i) {
            // TMSV Wigner samples, kept mode first.
            const double g1 = rng.next_gaussian(), g2 = rng.next_gaussian();
            const double g3 = rng.next_gaussian(), g4 = rng.next_gaussian();
            const double q1 = root_v * g1;
            const double q2 = c_over_rv * g1 + squeeze_sd * g2;
            const double p1 = root_v * g3;
            const double p2 = -c_over_rv * g3 + squeeze_sd * g4;

            const double g5 = rng.next_gaussian(), g6 = rng.next_gaussian();
            const double g7 = rng.next_gaussian(), g8 = rng.next_gaussian();
            const double q4 = root_v * g5;
            const double q3 = c_over_rv * g5 + squeeze_sd * g6;
            const double p4 = root_v * g7;
            const double p3 = -c_over_rv * g7 + squeeze_sd * g8;

            propagate_and_record(batch, i, rng, q2, p2, q3, p3, ca, cb);

            if (heterodyne) {
                batch.alice_q[i] = q1 + rng.next_gaussian();
                batch.alice_p[i] = p1 + rng.next_gaussian();
                batch.bob_q[i] = q4 + rng.next_gaussian();
                batch.bob_p[i] = p4 + rng.next_gaussian();
            } else {
                batch.alice_q[i] = q1;
                batch.alice_p[i] = p1;
                batch.bob_q[i] = q4;
                batch.bob_p[i] = p4;
            }
        }
    });

    batch.gain = fit_gain(batch);
    return batch;
}

SampleBatch simulate_pm_scheme(const ProtocolParams& p, double tau_a, double tau_b, std::size_t n,
                               std::uint64_t seed, double gain) {
    check_sample_args(p, tau_a, tau_b, n);
    SampleBatch batch;
    fill_params(batch, p, tau_a, tau_b, n, seed);
    batch.gain = gain;

    const double v = p.v;
    const ChannelStep ca = channel_step(tau_a, p.eps_a);
    const ChannelStep cb = channel_step(tau_b, p.eps_b);
    const bool heterodyne = p.detection == DetectionKind::Heterodyne;

    // Data are recorded in the entanglement-based normalization; the physical
    // encodings are coupling * datum with the modulation variances
    // v - 1/v (squeezed) and v - 1 per quadrature (coherent).
    const double datum_sd = heterodyne ? std::sqrt(v + 1.0) : std::sqrt(v);
    const double coupling = heterodyne ? std::sqrt((v - 1.0) / (v + 1.0))
                                       : std::sqrt((v - 1.0) * (v + 1.0)) / v;
    const double prep_sd = heterodyne ? 1.0 : std::sqrt(1.0 / v);

    const std::size_t chunks = (n + kChunk - 1) / kChunk;
    parallel_for(chunks, [&](std::size_t chunk) {
        Xoshiro256 rng(seed, chunk);
        const std::size_t begin = chunk * kChunk;
        const std::size_t end = std::min(begin + kChunk, n);
        for (std::size_t i = begin; i < end; ++i) {
            const double aq = datum_sd * rng.next_gaussian();
            const double ap = datum_sd * rng.next_gaussian();
            const double bq = datum_sd * rng.next_gaussian();
            const double bp = datum_sd * rng.next_gaussian();

            // Prepared modes: encoding plus preparation noise (squeezed
            // quadrature 1/v or coherent unit), with the Z sign on p. The
            // conjugate-quadrature marginal comes out at the anti-squeezing
            // variance v automatically.
            const double q2 = coupling * aq + prep_sd * rng.next_gaussian();
            const double p2 = -coupling * ap + prep_sd * rng.next_gaussian();
            const double q3 = coupling * bq + prep_sd * rng.next_gaussian();
            const double p3 = -coupling * bp + prep_sd * rng.next_gaussian();

            propagate_and_record(batch, i, rng, q2, p2, q3, p3, ca, cb);

            batch.alice_q[i] = aq;
            batch.alice_p[i] = ap;
            batch.bob_q[i] = bq;
            batch.bob_p[i] = bp;
        }
    });

    return batch;
}

Eigen::Matrix<double, 6, 6> final_data_covariance(const SampleBatch& batch) {
    std::vector<const std::vector<double>*> raw = {&batch.alice_q, &batch.alice_p, &batch.bob_q,
                                                   &batch.bob_p, &batch.relay_qs, &batch.relay_pt};
    std::vector<std::vector<double>> cols(6);
    for (int i = 0; i < 6; ++i) cols[i] = *raw[i];
    for (std::size_t k = 0; k < batch.n; ++k) {
        cols[2][k] = batch.bob_q_corrected(k);
        cols[3][k] = batch.bob_p_corrected(k);
    }
    Eigen::Matrix<double, 6, 6> sigma;
    for (int i = 0; i < 6; ++i)
        for (int j = i; j < 6; ++j) sigma(i, j) = sigma(j, i) = covariance(cols[i], cols[j]);
    return sigma;
}

Eigen::Matrix<double, 6, 6> analytic_final_data_covariance(const SampleBatch& batch) {
    const FourModeCM net =
        build_network_cm(batch.v, batch.tau_a, batch.tau_b, batch.eps_a, batch.eps_b);
    const int idx[6] = {0, 1, 6, 7, 2, 5};  // alice q/p, bob q/p, q_s, p_t
    Eigen::Matrix<double, 6, 6> sigma;
    for (int i = 0; i < 6; ++i)
        for (int j = 0; j < 6; ++j) sigma(i, j) = net(idx[i], idx[j]);
    if (batch.detection == DetectionKind::Heterodyne)
        for (int i = 0; i < 4; ++i) sigma(i, i) += 1.0;
    Eigen::Matrix<double, 6, 6> t = Eigen::Matrix<double, 6, 6>::Identity();
    t(2, 4) = batch.gain;
    t(3, 5) = -batch.gain;
    return t * sigma * t.transpose();
}

ComparisonReport compare_schemes(const SampleBatch& pm, const SampleBatch& eb) {
    if (pm.n != eb.n || pm.detection != eb.detection || pm.v != eb.v || pm.tau_a != eb.tau_a ||
        pm.tau_b != eb.tau_b || pm.eps_a != eb.eps_a || pm.eps_b != eb.eps_b)
        throw std::invalid_argument("compare_schemes: batches were produced at different parameters");

    static const char* names[6] = {"alice_q", "alice_p", "bob_q", "bob_p", "relay_qs", "relay_pt"};
    auto corrected_columns = [](const SampleBatch& b) {
        std::vector<std::vector<double>> cols = {b.alice_q, b.alice_p, b.bob_q,
                                                 b.bob_p,   b.relay_qs, b.relay_pt};
        for (std::size_t k = 0; k < b.n; ++k) {
            cols[2][k] = b.bob_q_corrected(k);
            cols[3][k] = b.bob_p_corrected(k);
        }
        return cols;
    };
    const auto cp = corrected_columns(pm);
    const auto ce = corrected_columns(eb);

    auto mean_and_se = [](const std::vector<double>& xs) {
        const double m = column_mean(xs);
        MomentAccumulator acc;
        for (double x : xs) acc.add((x - m) * (x - m));
        const double var = acc.value() / static_cast<double>(xs.size() - 1);
        return std::pair<double, double>(m, std::sqrt(var / static_cast<double>(xs.size())));
    };

    ComparisonReport report;
    const double threshold = 5.0;
    auto add_check = [&](const std::string& name, std::pair<double, double> a,
                         std::pair<double, double> b) {
        const double se = std::sqrt(a.second * a.second + b.second * b.second);
        const double z = (a.first - b.first) / std::max(se, 1e-300);
        const bool pass = std::abs(z) < threshold;
        report.checks.push_back({name, std::abs(z), threshold, pass});
        report.pass = report.pass && pass;
    };

    for (int i = 0; i < 6; ++i)
        add_check(std::string("mean[") + names[i] + "]", mean_and_se(cp[i]), mean_and_se(ce[i]));

    std::vector<double> prod_pm(pm.n), prod_eb(eb.n);
    for (int i = 0; i < 6; ++i) {
        for (int j = i; j < 6; ++j) {
            for (std::size_t k = 0; k < pm.n; ++k) prod_pm[k] = cp[i][k] * cp[j][k];
            for (std::size_t k = 0; k < eb.n; ++k) prod_eb[k] = ce[i][k] * ce[j][k];
            add_check(std::string("moment[") + names[i] + "*" + names[j] + "]",
                      mean_and_se(prod_pm), mean_and_se(prod_eb));
        }
    }
    return report;
}

}  // namespace cvmdi::oracle

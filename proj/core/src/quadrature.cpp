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

#include "cvmdi/quadrature.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

namespace cvmdi {

namespace {

// Nodes come from the eigenvalues of the Jacobi matrix (Golub-Welsch,
// eigenvalues only, so the cost stays O(n^2)), then two Newton polish steps.
// Weights use the classical closed forms evaluated with scaled recurrences
// that stay bounded for any order.

Eigen::VectorXd jacobi_eigenvalues(const Eigen::VectorXd& diag, const Eigen::VectorXd& subdiag) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
    solver.computeFromTridiagonal(diag, subdiag, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success)
        throw std::runtime_error("quadrature: tridiagonal eigensolver failed");
    return solver.eigenvalues();
}

// l_{n-1}(x), l_n(x) with l_k = e^{-x/2} L_k(x); |l_k| <= 1 on [0, inf).
std::pair<double, double> scaled_laguerre_pair(int n, double x) {
    double prev = std::exp(-0.5 * x);
    double curr = (1.0 - x) * prev;
    for (int k = 1; k < n; ++k) {
        const double next = ((2.0 * k + 1.0 - x) * curr - k * prev) / (k + 1.0);
        prev = curr;
        curr = next;
    }
    return {prev, curr};
}

// P_{n-1}(x), P_n(x); |P_k| <= 1 on [-1, 1].
std::pair<double, double> legendre_pair(int n, double x) {
    double prev = 1.0;
    double curr = x;
    for (int k = 1; k < n; ++k) {
        const double next = ((2.0 * k + 1.0) * x * curr - k * prev) / (k + 1.0);
        prev = curr;
        curr = next;
    }
    return {prev, curr};
}

void normalize_weights(std::vector<double>& weights, double mu0) {
    double sum = 0.0;
    for (double w : weights) sum += w;
    const double scale = mu0 / sum;
    for (double& w : weights) w *= scale;
}

NodeTable make_laguerre(int n) {
    Eigen::VectorXd diag(n), sub(n - 1);
    for (int k = 0; k < n; ++k) diag(k) = 2.0 * k + 1.0;
    for (int k = 1; k < n; ++k) sub(k - 1) = static_cast<double>(k);
    const Eigen::VectorXd ev = jacobi_eigenvalues(diag, sub);

    NodeTable table;
    table.nodes.assign(ev.data(), ev.data() + n);
    table.weights.resize(static_cast<std::size_t>(n));
    for (auto& x : table.nodes) {
        for (int step = 0; step < 2; ++step) {
            const auto [lm1, ln] = scaled_laguerre_pair(n, x);
            const double denom = n * (ln - lm1);
            if (denom == 0.0) break;
            const double dx = ln * x / denom;  // L_n / L_n' with the e^{-x/2} cancelled
            if (!std::isfinite(dx)) break;
            x -= dx;
        }
    }
    for (std::size_t i = 0; i < table.nodes.size(); ++i) {
        const double x = table.nodes[i];
        if (x > 700.0) {
            table.weights[i] = 0.0;  // true weight below double range
            continue;
        }
        const auto [ln, lnp1] = scaled_laguerre_pair(n + 1, x);
        (void)ln;
        const double d = (n + 1.0) * lnp1;
        table.weights[i] = x * std::exp(-x) / (d * d);
    }
    normalize_weights(table.weights, 1.0);
    return table;
}

NodeTable make_legendre(int n) {
    Eigen::VectorXd diag = Eigen::VectorXd::Zero(n);
    Eigen::VectorXd sub(n - 1);
    for (int k = 1; k < n; ++k) sub(k - 1) = k / std::sqrt(4.0 * k * k - 1.0);
    const Eigen::VectorXd ev = jacobi_eigenvalues(diag, sub);

    NodeTable table;
    table.nodes.assign(ev.data(), ev.data() + n);
    table.weights.resize(static_cast<std::size_t>(n));
    for (auto& x : table.nodes) {
        for (int step = 0; step < 2; ++step) {
            const auto [pm1, pn] = legendre_pair(n, x);
            const double deriv = n * (x * pn - pm1) / (x * x - 1.0);
            if (deriv == 0.0 || !std::isfinite(deriv)) break;
            x -= pn / deriv;
        }
    }
    for (std::size_t i = 0; i < table.nodes.size(); ++i) {
        const double x = table.nodes[i];
        const auto [pm1, pn] = legendre_pair(n, x);
        const double deriv = n * (x * pn - pm1) / (x * x - 1.0);
        table.weights[i] = 2.0 / ((1.0 - x * x) * deriv * deriv);
    }
    normalize_weights(table.weights, 2.0);
    return table;
}

const NodeTable& cached(int n, std::map<int, NodeTable>& cache, std::mutex& mutex,
                        NodeTable (*make)(int)) {
    if (n < 2) throw std::invalid_argument("quadrature: node count must be >= 2");
    std::lock_guard<std::mutex> lock(mutex);
    auto it = cache.find(n);
    if (it == cache.end()) it = cache.emplace(n, make(n)).first;
    return it->second;
}

}  // namespace

const NodeTable& gauss_laguerre(int n) {
    static std::map<int, NodeTable> cache;
    static std::mutex mutex;
    return cached(n, cache, mutex, make_laguerre);
}

const NodeTable& gauss_legendre(int n) {
    static std::map<int, NodeTable> cache;
    static std::mutex mutex;
    return cached(n, cache, mutex, make_legendre);
}

}  // namespace cvmdi

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

#include <vector>

namespace cvmdi {

struct QuadratureRule {
    enum class Kind { GaussLaguerre };

    int node_count = 64;  // per dimension
    Kind kind = Kind::GaussLaguerre;
};

struct NodeTable {
    std::vector<double> nodes;
    std::vector<double> weights;
};

/// Gauss-Laguerre nodes/weights for the weight e^{-x} on [0, inf).
/// Golub-Welsch on the Jacobi matrix; cached per order, thread-safe.
const NodeTable& gauss_laguerre(int n);

/// Gauss-Legendre nodes/weights on [-1, 1]; cached per order, thread-safe.
const NodeTable& gauss_legendre(int n);

}  // namespace cvmdi

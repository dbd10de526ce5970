/* Copyright 2026 The WKB Lab Authors

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

        https://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
        limitations under the License.
==============================================================================*/

#include "wkblab/adam.hpp"

#include <cmath>

#include "wkblab/error.hpp"

namespace wkb {

AdamState::AdamState(Eigen::Index n_params, double learning_rate)
    : m(Vec::Zero(n_params)), v(Vec::Zero(n_params)), lr(learning_rate) {
    if (!(learning_rate > 0.0)) throw DomainError("Adam learning rate must be positive");
}

void adam_step(AdamState& s, Vec& params, const Vec& grads) {
    if (params.size() != s.m.size() || grads.size() != s.m.size()) {
        throw SizeMismatch("Adam state, parameters and gradients differ in size");
    }
    ++s.step;
    s.m = s.beta1 * s.m + (1.0 - s.beta1) * grads;
    s.v = s.beta2 * s.v + (1.0 - s.beta2) * grads.cwiseAbs2();
    const double c1 = 1.0 - std::pow(s.beta1, static_cast<double>(s.step));
    const double c2 = 1.0 - std::pow(s.beta2, static_cast<double>(s.step));
    params.array() -= s.lr * (s.m.array() / c1) / ((s.v.array() / c2).sqrt() + s.eps);
}

}  // namespace wkb

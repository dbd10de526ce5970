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

#ifndef WKBLAB_ADAM_HPP
#define WKBLAB_ADAM_HPP

#include "wkblab/types.hpp"

namespace wkb {

struct AdamState {
    AdamState(Eigen::Index n_params, double learning_rate = 1e-3);

    Vec m;
    Vec v;
    long step = 0;
    double lr = 1e-3;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
};

// Bias-corrected Adam: p -= lr * m_hat / (sqrt(v_hat) + eps).
void adam_step(AdamState& state, Vec& params, const Vec& grads);

}  // namespace wkb

#endif  // WKBLAB_ADAM_HPP

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

#ifndef WKBLAB_DSM_HPP
#define WKBLAB_DSM_HPP

#include <cstdint>
#include <random>

#include "wkblab/mlp.hpp"
#include "wkblab/schedule.hpp"

namespace wkb {

// One Monte Carlo draw of the denoising score-matching objective.
struct DsmBatch {
    Mat noisy;   // x_{i,t} = alpha(t_i) x_i + sigma(t_i) z_i, one column per item
    Vec times;   // t_i from the discretized grid
    Mat target;  // conditional score -(x_{i,t} - alpha x_i) / sigma^2
    Vec weight;  // g(t_i)^2 / 2
};

// grid_size equally spaced times covering [t_min, t_max] inclusive.
Vec dsm_time_grid(const Schedule& schedule, int grid_size = 1000);

DsmBatch draw_dsm_batch(const Mat& points, const Schedule& schedule, std::mt19937_64& rng, int grid_size = 1000);

// mean_i weight_i * || prediction_i - target_i ||^2
double dsm_loss_from_predictions(const DsmBatch& batch, const Mat& predictions);

struct LossAndGrad {
    double loss = 0.0;
    Vec grad;
};

LossAndGrad dsm_loss_and_grad(const MlpScore& model, const DsmBatch& batch);

// Draws a batch from rng_seed and differentiates the loss on it.
LossAndGrad dsm_loss(const MlpScore& model, const Mat& points, const Schedule& schedule, std::uint64_t rng_seed,
                     int grid_size = 1000);

}  // namespace wkb

#endif  // WKBLAB_DSM_HPP

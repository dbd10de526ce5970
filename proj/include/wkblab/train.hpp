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

#ifndef WKBLAB_TRAIN_HPP
#define WKBLAB_TRAIN_HPP

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "wkblab/checkpoint.hpp"
#include "wkblab/data.hpp"
#include "wkblab/mlp.hpp"
#include "wkblab/schedule.hpp"

namespace wkb {

struct TrainConfig {
    long epochs = 2000;
    long batch_size = 512;
    double lr = 1e-3;
    int time_grid_size = 1000;
    std::uint64_t seed = 0;
    int hidden = MlpScore::kDefaultHidden;
};

struct TrainResult {
    MlpScore model;
    std::vector<double> loss_trace;  // mean minibatch loss per epoch
    CheckpointMeta meta;
};

// Called after every epoch with (epoch index, mean loss).
using EpochCallback = std::function<void(long, double)>;

// One epoch is ceil(n / batch_size) Adam steps; every step draws batch_size
// indices with replacement. Throws NonFinite naming epoch, step and parameter
// norm when a loss or gradient stops being finite.
TrainResult train(const PointCloud& data, const Schedule& schedule, const TrainConfig& config,
                  const EpochCallback& on_epoch = {});

void save_loss_trace(const std::string& path, const std::vector<double>& trace, const std::string& header = {});

}  // namespace wkb

#endif  // WKBLAB_TRAIN_HPP

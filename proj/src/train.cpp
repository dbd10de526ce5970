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

#include "wkblab/train.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>

#include "wkblab/adam.hpp"
#include "wkblab/dsm.hpp"
#include "wkblab/error.hpp"

namespace wkb {

TrainResult train(const PointCloud& data, const Schedule& schedule, const TrainConfig& config,
                  const EpochCallback& on_epoch) {
    const Eigen::Index n = data.size();
    if (n == 0) throw DomainError("training set is empty");
    if (data.dim() != schedule.dim()) throw SizeMismatch("dataset dimension differs from the schedule");
    if (config.epochs < 0) throw DomainError("epochs must be nonnegative");
    if (config.batch_size < 1 || config.batch_size > n) throw DomainError("batch size must lie in [1, dataset size]");
    if (!(config.lr > 0)) throw DomainError("learning rate must be positive");

    TrainResult result{MlpScore(data.dim(), config.hidden, config.seed), {}, {}};
    result.meta = {schedule.kind(),
                   schedule.beta(),
                   schedule.t_min(),
                   schedule.t_max(),
                   config.seed,
                   static_cast<std::uint64_t>(config.epochs),
                   static_cast<std::uint64_t>(config.batch_size),
                   config.lr,
                   data.name};

    // The data stream is decoupled from the weight initialisation stream.
    std::mt19937_64 rng(config.seed ^ 0x9E3779B97F4A7C15ull);
    std::uniform_int_distribution<Eigen::Index> pick(0, n - 1);
    AdamState adam(result.model.num_parameters(), config.lr);
    const long steps = (n + config.batch_size - 1) / config.batch_size;
    Mat batch_points(data.dim(), config.batch_size);
    result.loss_trace.reserve(static_cast<std::size_t>(config.epochs));

    for (long epoch = 0; epoch < config.epochs; ++epoch) {
        double total = 0.0;
        for (long step = 0; step < steps; ++step) {
            for (long i = 0; i < config.batch_size; ++i) batch_points.col(i) = data.points.col(pick(rng));
            const DsmBatch batch = draw_dsm_batch(batch_points, schedule, rng, config.time_grid_size);
            const LossAndGrad lg = dsm_loss_and_grad(result.model, batch);
            if (!std::isfinite(lg.loss) || !lg.grad.allFinite()) {
                std::ostringstream msg;
                msg << "non-finite training loss at epoch " << epoch << ", batch " << step << ", parameter norm "
                    << result.model.parameters().norm();
                throw NonFinite(msg.str());
            }
            adam_step(adam, result.model.mutable_parameters(), lg.grad);
            total += lg.loss;
        }
        const double mean = total / static_cast<double>(steps);
        result.loss_trace.push_back(mean);
        if (on_epoch) on_epoch(epoch, mean);
    }
    return result;
}

void save_loss_trace(const std::string& path, const std::vector<double>& trace, const std::string& header) {
    std::ofstream out(path);
    if (!out) throw Error("cannot open for writing: " + path);
    out << header << "epoch\tloss\n";
    char buf[64];
    for (std::size_t i = 0; i < trace.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%.17g", trace[i]);
        out << i << '\t' << buf << '\n';
    }
}

}  // namespace wkb

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

#include "wkblab/dsm.hpp"

#include <cmath>

#include "wkblab/error.hpp"

namespace wkb {

Vec dsm_time_grid(const Schedule& schedule, int grid_size) {
    if (grid_size < 2) throw DomainError("time grid needs at least two points");
    return Vec::LinSpaced(grid_size, schedule.t_min(), schedule.t_max());
}

DsmBatch draw_dsm_batch(const Mat& points, const Schedule& schedule, std::mt19937_64& rng, int grid_size) {
    if (points.cols() == 0) throw DomainError("DSM batch is empty");
    if (points.rows() != schedule.dim()) throw SizeMismatch("DSM batch dimension differs from the schedule");
    const Vec grid = dsm_time_grid(schedule, grid_size);
    const Eigen::Index d = points.rows();
    const Eigen::Index b = points.cols();

    DsmBatch batch{Mat(d, b), Vec(b), Mat(d, b), Vec(b)};
    std::uniform_int_distribution<int> pick(0, grid_size - 1);
    std::normal_distribution<double> normal(0.0, 1.0);
    for (Eigen::Index i = 0; i < b; ++i) {
        const double t = grid[pick(rng)];
        const double sigma2 = schedule.sigma2(t);
        if (!(sigma2 > 0.0)) throw DomainError("DSM noise variance vanishes at t = " + std::to_string(t));
        const double sigma = std::sqrt(sigma2);
        const double alpha = schedule.alpha(t);
        for (Eigen::Index k = 0; k < d; ++k) {
            const double z = normal(rng);
            batch.noisy(k, i) = alpha * points(k, i) + sigma * z;
            batch.target(k, i) = -z / sigma;
        }
        batch.times[i] = t;
        batch.weight[i] = 0.5 * schedule.g2(t);
    }
    return batch;
}

double dsm_loss_from_predictions(const DsmBatch& batch, const Mat& predictions) {
    if (predictions.rows() != batch.target.rows() || predictions.cols() != batch.target.cols()) {
        throw SizeMismatch("DSM predictions do not match the batch shape");
    }
    const Vec sq = (predictions - batch.target).colwise().squaredNorm().transpose();
    return sq.cwiseProduct(batch.weight).mean();
}

LossAndGrad dsm_loss_and_grad(const MlpScore& model, const DsmBatch& batch) {
    const Eigen::Index d = batch.noisy.rows();
    const Eigen::Index b = batch.noisy.cols();
    Mat inputs(d + 1, b);
    inputs.topRows(d) = batch.noisy;
    inputs.row(d) = batch.times.transpose();

    MlpScore::Tape tape;
    const Mat pred = model.forward(inputs, &tape);
    const Mat resid = pred - batch.target;

    LossAndGrad out;
    out.loss = resid.colwise().squaredNorm().transpose().cwiseProduct(batch.weight).mean();
    const Mat grad_out = resid * ((2.0 / static_cast<double>(b)) * batch.weight).asDiagonal();
    out.grad = model.backward(tape, grad_out);
    return out;
}

LossAndGrad dsm_loss(const MlpScore& model, const Mat& points, const Schedule& schedule, std::uint64_t rng_seed,
                     int grid_size) {
    std::mt19937_64 rng(rng_seed);
    return dsm_loss_and_grad(model, draw_dsm_batch(points, schedule, rng, grid_size));
}

}  // namespace wkb

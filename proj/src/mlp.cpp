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

#include "wkblab/mlp.hpp"

#include <cmath>
#include <random>

#include "wkblab/error.hpp"

namespace wkb {

namespace {

inline double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

void swish_inplace(Mat& z) {
    z = z.unaryExpr([](double v) { return v * sigmoid(v); });
}

}  // namespace

double swish(double x) { return x * sigmoid(x); }

double swish_derivative(double x) {
    const double s = sigmoid(x);
    return s + x * s * (1.0 - s);
}

MlpScore::MlpScore(int dim, int hidden) {
    if (dim < 1 || hidden < 1) throw DomainError("MLP widths must be positive");
    widths_ = {dim + 1, hidden, hidden, hidden, dim};
    Eigen::Index offset = 0;
    for (int l = 0; l < kLayers; ++l) {
        offsets_[l] = offset;
        offset += static_cast<Eigen::Index>(widths_[l + 1]) * (widths_[l] + 1);
    }
    params_ = Vec::Zero(offset);
}

MlpScore::MlpScore(int dim, int hidden, std::uint64_t seed) : MlpScore(dim, hidden) {
    seed_ = seed;
    std::mt19937_64 rng(seed);
    for (int l = 0; l < kLayers; ++l) {
        const int fan_in = widths_[l];
        const int fan_out = widths_[l + 1];
        const double limit = std::sqrt(6.0 / (fan_in + fan_out));
        std::uniform_real_distribution<double> dist(-limit, limit);
        const Eigen::Index count = static_cast<Eigen::Index>(fan_in) * fan_out;
        for (Eigen::Index i = 0; i < count; ++i) params_[offsets_[l] + i] = dist(rng);
    }
}

MlpScore MlpScore::zeros(int dim, int hidden) { return MlpScore(dim, hidden); }

MlpScore MlpScore::from_parameters(int dim, int hidden, std::uint64_t seed, const Vec& params) {
    MlpScore model(dim, hidden);
    if (params.size() != model.params_.size()) throw SizeMismatch("parameter vector does not fit the MLP widths");
    model.params_ = params;
    model.seed_ = seed;
    return model;
}

Eigen::Map<const Mat> MlpScore::weight(int layer) const {
    return {params_.data() + offsets_[layer], widths_[layer + 1], widths_[layer]};
}

Eigen::Map<const Vec> MlpScore::bias(int layer) const {
    const Eigen::Index w = static_cast<Eigen::Index>(widths_[layer + 1]) * widths_[layer];
    return {params_.data() + offsets_[layer] + w, widths_[layer + 1]};
}

Mat MlpScore::forward(const Mat& inputs, Tape* tape) const {
    if (inputs.rows() != widths_[0]) throw SizeMismatch("MLP input has the wrong number of rows");
    Mat h = inputs;
    for (int l = 0; l < kLayers; ++l) {
        Mat z = weight(l) * h;
        z.colwise() += bias(l);
        if (tape) tape->inputs[l] = h;
        if (l + 1 < kLayers) {
            if (tape) tape->preact[l] = z;
            swish_inplace(z);
        }
        h = std::move(z);
    }
    return h;
}

Vec MlpScore::backward(const Tape& tape, const Mat& grad_output) const {
    Vec grad = Vec::Zero(params_.size());
    Mat delta = grad_output;  // dL/dz of the current layer
    for (int l = kLayers - 1; l >= 0; --l) {
        const Eigen::Index rows = widths_[l + 1];
        const Eigen::Index cols = widths_[l];
        Eigen::Map<Mat> gw(grad.data() + offsets_[l], rows, cols);
        Eigen::Map<Vec> gb(grad.data() + offsets_[l] + rows * cols, rows);
        gw.noalias() = delta * tape.inputs[l].transpose();
        gb = delta.rowwise().sum();
        if (l > 0) {
            Mat upstream = weight(l).transpose() * delta;
            delta = upstream.cwiseProduct(tape.preact[l - 1].unaryExpr([](double v) { return swish_derivative(v); }));
        }
    }
    return grad;
}

Vec MlpScore::eval(const Vec& x, double t) const {
    if (x.size() != dim()) throw SizeMismatch("MLP score evaluated on a vector of the wrong size");
    Mat in(widths_[0], 1);
    in.col(0).head(dim()) = x;
    in(dim(), 0) = t;
    return forward(in).col(0);
}

Mat MlpScore::eval_batch(const Mat& xs, double t) const {
    if (xs.rows() != dim()) throw SizeMismatch("MLP score evaluated on a batch of the wrong size");
    Mat in(widths_[0], xs.cols());
    in.topRows(dim()) = xs;
    in.row(dim()).setConstant(t);
    return forward(in);
}

}  // namespace wkb

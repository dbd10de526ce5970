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

#ifndef WKBLAB_MLP_HPP
#define WKBLAB_MLP_HPP

#include <array>
#include <cstdint>
#include <vector>

#include "wkblab/score.hpp"

namespace wkb {

// Score network concat([x, t]) -> (Dense(H) -> swish)^3 -> Dense(dim).
//
// Parameters live in one flat vector, layer by layer: the column-major weight
// matrix (out x in) followed by its bias. The backward pass is written out for
// this fixed architecture.
class MlpScore final : public ScoreFunction {
public:
    static constexpr int kDefaultHidden = 128;
    static constexpr int kLayers = 4;

    // Glorot-uniform weights in +-sqrt(6 / (fan_in + fan_out)), zero biases.
    MlpScore(int dim, int hidden, std::uint64_t seed);
    static MlpScore zeros(int dim, int hidden = kDefaultHidden);
    // Throws SizeMismatch unless params has num_parameters() entries.
    static MlpScore from_parameters(int dim, int hidden, std::uint64_t seed, const Vec& params);

    int dim() const override { return widths_.back(); }
    int hidden() const { return widths_[1]; }
    std::uint64_t seed() const { return seed_; }
    const std::array<int, kLayers + 1>& widths() const { return widths_; }

    Vec eval(const Vec& x, double t) const override;
    Mat eval_batch(const Mat& xs, double t) const override;

    // Activations saved for the backward pass.
    struct Tape {
        std::array<Mat, kLayers> inputs;      // input of each dense layer
        std::array<Mat, kLayers - 1> preact;  // pre-activations of hidden layers
    };

    // inputs: (dim + 1) x B, last row holding the time of each column.
    Mat forward(const Mat& inputs, Tape* tape = nullptr) const;
    // grad_output: dim x B derivative of a scalar loss w.r.t. the outputs.
    Vec backward(const Tape& tape, const Mat& grad_output) const;

    const Vec& parameters() const { return params_; }
    Vec& mutable_parameters() { return params_; }
    Eigen::Index num_parameters() const { return params_.size(); }

    Eigen::Map<const Mat> weight(int layer) const;
    Eigen::Map<const Vec> bias(int layer) const;

private:
    MlpScore(int dim, int hidden);

    std::array<int, kLayers + 1> widths_{};
    std::array<Eigen::Index, kLayers> offsets_{};
    Vec params_;
    std::uint64_t seed_ = 0;
};

double swish(double x);
double swish_derivative(double x);

}  // namespace wkb

#endif  // WKBLAB_MLP_HPP

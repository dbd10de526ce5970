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

#ifndef WKBLAB_SCORE_HPP
#define WKBLAB_SCORE_HPP

#include "wkblab/types.hpp"

namespace wkb {

// Evaluatable approximation s(x, t) of grad log p_t(x). Implementations must be
// safe to call concurrently from several threads.
class ScoreFunction {
public:
    virtual ~ScoreFunction() = default;

    virtual int dim() const = 0;
    virtual Vec eval(const Vec& x, double t) const = 0;

    // Column-wise evaluation at a common time. The default loops over eval().
    virtual Mat eval_batch(const Mat& xs, double t) const;
};

// Isotropic score of the constant-beta Gaussian model,
//   s(x, t) = -(1 + epsilon) x / v_t,  v_t = 1 + exp(-beta t) (v0 - 1).
// With epsilon = 0 this is exactly grad log N(x | 0, v_t I).
class AnalyticGaussianScore final : public ScoreFunction {
public:
    AnalyticGaussianScore(double beta, double v0, double epsilon, int dim);

    int dim() const override { return dim_; }
    Vec eval(const Vec& x, double t) const override;
    Mat eval_batch(const Mat& xs, double t) const override;

    double variance(double t) const;
    double beta() const { return beta_; }
    double v0() const { return v0_; }
    double epsilon() const { return epsilon_; }

private:
    double beta_;
    double v0_;
    double epsilon_;
    int dim_;
};

}  // namespace wkb

#endif  // WKBLAB_SCORE_HPP

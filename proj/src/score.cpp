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

#include "wkblab/score.hpp"

#include <cmath>

#include "wkblab/error.hpp"

namespace wkb {

Mat ScoreFunction::eval_batch(const Mat& xs, double t) const {
    Mat out(xs.rows(), xs.cols());
    for (Eigen::Index j = 0; j < xs.cols(); ++j) out.col(j) = eval(xs.col(j), t);
    return out;
}

AnalyticGaussianScore::AnalyticGaussianScore(double beta, double v0, double epsilon, int dim)
    : beta_(beta), v0_(v0), epsilon_(epsilon), dim_(dim) {
    if (!(beta > 0.0)) throw DomainError("analytic score needs beta > 0");
    if (!(v0 > 0.0)) throw DomainError("analytic score needs v0 > 0");
    if (dim < 1) throw DomainError("analytic score needs dim >= 1");
}

double AnalyticGaussianScore::variance(double t) const {
    return 1.0 + std::exp(-beta_ * t) * (v0_ - 1.0);
}

Vec AnalyticGaussianScore::eval(const Vec& x, double t) const {
    return (-(1.0 + epsilon_) / variance(t)) * x;
}

Mat AnalyticGaussianScore::eval_batch(const Mat& xs, double t) const {
    return (-(1.0 + epsilon_) / variance(t)) * xs;
}

}  // namespace wkb

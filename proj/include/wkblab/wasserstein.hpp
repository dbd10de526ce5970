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

#ifndef WKBLAB_WASSERSTEIN_HPP
#define WKBLAB_WASSERSTEIN_HPP

#include <functional>
#include <string>
#include <vector>

#include "wkblab/data.hpp"

namespace wkb {

struct W2Result {
    double distance = 0.0;
    std::vector<Eigen::Index> assignment;  // a_i is matched with b_{assignment[i]}
};

// Minimum-cost perfect matching on an n x n cost given by cost(i, j), solved
// exactly with shortest augmenting paths and dual potentials. Returns the
// column assigned to each row.
std::vector<Eigen::Index> solve_assignment(Eigen::Index n, const std::function<double(Eigen::Index, Eigen::Index)>& cost);

// sqrt of the mean squared Euclidean distance under the optimal matching.
// Throws SizeMismatch for clouds of different size or dimension.
W2Result w2_exact(const Mat& a, const Mat& b);
W2Result w2_exact(const PointCloud& a, const PointCloud& b);

// |sqrt(v_a) - sqrt(v_b)|
double w2_gaussian_1d(double v_a, double v_b);

struct SweepRow {
    double h;
    double mean;
    double stderr_;
    int trials;
};
void write_sweep_table(const std::string& path, const std::vector<SweepRow>& rows, const std::string& header = {});

}  // namespace wkb

#endif  // WKBLAB_WASSERSTEIN_HPP

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

#ifndef WKBLAB_DATA_HPP
#define WKBLAB_DATA_HPP

#include <cstdint>
#include <string>

#include "wkblab/types.hpp"

namespace wkb {

struct PointCloud {
    Mat points;  // d x n
    std::string name;
    std::uint64_t seed = 0;
    double norm_constant = 1.0;

    int dim() const { return static_cast<int>(points.rows()); }
    Eigen::Index size() const { return points.cols(); }
};

// Standard deviation of all coordinates pooled together.
double pooled_std(const Mat& points);

// Divides by the pooled std and multiplies it into norm_constant.
void normalize(PointCloud& cloud);

// u ~ U(1.5 pi, 4.5 pi); (u cos u, u sin u) + noise * N(0, I), then normalized.
PointCloud make_swiss_roll(Eigen::Index n, double noise, std::uint64_t seed);

// Equal-weight mixture on the grid {-4,-2,0,2,4}^2 with std 0.05, divided by sqrt(8).
PointCloud make_25gaussian(Eigen::Index n, std::uint64_t seed);
inline constexpr double k25GaussianNorm = 2.8284271247461903;

// Any registered dataset by name ("swiss_roll", "25gaussian").
PointCloud make_dataset(const std::string& name, Eigen::Index n, std::uint64_t seed);

// Header "# name seed norm_constant", then one tab-separated point per line.
void save_cloud(const std::string& path, const PointCloud& cloud);
// Throws ParseError with the offending line number.
PointCloud load_cloud(const std::string& path);

}  // namespace wkb

#endif  // WKBLAB_DATA_HPP

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

#ifndef WKBLAB_TYPES_HPP
#define WKBLAB_TYPES_HPP

#include <Eigen/Dense>

namespace wkb {

using Vec = Eigen::VectorXd;
// Point sets and batches are stored column-per-point.
using Mat = Eigen::MatrixXd;

inline bool all_finite(const Vec& v) { return v.allFinite(); }

}  // namespace wkb

#endif  // WKBLAB_TYPES_HPP

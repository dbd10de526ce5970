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

#ifndef WKBLAB_TESTS_SUPPORT_HPP
#define WKBLAB_TESTS_SUPPORT_HPP

#include <cmath>
#include <filesystem>
#include <numbers>
#include <random>
#include <string>

#include "wkblab/gaussian_oracle.hpp"
#include "wkblab/path_action.hpp"

namespace wkb::testing {

inline std::string temp_path(const std::string& name) {
    return (std::filesystem::temp_directory_path() / ("wkblab_test_" + name)).string();
}

inline double log_normal_iso(const Vec& x, double var) {
    const double d = static_cast<double>(x.size());
    return -0.5 * d * std::log(2.0 * std::numbers::pi * var) - 0.5 * x.squaredNorm() / var;
}

// Mean over n_paths of
//   [-log p_0(x_0) + A_Ito] - [-log p_T(x_T) + A~_reverse-Ito]
// for exact constant-beta paths on a uniform grid of n_steps steps over [0, T].
// Both discretisations share the normalisation because g is constant.
inline double mean_path_identity_residual(const GaussianModel& g, int dim, int n_steps, long n_paths,
                                          std::uint64_t seed) {
    const double T = g.T();
    const Schedule s = Schedule::const_beta(g.beta(), std::min(0.5 * T, 1e-3), T, dim);
    const AnalyticGaussianScore score = g.score(dim);
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    const double dt = T / n_steps;
    const double decay = std::exp(-0.5 * g.beta() * dt);
    const double step_sd = std::sqrt(-std::expm1(-g.beta() * dt));

    DiscretePath fwd{Vec::LinSpaced(n_steps + 1, 0.0, T), Mat(dim, n_steps + 1), Discretization::Ito};
    DiscretePath rev = fwd;
    rev.scheme = Discretization::ReverseIto;
    double total = 0.0;
    for (long p = 0; p < n_paths; ++p) {
        for (int k = 0; k < dim; ++k) fwd.states(k, 0) = std::sqrt(g.v0()) * normal(rng);
        for (int n = 0; n < n_steps; ++n) {
            for (int k = 0; k < dim; ++k) fwd.states(k, n + 1) = decay * fwd.states(k, n) + step_sd * normal(rng);
        }
        rev.states = fwd.states;
        const double lhs = -log_normal_iso(fwd.states.col(0), g.v(0.0)) + forward_action(fwd, s).total();
        const double rhs = -log_normal_iso(fwd.states.col(n_steps), g.v(T)) + reverse_action(rev, s, score).total();
        total += lhs - rhs;
    }
    return total / static_cast<double>(n_paths);
}

}  // namespace wkb::testing

#endif  // WKBLAB_TESTS_SUPPORT_HPP

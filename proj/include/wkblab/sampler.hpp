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

#ifndef WKBLAB_SAMPLER_HPP
#define WKBLAB_SAMPLER_HPP

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "wkblab/data.hpp"
#include "wkblab/schedule.hpp"
#include "wkblab/score.hpp"

namespace wkb {

struct SamplerConfig {
    double h = 1.0;          // noise scale of the interpolating reverse SDE
    long n_steps = 1000;     // Euler-Maruyama steps on [t_min, t_max]
    std::uint64_t seed = 0;
    double tol = 1e-5;       // probability-flow mode
    double prior_var = 1.0;  // latent x_{t_max} ~ N(0, prior_var I)
    Eigen::Index record = 0; // number of leading trajectories to keep
    int threads = 1;
};

struct Trajectory {
    std::vector<double> times;  // descending from t_max to t_min
    std::vector<Vec> states;
};

struct SampleResult {
    PointCloud cloud;
    std::vector<Trajectory> trajectories;
};

// Per-trajectory stream derived from (seed, index). The latent is drawn from
// it first, the Euler-Maruyama increments afterwards.
std::mt19937_64 trajectory_rng(std::uint64_t seed, std::uint64_t index);
Vec draw_latent(std::mt19937_64& rng, int dim, double prior_var);

// Backward Euler-Maruyama on the uniform grid t_k = t_max - k (t_max - t_min) / n_steps:
//   x <- x - dt [f(x,t) - (1+h)/2 g^2(t) s(x,t)] + sqrt(h dt) g(t) z.
// noise holds one standard normal column per step (d x n_steps).
Vec integrate_sde(const ScoreFunction& score, const Schedule& schedule, double h, const Vec& x_start,
                  const Mat& noise, Trajectory* trajectory = nullptr);

// Probability-flow ODE dx/dt = a x - g^2/2 s, integrated from t_max down to t_min.
Vec integrate_pf(const ScoreFunction& score, const Schedule& schedule, const Vec& x_start, double tol,
                 Trajectory* trajectory = nullptr);

// Throws NonFinite with the step index when a state blows up.
SampleResult sample_sde(const ScoreFunction& score, const Schedule& schedule, const SamplerConfig& config,
                        Eigen::Index n);
SampleResult sample_ode(const ScoreFunction& score, const Schedule& schedule, const SamplerConfig& config,
                        Eigen::Index n);

// Rows of (trajectory id, t, x_0 ... x_{d-1}).
void save_trajectories(const std::string& path, const std::vector<Trajectory>& trajectories,
                       const std::string& header = {});

}  // namespace wkb

#endif  // WKBLAB_SAMPLER_HPP

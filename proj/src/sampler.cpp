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

#include "wkblab/sampler.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

#include "wkblab/error.hpp"
#include "wkblab/ode.hpp"
#include "wkblab/parallel.hpp"

namespace wkb {

std::mt19937_64 trajectory_rng(std::uint64_t seed, std::uint64_t index) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
    return std::mt19937_64(seq);
}

Vec draw_latent(std::mt19937_64& rng, int dim, double prior_var) {
    std::normal_distribution<double> normal(0.0, 1.0);
    Vec x(dim);
    const double scale = std::sqrt(prior_var);
    for (int k = 0; k < dim; ++k) x[k] = scale * normal(rng);
    return x;
}

Vec integrate_sde(const ScoreFunction& score, const Schedule& schedule, double h, const Vec& x_start,
                  const Mat& noise, Trajectory* trajectory) {
    if (h < 0) throw DomainError("h must be nonnegative");
    const Eigen::Index n_steps = noise.cols();
    if (n_steps < 1) throw DomainError("Euler-Maruyama needs at least one step");
    if (noise.rows() != x_start.size() || score.dim() != x_start.size()) {
        throw SizeMismatch("sampler state, noise and score dimensions differ");
    }
    const double t_max = schedule.t_max();
    const double dt = (t_max - schedule.t_min()) / static_cast<double>(n_steps);
    Vec x = x_start;
    if (trajectory) {
        trajectory->times.assign(1, t_max);
        trajectory->states.assign(1, x);
    }
    for (Eigen::Index k = 0; k < n_steps; ++k) {
        const double t = t_max - static_cast<double>(k) * dt;
        const double g2 = schedule.g2(t);
        const Vec drift = schedule.drift_coef(t) * x - 0.5 * (1.0 + h) * g2 * score.eval(x, t);
        x -= dt * drift;
        if (h > 0) x += std::sqrt(h * dt * g2) * noise.col(k);
        if (!x.allFinite()) throw NonFinite("sampler state became non-finite at step " + std::to_string(k));
        if (trajectory) {
            trajectory->times.push_back(k + 1 == n_steps ? schedule.t_min() : t - dt);
            trajectory->states.push_back(x);
        }
    }
    return x;
}

Vec integrate_pf(const ScoreFunction& score, const Schedule& schedule, const Vec& x_start, double tol,
                 Trajectory* trajectory) {
    OdeProblem problem;
    problem.rhs = [&](double t, const Vec& x, Vec& dxdt) {
        dxdt = schedule.drift_coef(t) * x - 0.5 * schedule.g2(t) * score.eval(x, t);
    };
    problem.t0 = schedule.t_max();
    problem.t1 = schedule.t_min();
    problem.y0 = x_start;
    problem.atol = tol;
    problem.rtol = tol;
    problem.record_trace = trajectory != nullptr;
    OdeSolution sol = solve_adaptive(problem);
    if (trajectory) {
        trajectory->times.clear();
        trajectory->states.clear();
        for (auto& [t, y] : sol.dense_trace) {
            trajectory->times.push_back(t);
            trajectory->states.push_back(std::move(y));
        }
    }
    return sol.y_final;
}

namespace {

template <class Step>
SampleResult run_sampler(const Schedule& schedule, const SamplerConfig& config, Eigen::Index n, const char* name,
                         Step&& step) {
    if (n < 1) throw DomainError("sample count must be positive");
    if (!(config.prior_var > 0)) throw DomainError("prior variance must be positive");
    SampleResult result;
    result.cloud = {Mat(schedule.dim(), n), name, config.seed, 1.0};
    const Eigen::Index kept = std::min(config.record, n);
    result.trajectories.resize(static_cast<std::size_t>(kept));
    parallel_for(static_cast<std::size_t>(n), config.threads, [&](std::size_t i) {
        std::mt19937_64 rng = trajectory_rng(config.seed, i);
        const Vec latent = draw_latent(rng, schedule.dim(), config.prior_var);
        Trajectory* traj = static_cast<Eigen::Index>(i) < kept ? &result.trajectories[i] : nullptr;
        result.cloud.points.col(static_cast<Eigen::Index>(i)) = step(latent, rng, traj);
    });
    return result;
}

}  // namespace

SampleResult sample_sde(const ScoreFunction& score, const Schedule& schedule, const SamplerConfig& config,
                        Eigen::Index n) {
    if (config.h < 0) throw DomainError("h must be nonnegative");
    if (config.n_steps < 1) throw DomainError("Euler-Maruyama needs at least one step");
    return run_sampler(schedule, config, n, "sde", [&](const Vec& latent, std::mt19937_64& rng, Trajectory* traj) {
        std::normal_distribution<double> normal(0.0, 1.0);
        Mat noise(schedule.dim(), config.n_steps);
        for (Eigen::Index j = 0; j < noise.size(); ++j) noise.data()[j] = normal(rng);
        return integrate_sde(score, schedule, config.h, latent, noise, traj);
    });
}

SampleResult sample_ode(const ScoreFunction& score, const Schedule& schedule, const SamplerConfig& config,
                        Eigen::Index n) {
    return run_sampler(schedule, config, n, "pf_ode", [&](const Vec& latent, std::mt19937_64&, Trajectory* traj) {
        return integrate_pf(score, schedule, latent, config.tol, traj);
    });
}

void save_trajectories(const std::string& path, const std::vector<Trajectory>& trajectories,
                       const std::string& header) {
    std::ofstream out(path);
    if (!out) throw Error("cannot open for writing: " + path);
    out << header;
    char buf[64];
    for (std::size_t id = 0; id < trajectories.size(); ++id) {
        const Trajectory& tr = trajectories[id];
        for (std::size_t k = 0; k < tr.times.size(); ++k) {
            std::snprintf(buf, sizeof buf, "%.17g", tr.times[k]);
            out << id << '\t' << buf;
            for (Eigen::Index r = 0; r < tr.states[k].size(); ++r) {
                std::snprintf(buf, sizeof buf, "%.17g", tr.states[k][r]);
                out << '\t' << buf;
            }
            out << '\n';
        }
    }
}

}  // namespace wkb

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

#include "wkblab/path_action.hpp"

#include "wkblab/error.hpp"

namespace wkb {

namespace {

void check_path(const DiscretePath& path, const Schedule& schedule) {
    const Eigen::Index n = path.times.size();
    if (n < 2) throw DomainError("a path needs at least two points");
    if (path.states.cols() != n) throw SizeMismatch("path times and states differ in length");
    if (path.states.rows() != schedule.dim()) throw SizeMismatch("path dimension differs from the schedule");
    for (Eigen::Index k = 1; k < n; ++k) {
        if (!(path.times[k] > path.times[k - 1])) throw DomainError("path times must be strictly increasing");
    }
}

double divergence(const ScoreFunction& score, const Vec& x, double t, double dx) {
    Vec probe = x;
    double div = 0.0;
    for (Eigen::Index k = 0; k < x.size(); ++k) {
        probe[k] = x[k] + dx;
        const double up = score.eval(probe, t)[k];
        probe[k] = x[k] - dx;
        const double down = score.eval(probe, t)[k];
        probe[k] = x[k];
        div += (up - down) / (2.0 * dx);
    }
    return div;
}

// Per-step coefficients shared by both actions.
struct StepCoefs {
    Vec drift;
    double g2;
    double drift_div;  // d a(t*)
};

StepCoefs step_coefs(const DiscretePath& path, const Schedule& schedule, Eigen::Index n) {
    const double t0 = path.times[n];
    const double t1 = path.times[n + 1];
    StepCoefs c;
    switch (path.scheme) {
        case Discretization::Ito:
            c.drift = schedule.drift(path.states.col(n), t0);
            c.g2 = schedule.g2(t0);
            c.drift_div = schedule.drift_divergence(t0);
            break;
        case Discretization::Stratonovich:
            c.drift = 0.5 * (schedule.drift(path.states.col(n), t0) + schedule.drift(path.states.col(n + 1), t1));
            c.g2 = 0.5 * (schedule.g2(t0) + schedule.g2(t1));
            c.drift_div = 0.5 * (schedule.drift_divergence(t0) + schedule.drift_divergence(t1));
            break;
        case Discretization::ReverseIto:
            c.drift = schedule.drift(path.states.col(n + 1), t1);
            c.g2 = schedule.g2(t1);
            c.drift_div = schedule.drift_divergence(t1);
            break;
    }
    if (!(c.g2 > 0)) throw DomainError("diffusion vanishes on step " + std::to_string(n) + " of the path");
    return c;
}

}  // namespace

Action forward_action(const DiscretePath& path, const Schedule& schedule) {
    check_path(path, schedule);
    Action act;
    for (Eigen::Index n = 0; n + 1 < path.times.size(); ++n) {
        const double dt = path.times[n + 1] - path.times[n];
        const StepCoefs c = step_coefs(path, schedule, n);
        const Vec velocity = (path.states.col(n + 1) - path.states.col(n)) / dt;
        act.kinetic += (velocity - c.drift).squaredNorm() / (2.0 * c.g2) * dt;
        if (path.scheme == Discretization::Stratonovich) act.jacobian += 0.5 * c.drift_div * dt;
        if (path.scheme == Discretization::ReverseIto) act.jacobian += c.drift_div * dt;
    }
    return act;
}

Action reverse_action(const DiscretePath& path, const Schedule& schedule, const ScoreFunction& score, double div_dx) {
    check_path(path, schedule);
    if (score.dim() != schedule.dim()) throw SizeMismatch("score dimension differs from the schedule");
    Action act;
    for (Eigen::Index n = 0; n + 1 < path.times.size(); ++n) {
        const double t0 = path.times[n];
        const double t1 = path.times[n + 1];
        const double dt = t1 - t0;
        const StepCoefs c = step_coefs(path, schedule, n);
        Vec s;
        double score_div = 0.0;
        switch (path.scheme) {
            case Discretization::Ito:
                s = score.eval(path.states.col(n), t0);
                score_div = schedule.g2(t0) * divergence(score, path.states.col(n), t0, div_dx);
                break;
            case Discretization::Stratonovich:
                s = 0.5 * (score.eval(path.states.col(n), t0) + score.eval(path.states.col(n + 1), t1));
                score_div = 0.5 * (schedule.g2(t0) * divergence(score, path.states.col(n), t0, div_dx) +
                                   schedule.g2(t1) * divergence(score, path.states.col(n + 1), t1, div_dx));
                break;
            case Discretization::ReverseIto:
                s = score.eval(path.states.col(n + 1), t1);
                break;
        }
        const Vec velocity = (path.states.col(n + 1) - path.states.col(n)) / dt;
        act.kinetic += (velocity - c.drift + c.g2 * s).squaredNorm() / (2.0 * c.g2) * dt;
        // div f~ = d a - g^2 div s
        if (path.scheme == Discretization::Ito) act.jacobian -= (c.drift_div - score_div) * dt;
        if (path.scheme == Discretization::Stratonovich) act.jacobian -= 0.5 * (c.drift_div - score_div) * dt;
    }
    return act;
}

}  // namespace wkb

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

#ifndef WKBLAB_PATH_ACTION_HPP
#define WKBLAB_PATH_ACTION_HPP

#include "wkblab/schedule.hpp"
#include "wkblab/score.hpp"

namespace wkb {

// Point at which the time-dependent coefficients of a step are evaluated:
// left endpoint, average of both endpoints, or right endpoint.
enum class Discretization { Ito, Stratonovich, ReverseIto };

struct DiscretePath {
    Vec times;   // strictly increasing, at least two points
    Mat states;  // d x times.size()
    Discretization scheme = Discretization::Ito;
};

struct Action {
    double kinetic = 0.0;   // sum_n L(dx_n / dt_n, x_n*) dt_n
    double jacobian = 0.0;  // scheme-dependent volume term
    double total() const { return kinetic + jacobian; }
};

// L = |xdot - f|^2 / (2 g^2); J = 0, 1/2 sum div f dt, sum div f dt for
// Ito, Stratonovich, reverse Ito, with div f = d a(t).
Action forward_action(const DiscretePath& path, const Schedule& schedule);

// L~ = |xdot - f + g^2 s|^2 / (2 g^2); J~ = 0 for reverse Ito, and
// -sum div f~ dt (Ito) or -1/2 sum div f~ dt (Stratonovich) with f~ = f - g^2 s.
// The score divergence is taken by central differences with step div_dx.
Action reverse_action(const DiscretePath& path, const Schedule& schedule, const ScoreFunction& score,
                      double div_dx = 1e-5);

}  // namespace wkb

#endif  // WKBLAB_PATH_ACTION_HPP

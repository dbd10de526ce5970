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

#ifndef WKBLAB_ODE_HPP
#define WKBLAB_ODE_HPP

#include <functional>
#include <utility>
#include <vector>

#include "wkblab/types.hpp"

namespace wkb {

// dy/dt = rhs(t, y); the callee writes into a preallocated vector.
using OdeRhs = std::function<void(double t, const Vec& y, Vec& dydt)>;

struct OdeProblem {
    OdeRhs rhs;
    double t0 = 0.0;
    double t1 = 1.0;  // may be below t0; integration follows the sign
    Vec y0;
    double atol = 1e-5;
    double rtol = 1e-5;
    long max_steps = 200000;
    bool record_trace = false;
};

struct OdeSolution {
    double t_final = 0.0;
    Vec y_final;
    long n_steps = 0;
    long n_rejected = 0;
    long n_rhs = 0;
    // Accepted step endpoints (t, y), starting with (t0, y0), when requested.
    std::vector<std::pair<double, Vec>> dense_trace;
};

// Dormand-Prince 5(4) with a PI step-size controller. The error of each
// accepted step satisfies rms(err_i / (atol + rtol * max(|y_i|, |y_new_i|))) <= 1.
// Throws NonFinite, StepUnderflow (step below 1e-14 |t1 - t0|) or MaxStepsExceeded.
OdeSolution solve_adaptive(const OdeProblem& problem);

// Classical fourth-order Runge-Kutta on a uniform grid of n_steps steps.
OdeSolution solve_fixed_rk4(const OdeRhs& rhs, double t0, double t1, const Vec& y0, long n_steps,
                            bool record_trace = false);

}  // namespace wkb

#endif  // WKBLAB_ODE_HPP

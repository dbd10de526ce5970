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

#ifndef WKBLAB_ERROR_EST_HPP
#define WKBLAB_ERROR_EST_HPP

#include <functional>

#include "wkblab/likelihood.hpp"

namespace wkb {

// Bounds on the stencil errors of grad log q and lap log q at one time.
struct LocalErr {
    Vec grad_err;
    double lap_err = 0.0;
};

struct ErrState {
    Vec err1;
    double err2 = 0.0;
};

// |stencil derivative at the loose tolerance - the same at the tight one|.
LocalErr local_err_subtraction(const StencilValues& tight, const StencilValues& loose);
// Runs the stencil at (tol, tol) and (1.1 tol, 1.1 tol).
LocalErr local_err_subtraction(const ScoreFunction& score, const Schedule& schedule, const Vec& x, double t,
                               const FdStencil& stencil, double tol, const Prior& prior = {});

// grad_err = |grad div s| dx^2 + logq_err / dx, lap_err = |lap div s| dx^2 + logq_err / dx^2.
LocalErr local_err_model(const Vec& grad_div_s, double lap_div_s, double dx, double logq_err);
LocalErr local_err_model(const ScoreFunction& score, const Vec& x, double t, const FdStencil& stencil,
                         double logq_err);

// Coefficients of the conservative error ODE at one time.
struct ErrCoefs {
    double a = 0.0;
    double g2 = 0.0;
    Mat jac_s;
    Vec grad_div_s;
};

// err1' = |a| err1 + g^2/2 |J_s| err1 + g^2/2 grad_err
// err2' = g^2/2 |grad div s| . err1 + g^2/2 lap_err
ErrState error_rate(const ErrCoefs& coefs, const LocalErr& local, const ErrState& state);

// |err1_T| . |grad log pi(x_T)| + |err2_T|
double final_error(const ErrState& state, const Vec& grad_log_prior_T);

// Integrates the error ODE alone with RK4 on n_steps uniform steps over
// [t_min, t_max], for externally supplied coefficients and local errors.
ErrState propagate_error_with(const Schedule& schedule, const std::function<ErrCoefs(double)>& coefs,
                              const std::function<LocalErr(double)>& local, long n_steps);

// The err_bound of nll_first_order; scheme None is promoted to Model.
double propagate_error(const ScoreFunction& score, const Schedule& schedule, const Vec& x0,
                       const NllOptions& options = {});

}  // namespace wkb

#endif  // WKBLAB_ERROR_EST_HPP

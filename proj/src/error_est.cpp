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

#include "wkblab/error_est.hpp"

#include <cmath>

#include "wkblab/error.hpp"
#include "wkblab/ode.hpp"

namespace wkb {

LocalErr local_err_subtraction(const StencilValues& tight, const StencilValues& loose) {
    if (tight.plus.size() != loose.plus.size()) throw SizeMismatch("stencils differ in dimension");
    return {(fd_grad(loose) - fd_grad(tight)).cwiseAbs(), std::abs(fd_lap(loose) - fd_lap(tight))};
}

LocalErr local_err_subtraction(const ScoreFunction& score, const Schedule& schedule, const Vec& x, double t,
                               const FdStencil& stencil, double tol, const Prior& prior) {
    LogqOptions o;
    o.dx = stencil.dx;
    o.prior = prior;
    o.atol = o.rtol = tol;
    const StencilValues tight = logq_stencil(score, schedule, x, t, o);
    o.atol = o.rtol = 1.1 * tol;
    const StencilValues loose = logq_stencil(score, schedule, x, t, o);
    return local_err_subtraction(tight, loose);
}

LocalErr local_err_model(const Vec& grad_div_s, double lap_div_s, double dx, double logq_err) {
    if (!(dx > 0)) throw DomainError("stencil dx must be positive");
    const double e = std::abs(logq_err);
    return {(grad_div_s.cwiseAbs() * (dx * dx)).array() + e / dx, std::abs(lap_div_s) * dx * dx + e / (dx * dx)};
}

LocalErr local_err_model(const ScoreFunction& score, const Vec& x, double t, const FdStencil& stencil,
                         double logq_err) {
    const ScoreDerivs sd = score_derivs(score, x, t, stencil.dx);
    return local_err_model(sd.grad_div, sd.lap_div, stencil.dx, logq_err);
}

ErrState error_rate(const ErrCoefs& c, const LocalErr& local, const ErrState& state) {
    const double half_g2 = 0.5 * c.g2;
    ErrState rate;
    // |grad f^PF| taken elementwise on the full Jacobian a I - (g^2/2) J
    Mat jac_f = -half_g2 * c.jac_s;
    jac_f.diagonal().array() += c.a;
    rate.err1 = jac_f.cwiseAbs() * state.err1 + half_g2 * local.grad_err;
    rate.err2 = half_g2 * c.grad_div_s.cwiseAbs().dot(state.err1) + half_g2 * local.lap_err;
    return rate;
}

double final_error(const ErrState& state, const Vec& grad_log_prior_T) {
    // err1 is a componentwise magnitude, so pair it with |grad log pi| to stay monotone
    return state.err1.cwiseAbs().dot(grad_log_prior_T.cwiseAbs()) + std::abs(state.err2);
}

ErrState propagate_error_with(const Schedule& schedule, const std::function<ErrCoefs(double)>& coefs,
                              const std::function<LocalErr(double)>& local, long n_steps) {
    const Eigen::Index d = schedule.dim();
    const OdeRhs rhs = [&](double t, const Vec& y, Vec& dydt) {
        const ErrState rate = error_rate(coefs(t), local(t), {y.head(d), y[d]});
        dydt.resize(d + 1);
        dydt.head(d) = rate.err1;
        dydt[d] = rate.err2;
    };
    const OdeSolution sol = solve_fixed_rk4(rhs, schedule.t_min(), schedule.t_max(), Vec::Zero(d + 1), n_steps);
    return {sol.y_final.head(d), sol.y_final[d]};
}

double propagate_error(const ScoreFunction& score, const Schedule& schedule, const Vec& x0,
                       const NllOptions& options) {
    NllOptions o = options;
    if (o.scheme == ErrorScheme::None) o.scheme = ErrorScheme::Model;
    return nll_first_order(score, schedule, x0, o).err_bound;
}

}  // namespace wkb

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

#include "wkblab/likelihood.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>

#include "wkblab/error.hpp"
#include "wkblab/error_est.hpp"
#include "wkblab/ode.hpp"
#include "wkblab/parallel.hpp"

namespace wkb {

double Prior::logpdf(const Vec& x) const {
    const double d = static_cast<double>(x.size());
    return -0.5 * d * std::log(2.0 * std::numbers::pi * var) - 0.5 * x.squaredNorm() / var;
}

double prior_logpdf(const Vec& x) { return Prior{}.logpdf(x); }
Vec prior_grad(const Vec& x) { return -x; }

StencilValues sample_stencil(const ScalarField& field, const Vec& x, double dx) {
    if (!(dx > 0)) throw DomainError("stencil dx must be positive");
    StencilValues v{field(x), Vec(x.size()), Vec(x.size()), dx};
    Vec probe = x;
    for (Eigen::Index k = 0; k < x.size(); ++k) {
        probe[k] = x[k] + dx;
        v.plus[k] = field(probe);
        probe[k] = x[k] - dx;
        v.minus[k] = field(probe);
        probe[k] = x[k];
    }
    return v;
}

Vec fd_grad(const StencilValues& v) { return (v.plus - v.minus) / (2.0 * v.dx); }

double fd_lap(const StencilValues& v) {
    const double d = static_cast<double>(v.plus.size());
    return (v.plus.sum() + v.minus.sum() - 2.0 * d * v.center) / (v.dx * v.dx);
}

Vec fd_grad(const ScalarField& field, const Vec& x, double dx) { return fd_grad(sample_stencil(field, x, dx)); }
double fd_lap(const ScalarField& field, const Vec& x, double dx) { return fd_lap(sample_stencil(field, x, dx)); }

double score_divergence(const ScoreFunction& score, const Vec& x, double t, double dx) {
    const Eigen::Index d = x.size();
    Mat xs(d, 2 * d);
    for (Eigen::Index k = 0; k < d; ++k) {
        xs.col(2 * k) = x;
        xs(k, 2 * k) += dx;
        xs.col(2 * k + 1) = x;
        xs(k, 2 * k + 1) -= dx;
    }
    const Mat s = score.eval_batch(xs, t);
    double div = 0.0;
    for (Eigen::Index k = 0; k < d; ++k) div += s(k, 2 * k) - s(k, 2 * k + 1);
    return div / (2.0 * dx);
}

ScoreDerivs score_derivs(const ScoreFunction& score, const Vec& x, double t, double dx) {
    if (!(dx > 0)) throw DomainError("stencil dx must be positive");
    const Eigen::Index d = x.size();
    // Columns: center, x +- dx e_k, then x + sj dx e_j + sk dx e_k.
    const Eigen::Index n_cols = 1 + 2 * d + 4 * d * d;
    Mat xs = x.replicate(1, n_cols);
    const auto axis = [&](Eigen::Index k, int sign) { return 1 + 2 * k + (sign > 0 ? 0 : 1); };
    const auto corner = [&](Eigen::Index j, int sj, Eigen::Index k, int sk) {
        return 1 + 2 * d + ((2 * j + (sj > 0 ? 0 : 1)) * d + k) * 2 + (sk > 0 ? 0 : 1);
    };
    for (Eigen::Index k = 0; k < d; ++k) {
        xs(k, axis(k, 1)) += dx;
        xs(k, axis(k, -1)) -= dx;
    }
    for (Eigen::Index j = 0; j < d; ++j) {
        for (int sj : {1, -1}) {
            for (Eigen::Index k = 0; k < d; ++k) {
                for (int sk : {1, -1}) {
                    const Eigen::Index c = corner(j, sj, k, sk);
                    xs(j, c) += sj * dx;
                    xs(k, c) += sk * dx;
                }
            }
        }
    }
    const Mat s = score.eval_batch(xs, t);

    ScoreDerivs out;
    out.s = s.col(0);
    out.jac.resize(d, d);
    for (Eigen::Index k = 0; k < d; ++k) out.jac.col(k) = (s.col(axis(k, 1)) - s.col(axis(k, -1))) / (2.0 * dx);
    out.div = out.jac.trace();
    out.grad_div.resize(d);
    out.lap_div = 0.0;
    for (Eigen::Index j = 0; j < d; ++j) {
        double div_shift[2] = {0.0, 0.0};
        for (int side = 0; side < 2; ++side) {
            const int sj = side == 0 ? 1 : -1;
            for (Eigen::Index k = 0; k < d; ++k) {
                div_shift[side] += s(k, corner(j, sj, k, 1)) - s(k, corner(j, sj, k, -1));
            }
            div_shift[side] /= 2.0 * dx;
        }
        out.grad_div[j] = (div_shift[0] - div_shift[1]) / (2.0 * dx);
        out.lap_div += (div_shift[0] + div_shift[1] - 2.0 * out.div) / (dx * dx);
    }
    return out;
}

namespace {

void check_start(const Schedule& schedule, double t) {
    const double slack = 1e-12;
    if (!(t >= schedule.t_min() - slack && t <= schedule.t_max() + slack)) {
        throw DomainError("start time " + std::to_string(t) + " outside [t_min, t_max]");
    }
}

}  // namespace

LogqResult logq_pf_full(const ScoreFunction& score, const Schedule& schedule, const Vec& x, double t_start,
                        const LogqOptions& options) {
    check_start(schedule, t_start);
    const Eigen::Index d = x.size();
    if (score.dim() != d || schedule.dim() != d) throw SizeMismatch("logq state, score and schedule dimensions differ");
    const double dx = options.dx;
    if (!(dx > 0)) throw DomainError("stencil dx must be positive");

    OdeProblem problem;
    problem.rhs = [&](double t, const Vec& y, Vec& dydt) {
        Mat xs = y.head(d).replicate(1, 2 * d + 1);
        for (Eigen::Index k = 0; k < d; ++k) {
            xs(k, 1 + 2 * k) += dx;
            xs(k, 2 + 2 * k) -= dx;
        }
        const Mat s = score.eval_batch(xs, t);
        double div = 0.0;
        for (Eigen::Index k = 0; k < d; ++k) div += s(k, 1 + 2 * k) - s(k, 2 + 2 * k);
        div /= 2.0 * dx;
        const double a = schedule.drift_coef(t);
        const double g2 = schedule.g2(t);
        dydt.resize(d + 1);
        dydt.head(d) = a * y.head(d) - 0.5 * g2 * s.col(0);
        dydt[d] = static_cast<double>(d) * a - 0.5 * g2 * div;
    };
    problem.t0 = t_start;
    problem.t1 = schedule.t_max();
    problem.y0 = Vec::Zero(d + 1);
    problem.y0.head(d) = x;
    problem.atol = options.atol;
    problem.rtol = options.rtol;
    problem.max_steps = options.max_steps;
    const OdeSolution sol = solve_adaptive(problem);

    LogqResult out;
    out.x_T = sol.y_final.head(d);
    out.value = options.prior.logpdf(out.x_T) + sol.y_final[d];
    out.n_rhs = sol.n_rhs;
    return out;
}

double logq_pf(const ScoreFunction& score, const Schedule& schedule, const Vec& x, double t_start,
               const LogqOptions& options) {
    return logq_pf_full(score, schedule, x, t_start, options).value;
}

StencilValues logq_stencil(const ScoreFunction& score, const Schedule& schedule, const Vec& x, double t,
                           const LogqOptions& options) {
    return sample_stencil([&](const Vec& p) { return logq_pf(score, schedule, p, t, options); }, x, options.dx);
}

namespace {

LogqOptions inner_options(double dx, double tol, const Prior& prior) {
    LogqOptions o;
    o.atol = tol;
    o.rtol = tol;
    o.dx = dx;
    o.prior = prior;
    return o;
}

}  // namespace

Vec fd_grad_logq(const ScoreFunction& score, const Schedule& schedule, const Vec& x, double t,
                 const FdStencil& stencil, double tol, const Prior& prior) {
    return fd_grad(logq_stencil(score, schedule, x, t, inner_options(stencil.dx, tol, prior)));
}

double fd_lap_logq(const ScoreFunction& score, const Schedule& schedule, const Vec& x, double t,
                   const FdStencil& stencil, double tol, const Prior& prior) {
    return fd_lap(logq_stencil(score, schedule, x, t, inner_options(stencil.dx, tol, prior)));
}

std::string to_string(ErrorScheme scheme) {
    switch (scheme) {
        case ErrorScheme::None: return "none";
        case ErrorScheme::Model: return "model";
        case ErrorScheme::Subtraction: return "subtraction";
    }
    return "?";
}

ErrorScheme parse_error_scheme(const std::string& name) {
    if (name == "none") return ErrorScheme::None;
    if (name == "model") return ErrorScheme::Model;
    if (name == "subtraction") return ErrorScheme::Subtraction;
    throw DomainError("unknown error scheme: " + name);
}

NllReport nll_first_order(const ScoreFunction& score, const Schedule& schedule, const Vec& x0,
                          const NllOptions& options) {
    const Eigen::Index d = x0.size();
    if (score.dim() != d || schedule.dim() != d) throw SizeMismatch("nll state, score and schedule dimensions differ");
    const double dx = options.stencil.dx;
    const bool with_err = options.scheme != ErrorScheme::None;
    const LogqOptions tight = inner_options(dx, options.tol_inner, options.prior);
    const LogqOptions loose = inner_options(dx, 1.1 * options.tol_inner, options.prior);
    const Eigen::Index n_state = with_err ? 3 * d + 2 : 2 * d + 1;

    // Layout: x | delta x | delta log q | err1 | err2
    const OdeRhs rhs = [&](double t, const Vec& y, Vec& dydt) {
        const Vec x = y.head(d);
        const Vec dxv = y.segment(d, d);
        const ScoreDerivs sd = score_derivs(score, x, t, dx);
        StencilValues st;
        StencilValues st_loose;
        double logq_err = 0.0;
        try {
            st = logq_stencil(score, schedule, x, t, tight);
            if (options.scheme == ErrorScheme::Model) {
                logq_err = std::abs(logq_pf(score, schedule, x, t, loose) - st.center);
            } else if (options.scheme == ErrorScheme::Subtraction) {
                st_loose = logq_stencil(score, schedule, x, t, loose);
            }
        } catch (const Error& e) {
            throw Error("inner solve failed at outer t = " + std::to_string(t) + ": " + e.what());
        }
        const Vec grad = fd_grad(st);
        const double lap = fd_lap(st);
        const double a = schedule.drift_coef(t);
        const double g2 = schedule.g2(t);

        dydt.resize(n_state);
        dydt.head(d) = a * x - 0.5 * g2 * sd.s;
        dydt.segment(d, d) = a * dxv - 0.5 * g2 * (sd.jac * dxv) - 0.5 * g2 * (sd.s - grad);
        dydt[2 * d] = -0.5 * g2 * (dxv.dot(sd.grad_div) + sd.div - lap);
        if (!dydt.segment(d, d + 1).allFinite()) {
            throw NonFinite("first-order sensitivity became non-finite at outer t = " + std::to_string(t));
        }
        if (with_err) {
            const LocalErr local = options.scheme == ErrorScheme::Model
                                       ? local_err_model(sd.grad_div, sd.lap_div, dx, logq_err)
                                       : local_err_subtraction(st, st_loose);
            const ErrState state{y.segment(2 * d + 1, d), y[3 * d + 1]};
            const ErrState rate = error_rate({a, g2, sd.jac, sd.grad_div}, local, state);
            dydt.segment(2 * d + 1, d) = rate.err1;
            dydt[3 * d + 1] = rate.err2;
        }
    };

    Vec y0 = Vec::Zero(n_state);
    y0.head(d) = x0;
    OdeSolution sol;
    if (options.adaptive_outer) {
        OdeProblem problem;
        problem.rhs = rhs;
        problem.t0 = schedule.t_min();
        problem.t1 = schedule.t_max();
        problem.y0 = y0;
        problem.atol = options.tol_outer;
        problem.rtol = options.tol_outer;
        sol = solve_adaptive(problem);
    } else {
        sol = solve_fixed_rk4(rhs, schedule.t_min(), schedule.t_max(), y0, options.fixed_outer_steps);
    }

    NllReport r;
    r.log_q0 = logq_pf(score, schedule, x0, schedule.t_min(), tight);
    r.x_T = sol.y_final.head(d);
    r.delta_x_T = sol.y_final.segment(d, d);
    const Vec grad_prior = options.prior.grad(r.x_T);
    r.correction1 = r.delta_x_T.dot(grad_prior) + sol.y_final[2 * d];
    r.outer_rhs = sol.n_rhs;
    if (with_err) {
        r.err1_T = sol.y_final.segment(2 * d + 1, d);
        r.err2_T = sol.y_final[3 * d + 1];
        r.err_bound = final_error({r.err1_T, r.err2_T}, grad_prior);
    } else {
        r.err1_T = Vec::Zero(d);
    }
    return r;
}

MeanStderr mean_stderr(const std::vector<double>& values) {
    MeanStderr m;
    const std::size_t n = values.size();
    if (n == 0) return {std::nan(""), std::nan("")};
    for (double v : values) m.mean += v;
    m.mean /= static_cast<double>(n);
    if (n > 1) {
        double ss = 0.0;
        for (double v : values) ss += (v - m.mean) * (v - m.mean);
        m.stderr_ = std::sqrt(ss / static_cast<double>(n - 1) / static_cast<double>(n));
    }
    return m;
}

NllDatasetReport nll_dataset(const ScoreFunction& score, const Schedule& schedule, const PointCloud& cloud,
                             const NllOptions& options, int threads) {
    NllDatasetReport out;
    out.points.resize(static_cast<std::size_t>(cloud.size()));
    parallel_for(out.points.size(), threads, [&](std::size_t i) {
        NllPointResult& p = out.points[i];
        try {
            p.report = nll_first_order(score, schedule, cloud.points.col(static_cast<Eigen::Index>(i)), options);
            p.ok = true;
            p.status = "ok";
        } catch (const std::exception& e) {
            p.ok = false;
            p.status = e.what();
        }
    });
    std::vector<double> nll, corr, err;
    for (const auto& p : out.points) {
        if (!p.ok) {
            ++out.n_failed;
            continue;
        }
        nll.push_back(-p.report.log_q0);
        corr.push_back(p.report.correction1);
        err.push_back(p.report.err_bound);
    }
    out.nll = mean_stderr(nll);
    out.correction1 = mean_stderr(corr);
    out.err_bound = mean_stderr(err);
    return out;
}

void write_nll_table(const std::string& path, const NllDatasetReport& report, const std::string& header) {
    std::ofstream out(path);
    if (!out) throw Error("cannot open for writing: " + path);
    out << header << "id\tlog_q0\tcorrection1\terr_bound\tstatus\n";
    char buf[256];
    for (std::size_t i = 0; i < report.points.size(); ++i) {
        const auto& p = report.points[i];
        if (p.ok) {
            std::snprintf(buf, sizeof buf, "%zu\t%.17g\t%.17g\t%.17g\tok\n", i, p.report.log_q0, p.report.correction1,
                          p.report.err_bound);
            out << buf;
        } else {
            std::string status = p.status;
            for (char& c : status) {
                if (c == '\t' || c == '\n') c = ' ';
            }
            out << i << "\tnan\tnan\tnan\tfailed: " << status << '\n';
        }
    }
    out << "# NLL\t1st-corr\terrors\tfailed\n";
    std::snprintf(buf, sizeof buf, "# %.6f+-%.6f\t%.6f+-%.6f\t%.6f+-%.6f\t%ld\n", report.nll.mean, report.nll.stderr_,
                  report.correction1.mean, report.correction1.stderr_, report.err_bound.mean,
                  report.err_bound.stderr_, report.n_failed);
    out << buf;
}

}  // namespace wkb

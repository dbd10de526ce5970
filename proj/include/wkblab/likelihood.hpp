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

#ifndef WKBLAB_LIKELIHOOD_HPP
#define WKBLAB_LIKELIHOOD_HPP

#include <functional>
#include <string>
#include <vector>

#include "wkblab/data.hpp"
#include "wkblab/schedule.hpp"
#include "wkblab/score.hpp"

namespace wkb {

// Isotropic Gaussian prior pi = N(0, var I) at t_max; var = 1 is the standard normal.
struct Prior {
    double var = 1.0;
    double logpdf(const Vec& x) const;
    Vec grad(const Vec& x) const { return -x / var; }
};

double prior_logpdf(const Vec& x);
Vec prior_grad(const Vec& x);

struct FdStencil {
    double dx = 0.01;
};

// Values of a scalar field at the center and at x +- dx e_k.
struct StencilValues {
    double center = 0.0;
    Vec plus;
    Vec minus;
    double dx = 0.01;
};

using ScalarField = std::function<double(const Vec&)>;

StencilValues sample_stencil(const ScalarField& field, const Vec& x, double dx);
// [l(x + dx e_k) - l(x - dx e_k)] / (2 dx)
Vec fd_grad(const StencilValues& values);
// sum_k [l(x + dx e_k) + l(x - dx e_k)] - 2 d l(x), over dx^2
double fd_lap(const StencilValues& values);

Vec fd_grad(const ScalarField& field, const Vec& x, double dx);
double fd_lap(const ScalarField& field, const Vec& x, double dx);

// Central-difference divergence of the score.
double score_divergence(const ScoreFunction& score, const Vec& x, double t, double dx);

// Stencil derivatives of the score at one point, all from a single batched evaluation.
struct ScoreDerivs {
    Vec s;
    Mat jac;       // jac(i, k) = d s_i / d x_k
    double div = 0.0;
    Vec grad_div;  // grad (div s)
    double lap_div = 0.0;
};
ScoreDerivs score_derivs(const ScoreFunction& score, const Vec& x, double t, double dx);

struct LogqOptions {
    double atol = 1e-5;
    double rtol = 1e-5;
    double dx = 0.01;
    Prior prior;
    long max_steps = 200000;
};

struct LogqResult {
    double value = 0.0;
    Vec x_T;
    long n_rhs = 0;
};

// Integrates x' = a x - g^2/2 s together with l' = d a - g^2/2 div s from
// t_start to t_max and returns log pi(x_T) + l.
LogqResult logq_pf_full(const ScoreFunction& score, const Schedule& schedule, const Vec& x, double t_start,
                        const LogqOptions& options = {});
double logq_pf(const ScoreFunction& score, const Schedule& schedule, const Vec& x, double t_start,
               const LogqOptions& options = {});

// 2d + 1 inner solves at time t on the stencil around x.
StencilValues logq_stencil(const ScoreFunction& score, const Schedule& schedule, const Vec& x, double t,
                           const LogqOptions& options);
Vec fd_grad_logq(const ScoreFunction& score, const Schedule& schedule, const Vec& x, double t,
                 const FdStencil& stencil, double tol, const Prior& prior = {});
double fd_lap_logq(const ScoreFunction& score, const Schedule& schedule, const Vec& x, double t,
                   const FdStencil& stencil, double tol, const Prior& prior = {});

enum class ErrorScheme { None, Model, Subtraction };
std::string to_string(ErrorScheme scheme);
ErrorScheme parse_error_scheme(const std::string& name);

struct NllOptions {
    FdStencil stencil;
    double tol_outer = 1e-5;
    double tol_inner = 1e-5;
    bool adaptive_outer = true;
    long fixed_outer_steps = 100;  // used when adaptive_outer is false
    ErrorScheme scheme = ErrorScheme::Model;
    Prior prior;
};

struct NllReport {
    double log_q0 = 0.0;
    double correction1 = 0.0;
    double err_bound = 0.0;
    Vec x_T;
    Vec delta_x_T;
    Vec err1_T;
    double err2_T = 0.0;
    long outer_rhs = 0;
};

// First-order expansion of log q^h_{t_min}(x0) in h: integrates (x, dx, dlogq)
// and, unless scheme is None, the conservative error state from t_min to t_max.
NllReport nll_first_order(const ScoreFunction& score, const Schedule& schedule, const Vec& x0,
                          const NllOptions& options = {});

struct NllPointResult {
    NllReport report;
    bool ok = false;
    std::string status;  // "ok" or the failure message
};

struct MeanStderr {
    double mean = 0.0;
    double stderr_ = 0.0;
};
MeanStderr mean_stderr(const std::vector<double>& values);

struct NllDatasetReport {
    std::vector<NllPointResult> points;
    long n_failed = 0;
    MeanStderr nll;  // of -log_q0
    MeanStderr correction1;
    MeanStderr err_bound;
};

// Failed points are recorded and excluded from the aggregates.
NllDatasetReport nll_dataset(const ScoreFunction& score, const Schedule& schedule, const PointCloud& cloud,
                             const NllOptions& options = {}, int threads = 1);

// Columns (id, log_q0, correction1, err_bound, status) and an aggregate footer.
void write_nll_table(const std::string& path, const NllDatasetReport& report, const std::string& header = {});

}  // namespace wkb

#endif  // WKBLAB_LIKELIHOOD_HPP

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

#ifndef WKBLAB_GAUSSIAN_ORACLE_HPP
#define WKBLAB_GAUSSIAN_ORACLE_HPP

#include <string>
#include <vector>

#include "wkblab/schedule.hpp"
#include "wkblab/score.hpp"
#include "wkblab/types.hpp"

namespace wkb {

// Constant-beta forward process on data N(0, v0) with the mis-scaled score
// s = -(1 + epsilon) x / v_t. Every coordinate of the d-dimensional embedding
// is an independent copy of the scalar model.
class GaussianModel {
public:
    GaussianModel(double beta, double v0, double epsilon, double T);

    double beta() const { return beta_; }
    double v0() const { return v0_; }
    double epsilon() const { return epsilon_; }
    double T() const { return T_; }

    // v_t = 1 + exp(-beta t) (v0 - 1)
    double v(double t) const;

    // Variance of the h-model marginal q^h_t, with v'_T = v_T. With
    // k = (1+h)(1+epsilon) and L = log(exp(-beta (T-t)) v_t / v_T),
    //   v'_t = v_t [exp((k-1) L) - h L expm1((k-1) L) / ((k-1) L)],
    // which stays finite as k -> 1.
    double vprime(double h, double t) const;
    // The same quantity by integrating dv'/dt = beta (k / v_t - 1) v' - h beta backward from T.
    double vprime_by_ode(double h, double t, double tol = 1e-12) const;

    // -E[log q^h_0] = 1/2 [log(2 pi v'_0) + v0 / v'_0]
    double nll(double h) const;
    // |sqrt(v0) - sqrt(v'_0)|
    double w2(double h) const;

    // |1/2 log(v_T / v'_0) - int_0^T beta/2 [k / v_t - 1 - h / v'_t] dt|
    // with the integral by adaptive Gauss-Kronrod quadrature.
    double verify_thm41(double h, double quad_tol = 1e-12) const;

    // Central differences in h at h = 0 with the given step.
    double dnll_dh_at0(double step = 1e-4) const;
    // log N(x | 0, v'_t I) and its h-derivative at h = 0.
    double log_q(const Vec& x, double h, double t = 0.0) const;
    double dlogq_dh_at0(const Vec& x, double t = 0.0, double step = 1e-4) const;

    // Pipeline pieces for the d-dimensional embedding.
    AnalyticGaussianScore score(int dim) const { return {beta_, v0_, epsilon_, dim}; }
    Schedule schedule(double t_min, int dim) const { return Schedule::const_beta(beta_, t_min, T_, dim); }
    double prior_var() const { return v(T_); }

private:
    double beta_;
    double v0_;
    double epsilon_;
    double T_;
};

struct GaussianCurveRow {
    double h;
    double nll;
    double w2;
};
std::vector<GaussianCurveRow> gaussian_curve(const GaussianModel& model, const std::vector<double>& h_values);
void write_gaussian_curve(const std::string& path, const std::vector<GaussianCurveRow>& rows,
                          const std::string& header = {});

}  // namespace wkb

#endif  // WKBLAB_GAUSSIAN_ORACLE_HPP

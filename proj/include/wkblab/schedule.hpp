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

#ifndef WKBLAB_SCHEDULE_HPP
#define WKBLAB_SCHEDULE_HPP

#include <string>

#include "wkblab/types.hpp"

namespace wkb {

// Forward SDE dx = a(t) x dt + g(t) dw with the signal/noise pair of the
// induced Gaussian kernel p(x_t | x_0) = N(alpha(t) x_0, sigma2(t) I).
//
//   Simple     a = -(beta/2) t          g^2 = beta t
//   Cosine     a = -(pi/2) tan(pi t/2)  g^2 = pi tan(pi t/2)
//   ConstBeta  a = -beta/2              g^2 = beta
//   ZeroDrift  a = 0                    g^2 = beta     (test schedule)
enum class ScheduleKind { Simple, Cosine, ConstBeta, ZeroDrift };

std::string to_string(ScheduleKind kind);
ScheduleKind parse_schedule_kind(const std::string& name);

class Schedule {
public:
    Schedule(ScheduleKind kind, double beta, double t_min, double t_max, int dim);

    static Schedule simple(double beta = 20.0, double t_min = 0.01, double t_max = 1.0, int dim = 2);
    static Schedule cosine(double t_min = 0.01, double t_max = 0.99, int dim = 2);
    static Schedule const_beta(double beta = 1.0, double t_min = 0.01, double t_max = 1.0, int dim = 2);
    static Schedule zero_drift(double g2 = 1.0, double t_min = 0.01, double t_max = 1.0, int dim = 2);

    ScheduleKind kind() const { return kind_; }
    double beta() const { return beta_; }
    double t_min() const { return t_min_; }
    double t_max() const { return t_max_; }
    int dim() const { return dim_; }

    // f(x, t) = drift_coef(t) * x. The cosine drift and diffusion reject
    // t >= 1 - 1e-9 (pole of tan); alpha and sigma2 are defined up to t_max.
    double drift_coef(double t) const;
    double g2(double t) const;
    double alpha(double t) const;
    double sigma2(double t) const;

    // div f = dim * a(t), exact for the linear drift.
    double drift_divergence(double t) const { return dim_ * drift_coef(t); }
    Vec drift(const Vec& x, double t) const { return drift_coef(t) * x; }

private:
    void check_time(double t) const;
    void check_pole(double t) const;

    ScheduleKind kind_;
    double beta_;
    double t_min_;
    double t_max_;
    int dim_;
};

}  // namespace wkb

#endif  // WKBLAB_SCHEDULE_HPP

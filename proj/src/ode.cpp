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

#include "wkblab/ode.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "wkblab/error.hpp"

namespace wkb {

namespace {

// Dormand-Prince tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784, b6 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                 e6 = 22.0 / 525, e7 = -1.0 / 40;

// PI controller constants (Hairer & Wanner, DOPRI5 defaults).
constexpr double kSafety = 0.9;
constexpr double kBeta = 0.04;
constexpr double kExpo = 0.2 - kBeta * 0.75;
constexpr double kMinShrink = 0.2;  // h_new >= 0.2 h
constexpr double kMaxGrow = 10.0;   // h_new <= 10 h
constexpr double kUnderflow = 1e-14;

void eval_rhs(const OdeRhs& rhs, double t, const Vec& y, Vec& out, long& counter) {
    rhs(t, y, out);
    ++counter;
    if (!out.allFinite()) {
        throw NonFinite("ODE right-hand side is not finite at t = " + std::to_string(t));
    }
}

double rms_norm(const Vec& v, const Vec& scale) {
    if (v.size() == 0) return 0.0;
    return std::sqrt((v.array() / scale.array()).square().mean());
}

double initial_step(const OdeProblem& p, const Vec& f0, double dir, long& counter) {
    const Vec scale = p.atol + p.rtol * p.y0.array().abs();
    const double d0 = rms_norm(p.y0, scale);
    const double d1 = rms_norm(f0, scale);
    double h0 = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
    const double span = std::abs(p.t1 - p.t0);
    h0 = std::min(h0, span);
    const Vec y1 = p.y0 + dir * h0 * f0;
    Vec f1(p.y0.size());
    eval_rhs(p.rhs, p.t0 + dir * h0, y1, f1, counter);
    const double d2 = rms_norm(f1 - f0, scale) / h0;
    const double dmax = std::max(d1, d2);
    const double h1 = dmax <= 1e-15 ? std::max(1e-6, h0 * 1e-3) : std::pow(0.01 / dmax, 0.2);
    return std::min({100.0 * h0, h1, span});
}

}  // namespace

OdeSolution solve_adaptive(const OdeProblem& p) {
    if (!(p.atol > 0.0) || !(p.rtol > 0.0)) throw DomainError("ODE tolerances must be positive");
    if (!p.y0.allFinite()) throw NonFinite("ODE initial state is not finite");
    if (!p.rhs) throw DomainError("ODE right-hand side is empty");

    OdeSolution sol;
    sol.t_final = p.t0;
    sol.y_final = p.y0;
    if (p.record_trace) sol.dense_trace.emplace_back(p.t0, p.y0);
    const double span = std::abs(p.t1 - p.t0);
    if (span == 0.0) return sol;

    const double dir = p.t1 > p.t0 ? 1.0 : -1.0;
    const Eigen::Index n = p.y0.size();
    Vec y = p.y0;
    Vec k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n), ytmp(n), ynew(n), err(n), scale(n);

    eval_rhs(p.rhs, p.t0, y, k1, sol.n_rhs);
    double h = initial_step(p, k1, dir, sol.n_rhs);
    double t = p.t0;
    double err_old = 1e-4;
    bool last_rejected = false;
    long attempts = 0;

    while ((p.t1 - t) * dir > 0.0) {
        if (++attempts > p.max_steps) {
            throw MaxStepsExceeded("ODE solver exceeded " + std::to_string(p.max_steps) + " steps at t = " +
                                   std::to_string(t));
        }
        if (h < kUnderflow * span) {
            throw StepUnderflow("ODE step size underflow at t = " + std::to_string(t));
        }
        bool last = false;
        if ((t + dir * h - p.t1) * dir >= 0.0) {
            h = std::abs(p.t1 - t);
            last = true;
        }
        const double hs = dir * h;

        ytmp = y + hs * (a21 * k1);
        eval_rhs(p.rhs, t + c2 * hs, ytmp, k2, sol.n_rhs);
        ytmp = y + hs * (a31 * k1 + a32 * k2);
        eval_rhs(p.rhs, t + c3 * hs, ytmp, k3, sol.n_rhs);
        ytmp = y + hs * (a41 * k1 + a42 * k2 + a43 * k3);
        eval_rhs(p.rhs, t + c4 * hs, ytmp, k4, sol.n_rhs);
        ytmp = y + hs * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4);
        eval_rhs(p.rhs, t + c5 * hs, ytmp, k5, sol.n_rhs);
        ytmp = y + hs * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5);
        const double t_new = last ? p.t1 : t + hs;
        eval_rhs(p.rhs, t_new, ytmp, k6, sol.n_rhs);
        ynew = y + hs * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
        eval_rhs(p.rhs, t_new, ynew, k7, sol.n_rhs);

        err = hs * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
        scale = p.atol + p.rtol * y.array().abs().max(ynew.array().abs());
        const double en = rms_norm(err, scale);

        const double fac11 = std::pow(std::max(en, 1e-300), kExpo);
        if (en <= 1.0) {
            double fac = fac11 / std::pow(err_old, kBeta) / kSafety;
            fac = std::clamp(fac, 1.0 / kMaxGrow, 1.0 / kMinShrink);
            double h_new = h / fac;
            if (last_rejected) h_new = std::min(h_new, h);
            err_old = std::max(en, 1e-4);
            t = t_new;
            y = ynew;
            k1 = k7;
            ++sol.n_steps;
            last_rejected = false;
            if (p.record_trace) sol.dense_trace.emplace_back(t, y);
            h = h_new;
        } else {
            h = h / std::min(1.0 / kMinShrink, fac11 / kSafety);
            ++sol.n_rejected;
            last_rejected = true;
        }
    }
    sol.t_final = t;
    sol.y_final = y;
    return sol;
}

OdeSolution solve_fixed_rk4(const OdeRhs& rhs, double t0, double t1, const Vec& y0, long n_steps,
                            bool record_trace) {
    if (n_steps < 1) throw DomainError("RK4 needs at least one step");
    if (!y0.allFinite()) throw NonFinite("ODE initial state is not finite");
    OdeSolution sol;
    sol.t_final = t0;
    sol.y_final = y0;
    if (record_trace) sol.dense_trace.emplace_back(t0, y0);
    if (t1 == t0) return sol;

    const Eigen::Index n = y0.size();
    const double h = (t1 - t0) / static_cast<double>(n_steps);
    Vec y = y0, k1(n), k2(n), k3(n), k4(n), ytmp(n);
    for (long i = 0; i < n_steps; ++i) {
        const double t = t0 + static_cast<double>(i) * h;
        const double t_next = i + 1 == n_steps ? t1 : t0 + static_cast<double>(i + 1) * h;
        eval_rhs(rhs, t, y, k1, sol.n_rhs);
        ytmp = y + 0.5 * h * k1;
        eval_rhs(rhs, t + 0.5 * h, ytmp, k2, sol.n_rhs);
        ytmp = y + 0.5 * h * k2;
        eval_rhs(rhs, t + 0.5 * h, ytmp, k3, sol.n_rhs);
        ytmp = y + h * k3;
        eval_rhs(rhs, t_next, ytmp, k4, sol.n_rhs);
        y += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        ++sol.n_steps;
        if (record_trace) sol.dense_trace.emplace_back(t_next, y);
    }
    sol.t_final = t1;
    sol.y_final = y;
    return sol;
}

}  // namespace wkb

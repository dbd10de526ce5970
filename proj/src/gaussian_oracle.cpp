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

#include "wkblab/gaussian_oracle.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>

#include "wkblab/error.hpp"
#include "wkblab/ode.hpp"

namespace wkb {

namespace {

// expm1(z) / z, continuous at 0.
double phi(double z) { return std::abs(z) < 1e-8 ? 1.0 + 0.5 * z : std::expm1(z) / z; }

}  // namespace

GaussianModel::GaussianModel(double beta, double v0, double epsilon, double T)
    : beta_(beta), v0_(v0), epsilon_(epsilon), T_(T) {
    if (!(beta > 0)) throw DomainError("beta must be positive");
    if (!(v0 > 0)) throw DomainError("v0 must be positive");
    if (!(T > 0)) throw DomainError("T must be positive");
    if (!std::isfinite(epsilon) || epsilon <= -1.0) throw DomainError("epsilon must exceed -1");
}

double GaussianModel::v(double t) const { return 1.0 + std::exp(-beta_ * t) * (v0_ - 1.0); }

double GaussianModel::vprime(double h, double t) const {
    if (t < 0 || t > T_) throw DomainError("t outside [0, T]");
    // exact score: q_t = p_t for every h
    if (epsilon_ == 0.0) return v(t);
    const double k = (1.0 + h) * (1.0 + epsilon_);
    const double L = -beta_ * (T_ - t) + std::log(v(t) / v(T_));
    const double z = (k - 1.0) * L;
    return v(t) * (std::exp(z) - h * L * phi(z));
}

double GaussianModel::vprime_by_ode(double h, double t, double tol) const {
    if (t < 0 || t > T_) throw DomainError("t outside [0, T]");
    const double k = (1.0 + h) * (1.0 + epsilon_);
    OdeProblem p;
    p.rhs = [&](double s, const Vec& y, Vec& dy) {
        dy.resize(1);
        dy[0] = beta_ * (k / v(s) - 1.0) * y[0] - h * beta_;
    };
    p.t0 = T_;
    p.t1 = t;
    p.y0 = Vec::Constant(1, v(T_));
    p.atol = tol;
    p.rtol = tol;
    p.max_steps = 10000000;
    return solve_adaptive(p).y_final[0];
}

double GaussianModel::nll(double h) const {
    const double vp = vprime(h, 0.0);
    if (!(vp > 0)) throw DomainError("model variance is not positive for this h");
    return 0.5 * (std::log(2.0 * std::numbers::pi * vp) + v0_ / vp);
}

double GaussianModel::w2(double h) const {
    const double vp = vprime(h, 0.0);
    if (!(vp > 0)) throw DomainError("model variance is not positive for this h");
    return std::abs(std::sqrt(v0_) - std::sqrt(vp));
}

double GaussianModel::verify_thm41(double h, double quad_tol) const {
    const double k = (1.0 + h) * (1.0 + epsilon_);
    const auto integrand = [&](double t) { return 0.5 * beta_ * (k / v(t) - 1.0 - h / vprime(h, t)); };
    double err = 0.0;
    const double rhs =
        boost::math::quadrature::gauss_kronrod<double, 61>::integrate(integrand, 0.0, T_, 20, quad_tol, &err);
    if (!std::isfinite(rhs)) throw Error("quadrature returned a non-finite value");
    const double lhs = 0.5 * std::log(v(T_) / vprime(h, 0.0));
    return std::abs(lhs - rhs);
}

double GaussianModel::dnll_dh_at0(double step) const { return (nll(step) - nll(-step)) / (2.0 * step); }

double GaussianModel::log_q(const Vec& x, double h, double t) const {
    const double vp = vprime(h, t);
    const double d = static_cast<double>(x.size());
    return -0.5 * d * std::log(2.0 * std::numbers::pi * vp) - 0.5 * x.squaredNorm() / vp;
}

double GaussianModel::dlogq_dh_at0(const Vec& x, double t, double step) const {
    return (log_q(x, step, t) - log_q(x, -step, t)) / (2.0 * step);
}

std::vector<GaussianCurveRow> gaussian_curve(const GaussianModel& model, const std::vector<double>& h_values) {
    std::vector<GaussianCurveRow> rows;
    rows.reserve(h_values.size());
    for (double h : h_values) rows.push_back({h, model.nll(h), model.w2(h)});
    return rows;
}

void write_gaussian_curve(const std::string& path, const std::vector<GaussianCurveRow>& rows,
                          const std::string& header) {
    std::ofstream out(path);
    if (!out) throw Error("cannot open for writing: " + path);
    out << header << "h\tnll\tw2\n";
    char buf[128];
    for (const auto& r : rows) {
        std::snprintf(buf, sizeof buf, "%.17g\t%.17g\t%.17g\n", r.h, r.nll, r.w2);
        out << buf;
    }
}

}  // namespace wkb

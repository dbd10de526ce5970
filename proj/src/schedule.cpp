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

#include "wkblab/schedule.hpp"

#include <cmath>
#include <numbers>

#include "wkblab/error.hpp"

namespace wkb {

namespace {

constexpr double kCosinePoleGuard = 1e-9;
constexpr double kTimeSlack = 1e-12;

}  // namespace

std::string to_string(ScheduleKind kind) {
    switch (kind) {
        case ScheduleKind::Simple: return "simple";
        case ScheduleKind::Cosine: return "cosine";
        case ScheduleKind::ConstBeta: return "const_beta";
        case ScheduleKind::ZeroDrift: return "zero_drift";
    }
    return "unknown";
}

ScheduleKind parse_schedule_kind(const std::string& name) {
    if (name == "simple") return ScheduleKind::Simple;
    if (name == "cosine") return ScheduleKind::Cosine;
    if (name == "const_beta") return ScheduleKind::ConstBeta;
    if (name == "zero_drift") return ScheduleKind::ZeroDrift;
    throw DomainError("unknown schedule kind '" + name + "'");
}

Schedule::Schedule(ScheduleKind kind, double beta, double t_min, double t_max, int dim)
    : kind_(kind), beta_(beta), t_min_(t_min), t_max_(t_max), dim_(dim) {
    if (!(beta > 0.0) || !std::isfinite(beta)) throw DomainError("schedule beta must be positive");
    if (!(t_min > 0.0 && t_min < 1.0)) throw DomainError("schedule t_min must lie in (0, 1)");
    if (!(t_max > t_min) || !std::isfinite(t_max)) throw DomainError("schedule t_max must exceed t_min");
    if (dim < 1) throw DomainError("schedule dim must be positive");
    if (kind == ScheduleKind::Cosine && t_max > 1.0) {
        throw DomainError("cosine schedule requires t_max <= 1");
    }
}

Schedule Schedule::simple(double beta, double t_min, double t_max, int dim) {
    return Schedule(ScheduleKind::Simple, beta, t_min, t_max, dim);
}

Schedule Schedule::cosine(double t_min, double t_max, int dim) {
    return Schedule(ScheduleKind::Cosine, 1.0, t_min, t_max, dim);
}

Schedule Schedule::const_beta(double beta, double t_min, double t_max, int dim) {
    return Schedule(ScheduleKind::ConstBeta, beta, t_min, t_max, dim);
}

Schedule Schedule::zero_drift(double g2, double t_min, double t_max, int dim) {
    return Schedule(ScheduleKind::ZeroDrift, g2, t_min, t_max, dim);
}

void Schedule::check_time(double t) const {
    if (!(t >= -kTimeSlack && t <= t_max_ + kTimeSlack)) {
        throw DomainError("time " + std::to_string(t) + " outside [0, t_max]");
    }
}

void Schedule::check_pole(double t) const {
    if (kind_ == ScheduleKind::Cosine && t >= 1.0 - kCosinePoleGuard) {
        throw DomainError("cosine schedule evaluated at its pole t = 1");
    }
}

double Schedule::drift_coef(double t) const {
    check_time(t);
    check_pole(t);
    using std::numbers::pi;
    switch (kind_) {
        case ScheduleKind::Simple: return -0.5 * beta_ * t;
        case ScheduleKind::Cosine: return -0.5 * pi * std::tan(0.5 * pi * t);
        case ScheduleKind::ConstBeta: return -0.5 * beta_;
        case ScheduleKind::ZeroDrift: return 0.0;
    }
    return 0.0;
}

double Schedule::g2(double t) const {
    check_time(t);
    check_pole(t);
    using std::numbers::pi;
    switch (kind_) {
        case ScheduleKind::Simple: return beta_ * t;
        case ScheduleKind::Cosine: return pi * std::tan(0.5 * pi * t);
        case ScheduleKind::ConstBeta: return beta_;
        case ScheduleKind::ZeroDrift: return beta_;
    }
    return 0.0;
}

double Schedule::alpha(double t) const {
    check_time(t);
    using std::numbers::pi;
    switch (kind_) {
        case ScheduleKind::Simple: return std::exp(-0.25 * beta_ * t * t);
        case ScheduleKind::Cosine: return std::cos(0.5 * pi * t);
        case ScheduleKind::ConstBeta: return std::exp(-0.5 * beta_ * t);
        case ScheduleKind::ZeroDrift: return 1.0;
    }
    return 1.0;
}

double Schedule::sigma2(double t) const {
    check_time(t);
    using std::numbers::pi;
    switch (kind_) {
        case ScheduleKind::Simple: return -std::expm1(-0.5 * beta_ * t * t);
        case ScheduleKind::Cosine: {
            // 1 - cos^2 written as sin^2 to keep precision near t = 0.
            const double s = std::sin(0.5 * pi * t);
            return s * s;
        }
        case ScheduleKind::ConstBeta: return -std::expm1(-beta_ * t);
        case ScheduleKind::ZeroDrift: return beta_ * t;
    }
    return 0.0;
}

}  // namespace wkb

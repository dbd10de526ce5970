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

#include <doctest.h>

#include <cmath>

#include "wkblab/error.hpp"
#include "wkblab/ode.hpp"

using namespace wkb;

namespace {

OdeProblem decay(double t1, double tol) {
    OdeProblem p;
    p.rhs = [](double, const Vec& y, Vec& dy) { dy = -y; };
    p.t0 = 0.0;
    p.t1 = t1;
    p.y0 = Vec::Ones(1);
    p.atol = tol;
    p.rtol = tol;
    return p;
}

}  // namespace

TEST_SUITE("ode") {
    TEST_CASE("constant solution is exact") {
        OdeProblem p;
        p.rhs = [](double, const Vec& y, Vec& dy) { dy = Vec::Zero(y.size()); };
        p.t0 = 0.3;
        p.t1 = 7.0;
        p.y0 = Vec::Constant(3, 2.5);
        const OdeSolution s = solve_adaptive(p);
        CHECK(s.y_final == p.y0);
        CHECK(s.t_final == 7.0);
    }

    TEST_CASE("exponential decay") {
        const OdeSolution s = solve_adaptive(decay(1.0, 1e-8));
        CHECK(std::abs(s.y_final[0] - std::exp(-1.0)) < 1e-7);
    }

    TEST_CASE("harmonic oscillator energy over one period") {
        OdeProblem p;
        p.rhs = [](double, const Vec& y, Vec& dy) {
            dy.resize(2);
            dy << y[1], -y[0];
        };
        p.t0 = 0.0;
        p.t1 = 2.0 * M_PI;
        p.y0 = Vec(2);
        p.y0 << 1.0, 0.0;
        p.atol = p.rtol = 1e-8;
        const OdeSolution s = solve_adaptive(p);
        CHECK(std::abs(s.y_final.squaredNorm() - 1.0) < 1e-6);
    }

    TEST_CASE("backward integration and reversibility") {
        OdeProblem fwd = decay(2.0, 1e-8);
        const OdeSolution a = solve_adaptive(fwd);
        OdeProblem back = fwd;
        back.t0 = 2.0;
        back.t1 = 0.0;
        back.y0 = a.y_final;
        const OdeSolution b = solve_adaptive(back);
        CHECK(std::abs(b.y_final[0] - 1.0) < 100 * 1e-8);
    }

    TEST_CASE("fixed RK4 examples and fourth order") {
        const OdeRhs one = [](double, const Vec&, Vec& dy) { dy = Vec::Ones(1); };
        for (long n : {1L, 3L, 17L}) CHECK(solve_fixed_rk4(one, 0.0, 1.0, Vec::Zero(1), n).y_final[0] == 1.0);
        CHECK(solve_fixed_rk4(one, 0.5, 0.5, Vec::Constant(1, 4.0), 10).y_final[0] == 4.0);

        const OdeRhs dec = [](double, const Vec& y, Vec& dy) { dy = -y; };
        const double e1 = std::abs(solve_fixed_rk4(dec, 0.0, 1.0, Vec::Ones(1), 20).y_final[0] - std::exp(-1.0));
        const double e2 = std::abs(solve_fixed_rk4(dec, 0.0, 1.0, Vec::Ones(1), 10).y_final[0] - std::exp(-1.0));
        CHECK(e2 / e1 == doctest::Approx(16.0).epsilon(0.1));
    }

    TEST_CASE("adaptive and fixed agree on a smooth problem") {
        OdeProblem p;
        p.rhs = [](double t, const Vec& y, Vec& dy) {
            dy.resize(2);
            dy << std::sin(t) * y[1], -0.5 * y[0];
        };
        p.t0 = 0.0;
        p.t1 = 3.0;
        p.y0 = Vec::Ones(2);
        const OdeSolution a = solve_adaptive(p);
        const OdeSolution f = solve_fixed_rk4(p.rhs, p.t0, p.t1, p.y0, 4000);
        for (int i = 0; i < 2; ++i) CHECK(std::abs(a.y_final[i] - f.y_final[i]) < 10 * (1e-5 + 1e-5 * std::abs(f.y_final[i])));
    }

    TEST_CASE("dense trace records accepted steps") {
        OdeProblem p = decay(1.0, 1e-6);
        p.record_trace = true;
        const OdeSolution s = solve_adaptive(p);
        REQUIRE(s.dense_trace.size() == static_cast<std::size_t>(s.n_steps + 1));
        CHECK(s.dense_trace.front().first == 0.0);
        CHECK(s.dense_trace.back().first == 1.0);
        for (const auto& [t, y] : s.dense_trace) CHECK(std::abs(y[0] - std::exp(-t)) < 1e-5);
    }

    TEST_CASE("failures") {
        OdeProblem p = decay(1.0, 1e-6);
        p.rhs = [](double t, const Vec& y, Vec& dy) { dy = y * (t > 0.5 ? NAN : 1.0); };
        CHECK_THROWS_AS(solve_adaptive(p), NonFinite);

        OdeProblem blow = decay(1.0, 1e-6);
        blow.rhs = [](double, const Vec& y, Vec& dy) { dy = y.array().square(); };
        blow.y0 = Vec::Constant(1, 2.0);  // y = 2 / (1 - 2t) blows up at t = 0.5
        CHECK_THROWS_AS(solve_adaptive(blow), Error);

        OdeProblem few = decay(100.0, 1e-10);
        few.max_steps = 5;
        CHECK_THROWS_AS(solve_adaptive(few), MaxStepsExceeded);
    }
}

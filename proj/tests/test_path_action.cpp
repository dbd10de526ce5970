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
#include <numbers>

#include "support.hpp"
#include "wkblab/error.hpp"
#include "wkblab/path_action.hpp"

using namespace wkb;

namespace {

class ZeroScore final : public ScoreFunction {
public:
    explicit ZeroScore(int dim) : dim_(dim) {}
    int dim() const override { return dim_; }
    Vec eval(const Vec& x, double) const override { return Vec::Zero(x.size()); }

private:
    int dim_;
};

DiscretePath random_path(int n, double t0, double t1, Discretization scheme, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    DiscretePath p{Vec::LinSpaced(n + 1, t0, t1), Mat(2, n + 1), scheme};
    for (Eigen::Index i = 0; i < p.states.size(); ++i) p.states.data()[i] = normal(rng);
    return p;
}

}  // namespace

TEST_SUITE("pathaction") {
    TEST_CASE("constant path under zero drift has zero action") {
        for (auto scheme : {Discretization::Ito, Discretization::Stratonovich, Discretization::ReverseIto}) {
            DiscretePath p{Vec::LinSpaced(11, 0.1, 0.9), Mat::Constant(2, 11, 0.7), scheme};
            CHECK(forward_action(p, Schedule::zero_drift(2.0)).total() == 0.0);
        }
    }

    TEST_CASE("one Ito step reproduces the Gaussian transition density") {
        std::mt19937_64 rng(11);
        std::uniform_real_distribution<double> u(0.0, 1.0);
        std::normal_distribution<double> n(0.0, 1.0);
        for (const Schedule& s :
             {Schedule::simple(), Schedule::cosine(), Schedule::const_beta(2.0), Schedule::zero_drift(0.5)}) {
            for (int i = 0; i < 25; ++i) {
                const double t0 = s.t_min() + 0.9 * (s.t_max() - s.t_min()) * u(rng);
                const double dt = 1e-4 + 0.05 * u(rng);
                DiscretePath p{Vec(2), Mat(2, 2), Discretization::Ito};
                p.times << t0, t0 + dt;
                p.states << n(rng), n(rng), n(rng), n(rng);
                const double var = s.g2(t0) * dt;
                const Vec mean = p.states.col(0) + s.drift(p.states.col(0), t0) * dt;
                const double log_density = wkb::testing::log_normal_iso(p.states.col(1) - mean, var);
                CHECK(std::abs(forward_action(p, s).total() + std::log(2 * std::numbers::pi * var) + log_density) <
                      1e-10);
            }
        }
    }

    TEST_CASE("Stratonovich minus Ito is the half-divergence sum") {
        for (const Schedule& s : {Schedule::const_beta(1.3), Schedule::simple()}) {
            DiscretePath ito{Vec::LinSpaced(21, 0.05, 0.95), Mat::Zero(2, 21), Discretization::Ito};
            DiscretePath strat = ito;
            strat.scheme = Discretization::Stratonovich;
            double expected = 0.0;
            for (int n = 0; n < 20; ++n) {
                const double dt = ito.times[n + 1] - ito.times[n];
                expected += 0.5 * 0.5 * (s.drift_divergence(ito.times[n]) + s.drift_divergence(ito.times[n + 1])) * dt;
            }
            CHECK(forward_action(strat, s).total() - forward_action(ito, s).total() ==
                  doctest::Approx(expected).epsilon(1e-14));
        }
        // With a constant coefficient the sum is d a (t1 - t0) / 2.
        DiscretePath p{Vec::LinSpaced(8, 0.0, 0.7), Mat::Zero(2, 8), Discretization::Stratonovich};
        CHECK(forward_action(p, Schedule::const_beta(1.0)).jacobian == doctest::Approx(0.5 * 2 * -0.5 * 0.7));
    }

    TEST_CASE("zero score reduces the reverse action to the forward one") {
        const ZeroScore zero(2);
        for (auto scheme : {Discretization::Ito, Discretization::Stratonovich, Discretization::ReverseIto}) {
            const DiscretePath p = random_path(15, 0.1, 0.9, scheme, 3);
            for (const Schedule& s : {Schedule::simple(), Schedule::const_beta()}) {
                CHECK(reverse_action(p, s, zero).kinetic == doctest::Approx(forward_action(p, s).kinetic).epsilon(1e-14));
            }
            const Schedule zd = Schedule::zero_drift(1.5);
            CHECK(reverse_action(p, zd, zero).total() == doctest::Approx(forward_action(p, zd).total()).epsilon(1e-14));
        }
    }

    TEST_CASE("reverse Ito has no volume term") {
        const GaussianModel g(1.0, 2.0, 0.0, 1.0);
        const DiscretePath p = random_path(10, 0.1, 0.9, Discretization::ReverseIto, 4);
        CHECK(reverse_action(p, Schedule::const_beta(), g.score(2)).jacobian == 0.0);
    }

    TEST_CASE("path-probability identity residual shrinks with the grid") {
        const GaussianModel g(1.0, 2.0, 0.0, 1.0);
        const double r10 = std::abs(wkb::testing::mean_path_identity_residual(g, 1, 10, 100000, 1));
        const double r40 = std::abs(wkb::testing::mean_path_identity_residual(g, 1, 40, 100000, 1));
        CHECK(r40 < r10 / 2.0);
    }

    TEST_CASE("invalid paths") {
        const Schedule s = Schedule::simple();
        DiscretePath one{Vec::Constant(1, 0.5), Mat::Zero(2, 1), Discretization::Ito};
        CHECK_THROWS_AS(forward_action(one, s), DomainError);
        DiscretePath back{Vec::LinSpaced(3, 0.5, 0.1), Mat::Zero(2, 3), Discretization::Ito};
        CHECK_THROWS_AS(forward_action(back, s), DomainError);
        DiscretePath at_zero{Vec::LinSpaced(3, 0.0, 0.2), Mat::Zero(2, 3), Discretization::Ito};
        CHECK_THROWS_AS(forward_action(at_zero, s), DomainError);  // g(0) = 0 for the simple schedule
        at_zero.scheme = Discretization::ReverseIto;
        CHECK_NOTHROW(forward_action(at_zero, s));
        DiscretePath wrong{Vec::LinSpaced(3, 0.1, 0.2), Mat::Zero(3, 3), Discretization::Ito};
        CHECK_THROWS_AS(forward_action(wrong, s), SizeMismatch);
    }
}

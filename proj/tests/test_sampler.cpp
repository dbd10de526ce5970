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
#include "wkblab/gaussian_oracle.hpp"
#include "wkblab/sampler.hpp"
#include "wkblab/train.hpp"

using namespace wkb;

namespace {

// Zero score everywhere.
class ZeroScore final : public ScoreFunction {
public:
    explicit ZeroScore(int dim) : dim_(dim) {}
    int dim() const override { return dim_; }
    Vec eval(const Vec& x, double) const override { return Vec::Zero(x.size()); }

private:
    int dim_;
};

Mat standard_noise(int dim, long n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    Mat z(dim, n);
    for (Eigen::Index i = 0; i < z.size(); ++i) z.data()[i] = normal(rng);
    return z;
}

// Sums adjacent pairs of unit increments into one coarse unit increment.
Mat coarsen(const Mat& z) {
    Mat c(z.rows(), z.cols() / 2);
    for (Eigen::Index k = 0; k < c.cols(); ++k) c.col(k) = (z.col(2 * k) + z.col(2 * k + 1)) / std::sqrt(2.0);
    return c;
}

const MlpScore& briefly_trained() {
    static const MlpScore model = [] {
        TrainConfig cfg;
        cfg.epochs = 60;
        cfg.hidden = 64;
        return train(make_swiss_roll(1024, 0.5, 0), Schedule::simple(), cfg).model;
    }();
    return model;
}

}  // namespace

TEST_SUITE("sampler") {
    TEST_CASE("h = 0 Euler-Maruyama follows the probability-flow ODE") {
        const GaussianModel g(1.0, 2.0, 0.3, 3.0);
        const Schedule s = g.schedule(0.01, 2);
        const AnalyticGaussianScore score = g.score(2);
        Vec x(2);
        x << 0.8, -1.1;
        const Vec ode = integrate_pf(score, s, x, 1e-10);
        double prev = INFINITY;
        for (long n : {250L, 500L, 1000L, 2000L}) {
            const double diff = (integrate_sde(score, s, 0.0, x, Mat::Zero(2, n)) - ode).norm();
            CHECK(diff < prev);
            prev = diff;
        }
        CHECK(prev < 1e-3);
    }

    TEST_CASE("h = 1 reverse SDE recovers the data variance") {
        const GaussianModel g(1.0, 2.0, 0.0, 3.0);
        SamplerConfig cfg;
        cfg.h = 1.0;
        cfg.n_steps = 500;
        cfg.seed = 4;
        cfg.prior_var = g.prior_var();
        const Eigen::Index n = 4000;
        const Mat out = sample_sde(g.score(1), Schedule::const_beta(1.0, 1e-4, 3.0, 1), cfg, n).cloud.points;
        const double var = out.squaredNorm() / n;
        CHECK(std::abs(var - 2.0) < 4 * 2.0 * std::sqrt(2.0 / n));
    }

    TEST_CASE("strong convergence under coupled noise") {
        const GaussianModel g(1.0, 2.0, 0.3, 3.0);
        const Schedule s = g.schedule(0.01, 2);
        const AnalyticGaussianScore score = g.score(2);
        // Endpoint errors against a 2048-step reference at 512, 256 and 128 steps.
        double err[3] = {0.0, 0.0, 0.0};
        for (int trial = 0; trial < 20; ++trial) {
            Vec x(2);
            x << 0.5, -0.3 + 0.05 * trial;
            Mat z = standard_noise(2, 2048, 100 + trial);
            const Vec ref = integrate_sde(score, s, 1.0, x, z);
            z = coarsen(coarsen(z));
            for (double& e : err) {
                e += (integrate_sde(score, s, 1.0, x, z) - ref).norm();
                z = coarsen(z);
            }
        }
        CHECK(err[0] < err[1]);
        CHECK(err[1] < err[2]);
    }

    TEST_CASE("probability-flow sampler on stationary cases") {
        SamplerConfig cfg;
        cfg.seed = 8;
        const ZeroScore zero(2);
        const Schedule zd = Schedule::zero_drift(1.0);
        const SampleResult a = sample_ode(zero, zd, cfg, 20);
        const GaussianModel stat(1.0, 1.0, 0.0, 1.0);
        const SampleResult b = sample_ode(stat.score(2), stat.schedule(0.01, 2), cfg, 20);
        for (Eigen::Index i = 0; i < 20; ++i) {
            std::mt19937_64 rng = trajectory_rng(cfg.seed, i);
            const Vec latent = draw_latent(rng, 2, 1.0);
            CHECK(a.cloud.points.col(i) == latent);
            CHECK(b.cloud.points.col(i) == latent);
        }
    }

    TEST_CASE("probability-flow sampler reproduces the data variance at epsilon = 0") {
        const GaussianModel g(1.0, 2.0, 0.0, 3.0);
        SamplerConfig cfg;
        cfg.seed = 2;
        cfg.prior_var = g.prior_var();
        const Eigen::Index n = 4000;
        const Mat out = sample_ode(g.score(1), Schedule::const_beta(1.0, 1e-4, 3.0, 1), cfg, n).cloud.points;
        const double var = out.squaredNorm() / n;
        CHECK(std::abs(var - g.vprime(0.0, 0.0)) < 4 * 2.0 * std::sqrt(2.0 / n));
    }

    TEST_CASE("trajectories and determinism") {
        const GaussianModel g(1.0, 2.0, 0.3, 3.0);
        SamplerConfig cfg;
        cfg.n_steps = 50;
        cfg.record = 3;
        cfg.seed = 1;
        const Schedule s = g.schedule(0.01, 2);
        const SampleResult r = sample_sde(g.score(2), s, cfg, 10);
        REQUIRE(r.trajectories.size() == 3);
        for (const auto& tr : r.trajectories) {
            CHECK(tr.times.size() == 51);
            CHECK(tr.states.size() == 51);
            CHECK(tr.times.front() == s.t_max());
            CHECK(tr.times.back() == s.t_min());
            for (std::size_t k = 1; k < tr.times.size(); ++k) CHECK(tr.times[k] < tr.times[k - 1]);
        }
        CHECK(r.trajectories[1].states.back() == Vec(r.cloud.points.col(1)));
        cfg.threads = 3;
        CHECK(sample_sde(g.score(2), s, cfg, 10).cloud.points == r.cloud.points);
        CHECK_THROWS_AS(integrate_sde(g.score(2), s, -0.1, Vec::Zero(2), Mat::Zero(2, 4)), DomainError);
    }

    TEST_CASE("non-finite states abort with the step index") {
        SamplerConfig cfg;
        cfg.n_steps = 100;
        class Exploding final : public ScoreFunction {
        public:
            int dim() const override { return 1; }
            Vec eval(const Vec& x, double) const override { return 1e200 * x.array().exp(); }
        } boom;
        try {
            sample_sde(boom, Schedule::const_beta(1.0, 0.01, 1.0, 1), cfg, 1);
            FAIL("expected NonFinite");
        } catch (const NonFinite& e) {
            CHECK(std::string(e.what()).find("step") != std::string::npos);
        }
    }

    TEST_CASE("trained model: h = 0 SDE and ODE agree, all h stay finite") {
        const MlpScore& m = briefly_trained();
        const Schedule s = Schedule::simple();
        for (int i = 0; i < 3; ++i) {
            std::mt19937_64 rng = trajectory_rng(5, i);
            const Vec latent = draw_latent(rng, 2, 1.0);
            const Vec ode = integrate_pf(m, s, latent, 1e-8);
            const Vec sde = integrate_sde(m, s, 0.0, latent, Mat::Zero(2, 20000));
            CHECK((ode - sde).norm() < 1e-3);
        }
        for (double h : {0.0, 0.2, 0.5, 1.0}) {
            SamplerConfig cfg;
            cfg.h = h;
            cfg.record = 5;
            const SampleResult r = sample_sde(m, s, cfg, 50);
            CHECK(r.cloud.points.allFinite());
            for (const auto& tr : r.trajectories) {
                for (const auto& x : tr.states) CHECK(x.allFinite());
            }
        }
    }
}

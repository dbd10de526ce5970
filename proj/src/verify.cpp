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

#include "wkblab/verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>

#include "wkblab/dsm.hpp"
#include "wkblab/gaussian_oracle.hpp"
#include "wkblab/likelihood.hpp"
#include "wkblab/path_action.hpp"
#include "wkblab/sampler.hpp"
#include "wkblab/wasserstein.hpp"

namespace wkb {

bool VerifyReport::all_pass() const {
    return std::all_of(rows.begin(), rows.end(), [](const VerifyRow& r) { return r.pass; });
}

std::string VerifyReport::table() const {
    std::string out = "check\tvalue\tthreshold\tpass\n";
    char buf[256];
    for (const auto& r : rows) {
        std::snprintf(buf, sizeof buf, "%s\t%.17g\t%.17g\t%s\n", r.name.c_str(), r.value, r.threshold,
                      r.pass ? "pass" : "FAIL");
        out += buf;
    }
    return out;
}

namespace {

void below(VerifyReport& rep, const std::string& name, double value, double threshold) {
    rep.rows.push_back({name, value, threshold, std::isfinite(value) && value < threshold});
}

double thm41_grid() {
    double worst = 0.0;
    for (double eps : {-0.2, 0.0, 0.3}) {
        const GaussianModel g(1.0, 2.0, eps, 3.0);
        for (double h : {0.0, 0.25, 0.5, 1.0}) worst = std::max(worst, g.verify_thm41(h));
    }
    return worst;
}

double vprime_vs_ode() {
    double worst = 0.0;
    const GaussianModel models[] = {{1.0, 2.0, 0.3, 3.0}, {2.0, 0.5, -0.2, 1.5}, {0.5, 3.0, 0.1, 4.0}};
    for (const auto& g : models) {
        for (double h : {0.0, 0.5, 1.0}) {
            for (int i = 0; i <= 4; ++i) {
                const double t = g.T() * i / 4.0;
                worst = std::max(worst, std::abs(g.vprime(h, t) - g.vprime_by_ode(h, t)));
            }
        }
    }
    return worst;
}

Vec gaussian_point(std::mt19937_64& rng, double var) {
    std::normal_distribution<double> n(0.0, std::sqrt(var));
    Vec x(2);
    x << n(rng), n(rng);
    return x;
}

double one_step_identity(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::normal_distribution<double> n(0.0, 1.0);
    double worst = 0.0;
    for (const Schedule& s : {Schedule::simple(), Schedule::cosine(), Schedule::const_beta(), Schedule::zero_drift()}) {
        for (int i = 0; i < 10; ++i) {
            const double t0 = s.t_min() + 0.8 * (s.t_max() - s.t_min()) * u(rng);
            const double dt = 1e-3 + 0.05 * u(rng);
            DiscretePath p{Vec(2), Mat(2, 2), Discretization::Ito};
            p.times << t0, t0 + dt;
            p.states << n(rng), n(rng), n(rng), n(rng);
            const double act = forward_action(p, s).total();
            const double g2 = s.g2(t0);
            const Vec mean = p.states.col(0) + s.drift(p.states.col(0), t0) * dt;
            const double logpdf = -std::log(2.0 * std::numbers::pi * g2 * dt) -
                                  (p.states.col(1) - mean).squaredNorm() / (2.0 * g2 * dt);
            worst = std::max(worst, std::abs(act + std::log(2.0 * std::numbers::pi * g2 * dt) + logpdf));
        }
    }
    return worst;
}

double dsm_gradient(std::uint64_t seed) {
    const MlpScore base(2, 16, seed);
    std::mt19937_64 rng(seed);
    Mat pts = Mat::Random(2, 32);
    const Schedule s = Schedule::simple();
    const DsmBatch batch = draw_dsm_batch(pts, s, rng);
    const Vec grad = dsm_loss_and_grad(base, batch).grad;
    std::uniform_int_distribution<Eigen::Index> pick(0, base.num_parameters() - 1);
    double worst = 0.0;
    for (int i = 0; i < 10; ++i) {
        const Eigen::Index k = pick(rng);
        MlpScore m = base;
        const double step = 1e-6;
        m.mutable_parameters()[k] += step;
        const double up = dsm_loss_and_grad(m, batch).loss;
        m.mutable_parameters()[k] -= 2 * step;
        const double down = dsm_loss_and_grad(m, batch).loss;
        const double fd = (up - down) / (2 * step);
        worst = std::max(worst, std::abs(fd - grad[k]) / std::max({std::abs(fd), std::abs(grad[k]), 1e-12}));
    }
    return worst;
}

double w2_bruteforce(std::mt19937_64& rng) {
    std::normal_distribution<double> n(0.0, 1.0);
    double worst = 0.0;
    for (int trial = 0; trial < 10; ++trial) {
        Mat a(2, 6), b(2, 6);
        for (Eigen::Index i = 0; i < a.size(); ++i) {
            a.data()[i] = n(rng);
            b.data()[i] = n(rng);
        }
        std::vector<int> perm = {0, 1, 2, 3, 4, 5};
        double best = INFINITY;
        do {
            double c = 0.0;
            for (int i = 0; i < 6; ++i) c += (a.col(i) - b.col(perm[i])).squaredNorm();
            best = std::min(best, c);
        } while (std::next_permutation(perm.begin(), perm.end()));
        worst = std::max(worst, std::abs(w2_exact(a, b).distance - std::sqrt(best / 6.0)));
    }
    return worst;
}

}  // namespace

VerifyReport run_verify(std::uint64_t seed) {
    VerifyReport rep;
    std::mt19937_64 rng(seed);

    below(rep, "thm41_residual_max", thm41_grid(), 1e-6);
    below(rep, "vprime_closed_vs_ode_max", vprime_vs_ode(), 1e-8);

    const GaussianModel g(1.0, 2.0, 0.3, 3.0);
    const GaussianModel g0(1.0, 2.0, 0.0, 3.0);
    const double t_min = 1e-4;
    const Schedule sched = g.schedule(t_min, 2);
    const AnalyticGaussianScore score = g.score(2);
    const AnalyticGaussianScore score0 = g0.score(2);
    NllOptions opts;
    opts.prior.var = g.prior_var();
    LogqOptions lopts;
    lopts.prior = opts.prior;
    double logq_worst = 0.0, corr_worst = 0.0, corr0_worst = 0.0;
    for (int i = 0; i < 3; ++i) {
        const Vec x = gaussian_point(rng, g.v0());
        logq_worst = std::max(logq_worst, std::abs(logq_pf(score, sched, x, t_min, lopts) - g.log_q(x, 0.0)));
        const double oracle = g.dlogq_dh_at0(x);
        corr_worst = std::max(corr_worst,
                              std::abs(nll_first_order(score, sched, x, opts).correction1 - oracle) / std::abs(oracle));
        corr0_worst = std::max(corr0_worst, std::abs(nll_first_order(score0, sched, x, opts).correction1));
    }
    below(rep, "logq_pf_vs_closed_form_max", logq_worst, 1e-3);
    below(rep, "correction1_rel_err_max", corr_worst, 0.05);
    below(rep, "correction1_exact_score_max", corr0_worst, 1e-4);

    below(rep, "one_step_action_identity_max", one_step_identity(rng), 1e-10);
    below(rep, "dsm_grad_rel_err_max", std::max(dsm_gradient(seed), dsm_gradient(seed + 1)), 1e-4);
    below(rep, "w2_vs_bruteforce_max", w2_bruteforce(rng), 1e-12);

    double nll_rise = 0.0, w2_rise = 0.0, flat = 0.0;
    for (int i = 1; i <= 20; ++i) {
        const double h0 = (i - 1) / 20.0, h1 = i / 20.0;
        nll_rise = std::max(nll_rise, g.nll(h1) - g.nll(h0));
        w2_rise = std::max(w2_rise, g.w2(h1) - g.w2(h0));
        flat = std::max({flat, std::abs(g0.nll(h1) - g0.nll(0.0)), g0.w2(h1)});
    }
    below(rep, "gaussian_nll_max_increase", nll_rise, 1e-15);
    below(rep, "gaussian_w2_max_increase", w2_rise, 1e-15);
    below(rep, "gaussian_eps0_flatness", flat, 1e-12);

    // Reverse SDE at h = 1 on the exact Gaussian score recovers the data variance.
    SamplerConfig sc;
    sc.h = 1.0;
    sc.n_steps = 200;
    sc.seed = seed;
    sc.prior_var = g0.prior_var();
    const Schedule s1 = g0.schedule(t_min, 1);
    const AnalyticGaussianScore score1 = g0.score(1);
    const Eigen::Index n = 2000;
    const Mat out = sample_sde(score1, s1, sc, n).cloud.points;
    const double var = out.squaredNorm() / static_cast<double>(n);
    const double se = g0.v0() * std::sqrt(2.0 / static_cast<double>(n));
    below(rep, "sde_variance_zscore", std::abs(var - g0.v0()) / se, 4.0);
    return rep;
}

}  // namespace wkb

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

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "wkblab/checkpoint.hpp"
#include "wkblab/config.hpp"
#include "wkblab/data.hpp"
#include "wkblab/error.hpp"
#include "wkblab/gaussian_oracle.hpp"
#include "wkblab/likelihood.hpp"
#include "wkblab/sampler.hpp"
#include "wkblab/train.hpp"
#include "wkblab/verify.hpp"
#include "wkblab/wasserstein.hpp"

namespace fs = std::filesystem;
using namespace wkb;

namespace {

struct Common {
    std::string config_path;
    std::string checkpoint;
    std::string out_dir = ".";
    int threads = 1;
    std::optional<std::string> tol_outer, tol_inner, dx, h, scheme, epochs;
};

RunConfig resolve(const Common& c) {
    RunConfig cfg = load_config(c.config_path);
    // Flags take precedence over the file and show up in the echo.
    if (c.tol_outer) cfg.set("nll.tol_outer", *c.tol_outer);
    if (c.tol_inner) cfg.set("nll.tol_inner", *c.tol_inner);
    if (c.dx) cfg.set("nll.dx", *c.dx);
    if (c.h) cfg.set("sample.h", *c.h);
    if (c.scheme) cfg.set("nll.scheme", *c.scheme);
    if (c.epochs) cfg.set("train.epochs", *c.epochs);
    cfg.validate();
    return cfg;
}

std::string header(const std::string& command, const RunConfig& cfg, const std::string& extra = {}) {
    return "# wkblab " + command + "\n" + cfg.echo() + extra;
}

fs::path out_file(const Common& c, const std::string& name) {
    fs::create_directories(c.out_dir);
    return fs::path(c.out_dir) / name;
}

// The schedule stored with the checkpoint is authoritative for everything
// evaluated against that model.
Schedule checkpoint_schedule(const Checkpoint& ck) {
    return Schedule(ck.meta.schedule_kind, ck.meta.beta, ck.meta.t_min, ck.meta.t_max, ck.model.dim());
}

std::string checkpoint_echo(const Common& c, const Checkpoint& ck) {
    char buf[256];
    std::snprintf(buf, sizeof buf, "# checkpoint = %s (%s, %s beta %.17g on [%.17g, %.17g], seed %llu)\n",
                  c.checkpoint.c_str(), ck.meta.dataset.c_str(), to_string(ck.meta.schedule_kind).c_str(),
                  ck.meta.beta, ck.meta.t_min, ck.meta.t_max, static_cast<unsigned long long>(ck.meta.seed));
    return buf;
}

Checkpoint require_checkpoint(const Common& c) {
    if (c.checkpoint.empty()) throw Error("--checkpoint is required");
    if (!fs::exists(c.checkpoint)) throw Error("checkpoint not found: " + c.checkpoint);
    return load_checkpoint(c.checkpoint);
}

int cmd_gen_data(const Common& c) {
    const RunConfig cfg = resolve(c);
    const PointCloud train = make_dataset(cfg.dataset_name, cfg.dataset_n, cfg.dataset_seed);
    const PointCloud val = make_dataset(cfg.dataset_name, std::max(cfg.nll_n_points, cfg.sweep_n_samples), cfg.nll_seed);
    save_cloud(out_file(c, "train.tsv"), train);
    save_cloud(out_file(c, "val.tsv"), val);
    std::cout << "wrote " << train.size() << " training and " << val.size() << " validation points to " << c.out_dir
              << "\n";
    return 0;
}

int cmd_train(const Common& c) {
    const RunConfig cfg = resolve(c);
    const PointCloud data = make_dataset(cfg.dataset_name, cfg.dataset_n, cfg.dataset_seed);
    const Schedule schedule = cfg.schedule(data.dim());
    const long report_every = std::max(1L, cfg.train_epochs / 20);
    const TrainResult res = train(data, schedule, cfg.train_config(), [&](long epoch, double loss) {
        if ((epoch + 1) % report_every == 0) std::cerr << "epoch " << epoch + 1 << " loss " << loss << "\n";
    });
    save_checkpoint(out_file(c, "model.ck"), res.model, res.meta);
    save_loss_trace(out_file(c, "loss.tsv"), res.loss_trace, header("train", cfg));
    std::cout << "wrote " << (fs::path(c.out_dir) / "model.ck").string() << "\n";
    return 0;
}

int cmd_sample(const Common& c, bool ode) {
    const RunConfig cfg = resolve(c);
    const Checkpoint ck = require_checkpoint(c);
    const Schedule schedule = checkpoint_schedule(ck);
    SamplerConfig sc;
    sc.h = cfg.sample_h;
    sc.n_steps = cfg.sample_n_steps;
    sc.seed = cfg.sample_seed;
    sc.record = cfg.sample_record;
    sc.threads = c.threads;
    sc.tol = cfg.nll_tol_inner;
    const SampleResult res =
        ode ? sample_ode(ck.model, schedule, sc, cfg.sample_n) : sample_sde(ck.model, schedule, sc, cfg.sample_n);
    save_cloud(out_file(c, "samples.tsv"), res.cloud);
    if (!res.trajectories.empty()) {
        save_trajectories(out_file(c, "trajectories.tsv"), res.trajectories,
                          header("sample", cfg, checkpoint_echo(c, ck)) + "id\tt\tx...\n");
    }
    std::cout << "wrote " << res.cloud.size() << " samples to " << c.out_dir << "\n";
    return 0;
}

int cmd_nll(const Common& c) {
    const RunConfig cfg = resolve(c);
    const Checkpoint ck = require_checkpoint(c);
    const Schedule schedule = checkpoint_schedule(ck);
    const std::string dataset = ck.meta.dataset.empty() ? cfg.dataset_name : ck.meta.dataset;
    const PointCloud val = make_dataset(dataset, cfg.nll_n_points, cfg.nll_seed);
    const NllDatasetReport rep = nll_dataset(ck.model, schedule, val, cfg.nll_options(), c.threads);
    write_nll_table(out_file(c, "nll.tsv"), rep, header("nll", cfg, checkpoint_echo(c, ck)));
    std::printf("NLL %.4f+-%.4f  1st-corr %.4f+-%.4f  errors %.4f+-%.4f  failed %ld\n", rep.nll.mean,
                rep.nll.stderr_, rep.correction1.mean, rep.correction1.stderr_, rep.err_bound.mean,
                rep.err_bound.stderr_, rep.n_failed);
    return rep.n_failed == static_cast<long>(rep.points.size()) ? 1 : 0;
}

int cmd_w2_sweep(const Common& c) {
    const RunConfig cfg = resolve(c);
    const Checkpoint ck = require_checkpoint(c);
    const Schedule schedule = checkpoint_schedule(ck);
    const std::string dataset = ck.meta.dataset.empty() ? cfg.dataset_name : ck.meta.dataset;
    std::vector<SweepRow> rows;
    for (std::size_t hi = 0; hi < cfg.sweep_h_values.size(); ++hi) {
        const double h = cfg.sweep_h_values[hi];
        std::vector<double> w2s;
        for (long trial = 0; trial < cfg.sweep_trials; ++trial) {
            SamplerConfig sc;
            sc.h = h;
            sc.n_steps = cfg.sample_n_steps;
            sc.seed = cfg.sweep_seed * 1000003ull + static_cast<std::uint64_t>(trial);
            sc.threads = c.threads;
            const PointCloud gen = sample_sde(ck.model, schedule, sc, cfg.sweep_n_samples).cloud;
            const PointCloud val =
                make_dataset(dataset, cfg.sweep_n_samples, cfg.nll_seed + 1 + static_cast<std::uint64_t>(trial));
            w2s.push_back(w2_exact(gen, val).distance);
        }
        const MeanStderr ms = mean_stderr(w2s);
        rows.push_back({h, ms.mean, ms.stderr_, static_cast<int>(cfg.sweep_trials)});
        std::printf("h %.3f  W2 %.4f+-%.4f\n", h, ms.mean, ms.stderr_);
    }
    write_sweep_table(out_file(c, "w2_sweep.tsv"), rows, header("w2-sweep", cfg, checkpoint_echo(c, ck)));
    return 0;
}

int cmd_gaussian(const Common& c) {
    const RunConfig cfg = resolve(c);
    const GaussianModel g(cfg.gaussian_beta, cfg.gaussian_v0, cfg.gaussian_epsilon, cfg.gaussian_T);
    const auto rows = gaussian_curve(g, cfg.gaussian_h_values);
    write_gaussian_curve(out_file(c, "gaussian_curve.tsv"), rows, header("gaussian", cfg));

    std::ofstream thm(out_file(c, "thm41_residuals.tsv"));
    thm << header("gaussian", cfg) << "h\tepsilon\tresidual\n";
    double worst = 0.0;
    char buf[128];
    for (double eps : {-0.2, 0.0, 0.3}) {
        const GaussianModel ge(cfg.gaussian_beta, cfg.gaussian_v0, eps, cfg.gaussian_T);
        for (double h : {0.0, 0.25, 0.5, 1.0}) {
            const double r = ge.verify_thm41(h);
            worst = std::max(worst, r);
            std::snprintf(buf, sizeof buf, "%.17g\t%.17g\t%.17g\n", h, eps, r);
            thm << buf;
        }
    }
    for (const auto& r : rows) std::printf("h %.3f  nll %.6f  w2 %.6f\n", r.h, r.nll, r.w2);
    std::printf("max identity residual %.3e\n", worst);
    return 0;
}

int cmd_verify(const Common& c) {
    const RunConfig cfg = resolve(c);
    const VerifyReport rep = run_verify(cfg.dataset_seed);
    std::ofstream out(out_file(c, "verify.tsv"));
    out << header("verify", cfg) << rep.table();
    std::cout << rep.table();
    std::cout << (rep.all_pass() ? "all checks passed\n" : "some checks FAILED\n");
    return rep.all_pass() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"wkblab: score-based diffusion likelihood laboratory"};
    app.require_subcommand(1);
    Common c;
    bool ode = false;

    const auto add_common = [&](CLI::App* sub, bool checkpoint, bool nll_flags) {
        sub->add_option("--config", c.config_path, "flat key = value config file")->check(CLI::ExistingFile);
        sub->add_option("--out", c.out_dir, "output directory");
        sub->add_option("--threads", c.threads, "worker threads")->check(CLI::Range(1, 256));
        if (checkpoint) sub->add_option("--checkpoint", c.checkpoint, "trained model checkpoint");
        if (nll_flags) {
            sub->add_option("--tol-outer", c.tol_outer, "outer solver tolerance");
            sub->add_option("--tol-inner", c.tol_inner, "inner solver tolerance");
            sub->add_option("--dx", c.dx, "finite-difference stencil step");
            sub->add_option("--scheme", c.scheme, "local error scheme")
                ->check(CLI::IsMember({"model", "subtraction", "none"}));
        }
    };

    auto* gen = app.add_subcommand("gen-data", "write training and validation point clouds");
    add_common(gen, false, false);
    auto* tr = app.add_subcommand("train", "train the score network");
    add_common(tr, false, false);
    tr->add_option("--epochs", c.epochs, "override train.epochs");
    auto* sm = app.add_subcommand("sample", "generate samples with the interpolating reverse SDE");
    add_common(sm, true, false);
    sm->set_help_flag("--help", "print this help message and exit");
    sm->add_option("--h", c.h, "noise scale h");
    sm->add_flag("--ode", ode, "use the probability-flow ODE instead");
    auto* nl = app.add_subcommand("nll", "first-order likelihood table");
    add_common(nl, true, true);
    auto* sw = app.add_subcommand("w2-sweep", "W2 of generated vs validation data over h");
    add_common(sw, true, false);
    auto* ga = app.add_subcommand("gaussian", "closed-form Gaussian curves and identity residuals");
    add_common(ga, false, false);
    auto* ve = app.add_subcommand("verify", "run the oracle suite");
    add_common(ve, false, false);

    CLI11_PARSE(app, argc, argv);
    try {
        if (gen->parsed()) return cmd_gen_data(c);
        if (tr->parsed()) return cmd_train(c);
        if (sm->parsed()) return cmd_sample(c, ode);
        if (nl->parsed()) return cmd_nll(c);
        if (sw->parsed()) return cmd_w2_sweep(c);
        if (ga->parsed()) return cmd_gaussian(c);
        if (ve->parsed()) return cmd_verify(c);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}

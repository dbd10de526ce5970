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

#ifndef WKBLAB_CONFIG_HPP
#define WKBLAB_CONFIG_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "wkblab/likelihood.hpp"
#include "wkblab/schedule.hpp"
#include "wkblab/train.hpp"

namespace wkb {

// Flat `section.key = value` run configuration. Lines starting with '#' and
// blank lines are ignored; unknown keys and out-of-range values are rejected.
struct RunConfig {
    std::string dataset_name = "swiss_roll";
    long dataset_n = 3000;
    std::uint64_t dataset_seed = 0;

    ScheduleKind schedule_kind = ScheduleKind::Simple;
    double schedule_beta = 20.0;
    double schedule_t_min = 0.01;
    std::optional<double> schedule_t_max;  // 1.0, or 0.99 for the cosine schedule

    long train_epochs = 2000;
    long train_batch = 512;
    double train_lr = 1e-3;
    std::uint64_t train_seed = 0;

    double sample_h = 1.0;
    long sample_n = 2000;
    long sample_n_steps = 1000;
    std::uint64_t sample_seed = 0;
    long sample_record = 0;

    double nll_dx = 0.01;
    double nll_tol_outer = 1e-5;
    double nll_tol_inner = 1e-5;
    long nll_n_points = 50;
    std::uint64_t nll_seed = 1;
    ErrorScheme nll_scheme = ErrorScheme::Model;
    bool nll_adaptive_outer = true;
    long nll_fixed_steps = 100;

    std::vector<double> sweep_h_values = {0.0, 0.2, 0.4, 0.6, 0.8, 1.0};
    long sweep_trials = 10;
    long sweep_n_samples = 2000;
    std::uint64_t sweep_seed = 2;

    double gaussian_beta = 1.0;
    double gaussian_v0 = 2.0;
    double gaussian_epsilon = 0.3;
    double gaussian_T = 3.0;
    std::vector<double> gaussian_h_values = {0.0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0};

    double t_max() const;
    Schedule schedule(int dim = 2) const;
    TrainConfig train_config() const;
    NllOptions nll_options() const;

    // Assigns one key; throws ConfigError on unknown keys or bad values.
    void set(const std::string& key, const std::string& value);
    // Cross-field checks (batch <= n, cosine t_max < 1, ...).
    void validate() const;
    // Every resolved key as "# key = value" lines.
    std::string echo() const;

    static std::vector<std::string> keys();
};

// Missing path gives the defaults. WKB_LAB_SEED, when set, replaces every seed
// (validation and sweep seeds become WKB_LAB_SEED + 1 and + 2).
RunConfig load_config(const std::string& path);
RunConfig parse_config(const std::string& text);
void apply_seed_override(RunConfig& config);

}  // namespace wkb

#endif  // WKBLAB_CONFIG_HPP

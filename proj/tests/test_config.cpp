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

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "support.hpp"
#include "wkblab/config.hpp"
#include "wkblab/error.hpp"

using namespace wkb;

namespace {

std::string strip_echo(const std::string& echo) {
    std::istringstream in(echo);
    std::string line, out;
    while (std::getline(in, line)) out += line.substr(2) + "\n";
    return out;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string cli() { return WKBLAB_CLI_PATH; }

int run(const std::string& args) { return std::system((cli() + " " + args + " > /dev/null 2>&1").c_str()); }

}  // namespace

TEST_SUITE("config") {
    TEST_CASE("defaults") {
        const RunConfig c = parse_config("");
        CHECK(c.schedule_t_min == 0.01);
        CHECK(c.t_max() == 1.0);
        CHECK(c.nll_dx == 0.01);
        CHECK(c.nll_scheme == ErrorScheme::Model);
        CHECK(parse_config("schedule.kind = cosine\n").t_max() == 0.99);
        CHECK(parse_config("schedule.kind = cosine\nschedule.t_max = 0.9\n").t_max() == 0.9);
        CHECK(c.nll_options().stencil.dx == 0.01);
        CHECK(c.train_config().epochs == 2000);
    }

    TEST_CASE("parsing") {
        const RunConfig c = parse_config("# comment\n\n  dataset.name = 25gaussian  \ntrain.lr=0.002\nsweep.h_values = 0, 0.5,1\n");
        CHECK(c.dataset_name == "25gaussian");
        CHECK(c.train_lr == 0.002);
        CHECK(c.sweep_h_values == std::vector<double>{0.0, 0.5, 1.0});
        CHECK_THROWS_AS(parse_config("train.lr 0.1\n"), ParseError);
        CHECK_THROWS_AS(parse_config("train.learning_rate = 0.1\n"), ConfigError);
        CHECK_THROWS_AS(parse_config("train.lr = -1\n"), ConfigError);
        CHECK_THROWS_AS(parse_config("train.epochs = many\n"), ConfigError);
        CHECK_THROWS_AS(parse_config("nll.scheme = magic\n"), ConfigError);
        CHECK_THROWS_AS(parse_config("schedule.kind = cosine\nschedule.t_max = 1.0\n"), ConfigError);
        CHECK_THROWS_AS(parse_config("schedule.t_min = 0.5\nschedule.t_max = 0.4\n"), ConfigError);
        CHECK_THROWS_AS(parse_config("dataset.n = 100\n"), ConfigError);
        CHECK_THROWS_AS(parse_config("dataset.name = moons\n"), ConfigError);
        CHECK_THROWS_AS(parse_config("sweep.n_samples = 6000\n"), ConfigError);
    }

    TEST_CASE("echo round trip") {
        const RunConfig c = parse_config("schedule.kind = cosine\nnll.scheme = subtraction\ngaussian.epsilon = -0.1\n");
        const std::string echo = c.echo();
        CHECK(echo.find("# schedule.kind = cosine") != std::string::npos);
        const RunConfig back = parse_config(strip_echo(echo));
        CHECK(back.echo() == echo);
        CHECK(RunConfig::keys().size() == static_cast<std::size_t>(std::count(echo.begin(), echo.end(), '\n')));
    }

    TEST_CASE("seed override") {
        ::setenv("WKB_LAB_SEED", "42", 1);
        const RunConfig c = parse_config("train.seed = 7\n");
        ::unsetenv("WKB_LAB_SEED");
        CHECK(c.train_seed == 42);
        CHECK(c.dataset_seed == 42);
        CHECK(c.sample_seed == 42);
        CHECK(c.nll_seed == 43);
        CHECK(c.sweep_seed == 44);
        CHECK(parse_config("train.seed = 7\n").train_seed == 7);
    }

    TEST_CASE("missing config file") {
        CHECK_THROWS_AS(load_config("/nonexistent/wkblab.cfg"), ConfigError);
        CHECK(load_config("").dataset_name == "swiss_roll");
    }
}

TEST_SUITE("cli") {
    TEST_CASE("gaussian with an exact score has a zero W2 column") {
        const std::string dir = wkb::testing::temp_path("cli_gauss");
        const std::string cfg = dir + ".cfg";
        std::ofstream(cfg) << "gaussian.epsilon = 0\n";
        REQUIRE(run("gaussian --config " + cfg + " --out " + dir) == 0);
        std::istringstream in(read_file(dir + "/gaussian_curve.tsv"));
        std::string line;
        int rows = 0;
        while (std::getline(in, line)) {
            if (line.empty() || line[0] == '#' || line[0] == 'h') continue;
            double h, nll, w2;
            std::istringstream(line) >> h >> nll >> w2;
            CHECK(w2 == 0.0);
            ++rows;
        }
        CHECK(rows == 11);
        CHECK(read_file(dir + "/gaussian_curve.tsv").find("# gaussian.epsilon = 0") != std::string::npos);
    }

    TEST_CASE("verify succeeds") {
        const std::string dir = wkb::testing::temp_path("cli_verify");
        CHECK(run("verify --out " + dir) == 0);
        CHECK(read_file(dir + "/verify.tsv").find("check\tvalue\tthreshold\tpass") != std::string::npos);
    }

    TEST_CASE("single-point nll has zero standard error") {
        const std::string dir = wkb::testing::temp_path("cli_nll");
        const std::string cfg = dir + ".cfg";
        std::ofstream(cfg) << "dataset.n = 200\ntrain.batch = 100\nnll.n_points = 1\nnll.scheme = none\n";
        REQUIRE(run("train --config " + cfg + " --epochs 3 --out " + dir) == 0);
        REQUIRE(run("nll --config " + cfg + " --checkpoint " + dir + "/model.ck --out " + dir) == 0);
        const std::string table = read_file(dir + "/nll.tsv");
        const auto pos = table.find("# NLL");
        REQUIRE(pos != std::string::npos);
        std::istringstream foot(table.substr(pos));
        std::string header_line, values;
        std::getline(foot, header_line);
        std::getline(foot, values);
        CHECK(values.find("+-0.000000\t") != std::string::npos);
        CHECK(values.substr(values.find('\t')).find("+-0.000000") != std::string::npos);
    }

    TEST_CASE("errors exit nonzero") {
        const std::string dir = wkb::testing::temp_path("cli_err");
        CHECK(run("nll --checkpoint /nonexistent.ck --out " + dir) != 0);
        const std::string cfg = dir + ".cfg";
        std::ofstream(cfg) << "train.bogus = 1\n";
        CHECK(run("gaussian --config " + cfg + " --out " + dir) != 0);
        CHECK(run("no-such-command") != 0);
    }
}

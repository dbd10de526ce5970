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
#include <filesystem>
#include <fstream>

#include "support.hpp"
#include "wkblab/data.hpp"
#include "wkblab/error.hpp"

using namespace wkb;
using wkb::testing::temp_path;

TEST_SUITE("data") {
    TEST_CASE("swiss roll is normalized and reproducible") {
        const PointCloud a = make_swiss_roll(3000, 0.5, 42);
        CHECK(a.dim() == 2);
        CHECK(a.size() == 3000);
        CHECK(std::abs(pooled_std(a.points) - 1.0) < 1e-6);
        CHECK(a.norm_constant > 1.0);
        const PointCloud b = make_swiss_roll(3000, 0.5, 42);
        CHECK(a.points == b.points);
        CHECK(make_swiss_roll(3000, 0.5, 43).points != a.points);
    }

    TEST_CASE("noiseless swiss-roll point lies on the spiral") {
        for (std::uint64_t seed : {1u, 2u, 3u}) {
            const PointCloud c = make_swiss_roll(1, 0.0, seed);
            const Vec p = c.points.col(0) * c.norm_constant;
            const double u = p.norm();
            CHECK(u >= 1.5 * M_PI);
            CHECK(u <= 4.5 * M_PI);
            CHECK(p[0] == doctest::Approx(u * std::cos(u)).epsilon(1e-10));
            CHECK(p[1] == doctest::Approx(u * std::sin(u)).epsilon(1e-10));
        }
    }

    TEST_CASE("normalization is idempotent") {
        PointCloud c = make_swiss_roll(500, 0.5, 1);
        const Mat before = c.points;
        normalize(c);
        CHECK((c.points - before).cwiseAbs().maxCoeff() < 1e-9);
    }

    TEST_CASE("25-gaussian components sit on the scaled grid") {
        const PointCloud c = make_25gaussian(2500, 7);
        CHECK(c.norm_constant == doctest::Approx(std::sqrt(8.0)));
        std::array<int, 25> counts{};
        for (Eigen::Index i = 0; i < c.size(); ++i) {
            const Vec p = c.points.col(i) * std::sqrt(8.0);
            const double gx = std::round(p[0] / 2.0) * 2.0;
            const double gy = std::round(p[1] / 2.0) * 2.0;
            CHECK(std::abs(gx) <= 4.0);
            CHECK(std::abs(gy) <= 4.0);
            CHECK(std::hypot(p[0] - gx, p[1] - gy) < 0.05 * 6);
            ++counts[static_cast<int>((gx + 4) / 2 + 5 * (gy + 4) / 2)];
        }
        for (int k : counts) CHECK(k > 50);
        CHECK(4.0 / std::sqrt(8.0) == doctest::Approx(1.41421).epsilon(1e-5));
    }

    TEST_CASE("25-gaussian pooled std and determinism") {
        const PointCloud c = make_25gaussian(25000, 3);
        CHECK(std::abs(pooled_std(c.points) - 1.0) < 0.01);
        CHECK(make_25gaussian(100, 3).points == make_25gaussian(100, 3).points);
    }

    TEST_CASE("cloud files round trip") {
        const PointCloud c = make_swiss_roll(50, 0.5, 9);
        const std::string path = temp_path("cloud.tsv");
        save_cloud(path, c);
        const PointCloud r = load_cloud(path);
        CHECK(r.points == c.points);
        CHECK(r.name == c.name);
        CHECK(r.seed == c.seed);
        CHECK(r.norm_constant == c.norm_constant);
        std::filesystem::remove(path);
    }

    TEST_CASE("malformed cloud files") {
        const std::string path = temp_path("bad.tsv");
        const auto write = [&](const std::string& text) {
            std::ofstream(path, std::ios::trunc) << text;
        };
        write("");
        CHECK_THROWS_AS(load_cloud(path), ParseError);
        write("name 1 2.0\n1\t2\n");
        CHECK_THROWS_AS(load_cloud(path), ParseError);
        write("# name 1\n1\t2\n");
        CHECK_THROWS_AS(load_cloud(path), ParseError);
        write("# swiss_roll 1 2.0\n1\t2\n3\tx\n");
        try {
            load_cloud(path);
            FAIL("expected a parse error");
        } catch (const ParseError& e) {
            CHECK(e.line() == 3);
        }
        write("# swiss_roll 1 2.0\n1\t2\n3\t4\t5\n");
        CHECK_THROWS_AS(load_cloud(path), ParseError);
        std::filesystem::remove(path);
    }
}

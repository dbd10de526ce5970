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
#include <cmath>
#include <fstream>
#include <numeric>
#include <random>

#include "support.hpp"
#include "wkblab/error.hpp"
#include "wkblab/wasserstein.hpp"

using namespace wkb;

namespace {

Mat random_cloud(Eigen::Index dim, Eigen::Index n, std::mt19937_64& rng) {
    std::normal_distribution<double> nd;
    Mat m(dim, n);
    for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = nd(rng);
    return m;
}

double brute_force_w2(const Mat& a, const Mat& b) {
    std::vector<Eigen::Index> perm(static_cast<std::size_t>(a.cols()));
    std::iota(perm.begin(), perm.end(), 0);
    double best = INFINITY;
    do {
        double s = 0.0;
        for (Eigen::Index i = 0; i < a.cols(); ++i) s += (a.col(i) - b.col(perm[static_cast<std::size_t>(i)])).squaredNorm();
        best = std::min(best, s);
    } while (std::next_permutation(perm.begin(), perm.end()));
    return std::sqrt(best / static_cast<double>(a.cols()));
}

}  // namespace

TEST_SUITE("wasserstein") {
    TEST_CASE("examples") {
        std::mt19937_64 rng(1);
        const Mat a = random_cloud(2, 30, rng);
        CHECK(w2_exact(a, a).distance == 0.0);
        CHECK(w2_exact(a, a.rowwise().reverse()).distance < 1e-14);
        Mat p = Mat::Zero(2, 1), q(2, 1);
        q << 3, 4;
        CHECK(w2_exact(p, q).distance == 5.0);
    }

    TEST_CASE("assignment is a permutation that realizes the distance") {
        std::mt19937_64 rng(2);
        const Mat a = random_cloud(2, 40, rng), b = random_cloud(2, 40, rng);
        const W2Result r = w2_exact(a, b);
        std::vector<Eigen::Index> sorted = r.assignment;
        std::sort(sorted.begin(), sorted.end());
        for (Eigen::Index i = 0; i < 40; ++i) CHECK(sorted[static_cast<std::size_t>(i)] == i);
        double s = 0.0;
        for (Eigen::Index i = 0; i < 40; ++i) s += (a.col(i) - b.col(r.assignment[static_cast<std::size_t>(i)])).squaredNorm();
        CHECK(std::sqrt(s / 40) == doctest::Approx(r.distance).epsilon(1e-14));
    }

    TEST_CASE("matches exhaustive search") {
        std::mt19937_64 rng(3);
        for (int trial = 0; trial < 20; ++trial) {
            const Mat a = random_cloud(2, 6, rng), b = random_cloud(2, 6, rng);
            CHECK(std::abs(w2_exact(a, b).distance - brute_force_w2(a, b)) < 1e-12);
        }
    }

    TEST_CASE("metric properties") {
        std::mt19937_64 rng(4);
        for (int trial = 0; trial < 10; ++trial) {
            const Mat a = random_cloud(2, 25, rng), b = random_cloud(2, 25, rng), c = random_cloud(2, 25, rng);
            const double ab = w2_exact(a, b).distance;
            CHECK(ab == doctest::Approx(w2_exact(b, a).distance).epsilon(1e-12));
            CHECK(ab <= w2_exact(a, c).distance + w2_exact(c, b).distance + 1e-9);
            Mat shuffled = a;
            std::vector<Eigen::Index> perm(25);
            std::iota(perm.begin(), perm.end(), 0);
            std::shuffle(perm.begin(), perm.end(), rng);
            for (Eigen::Index i = 0; i < 25; ++i) shuffled.col(i) = a.col(perm[static_cast<std::size_t>(i)]);
            CHECK(w2_exact(shuffled, b).distance == doctest::Approx(ab).epsilon(1e-12));
        }
    }

    TEST_CASE("size mismatches") {
        CHECK_THROWS_AS(w2_exact(Mat::Zero(2, 3), Mat::Zero(2, 4)), SizeMismatch);
        CHECK_THROWS_AS(w2_exact(Mat::Zero(2, 3), Mat::Zero(3, 3)), SizeMismatch);
    }

    TEST_CASE("one-dimensional Gaussians") {
        CHECK(w2_gaussian_1d(4.0, 1.0) == 1.0);
        CHECK(w2_gaussian_1d(2.5, 2.5) == 0.0);
        std::mt19937_64 rng(5);
        std::normal_distribution<double> nd;
        const Eigen::Index n = 5000;
        Mat a(1, n), b(1, n);
        for (Eigen::Index i = 0; i < n; ++i) {
            a(0, i) = 2.0 * nd(rng);
            b(0, i) = nd(rng);
        }
        CHECK(std::abs(w2_exact(a, b).distance - w2_gaussian_1d(4.0, 1.0)) < 0.05);
        // the sorted matching is optimal in one dimension
        std::vector<double> sa(a.data(), a.data() + n), sb(b.data(), b.data() + n);
        std::sort(sa.begin(), sa.end());
        std::sort(sb.begin(), sb.end());
        double s = 0.0;
        for (std::size_t i = 0; i < sa.size(); ++i) s += (sa[i] - sb[i]) * (sa[i] - sb[i]);
        CHECK(w2_exact(a, b).distance == doctest::Approx(std::sqrt(s / n)).epsilon(1e-10));
    }

    TEST_CASE("sweep table") {
        const std::string path = wkb::testing::temp_path("sweep.tsv");
        write_sweep_table(path, {{0.0, 0.2, 0.01, 10}, {1.0, 0.1, 0.02, 10}}, "# hdr\n");
        std::ifstream in(path);
        std::string line;
        std::getline(in, line);
        CHECK(line == "# hdr");
        std::getline(in, line);
        CHECK(line.find("h") == 0);
        int rows = 0;
        while (std::getline(in, line)) rows += !line.empty() && line[0] != '#';
        CHECK(rows == 2);
    }
}

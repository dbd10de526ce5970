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

#include "wkblab/data.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>
#include <vector>

#include "wkblab/error.hpp"

namespace wkb {

double pooled_std(const Mat& points) {
    const double count = static_cast<double>(points.size());
    if (count < 1) throw DomainError("pooled std of an empty cloud");
    const double mean = points.sum() / count;
    return std::sqrt((points.array() - mean).square().sum() / count);
}

void normalize(PointCloud& cloud) {
    const double s = pooled_std(cloud.points);
    if (!(s > 0)) throw DomainError("cannot normalize a cloud with zero spread");
    cloud.points /= s;
    cloud.norm_constant *= s;
}

PointCloud make_swiss_roll(Eigen::Index n, double noise, std::uint64_t seed) {
    if (n < 1) throw DomainError("swiss roll needs n >= 1");
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    std::normal_distribution<double> normal(0.0, 1.0);
    PointCloud cloud{Mat(2, n), "swiss_roll", seed, 1.0};
    for (Eigen::Index i = 0; i < n; ++i) {
        const double u = 1.5 * std::numbers::pi * (1.0 + 2.0 * unif(rng));
        const double e0 = normal(rng);
        const double e1 = normal(rng);
        cloud.points(0, i) = u * std::cos(u) + noise * e0;
        cloud.points(1, i) = u * std::sin(u) + noise * e1;
    }
    normalize(cloud);
    return cloud;
}

PointCloud make_25gaussian(Eigen::Index n, std::uint64_t seed) {
    if (n < 1) throw DomainError("25-gaussian needs n >= 1");
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> comp(0, 24);
    std::normal_distribution<double> normal(0.0, 1.0);
    PointCloud cloud{Mat(2, n), "25gaussian", seed, k25GaussianNorm};
    for (Eigen::Index i = 0; i < n; ++i) {
        const int k = comp(rng);
        const double mx = -4.0 + 2.0 * (k % 5);
        const double my = -4.0 + 2.0 * (k / 5);
        cloud.points(0, i) = (mx + 0.05 * normal(rng)) / k25GaussianNorm;
        cloud.points(1, i) = (my + 0.05 * normal(rng)) / k25GaussianNorm;
    }
    return cloud;
}

PointCloud make_dataset(const std::string& name, Eigen::Index n, std::uint64_t seed) {
    if (name == "swiss_roll") return make_swiss_roll(n, 0.5, seed);
    if (name == "25gaussian") return make_25gaussian(n, seed);
    throw DomainError("unknown dataset: " + name);
}

void save_cloud(const std::string& path, const PointCloud& cloud) {
    std::ofstream out(path);
    if (!out) throw Error("cannot open for writing: " + path);
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", cloud.norm_constant);
    out << "# " << cloud.name << ' ' << cloud.seed << ' ' << buf << '\n';
    for (Eigen::Index i = 0; i < cloud.size(); ++i) {
        for (int r = 0; r < cloud.dim(); ++r) {
            std::snprintf(buf, sizeof buf, "%.17g", cloud.points(r, i));
            out << (r ? "\t" : "") << buf;
        }
        out << '\n';
    }
    if (!out) throw Error("failed writing: " + path);
}

PointCloud load_cloud(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open: " + path);
    std::string line;
    if (!std::getline(in, line)) throw ParseError("empty point-cloud file", 1);

    PointCloud cloud;
    {
        std::istringstream hs(line);
        std::string hash, extra;
        if (!(hs >> hash >> cloud.name >> cloud.seed >> cloud.norm_constant) || hash != "#" ||
            !(cloud.norm_constant > 0) || (hs >> extra)) {
            throw ParseError("expected header '# name seed norm_constant'", 1);
        }
    }

    std::vector<double> values;
    int dim = 0;
    long line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const char* p = line.c_str();
        int cols = 0;
        while (true) {
            char* end = nullptr;
            const double v = std::strtod(p, &end);
            if (end == p) throw ParseError("expected a number", line_no);
            values.push_back(v);
            ++cols;
            p = end;
            if (*p == '\0') break;
            if (*p != '\t') throw ParseError("expected tab separator", line_no);
            ++p;
        }
        if (dim == 0) dim = cols;
        if (cols != dim) throw ParseError("wrong number of columns", line_no);
    }
    if (dim == 0) throw ParseError("point-cloud file has no points", line_no);
    const auto n = static_cast<Eigen::Index>(values.size() / dim);
    cloud.points = Eigen::Map<const Mat>(values.data(), dim, n);
    return cloud;
}

}  // namespace wkb

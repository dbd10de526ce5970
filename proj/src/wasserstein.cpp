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

#include "wkblab/wasserstein.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <queue>
#include <random>
#include <numeric>

#include "wkblab/error.hpp"

namespace wkb {

namespace {

using Index = Eigen::Index;

// Jonker-Volgenant: column reduction, reduction transfer, two passes of
// augmenting row reduction, then shortest augmenting paths for the rows that
// remain free. Cost is a callable (i, j) -> double.
template <class Cost>
std::vector<Index> lapjv(Index n, const Cost& cost) {
    const double inf = std::numeric_limits<double>::infinity();
    std::vector<Index> row_sol(n, -1), col_sol(n, -1), matches(n, 0), free_rows;
    std::vector<double> v(n);
    free_rows.reserve(n);

    for (Index j = n - 1; j >= 0; --j) {
        Index imin = 0;
        double lo = cost(0, j);
        for (Index i = 1; i < n; ++i) {
            const double c = cost(i, j);
            if (c < lo) {
                lo = c;
                imin = i;
            }
        }
        v[j] = lo;
        if (++matches[imin] == 1) {
            row_sol[imin] = j;
            col_sol[j] = imin;
        } else if (v[j] < v[row_sol[imin]]) {
            col_sol[row_sol[imin]] = -1;
            row_sol[imin] = j;
            col_sol[j] = imin;
        } else {
            col_sol[j] = -1;
        }
    }

    for (Index i = 0; i < n; ++i) {
        if (matches[i] == 0) {
            free_rows.push_back(i);
        } else if (matches[i] == 1 && n > 1) {
            const Index j1 = row_sol[i];
            double lo = inf;
            for (Index j = 0; j < n; ++j)
                if (j != j1) lo = std::min(lo, cost(i, j) - v[j]);
            v[j1] -= lo;
        }
    }

    // A repeated reassignment of the same row can cycle on float ties; the
    // guard hands any rows left over to the augmentation phase.
    const long guard = 16 * static_cast<long>(n) + 64;
    for (int pass = 0; pass < 2 && n > 1; ++pass) {
        std::vector<Index> next;
        next.reserve(free_rows.size());
        std::size_t k = 0;
        long steps = 0;
        while (k < free_rows.size()) {
            if (++steps > guard) {
                for (; k < free_rows.size(); ++k) next.push_back(free_rows[k]);
                break;
            }
            const Index i = free_rows[k++];
            Index j1 = 0, j2 = 0;
            double umin = cost(i, 0) - v[0], usub = inf;
            for (Index j = 1; j < n; ++j) {
                const double h = cost(i, j) - v[j];
                if (h < usub) {
                    if (h >= umin) {
                        usub = h;
                        j2 = j;
                    } else {
                        usub = umin;
                        umin = h;
                        j2 = j1;
                        j1 = j;
                    }
                }
            }
            Index i0 = col_sol[j1];
            if (umin < usub) {
                v[j1] -= usub - umin;
            } else if (i0 >= 0) {
                j1 = j2;
                i0 = col_sol[j2];
            }
            if (i0 >= 0) row_sol[i0] = -1;
            row_sol[i] = j1;
            col_sol[j1] = i;
            if (i0 >= 0) {
                if (umin < usub) free_rows[--k] = i0;
                else next.push_back(i0);
            }
        }
        free_rows.swap(next);
    }

    std::vector<double> d(n);
    std::vector<Index> pred(n), cols(n);
    for (const Index free_row : free_rows) {
        for (Index j = 0; j < n; ++j) {
            d[j] = cost(free_row, j) - v[j];
            pred[j] = free_row;
            cols[j] = j;
        }
        Index low = 0, up = 0, last = 0, end = -1;
        double lo = 0.0;
        while (end < 0) {
            if (up == low) {
                last = low - 1;
                lo = d[cols[up++]];
                for (Index k = up; k < n; ++k) {
                    const Index j = cols[k];
                    const double h = d[j];
                    if (h <= lo) {
                        if (h < lo) {
                            up = low;
                            lo = h;
                        }
                        cols[k] = cols[up];
                        cols[up++] = j;
                    }
                }
                if (!std::isfinite(lo)) throw Error("assignment cost is not finite");
                for (Index k = low; k < up; ++k) {
                    if (col_sol[cols[k]] < 0) {
                        end = cols[k];
                        break;
                    }
                }
            }
            if (end >= 0) break;
            const Index j1 = cols[low++];
            const Index i = col_sol[j1];
            const double h = cost(i, j1) - v[j1] - lo;
            for (Index k = up; k < n; ++k) {
                const Index j = cols[k];
                const double v2 = cost(i, j) - v[j] - h;
                if (v2 < d[j]) {
                    pred[j] = i;
                    if (v2 == lo) {
                        if (col_sol[j] < 0) {
                            end = j;
                            break;
                        }
                        cols[k] = cols[up];
                        cols[up++] = j;
                    }
                    d[j] = v2;
                }
            }
        }
        for (Index k = 0; k <= last; ++k) {
            const Index j1 = cols[k];
            v[j1] += d[j1] - lo;
        }
        Index i;
        do {
            i = pred[end];
            col_sol[end] = i;
            std::swap(end, row_sol[i]);
        } while (i != free_row);
    }
    return row_sol;
}

// Shortest augmenting paths with row and column potentials on a sparse
// candidate graph. Returns false when some row cannot reach a free column.
bool sparse_lap(Index n, const std::vector<std::vector<std::pair<Index, double>>>& adj, std::vector<Index>& row_sol,
                std::vector<double>& u, std::vector<double>& v) {
    const double inf = std::numeric_limits<double>::infinity();
    row_sol.assign(n, -1);
    std::vector<Index> col_sol(n, -1);
    u.assign(n, 0.0);
    v.assign(n, 0.0);
    std::vector<Index> free_rows;
    for (Index i = 0; i < n; ++i) {
        double lo = inf;
        Index best = -1;
        for (const auto& [j, c] : adj[i])
            if (c < lo) {
                lo = c;
                best = j;
            }
        if (best < 0) return false;
        u[i] = lo;
        if (col_sol[best] < 0) {
            col_sol[best] = i;
            row_sol[i] = best;
        } else {
            free_rows.push_back(i);
        }
    }

    std::vector<double> dist(n, inf);
    std::vector<Index> pred(n, -1), touched, done;
    std::vector<char> final_col(n, 0);
    using Item = std::pair<double, Index>;
    for (const Index root : free_rows) {
        std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
        for (const auto& [j, c] : adj[root]) {
            const double d = c - u[root] - v[j];
            if (d < dist[j]) {
                if (!std::isfinite(dist[j])) touched.push_back(j);
                dist[j] = d;
                pred[j] = root;
                heap.emplace(d, j);
            }
        }
        Index end = -1;
        double reach = 0.0;
        while (!heap.empty()) {
            const auto [d, j] = heap.top();
            heap.pop();
            if (final_col[j] || d > dist[j]) continue;
            final_col[j] = 1;
            done.push_back(j);
            if (col_sol[j] < 0) {
                end = j;
                reach = d;
                break;
            }
            const Index i = col_sol[j];
            for (const auto& [j2, c] : adj[i]) {
                if (final_col[j2]) continue;
                const double nd = d + c - u[i] - v[j2];
                if (nd < dist[j2]) {
                    if (!std::isfinite(dist[j2])) touched.push_back(j2);
                    dist[j2] = nd;
                    pred[j2] = i;
                    heap.emplace(nd, j2);
                }
            }
        }
        if (end < 0) return false;
        u[root] += reach;
        for (const Index j : done) {
            if (j == end) continue;
            const double shift = reach - dist[j];
            v[j] -= shift;
            u[col_sol[j]] += shift;
        }
        for (Index j = end; j >= 0;) {
            const Index i = pred[j];
            col_sol[j] = i;
            std::swap(j, row_sol[i]);
            if (i == root) break;
        }
        for (const Index j : touched) {
            dist[j] = inf;
            final_col[j] = 0;
        }
        for (const Index j : done) final_col[j] = 0;
        touched.clear();
        done.clear();
    }
    return true;
}

// Exact assignment from candidate edges: after each sparse solve the duals are
// checked against every pair; violated pairs join the graph and the solve is
// repeated. Dual feasibility on the full cost proves optimality.
using Adjacency = std::vector<std::vector<std::pair<Index, double>>>;

template <class Cost>
std::vector<Index> assignment(Index n, const Cost& cost, Adjacency adj = {}) {
    const Index k = 16;
    if (n <= 6 * k) return lapjv(n, cost);
    const bool seeded = !adj.empty();
    adj.resize(n);
    std::vector<Index> order(n);
    double scale = 0.0;
    for (Index i = 0; i < n; ++i) {
        std::iota(order.begin(), order.end(), 0);
        std::nth_element(order.begin(), order.begin() + k, order.end(),
                         [&](Index a, Index b) { return cost(i, a) < cost(i, b); });
        for (Index r = 0; r < k; ++r) adj[i].emplace_back(order[r], cost(i, order[r]));
        for (Index j = 0; j < n; ++j) scale = std::max(scale, std::abs(cost(i, j)));
    }
    for (Index j = 0; j < n; ++j) {
        std::iota(order.begin(), order.end(), 0);
        std::nth_element(order.begin(), order.begin() + k, order.end(),
                         [&](Index a, Index b) { return cost(a, j) < cost(b, j); });
        for (Index r = 0; r < k; ++r) adj[order[r]].emplace_back(j, cost(order[r], j));
    }
    // A greedy perfect matching keeps the candidate problem feasible unless
    // the caller seeded one.
    std::vector<char> taken(n, 0);
    for (Index i = 0; i < n && !seeded; ++i) {
        Index best = -1;
        for (Index j = 0; j < n; ++j)
            if (!taken[j] && (best < 0 || cost(i, j) < cost(i, best))) best = j;
        taken[best] = 1;
        adj[i].emplace_back(best, cost(i, best));
    }
    const double slack = 1e-13 * std::max(scale, 1.0);
    std::vector<Index> row_sol;
    std::vector<double> u, v;
    std::vector<std::pair<double, Index>> worst;
    for (int round = 0; round < 60; ++round) {
        for (auto& edges : adj) {
            std::sort(edges.begin(), edges.end());
            edges.erase(std::unique(edges.begin(), edges.end(),
                                    [](const auto& a, const auto& b) { return a.first == b.first; }),
                        edges.end());
        }
        if (!sparse_lap(n, adj, row_sol, u, v)) break;
        // Only the most violated pairs of each row join, keeping the graph sparse.
        long violations = 0;
        for (Index i = 0; i < n; ++i) {
            worst.clear();
            for (Index j = 0; j < n; ++j) {
                const double rc = cost(i, j) - u[i] - v[j];
                if (rc < -slack) worst.emplace_back(rc, j);
            }
            violations += static_cast<long>(worst.size());
            const std::size_t keep = std::min<std::size_t>(worst.size(), 8);
            std::partial_sort(worst.begin(), worst.begin() + keep, worst.end());
            for (std::size_t r = 0; r < keep; ++r) adj[i].emplace_back(worst[r].second, cost(i, worst[r].second));
        }
        if (violations == 0) return row_sol;
    }
    return lapjv(n, cost);
}

// Rank matchings of the two clouds projected on fixed directions, with the
// neighbouring ranks. Each direction contributes a perfect matching.
template <class Cost>
Adjacency projection_candidates(const Mat& a, const Mat& b, const Cost& cost) {
    const Index n = a.cols(), d = a.rows();
    Adjacency adj(n);
    if (n <= 96) return adj;
    std::vector<Vec> dirs;
    if (d == 1) {
        dirs.push_back(Vec::Ones(1));
    } else {
        for (Index k = 0; k < d; ++k) dirs.push_back(Vec::Unit(d, k));
        std::mt19937_64 rng(0x5eed);
        std::normal_distribution<double> nd;
        while (dirs.size() < 8) {
            Vec w(d);
            for (Index k = 0; k < d; ++k) w[k] = nd(rng);
            dirs.push_back(w.normalized());
        }
    }
    std::vector<Index> ra(n), rb(n);
    for (const Vec& w : dirs) {
        const Vec pa = a.transpose() * w, pb = b.transpose() * w;
        std::iota(ra.begin(), ra.end(), 0);
        std::iota(rb.begin(), rb.end(), 0);
        std::sort(ra.begin(), ra.end(), [&](Index x, Index y) { return pa[x] < pa[y]; });
        std::sort(rb.begin(), rb.end(), [&](Index x, Index y) { return pb[x] < pb[y]; });
        for (Index r = 0; r < n; ++r)
            for (Index off = -2; off <= 2; ++off) {
                const Index q = r + off;
                if (q >= 0 && q < n) adj[ra[r]].emplace_back(rb[q], cost(ra[r], rb[q]));
            }
    }
    return adj;
}

}  // namespace

std::vector<Eigen::Index> solve_assignment(Eigen::Index n,
                                           const std::function<double(Eigen::Index, Eigen::Index)>& cost) {
    if (n <= 0) return {};
    std::vector<double> c(static_cast<std::size_t>(n * n));
    for (Index i = 0; i < n; ++i)
        for (Index j = 0; j < n; ++j) c[static_cast<std::size_t>(i * n + j)] = cost(i, j);
    return assignment(n, [&](Index i, Index j) { return c[static_cast<std::size_t>(i * n + j)]; });
}

W2Result w2_exact(const Mat& a, const Mat& b) {
    if (a.cols() != b.cols() || a.rows() != b.rows()) throw SizeMismatch("W2 needs clouds of equal size and dimension");
    const Eigen::Index n = a.cols();
    W2Result r;
    if (n == 0) return r;
    std::vector<double> c(static_cast<std::size_t>(n * n));
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j)
            c[static_cast<std::size_t>(i * n + j)] = (a.col(i) - b.col(j)).squaredNorm();
    const auto cost = [&](Eigen::Index i, Eigen::Index j) { return c[static_cast<std::size_t>(i * n + j)]; };
    r.assignment = assignment(n, cost, projection_candidates(a, b, cost));
    double total = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) total += (a.col(i) - b.col(r.assignment[i])).squaredNorm();
    r.distance = std::sqrt(total / static_cast<double>(n));
    return r;
}

W2Result w2_exact(const PointCloud& a, const PointCloud& b) { return w2_exact(a.points, b.points); }

double w2_gaussian_1d(double v_a, double v_b) {
    if (!(v_a > 0) || !(v_b > 0)) throw DomainError("variances must be positive");
    return std::abs(std::sqrt(v_a) - std::sqrt(v_b));
}

void write_sweep_table(const std::string& path, const std::vector<SweepRow>& rows, const std::string& header) {
    std::ofstream out(path);
    if (!out) throw Error("cannot open for writing: " + path);
    out << header << "h\tw2_mean\tw2_stderr\ttrials\n";
    char buf[128];
    for (const auto& r : rows) {
        std::snprintf(buf, sizeof buf, "%.17g\t%.17g\t%.17g\t%d\n", r.h, r.mean, r.stderr_, r.trials);
        out << buf;
    }
}

}  // namespace wkb

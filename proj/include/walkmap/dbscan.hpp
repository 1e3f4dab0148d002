// Deterministic DBSCAN over an arbitrary metric.
//
// Seeds are visited in input order, expansion is breadth-first (FIFO), and a
// border point keeps the first cluster that discovers it, so the labeling is
// a pure function of the input order. Neighborhoods are inclusive
// (d <= eps) and count the point itself toward min_pts.

#ifndef WALKMAP_DBSCAN_HPP
#define WALKMAP_DBSCAN_HPP

#include <algorithm>
#include <cstddef>
#include <deque>
#include <vector>

#include "walkmap/core.hpp"
#include "walkmap/geometry.hpp"

namespace walkmap {

struct ClusterResult {
    static constexpr int kNoise = -1;
    std::vector<int> labels;  // cluster id per point, or kNoise
    int n_clusters = 0;

    std::vector<std::vector<int>> members() const {
        std::vector<std::vector<int>> out(static_cast<std::size_t>(n_clusters));
        for (std::size_t i = 0; i < labels.size(); ++i) {
            if (labels[i] >= 0) out[static_cast<std::size_t>(labels[i])].push_back(static_cast<int>(i));
        }
        return out;
    }
};

// `metric(i, j)` must be a symmetric non-negative distance over [0, n).
template <typename Metric>
ClusterResult dbscan(std::size_t n, Metric&& metric, double eps, int min_pts) {
    if (min_pts < 1) throw ContractError("dbscan min_pts must be >= 1");
    if (!(eps >= 0.0)) throw ContractError("dbscan eps must be non-negative");

    constexpr int kUndefined = -2;
    ClusterResult res;
    res.labels.assign(n, kUndefined);

    std::vector<int> neigh;
    auto query = [&](std::size_t p) {
        neigh.clear();
        for (std::size_t j = 0; j < n; ++j) {
            if (metric(p, j) <= eps) neigh.push_back(static_cast<int>(j));
        }
    };

    std::deque<int> frontier;
    for (std::size_t i = 0; i < n; ++i) {
        if (res.labels[i] != kUndefined) continue;
        query(i);
        if (static_cast<int>(neigh.size()) < min_pts) {
            res.labels[i] = ClusterResult::kNoise;
            continue;
        }
        const int cid = res.n_clusters++;
        res.labels[i] = cid;
        frontier.assign(neigh.begin(), neigh.end());
        while (!frontier.empty()) {
            const auto q = static_cast<std::size_t>(frontier.front());
            frontier.pop_front();
            if (res.labels[q] == ClusterResult::kNoise) {
                res.labels[q] = cid;  // border point, keeps first cluster
                continue;
            }
            if (res.labels[q] != kUndefined) continue;
            res.labels[q] = cid;
            query(q);
            if (static_cast<int>(neigh.size()) >= min_pts) {
                frontier.insert(frontier.end(), neigh.begin(), neigh.end());
            }
        }
    }
    return res;
}

// Euclidean specialization with a grid prefilter for the neighborhood scans.
inline ClusterResult dbscan_euclidean(const std::vector<Vec2>& pts, double eps,
                                      int min_pts) {
    if (pts.empty()) return {};
    PointGrid grid(pts, std::max(eps, 1e-9));
    constexpr int kUndefined = -2;
    ClusterResult res;
    res.labels.assign(pts.size(), kUndefined);

    auto query = [&](std::size_t p) {
        std::vector<int> out = grid.indices_within(pts[p], eps);
        std::sort(out.begin(), out.end());
        return out;
    };

    std::deque<int> frontier;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        if (res.labels[i] != kUndefined) continue;
        std::vector<int> neigh = query(i);
        if (static_cast<int>(neigh.size()) < min_pts) {
            res.labels[i] = ClusterResult::kNoise;
            continue;
        }
        const int cid = res.n_clusters++;
        res.labels[i] = cid;
        frontier.assign(neigh.begin(), neigh.end());
        while (!frontier.empty()) {
            const auto q = static_cast<std::size_t>(frontier.front());
            frontier.pop_front();
            if (res.labels[q] == ClusterResult::kNoise) {
                res.labels[q] = cid;
                continue;
            }
            if (res.labels[q] != kUndefined) continue;
            res.labels[q] = cid;
            std::vector<int> qn = query(q);
            if (static_cast<int>(qn.size()) >= min_pts) {
                frontier.insert(frontier.end(), qn.begin(), qn.end());
            }
        }
    }
    return res;
}

}  // namespace walkmap

#endif  // WALKMAP_DBSCAN_HPP

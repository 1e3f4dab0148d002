// Planar geometry primitives: polygon area/containment, polyline
// intersection, convex hull, and a uniform grid for range queries.
//
// Robustness policy: inputs are noisy meter-scale sensor data, so predicates
// use adaptive tolerances (1e-9 relative to the local scale) instead of exact
// arithmetic.

#ifndef WALKMAP_GEOMETRY_HPP
#define WALKMAP_GEOMETRY_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <unordered_map>
#include <vector>

#include "walkmap/core.hpp"

namespace walkmap {

using Ring = std::vector<Vec2>;      // closed implicitly; first vertex not repeated
using Polyline = std::vector<Vec2>;

// Signed shoelace area: positive for counterclockwise rings.
inline double signed_ring_area(const Ring& ring) {
    if (ring.size() < 3) {
        throw DegenerateInputError("ring needs at least 3 vertices");
    }
    double acc = 0.0;
    for (std::size_t i = 0, j = ring.size() - 1; i < ring.size(); j = i++) {
        acc += ring[j].cross(ring[i]);
    }
    return 0.5 * acc;
}

inline double polygon_area(const Ring& ring) { return signed_ring_area(ring); }

// Distance from p to the segment [a, b].
inline double point_segment_distance(const Vec2& p, const Vec2& a, const Vec2& b) {
    const Vec2 ab = b - a;
    const double len_sq = ab.norm_sq();
    if (len_sq == 0.0) return distance(p, a);
    double t = (p - a).dot(ab) / len_sq;
    t = std::clamp(t, 0.0, 1.0);
    return distance(p, a + ab * t);
}

inline double point_ring_distance(const Vec2& p, const Ring& ring) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0, j = ring.size() - 1; i < ring.size(); j = i++) {
        best = std::min(best, point_segment_distance(p, ring[j], ring[i]));
    }
    return best;
}

// Even-odd crossing test against one ring. Points on the boundary are
// resolved by the caller (see point_in_rings).
inline bool point_in_ring(const Vec2& p, const Ring& ring) {
    bool inside = false;
    for (std::size_t i = 0, j = ring.size() - 1; i < ring.size(); j = i++) {
        const Vec2& a = ring[j];
        const Vec2& b = ring[i];
        if ((b.y > p.y) != (a.y > p.y)) {
            const double x_cross = (a.x - b.x) * (p.y - b.y) / (a.y - b.y) + b.x;
            if (p.x < x_cross) inside = !inside;
        }
    }
    return inside;
}

// Even-odd containment over a set of rings (outer rings plus holes). A point
// within `boundary_tol` of any edge counts as contained.
inline bool point_in_rings(const Vec2& p, const std::vector<Ring>& rings,
                           double boundary_tol = 1e-9) {
    int crossings_odd = 0;
    for (const Ring& ring : rings) {
        if (ring.size() < 3) continue;
        if (boundary_tol > 0.0 && point_ring_distance(p, ring) <= boundary_tol) {
            return true;
        }
        if (point_in_ring(p, ring)) crossings_odd ^= 1;
    }
    return crossings_odd != 0;
}

namespace detail {

// Accumulates intersection points, deduplicating within `tol`.
class PointAccumulator {
public:
    explicit PointAccumulator(double tol) : tol_(tol) {}

    void add(const Vec2& p) {
        for (const Vec2& q : points_) {
            if (distance(p, q) <= tol_) return;
        }
        points_.push_back(p);
    }

    std::vector<Vec2> take() { return std::move(points_); }

private:
    double tol_;
    std::vector<Vec2> points_;
};

}  // namespace detail

// All intersection points of segments [p1,p2] and [q1,q2], including endpoint
// touches. Collinear overlaps contribute the two endpoints of the shared
// portion. Appends into `out`.
inline void segment_segment_intersections(const Vec2& p1, const Vec2& p2,
                                          const Vec2& q1, const Vec2& q2,
                                          detail::PointAccumulator& out) {
    const Vec2 r = p2 - p1;
    const Vec2 s = q2 - q1;
    const double rxs = r.cross(s);
    const Vec2 qp = q1 - p1;
    const double scale = r.norm() * s.norm();
    const double tol = 1e-12 * std::max(scale, 1e-300);

    if (std::abs(rxs) <= tol) {
        if (std::abs(qp.cross(r)) > 1e-12 * std::max(r.norm() * qp.norm(), 1e-300)) {
            return;  // parallel, not collinear
        }
        // Collinear: project q's endpoints onto p's parameterization.
        const double rr = r.norm_sq();
        if (rr == 0.0) {
            if (s.norm_sq() == 0.0) {
                if (distance(p1, q1) <= 1e-9) out.add(p1);
            } else if (point_segment_distance(p1, q1, q2) <= 1e-9) {
                out.add(p1);
            }
            return;
        }
        double t0 = qp.dot(r) / rr;
        double t1 = t0 + s.dot(r) / rr;
        if (t0 > t1) std::swap(t0, t1);
        const double lo = std::max(0.0, t0);
        const double hi = std::min(1.0, t1);
        if (lo > hi) return;
        out.add(p1 + r * lo);
        if (hi > lo) out.add(p1 + r * hi);
        return;
    }

    const double t = qp.cross(s) / rxs;
    const double u = qp.cross(r) / rxs;
    const double eps = 1e-12;
    if (t < -eps || t > 1.0 + eps || u < -eps || u > 1.0 + eps) return;
    out.add(p1 + r * std::clamp(t, 0.0, 1.0));
}

// All intersection points between two polylines, deduplicated within 1e-9 m.
inline std::vector<Vec2> segment_intersections(const Polyline& a, const Polyline& b) {
    detail::PointAccumulator acc(1e-9);
    if (a.size() < 2 || b.size() < 2) return {};
    for (std::size_t i = 0; i + 1 < a.size(); ++i) {
        for (std::size_t j = 0; j + 1 < b.size(); ++j) {
            segment_segment_intersections(a[i], a[i + 1], b[j], b[j + 1], acc);
        }
    }
    return acc.take();
}

// Convex hull (Andrew monotone chain), returned as a CCW ring. Strictly
// convex: collinear boundary points are dropped.
inline Ring convex_hull(std::vector<Vec2> pts) {
    std::sort(pts.begin(), pts.end(), [](const Vec2& a, const Vec2& b) {
        return a.x < b.x || (a.x == b.x && a.y < b.y);
    });
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    const std::size_t n = pts.size();
    if (n < 3) throw DegenerateInputError("convex hull needs >= 3 distinct points");

    std::vector<Vec2> hull(2 * n);
    std::size_t k = 0;
    for (std::size_t i = 0; i < n; ++i) {  // lower
        while (k >= 2 && (hull[k - 1] - hull[k - 2]).cross(pts[i] - hull[k - 2]) <= 0) --k;
        hull[k++] = pts[i];
    }
    for (std::size_t i = n - 1, t = k + 1; i-- > 0;) {  // upper
        while (k >= t && (hull[k - 1] - hull[k - 2]).cross(pts[i] - hull[k - 2]) <= 0) --k;
        hull[k++] = pts[i];
    }
    hull.resize(k - 1);
    if (hull.size() < 3) throw DegenerateInputError("input points are collinear");
    return hull;
}

// Uniform grid over a point set for radius queries. Built once, read-only.
class PointGrid {
public:
    PointGrid() = default;

    explicit PointGrid(std::vector<Vec2> pts, double cell = 0.0) : pts_(std::move(pts)) {
        if (pts_.empty()) {
            cell_ = 1.0;
            return;
        }
        if (cell <= 0.0) {
            Vec2 lo = pts_[0], hi = pts_[0];
            for (const Vec2& p : pts_) {
                lo.x = std::min(lo.x, p.x);
                lo.y = std::min(lo.y, p.y);
                hi.x = std::max(hi.x, p.x);
                hi.y = std::max(hi.y, p.y);
            }
            const double diag = (hi - lo).norm();
            cell = diag / (std::sqrt(static_cast<double>(pts_.size())) + 1.0);
        }
        cell_ = std::max(cell, 1e-9);
        key_lo_ = key_hi_ = key_of(pts_[0]);
        for (std::size_t i = 0; i < pts_.size(); ++i) {
            const Key k = key_of(pts_[i]);
            cells_[k].push_back(static_cast<int>(i));
            key_lo_.first = std::min(key_lo_.first, k.first);
            key_lo_.second = std::min(key_lo_.second, k.second);
            key_hi_.first = std::max(key_hi_.first, k.first);
            key_hi_.second = std::max(key_hi_.second, k.second);
        }
    }

    const std::vector<Vec2>& points() const { return pts_; }

    std::size_t count_within(const Vec2& center, double radius) const {
        std::size_t count = 0;
        visit_candidates(center, radius, [&](int idx) {
            if (distance(pts_[static_cast<std::size_t>(idx)], center) <= radius) ++count;
        });
        return count;
    }

    std::vector<int> indices_within(const Vec2& center, double radius) const {
        std::vector<int> out;
        visit_candidates(center, radius, [&](int idx) {
            if (distance(pts_[static_cast<std::size_t>(idx)], center) <= radius) {
                out.push_back(idx);
            }
        });
        return out;
    }

    // Distance from pts_[i] to its nearest other point; +inf for a singleton.
    double nearest_neighbor_distance(std::size_t i) const {
        const Vec2& p = pts_[i];
        const Key c = key_of(p);
        const std::int64_t max_ring =
            std::max({c.first - key_lo_.first, key_hi_.first - c.first,
                      c.second - key_lo_.second, key_hi_.second - c.second});
        double best = std::numeric_limits<double>::infinity();
        for (std::int64_t ring = 0; ring <= max_ring + 1; ++ring) {
            const double reachable = ring > 0 ? static_cast<double>(ring - 1) * cell_ : 0.0;
            if (best <= reachable) break;
            visit_ring(c, ring, [&](int idx) {
                if (static_cast<std::size_t>(idx) == i) return;
                best = std::min(best, distance(pts_[static_cast<std::size_t>(idx)], p));
            });
        }
        return best;
    }

private:
    using Key = std::pair<std::int64_t, std::int64_t>;
    struct KeyHash {
        std::size_t operator()(const Key& k) const {
            return std::hash<std::int64_t>()(k.first * 0x9E3779B97F4A7C15LL ^ k.second);
        }
    };

    Key key_of(const Vec2& p) const {
        return {static_cast<std::int64_t>(std::floor(p.x / cell_)),
                static_cast<std::int64_t>(std::floor(p.y / cell_))};
    }

    template <typename F>
    void visit_candidates(const Vec2& center, double radius, F&& f) const {
        const auto lo = key_of({center.x - radius, center.y - radius});
        const auto hi = key_of({center.x + radius, center.y + radius});
        for (std::int64_t gx = lo.first; gx <= hi.first; ++gx) {
            for (std::int64_t gy = lo.second; gy <= hi.second; ++gy) {
                auto it = cells_.find({gx, gy});
                if (it == cells_.end()) continue;
                for (int idx : it->second) f(idx);
            }
        }
    }

    template <typename F>
    void visit_cell(std::int64_t gx, std::int64_t gy, F&& f) const {
        auto it = cells_.find({gx, gy});
        if (it == cells_.end()) return;
        for (int idx : it->second) f(idx);
    }

    // Cells at Chebyshev distance exactly `ring` from c (perimeter only).
    template <typename F>
    void visit_ring(const Key& c, std::int64_t ring, F&& f) const {
        if (ring == 0) {
            visit_cell(c.first, c.second, f);
            return;
        }
        for (std::int64_t gx = c.first - ring; gx <= c.first + ring; ++gx) {
            visit_cell(gx, c.second - ring, f);
            visit_cell(gx, c.second + ring, f);
        }
        for (std::int64_t gy = c.second - ring + 1; gy <= c.second + ring - 1; ++gy) {
            visit_cell(c.first - ring, gy, f);
            visit_cell(c.first + ring, gy, f);
        }
    }

    std::vector<Vec2> pts_;
    double cell_ = 1.0;
    Key key_lo_{0, 0};
    Key key_hi_{0, 0};
    std::unordered_map<Key, std::vector<int>, KeyHash> cells_;
};

// Median nearest-neighbor distance of a point set (0 when duplicates dominate).
inline double median_nn_distance(const std::vector<Vec2>& pts) {
    if (pts.size() < 2) return 0.0;
    PointGrid grid(pts);
    std::vector<double> dists;
    dists.reserve(pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i) {
        dists.push_back(grid.nearest_neighbor_distance(i));
    }
    std::nth_element(dists.begin(), dists.begin() + dists.size() / 2, dists.end());
    return dists[dists.size() / 2];
}

}  // namespace walkmap

#endif  // WALKMAP_GEOMETRY_HPP

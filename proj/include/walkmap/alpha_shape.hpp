// Alpha shapes over a Delaunay triangulation.
//
// Keep every triangle whose circumradius is at most the probe radius r; the
// shape boundary is the set of edges used by exactly one kept triangle.
// Directed so the kept region lies on the left, those edges close into rings:
// outer rings CCW, holes CW. Points in no kept triangle are reported as
// outliers.

#ifndef WALKMAP_ALPHA_SHAPE_HPP
#define WALKMAP_ALPHA_SHAPE_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <unordered_map>
#include <vector>

#include "walkmap/core.hpp"
#include "walkmap/delaunay.hpp"
#include "walkmap/geometry.hpp"

namespace walkmap {

struct AlphaShape {
    double alpha_radius = 0.0;
    std::vector<Ring> rings;        // outer rings CCW, hole rings CW
    std::vector<int> outliers;      // input indices in no kept triangle
    std::vector<Vec2> tri_points;   // deduplicated points the triangles index
    std::vector<Triangle> kept;     // kept triangles, for area cross-checks

    // Total covered area: outer rings contribute positively, holes negatively.
    double area() const {
        double a = 0.0;
        for (const Ring& r : rings) a += signed_ring_area(r);
        return a;
    }

    bool contains(const Vec2& p, double boundary_tol = 1e-9) const {
        return point_in_rings(p, rings, boundary_tol);
    }
};

namespace detail {

// CCW angle of `out` measured from `rev`, in (0, 2*pi].
inline double ccw_angle_from(const Vec2& rev, const Vec2& out) {
    const double a = std::atan2(rev.cross(out), rev.dot(out));
    return a <= 0.0 ? a + 2.0 * kPi : a;
}

struct DirectedEdge {
    int from, to;
};

// Chain directed boundary edges into closed rings. At a pinch vertex the
// successor is the out-edge with the maximum CCW angle from the reversed
// incoming direction, which keeps each walk inside one fan of kept triangles.
inline std::vector<Ring> walk_rings(const std::vector<Vec2>& pts,
                                    const std::vector<DirectedEdge>& edges) {
    std::unordered_map<int, std::vector<int>> out_edges;
    for (std::size_t i = 0; i < edges.size(); ++i) {
        out_edges[edges[i].from].push_back(static_cast<int>(i));
    }
    for (auto& [v, lst] : out_edges) {
        std::sort(lst.begin(), lst.end(),
                  [&](int a, int b) { return edges[static_cast<std::size_t>(a)].to <
                                             edges[static_cast<std::size_t>(b)].to; });
    }

    std::vector<char> used(edges.size(), 0);
    std::vector<Ring> rings;
    for (std::size_t start = 0; start < edges.size(); ++start) {
        if (used[start]) continue;
        Ring ring;
        int cur = static_cast<int>(start);
        while (true) {
            if (used[static_cast<std::size_t>(cur)]) {
                throw ContractError("boundary walk revisited a directed edge");
            }
            used[static_cast<std::size_t>(cur)] = 1;
            const DirectedEdge& e = edges[static_cast<std::size_t>(cur)];
            ring.push_back(pts[static_cast<std::size_t>(e.from)]);

            const Vec2 rev = pts[static_cast<std::size_t>(e.from)] -
                             pts[static_cast<std::size_t>(e.to)];
            const auto& cands = out_edges.at(e.to);
            int best = -1;
            double best_ang = -1.0;
            for (int ei : cands) {
                const DirectedEdge& oe = edges[static_cast<std::size_t>(ei)];
                const Vec2 dir = pts[static_cast<std::size_t>(oe.to)] -
                                 pts[static_cast<std::size_t>(oe.from)];
                const double ang = ccw_angle_from(rev, dir);
                if (ang > best_ang) {
                    best_ang = ang;
                    best = ei;
                }
            }
            if (best < 0) {
                throw ContractError("boundary walk has no continuation");
            }
            if (best == static_cast<int>(start)) break;  // ring closed
            cur = best;
        }
        rings.push_back(std::move(ring));
    }
    return rings;
}

}  // namespace detail

// Alpha shape with probe-disk radius r (inclusive: circumradius <= r keeps a
// triangle). Throws DegenerateInputError for fewer than 3 distinct points or
// an all-collinear input.
inline AlphaShape alpha_shape(const std::vector<Vec2>& points, double r) {
    if (!(r > 0.0)) throw ContractError("alpha radius must be positive");
    Triangulation tri = delaunay(points);

    AlphaShape shape;
    shape.alpha_radius = r;
    shape.tri_points = tri.points;
    std::vector<char> in_kept(tri.points.size(), 0);
    for (const Triangle& t : tri.triangles) {
        const Circumcircle cc = circumcircle(tri.points[static_cast<std::size_t>(t.a)],
                                             tri.points[static_cast<std::size_t>(t.b)],
                                             tri.points[static_cast<std::size_t>(t.c)]);
        if (cc.radius <= r) {
            shape.kept.push_back(t);
            in_kept[static_cast<std::size_t>(t.a)] = 1;
            in_kept[static_cast<std::size_t>(t.b)] = 1;
            in_kept[static_cast<std::size_t>(t.c)] = 1;
        }
    }
    for (std::size_t i = 0; i < points.size(); ++i) {
        if (!in_kept[static_cast<std::size_t>(tri.dedup_map[i])]) {
            shape.outliers.push_back(static_cast<int>(i));
        }
    }

    // Count undirected edge usage among kept triangles; usage == 1 marks a
    // boundary edge whose kept-triangle side fixes the walk direction.
    struct EdgeUse {
        int count = 0;
        detail::DirectedEdge dir{-1, -1};
    };
    auto key_of = [](int u, int v) {
        const std::int64_t lo = std::min(u, v), hi = std::max(u, v);
        return (lo << 32) | hi;
    };
    std::unordered_map<std::int64_t, EdgeUse> uses;
    for (const Triangle& t : shape.kept) {
        const int vs[3] = {t.a, t.b, t.c};
        for (int i = 0; i < 3; ++i) {
            const int u = vs[i], v = vs[(i + 1) % 3];
            EdgeUse& e = uses[key_of(u, v)];
            ++e.count;
            e.dir = {u, v};
        }
    }
    std::vector<detail::DirectedEdge> boundary;
    for (const auto& [k, e] : uses) {
        if (e.count == 1) boundary.push_back(e.dir);
    }
    std::sort(boundary.begin(), boundary.end(), [](const auto& a, const auto& b) {
        return a.from != b.from ? a.from < b.from : a.to < b.to;
    });

    shape.rings = detail::walk_rings(tri.points, boundary);
    std::sort(shape.rings.begin(), shape.rings.end(), [](const Ring& a, const Ring& b) {
        return std::fabs(signed_ring_area(a)) > std::fabs(signed_ring_area(b));
    });
    return shape;
}

// Probe radius heuristic: twice the median nearest-neighbor distance, so the
// disk bridges typical sampling gaps but not doorways or inter-room voids.
inline double default_alpha_radius(const std::vector<Vec2>& points) {
    return 2.0 * median_nn_distance(points);
}

}  // namespace walkmap

#endif  // WALKMAP_ALPHA_SHAPE_HPP

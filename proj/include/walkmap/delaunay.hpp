// Delaunay triangulation via incremental insertion (Bowyer-Watson) with a
// walking point locator and adjacency-linked triangles.
//
// Predicates are plain double determinants; the super-triangle is placed far
// enough out (1e5 x data extent) that its interactions with hull triangles
// stay well conditioned for meter-scale inputs.

#ifndef WALKMAP_DELAUNAY_HPP
#define WALKMAP_DELAUNAY_HPP

#include <array>
#include <cmath>
#include <cstddef>
#include <cstring>
#include <limits>
#include <unordered_map>
#include <vector>

#include "walkmap/core.hpp"
#include "walkmap/geometry.hpp"

namespace walkmap {

struct Triangle {
    int a = -1, b = -1, c = -1;  // CCW indices into the deduplicated point set
};

struct Circumcircle {
    Vec2 center;
    double radius = 0.0;
};

// Circumcircle of a CCW or CW triangle. Radius is +inf for degenerate input.
inline Circumcircle circumcircle(const Vec2& a, const Vec2& b, const Vec2& c) {
    const Vec2 ab = b - a;
    const Vec2 ac = c - a;
    const double d = 2.0 * ab.cross(ac);
    if (d == 0.0) {
        return {Vec2{0, 0}, std::numeric_limits<double>::infinity()};
    }
    const double ab2 = ab.norm_sq();
    const double ac2 = ac.norm_sq();
    const Vec2 rel{(ac.y * ab2 - ab.y * ac2) / d, (ab.x * ac2 - ac.x * ab2) / d};
    return {a + rel, rel.norm()};
}

// Result of triangulating a point set. Input duplicates are merged; `points`
// holds the unique coordinates and `dedup_map[i]` gives the unique index of
// input point i.
struct Triangulation {
    std::vector<Vec2> points;
    std::vector<int> dedup_map;
    std::vector<Triangle> triangles;
};

namespace detail {

inline double orient2d(const Vec2& a, const Vec2& b, const Vec2& c) {
    return (b - a).cross(c - a);
}

// > 0 when p lies strictly inside the circumcircle of CCW triangle (a,b,c).
inline double incircle(const Vec2& a, const Vec2& b, const Vec2& c, const Vec2& p) {
    const double adx = a.x - p.x, ady = a.y - p.y;
    const double bdx = b.x - p.x, bdy = b.y - p.y;
    const double cdx = c.x - p.x, cdy = c.y - p.y;
    const double ad2 = adx * adx + ady * ady;
    const double bd2 = bdx * bdx + bdy * bdy;
    const double cd2 = cdx * cdx + cdy * cdy;
    return adx * (bdy * cd2 - cdy * bd2) - ady * (bdx * cd2 - cdx * bd2) +
           ad2 * (bdx * cdy - cdx * bdy);
}

class BowyerWatson {
public:
    explicit BowyerWatson(std::vector<Vec2> unique_pts) : pts_(std::move(unique_pts)) {
        n_finite_ = static_cast<int>(pts_.size());
        Vec2 lo = pts_[0], hi = pts_[0];
        for (const Vec2& p : pts_) {
            lo.x = std::min(lo.x, p.x);
            lo.y = std::min(lo.y, p.y);
            hi.x = std::max(hi.x, p.x);
            hi.y = std::max(hi.y, p.y);
        }
        const Vec2 c = (lo + hi) * 0.5;
        const double d = std::max((hi - lo).norm(), 1.0);
        const double m = 1e5 * d;
        pts_.push_back({c.x - 2.0 * m, c.y - m});
        pts_.push_back({c.x + 2.0 * m, c.y - m});
        pts_.push_back({c.x, c.y + 2.0 * m});
        tris_.push_back({{n_finite_, n_finite_ + 1, n_finite_ + 2}, {-1, -1, -1}, true});
        stamps_.assign(1, 0);
    }

    std::vector<Triangle> run() {
        for (int i = 0; i < n_finite_; ++i) {
            insert(i);
        }
        std::vector<Triangle> out;
        for (const Tri& t : tris_) {
            if (!t.alive) continue;
            if (t.v[0] >= n_finite_ || t.v[1] >= n_finite_ || t.v[2] >= n_finite_) continue;
            out.push_back({t.v[0], t.v[1], t.v[2]});
        }
        return out;
    }

private:
    struct Tri {
        std::array<int, 3> v;    // CCW
        std::array<int, 3> nbr;  // nbr[i] shares the edge opposite v[i]
        bool alive;
    };

    void insert(int pi) {
        const Vec2 p = pts_[static_cast<std::size_t>(pi)];
        const int t0 = locate(p);
        ++epoch_;
        cavity_.clear();
        collect_cavity(t0, p);

        // Boundary of the cavity as directed edges (interior on the left),
        // plus the surviving triangle across each edge.
        boundary_.clear();
        for (int ti : cavity_) {
            const Tri& t = tris_[static_cast<std::size_t>(ti)];
            for (int i = 0; i < 3; ++i) {
                const int n = t.nbr[static_cast<std::size_t>(i)];
                if (n >= 0 && stamps_[static_cast<std::size_t>(n)] == epoch_) continue;
                boundary_.push_back({t.v[(i + 1) % 3], t.v[(i + 2) % 3], n});
            }
        }

        for (int ti : cavity_) tris_[static_cast<std::size_t>(ti)].alive = false;

        start_of_.clear();
        end_of_.clear();
        first_new_ = static_cast<int>(tris_.size());
        for (const BEdge& e : boundary_) {
            const int nt = static_cast<int>(tris_.size());
            tris_.push_back({{pi, e.from, e.to}, {e.outside, -1, -1}, true});
            stamps_.push_back(0);
            if (e.outside >= 0) {
                Tri& o = tris_[static_cast<std::size_t>(e.outside)];
                for (int i = 0; i < 3; ++i) {
                    const int u = o.v[(i + 1) % 3];
                    const int w = o.v[(i + 2) % 3];
                    if (u == e.to && w == e.from) {
                        o.nbr[static_cast<std::size_t>(i)] = nt;
                        break;
                    }
                }
            }
            start_of_[e.from] = nt;
            end_of_[e.to] = nt;
        }
        // Fan linking around pi: the edge opposite e.from is (e.to, pi),
        // shared with the triangle whose boundary edge starts at e.to.
        for (int nt = first_new_; nt < static_cast<int>(tris_.size()); ++nt) {
            Tri& t = tris_[static_cast<std::size_t>(nt)];
            t.nbr[1] = start_of_.at(t.v[2]);
            t.nbr[2] = end_of_.at(t.v[1]);
        }
        last_ = first_new_;
    }

    int locate(const Vec2& p) const {
        int cur = last_;
        if (!tris_[static_cast<std::size_t>(cur)].alive) cur = find_alive();
        const int max_steps = static_cast<int>(tris_.size()) * 4 + 64;
        for (int step = 0; step < max_steps; ++step) {
            const Tri& t = tris_[static_cast<std::size_t>(cur)];
            int next = -1;
            for (int i = 0; i < 3; ++i) {
                const Vec2& e1 = pts_[static_cast<std::size_t>(t.v[(i + 1) % 3])];
                const Vec2& e2 = pts_[static_cast<std::size_t>(t.v[(i + 2) % 3])];
                if (orient2d(e1, e2, p) < 0.0) {
                    next = t.nbr[static_cast<std::size_t>(i)];
                    break;
                }
            }
            if (next < 0) return cur;
            cur = next;
        }
        return scan_for(p);
    }

    int find_alive() const {
        for (int i = static_cast<int>(tris_.size()) - 1; i >= 0; --i) {
            if (tris_[static_cast<std::size_t>(i)].alive) return i;
        }
        throw DegenerateInputError("triangulation lost all triangles");
    }

    int scan_for(const Vec2& p) const {
        for (int i = static_cast<int>(tris_.size()) - 1; i >= 0; --i) {
            const Tri& t = tris_[static_cast<std::size_t>(i)];
            if (!t.alive) continue;
            bool inside = true;
            for (int k = 0; k < 3 && inside; ++k) {
                const Vec2& e1 = pts_[static_cast<std::size_t>(t.v[(k + 1) % 3])];
                const Vec2& e2 = pts_[static_cast<std::size_t>(t.v[(k + 2) % 3])];
                inside = orient2d(e1, e2, p) >= 0.0;
            }
            if (inside) return i;
        }
        throw DegenerateInputError("point outside triangulation domain");
    }

    void collect_cavity(int t0, const Vec2& p) {
        pending_.clear();
        pending_.push_back(t0);
        stamps_[static_cast<std::size_t>(t0)] = epoch_;
        while (!pending_.empty()) {
            const int ti = pending_.back();
            pending_.pop_back();
            cavity_.push_back(ti);
            const Tri& t = tris_[static_cast<std::size_t>(ti)];
            for (int i = 0; i < 3; ++i) {
                const int n = t.nbr[static_cast<std::size_t>(i)];
                if (n < 0 || stamps_[static_cast<std::size_t>(n)] == epoch_) continue;
                const Tri& nt = tris_[static_cast<std::size_t>(n)];
                if (incircle(pts_[static_cast<std::size_t>(nt.v[0])],
                             pts_[static_cast<std::size_t>(nt.v[1])],
                             pts_[static_cast<std::size_t>(nt.v[2])], p) > 0.0) {
                    stamps_[static_cast<std::size_t>(n)] = epoch_;
                    pending_.push_back(n);
                }
            }
        }
    }

    struct BEdge {
        int from, to, outside;
    };

    std::vector<Vec2> pts_;
    int n_finite_ = 0;
    std::vector<Tri> tris_;
    std::vector<int> stamps_;
    std::vector<int> cavity_;
    std::vector<int> pending_;
    std::vector<BEdge> boundary_;
    std::unordered_map<int, int> start_of_;
    std::unordered_map<int, int> end_of_;
    int epoch_ = 0;
    int last_ = 0;
    int first_new_ = 0;
};

}  // namespace detail

// Delaunay triangulation of a point set. Duplicate points are merged first;
// the result's dedup_map sends each input index to its unique point.
// Throws DegenerateInputError for fewer than 3 distinct points or an
// all-collinear input.
inline Triangulation delaunay(const std::vector<Vec2>& input) {
    Triangulation out;
    out.dedup_map.assign(input.size(), -1);
    std::unordered_map<std::int64_t, std::vector<int>> seen;  // bucket by hashed coords
    auto hash_pt = [](const Vec2& p) {
        std::int64_t hx, hy;
        static_assert(sizeof(double) == sizeof(std::int64_t));
        std::memcpy(&hx, &p.x, sizeof hx);
        std::memcpy(&hy, &p.y, sizeof hy);
        return hx * 0x9E3779B97F4A7C15LL ^ hy;
    };
    for (std::size_t i = 0; i < input.size(); ++i) {
        if (!std::isfinite(input[i].x) || !std::isfinite(input[i].y)) {
            throw ContractError("non-finite coordinate in point set");
        }
        auto& bucket = seen[hash_pt(input[i])];
        int found = -1;
        for (int u : bucket) {
            if (out.points[static_cast<std::size_t>(u)] == input[i]) {
                found = u;
                break;
            }
        }
        if (found < 0) {
            found = static_cast<int>(out.points.size());
            out.points.push_back(input[i]);
            bucket.push_back(found);
        }
        out.dedup_map[i] = found;
    }
    if (out.points.size() < 3) {
        throw DegenerateInputError("triangulation needs >= 3 distinct points");
    }

    detail::BowyerWatson bw(out.points);
    out.triangles = bw.run();
    if (out.triangles.empty()) {
        throw DegenerateInputError("all points are collinear");
    }
    return out;
}

}  // namespace walkmap

#endif  // WALKMAP_DELAUNAY_HPP

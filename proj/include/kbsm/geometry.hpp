#pragma once

// Exact planar predicates. Every decision in the diagram pipeline is made
// with rational arithmetic; there are no epsilons.

#include <optional>
#include <stdexcept>
#include <vector>

#include "kbsm/rational.hpp"

namespace kbsm {

inline Rat cross(const Point& o, const Point& a, const Point& b) {
    return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}
inline Rat cross_vec(const Point& u, const Point& v) { return u.x * v.y - u.y * v.x; }
inline Rat dot_vec(const Point& u, const Point& v) { return u.x * v.x + u.y * v.y; }
inline Point sub(const Point& a, const Point& b) { return {a.x - b.x, a.y - b.y}; }
inline Point lerp(const Point& a, const Point& b, const Rat& t) {
    return {a.x + (b.x - a.x) * t, a.y + (b.y - a.y) * t};
}

inline bool point_on_segment(const Point& p, const Point& a, const Point& b) {
    if (cross(a, b, p).sign() != 0) return false;
    Rat lo_x = a.x < b.x ? a.x : b.x, hi_x = a.x < b.x ? b.x : a.x;
    Rat lo_y = a.y < b.y ? a.y : b.y, hi_y = a.y < b.y ? b.y : a.y;
    return lo_x <= p.x && p.x <= hi_x && lo_y <= p.y && p.y <= hi_y;
}

struct SegHit {
    enum Kind { None, Proper, Degenerate } kind = None;
    Point p;      // for Proper
    Rat ta, tb;   // params along each segment, in (0,1)
};

// Classifies the intersection of [a1,a2] and [b1,b2]. Proper means a single
// transversal interior-interior point; anything touching, collinear or
// overlapping is Degenerate.
inline SegHit seg_intersect(const Point& a1, const Point& a2, const Point& b1,
                            const Point& b2) {
    Rat d1 = cross(b1, b2, a1), d2 = cross(b1, b2, a2);
    Rat d3 = cross(a1, a2, b1), d4 = cross(a1, a2, b2);
    int s1 = d1.sign(), s2 = d2.sign(), s3 = d3.sign(), s4 = d4.sign();
    SegHit hit;
    if (s1 * s2 < 0 && s3 * s4 < 0) {
        hit.kind = SegHit::Proper;
        hit.ta = d1 / (d1 - d2);
        hit.tb = d3 / (d3 - d4);
        hit.p = lerp(a1, a2, hit.ta);
        return hit;
    }
    bool touch = (s1 == 0 && point_on_segment(a1, b1, b2)) ||
                 (s2 == 0 && point_on_segment(a2, b1, b2)) ||
                 (s3 == 0 && point_on_segment(b1, a1, a2)) ||
                 (s4 == 0 && point_on_segment(b2, a1, a2));
    hit.kind = touch ? SegHit::Degenerate : SegHit::None;
    return hit;
}

// Whether the open ray origin + s*dir (s > 0) crosses the open segment (a,b).
// nullopt marks a degenerate configuration (parallel on-line, endpoint hit);
// callers pick ray directions that avoid those.
inline std::optional<bool> ray_crosses(const Point& origin, const Point& dir,
                                       const Point& a, const Point& b) {
    Point e = sub(b, a), w = sub(a, origin);
    Rat denom = cross_vec(dir, e);
    if (denom.sign() == 0) {
        if (cross_vec(dir, w).sign() != 0) return false;  // parallel, off the ray line
        // Edge lies on the ray's line; harmless when entirely behind the origin.
        if (dot_vec(dir, w).sign() <= 0 && dot_vec(dir, sub(b, origin)).sign() <= 0)
            return false;
        return std::nullopt;
    }
    Rat s = cross_vec(w, e) / denom;
    Rat t = cross_vec(w, dir) / denom;
    int ss = s.sign();
    if (ss < 0) return false;
    int ts = t.sign();
    if (ss == 0) {
        // The two lines meet exactly at the origin; a crossing would mean the
        // origin sits on the edge itself.
        if (ts > 0 && t < Rat(1)) return std::nullopt;
        return false;
    }
    if (ts == 0 || t == Rat(1)) return std::nullopt;  // through an edge endpoint
    return ts > 0 && t < Rat(1);
}

// Picks a ray direction generic for every (source, vertex) pair: no vertex
// lies on any ray. Deterministic.
inline Point generic_direction(const std::vector<Point>& sources,
                               const std::vector<Point>& vertices) {
    for (int denom = 1; denom < 64; denom += 2) {
        for (int numer = 0; numer <= 2 * denom; ++numer) {
            for (int sgn : {1, -1}) {
                if (numer == 0 && sgn < 0) continue;
                Point d{Rat(1), Rat(BigInt(sgn * numer), BigInt(denom))};
                bool ok = true;
                for (const auto& s : sources) {
                    for (const auto& v : vertices) {
                        Point w = sub(v, s);
                        if (w.x.is_zero() && w.y.is_zero()) continue;
                        if (cross_vec(d, w).sign() == 0 && dot_vec(d, w).sign() > 0) {
                            ok = false;
                            break;
                        }
                    }
                    if (!ok) break;
                }
                if (ok) return d;
            }
        }
    }
    throw std::logic_error("no generic ray direction found");
}

struct Box {
    Rat x1, y1, x2, y2;  // x1 <= x2, y1 <= y2

    bool contains(const Point& p) const {
        return x1 <= p.x && p.x <= x2 && y1 <= p.y && p.y <= y2;
    }
    bool contains_strict(const Point& p) const {
        return x1 < p.x && p.x < x2 && y1 < p.y && p.y < y2;
    }
};

// Closed-box vs closed-segment intersection test (touching counts).
inline bool seg_box_intersects(const Point& a, const Point& b, const Box& box) {
    if (box.contains(a) || box.contains(b)) return true;
    Point c1{box.x1, box.y1}, c2{box.x2, box.y1}, c3{box.x2, box.y2}, c4{box.x1, box.y2};
    const Point edges[4][2] = {{c1, c2}, {c2, c3}, {c3, c4}, {c4, c1}};
    for (const auto& e : edges) {
        SegHit h = seg_intersect(a, b, e[0], e[1]);
        if (h.kind != SegHit::None) return true;
        if (point_on_segment(e[0], a, b) || point_on_segment(e[1], a, b)) return true;
    }
    return false;
}

}  // namespace kbsm

#pragma once

// Arrow diagrams: closed polylines with exact rational vertices in the disk of
// radius 4, over/under decorations at transversal double points, and directed
// dots on segments. Includes the line-based text format and the general
// position validator.
//
// Punctures are fixed by convention: annulus at (0,0), pants at (-1,0) and
// (1,0). Curves may not meet a puncture.

#include <algorithm>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "kbsm/geometry.hpp"
#include "kbsm/word.hpp"

namespace kbsm {

struct DiagramError : std::runtime_error {
    explicit DiagramError(const std::string& m) : std::runtime_error(m) {}
};

struct Dot {
    int comp = 0;
    int seg = 0;
    Rat t;        // position in (0,1) along the segment
    int dir = 1;  // +1 along the stored traversal order, -1 against

    friend bool operator<(const Dot& a, const Dot& b) {
        if (a.comp != b.comp) return a.comp < b.comp;
        if (a.seg != b.seg) return a.seg < b.seg;
        if (a.t != b.t) return a.t < b.t;
        return a.dir < b.dir;
    }
};

struct CrossKey {
    int ca = 0, sa = 0, cb = 0, sb = 0;  // canonical: (ca,sa) < (cb,sb)

    void canonicalize() {
        if (std::pair(ca, sa) > std::pair(cb, sb)) {
            std::swap(ca, cb);
            std::swap(sa, sb);
        }
    }
    friend bool operator<(const CrossKey& a, const CrossKey& b) {
        return std::tuple(a.ca, a.sa, a.cb, a.sb) < std::tuple(b.ca, b.sa, b.cb, b.sb);
    }
    friend bool operator==(const CrossKey& a, const CrossKey& b) {
        return std::tuple(a.ca, a.sa, a.cb, a.sb) == std::tuple(b.ca, b.sa, b.cb, b.sb);
    }
};

struct ArrowDiagram {
    Surface surface = Surface::Disk;
    std::vector<std::vector<Point>> comps;  // closed polylines, implicit last->first edge
    std::map<CrossKey, bool> decos;         // true: strand A (first-listed) is under
    std::vector<Dot> dots;

    static ArrowDiagram read(std::istream& in) {
        ArrowDiagram d;
        std::string line;
        int lineno = 0;
        bool have_surface = false;
        auto fail = [&](const std::string& msg) {
            throw DiagramError("line " + std::to_string(lineno) + ": " + msg);
        };
        while (std::getline(in, line)) {
            ++lineno;
            std::istringstream ss(line);
            std::string tok;
            if (!(ss >> tok)) continue;
            if (tok == "surface") {
                std::string name;
                if (!(ss >> name)) fail("expected surface name");
                try {
                    d.surface = surface_from_name(name);
                } catch (const std::exception& e) {
                    fail(e.what());
                }
                have_surface = true;
            } else if (tok == "component") {
                d.comps.emplace_back();
            } else if (tok == "crossing") {
                CrossKey k;
                std::string under;
                if (!(ss >> k.ca >> k.sa >> k.cb >> k.sb >> under))
                    fail("expected 'crossing cA sA cB sB under=A|B'");
                bool under_a;
                if (under == "under=A")
                    under_a = true;
                else if (under == "under=B")
                    under_a = false;
                else
                    fail("expected under=A or under=B");
                bool swapped = std::pair(k.ca, k.sa) > std::pair(k.cb, k.sb);
                k.canonicalize();
                if (swapped) under_a = !under_a;
                if (d.decos.count(k)) fail("duplicate crossing declaration");
                d.decos[k] = under_a;
            } else if (tok == "dot") {
                Dot dot;
                std::string ts, dir;
                if (!(ss >> dot.comp >> dot.seg >> ts >> dir))
                    fail("expected 'dot c s t dir=+|-'");
                try {
                    dot.t = Rat::parse(ts);
                } catch (const std::exception&) {
                    fail("bad rational '" + ts + "'");
                }
                if (dir == "dir=+")
                    dot.dir = 1;
                else if (dir == "dir=-")
                    dot.dir = -1;
                else
                    fail("expected dir=+ or dir=-");
                d.dots.push_back(dot);
            } else {
                // A vertex line of the current component.
                if (d.comps.empty()) fail("vertex before any 'component'");
                std::string xs = tok, ys;
                if (!(ss >> ys)) fail("expected 'x y'");
                Point p;
                try {
                    p.x = Rat::parse(xs);
                    p.y = Rat::parse(ys);
                } catch (const std::exception&) {
                    fail("bad rational coordinate");
                }
                std::string extra;
                if (ss >> extra) fail("trailing tokens after coordinates");
                d.comps.back().push_back(p);
            }
        }
        if (!have_surface) throw DiagramError("line 0: missing 'surface' header");
        return d;
    }

    static ArrowDiagram parse(const std::string& text) {
        std::istringstream in(text);
        return read(in);
    }

    void write(std::ostream& out) const {
        out << "surface " << surface_name(surface) << "\n";
        for (const auto& comp : comps) {
            out << "component\n";
            for (const auto& p : comp) out << p.x.str() << " " << p.y.str() << "\n";
        }
        for (const auto& [k, under_a] : decos)
            out << "crossing " << k.ca << " " << k.sa << " " << k.cb << " " << k.sb
                << " under=" << (under_a ? "A" : "B") << "\n";
        std::vector<Dot> sorted_dots = dots;
        std::sort(sorted_dots.begin(), sorted_dots.end());
        for (const auto& dot : sorted_dots)
            out << "dot " << dot.comp << " " << dot.seg << " " << dot.t.str()
                << " dir=" << (dot.dir > 0 ? "+" : "-") << "\n";
    }

    std::string str() const {
        std::ostringstream out;
        write(out);
        return out.str();
    }

    size_t segment_count(int comp) const { return comps[comp].size(); }
    Point seg_a(int comp, int seg) const { return comps[comp][seg]; }
    Point seg_b(int comp, int seg) const {
        return comps[comp][(seg + 1) % comps[comp].size()];
    }
};

struct Crossing {
    CrossKey k;
    bool under_a = true;
    Point p;
    Rat ta, tb;  // intersection params along the A and B segments
};

inline std::vector<Point> surface_punctures(Surface s) {
    switch (s) {
        case Surface::Disk: return {};
        case Surface::Annulus: return {Point{Rat(0), Rat(0)}};
        default: return {Point{Rat(-1), Rat(0)}, Point{Rat(1), Rat(0)}};
    }
}

class ValidatedDiagram {
public:
    static ValidatedDiagram validate(ArrowDiagram d) {
        ValidatedDiagram v;
        v.punctures_ = surface_punctures(d.surface);

        for (size_t ci = 0; ci < d.comps.size(); ++ci) {
            const auto& comp = d.comps[ci];
            if (comp.size() < 3)
                throw DiagramError("component " + std::to_string(ci) +
                                   " needs at least 3 vertices");
            const Rat r2(16);
            for (const auto& p : comp)
                if (p.x * p.x + p.y * p.y > r2)
                    throw DiagramError("vertex (" + p.x.str() + ", " + p.y.str() +
                                       ") lies outside the radius-4 disk");
            for (size_t i = 0; i < comp.size(); ++i) {
                const Point &a = comp[i], &b = comp[(i + 1) % comp.size()],
                            &c = comp[(i + 2) % comp.size()];
                if (a == b) throw DiagramError("zero-length segment");
                // Fold-back at b would overlap the adjacent segments.
                if (cross(b, a, c).sign() == 0 &&
                    dot_vec(sub(a, b), sub(c, b)).sign() > 0)
                    throw DiagramError("degenerate intersection: adjacent segments overlap near (" +
                                       b.x.str() + ", " + b.y.str() + ")");
            }
        }

        // Punctures and foreign vertices must avoid every segment.
        for (size_t ci = 0; ci < d.comps.size(); ++ci)
            for (size_t si = 0; si < d.comps[ci].size(); ++si) {
                Point a = d.seg_a(ci, si), b = d.seg_b(ci, si);
                for (const auto& pc : v.punctures_)
                    if (point_on_segment(pc, a, b))
                        throw DiagramError("curve meets the puncture (" + pc.x.str() + ", " +
                                           pc.y.str() + ")");
                for (size_t cj = 0; cj < d.comps.size(); ++cj)
                    for (size_t vj = 0; vj < d.comps[cj].size(); ++vj) {
                        if (ci == cj &&
                            (vj == si || vj == (si + 1) % d.comps[ci].size()))
                            continue;
                        const Point& q = d.comps[cj][vj];
                        if (point_on_segment(q, a, b))
                            throw DiagramError(
                                "degenerate intersection: vertex (" + q.x.str() + ", " +
                                q.y.str() + ") lies on another segment");
                    }
            }

        // All pairwise intersections must be proper transversal double points.
        std::vector<Crossing> found;
        for (size_t ci = 0; ci < d.comps.size(); ++ci)
            for (size_t si = 0; si < d.comps[ci].size(); ++si)
                for (size_t cj = ci; cj < d.comps.size(); ++cj)
                    for (size_t sj = (ci == cj ? si + 1 : size_t(0));
                         sj < d.comps[cj].size(); ++sj) {
                        bool adjacent =
                            ci == cj && (sj == si + 1 ||
                                         (si == 0 && sj == d.comps[ci].size() - 1));
                        Point a1 = d.seg_a(ci, si), a2 = d.seg_b(ci, si);
                        Point b1 = d.seg_a(cj, sj), b2 = d.seg_b(cj, sj);
                        SegHit h = seg_intersect(a1, a2, b1, b2);
                        if (adjacent) {
                            if (h.kind == SegHit::Proper)
                                throw DiagramError("adjacent segments cross");
                            continue;
                        }
                        if (h.kind == SegHit::Degenerate)
                            throw DiagramError(
                                "degenerate intersection between segments (" +
                                std::to_string(ci) + "," + std::to_string(si) + ") and (" +
                                std::to_string(cj) + "," + std::to_string(sj) + ")");
                        if (h.kind == SegHit::Proper) {
                            Crossing c;
                            c.k = CrossKey{static_cast<int>(ci), static_cast<int>(si),
                                           static_cast<int>(cj), static_cast<int>(sj)};
                            c.p = h.p;
                            c.ta = h.ta;
                            c.tb = h.tb;
                            found.push_back(c);
                        }
                    }

        for (size_t i = 0; i < found.size(); ++i)
            for (size_t j = i + 1; j < found.size(); ++j)
                if (found[i].p == found[j].p)
                    throw DiagramError("triple point at (" + found[i].p.x.str() + ", " +
                                       found[i].p.y.str() + ")");

        for (auto& c : found) {
            auto it = d.decos.find(c.k);
            if (it == d.decos.end())
                throw DiagramError("undeclared crossing at (" + c.p.x.str() + ", " +
                                   c.p.y.str() + ")");
            c.under_a = it->second;
        }
        if (found.size() != d.decos.size()) {
            for (const auto& [k, u] : d.decos) {
                bool present = false;
                for (const auto& c : found) present = present || (c.k == k);
                if (!present)
                    throw DiagramError("declared crossing (" + std::to_string(k.ca) + "," +
                                       std::to_string(k.sa) + ")x(" + std::to_string(k.cb) +
                                       "," + std::to_string(k.sb) +
                                       ") does not exist geometrically");
            }
        }

        // Dots: in range, distinct, off crossings.
        std::vector<Point> dot_points;
        for (const auto& dot : d.dots) {
            if (dot.comp < 0 || dot.comp >= static_cast<int>(d.comps.size()) ||
                dot.seg < 0 ||
                dot.seg >= static_cast<int>(d.comps[dot.comp].size()))
                throw DiagramError("dot references a missing segment");
            if (!(Rat(0) < dot.t && dot.t < Rat(1)))
                throw DiagramError("dot parameter must lie strictly inside its segment");
            dot_points.push_back(lerp(d.seg_a(dot.comp, dot.seg), d.seg_b(dot.comp, dot.seg),
                                      dot.t));
        }
        for (size_t i = 0; i < dot_points.size(); ++i) {
            for (size_t j = i + 1; j < dot_points.size(); ++j)
                if (dot_points[i] == dot_points[j])
                    throw DiagramError("coincident dots at (" + dot_points[i].x.str() + ", " +
                                       dot_points[i].y.str() + ")");
            for (const auto& c : found)
                if (dot_points[i] == c.p)
                    throw DiagramError("dot sits on a crossing at (" + c.p.x.str() + ", " +
                                       c.p.y.str() + ")");
        }

        std::sort(found.begin(), found.end(),
                  [](const Crossing& a, const Crossing& b) { return a.k < b.k; });
        v.d_ = std::move(d);
        v.crossings_ = std::move(found);
        return v;
    }

    const ArrowDiagram& raw() const { return d_; }
    const std::vector<Crossing>& crossings() const { return crossings_; }
    const std::vector<Point>& punctures() const { return punctures_; }
    Surface surface() const { return d_.surface; }

private:
    ArrowDiagram d_;
    std::vector<Crossing> crossings_;
    std::vector<Point> punctures_;
};

}  // namespace kbsm

#pragma once

// Seeded random diagrams and constructive Reidemeister move pairs.
//
// Random diagrams are built from axis-parallel rectangles and one-crossing
// curl loops with globally distinct wall coordinates, so every intersection is
// automatically a transversal double point away from vertices, dots and
// punctures. Move pairs splice a local pattern into (or next to) the base
// diagram; the two sides are identical outside the splice box.

#include <algorithm>
#include <cstdint>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "kbsm/diagram.hpp"

namespace kbsm {

struct MoveError : std::runtime_error {
    explicit MoveError(const std::string& m) : std::runtime_error(m) {}
};

enum class MoveKind { O1Pos, O1Neg, O2, O3, O4, O5 };

inline const char* move_name(MoveKind k) {
    switch (k) {
        case MoveKind::O1Pos: return "omega1+";
        case MoveKind::O1Neg: return "omega1-";
        case MoveKind::O2: return "omega2";
        case MoveKind::O3: return "omega3";
        case MoveKind::O4: return "omega4";
        default: return "omega5";
    }
}

class Rng {
public:
    explicit Rng(uint64_t seed) : s_(seed) {}
    uint64_t next() {
        s_ += 0x9e3779b97f4a7c15ULL;
        uint64_t z = s_;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }
    uint64_t below(uint64_t n) { return n ? next() % n : 0; }
    bool bit() { return next() & 1; }

private:
    uint64_t s_;
};

namespace movedetail {

// Wall coordinates are drawn from k/8 with k in [-22,22] minus {-8,0,8}, so no
// wall line ever passes through a puncture and all walls are pairwise
// non-collinear.
inline Rat pool_value(int k) { return Rat(BigInt(k), BigInt(8)); }

inline int draw_pool(Rng& rng, std::set<int>& used) {
    for (int tries = 0; tries < 200; ++tries) {
        int k = static_cast<int>(rng.below(45)) - 22;
        if (k == -8 || k == 0 || k == 8) continue;
        if (used.count(k)) continue;
        used.insert(k);
        return k;
    }
    throw MoveError("coordinate pool exhausted");
}

inline size_t count_proper_crossings(const ArrowDiagram& d) {
    size_t n = 0;
    for (size_t ci = 0; ci < d.comps.size(); ++ci)
        for (size_t si = 0; si < d.comps[ci].size(); ++si)
            for (size_t cj = ci; cj < d.comps.size(); ++cj)
                for (size_t sj = (ci == cj ? si + 1 : size_t(0)); sj < d.comps[cj].size();
                     ++sj) {
                    if (ci == cj && (sj == si + 1 || (si == 0 && sj == d.comps[ci].size() - 1)))
                        continue;
                    if (seg_intersect(d.seg_a(ci, si), d.seg_b(ci, si), d.seg_a(cj, sj),
                                      d.seg_b(cj, sj))
                            .kind == SegHit::Proper)
                        ++n;
                }
    return n;
}

inline void set_deco(ArrowDiagram& d, int ca, int sa, int cb, int sb, bool under_first) {
    CrossKey k{ca, sa, cb, sb};
    bool swapped = std::pair(ca, sa) > std::pair(cb, sb);
    k.canonicalize();
    d.decos[k] = swapped ? !under_first : under_first;
}

// True when the box meets nothing but the listed segments and no puncture.
// Crossings between two allowed segments are permitted inside the box.
inline bool box_clear(const ValidatedDiagram& vd, const Box& box,
                      const std::vector<std::pair<int, int>>& allowed) {
    const auto& d = vd.raw();
    auto is_allowed = [&](int c, int s) {
        for (const auto& [ac, as] : allowed)
            if (ac == c && as == s) return true;
        return false;
    };
    for (const auto& pc : vd.punctures())
        if (box.contains(pc)) return false;
    for (size_t ci = 0; ci < d.comps.size(); ++ci)
        for (size_t si = 0; si < d.comps[ci].size(); ++si) {
            if (is_allowed(static_cast<int>(ci), static_cast<int>(si))) continue;
            if (seg_box_intersects(d.seg_a(ci, si), d.seg_b(ci, si), box)) return false;
        }
    for (const auto& dot : d.dots) {
        Point p = lerp(d.seg_a(dot.comp, dot.seg), d.seg_b(dot.comp, dot.seg), dot.t);
        if (box.contains(p)) return false;
    }
    for (const auto& c : vd.crossings()) {
        if (is_allowed(c.k.ca, c.k.sa) && is_allowed(c.k.cb, c.k.sb)) continue;
        if (box.contains(c.p)) return false;
    }
    return true;
}

// Feature params (crossings, dots) on a segment, with 0 and 1 sentinels.
inline std::vector<Rat> segment_breaks(const ValidatedDiagram& vd, int comp, int seg) {
    std::vector<Rat> br{Rat(0), Rat(1)};
    for (const auto& c : vd.crossings()) {
        if (c.k.ca == comp && c.k.sa == seg) br.push_back(c.ta);
        if (c.k.cb == comp && c.k.sb == seg) br.push_back(c.tb);
    }
    for (const auto& dot : vd.raw().dots)
        if (dot.comp == comp && dot.seg == seg) br.push_back(dot.t);
    std::sort(br.begin(), br.end());
    return br;
}

struct Frame {
    Point origin;  // window start point
    Point e_dir;   // unit vector along the wall
    Point e_perp;  // e_dir rotated by -90 degrees (rotation only, no reflections)

    Point at(const Rat& xi, const Rat& eta) const {
        return {origin.x + e_perp.x * xi + e_dir.x * eta,
                origin.y + e_perp.y * xi + e_dir.y * eta};
    }
};

inline Frame wall_frame(const Point& a, const Point& b, const Point& w0) {
    Point d = sub(b, a);
    Point e_dir{Rat(d.x.sign()), Rat(d.y.sign())};
    Point e_perp{e_dir.y, Rat(0) - e_dir.x};
    return Frame{w0, e_dir, e_perp};
}

inline Box frame_box(const Frame& f, const Rat& xi1, const Rat& eta1, const Rat& xi2,
                     const Rat& eta2) {
    Point p1 = f.at(xi1, eta1), p2 = f.at(xi2, eta2);
    Box b;
    b.x1 = p1.x < p2.x ? p1.x : p2.x;
    b.x2 = p1.x < p2.x ? p2.x : p1.x;
    b.y1 = p1.y < p2.y ? p1.y : p2.y;
    b.y2 = p1.y < p2.y ? p2.y : p1.y;
    return b;
}

struct WallWindow {
    int comp, seg;
    Rat t_lo, t_hi;
    Point p_lo, p_hi;
};

inline std::vector<WallWindow> wall_windows(const ValidatedDiagram& vd, Rng& rng) {
    const auto& d = vd.raw();
    std::vector<WallWindow> wins;
    for (size_t ci = 0; ci < d.comps.size(); ++ci)
        for (size_t si = 0; si < d.comps[ci].size(); ++si) {
            auto br = segment_breaks(vd, static_cast<int>(ci), static_cast<int>(si));
            for (size_t w = 0; w + 1 < br.size(); ++w) {
                if (!(br[w] < br[w + 1])) continue;
                WallWindow ww;
                ww.comp = static_cast<int>(ci);
                ww.seg = static_cast<int>(si);
                Rat len = br[w + 1] - br[w];
                ww.t_lo = br[w] + len * Rat(BigInt(1), BigInt(8));
                ww.t_hi = br[w + 1] - len * Rat(BigInt(1), BigInt(8));
                ww.p_lo = lerp(d.seg_a(ci, si), d.seg_b(ci, si), ww.t_lo);
                ww.p_hi = lerp(d.seg_a(ci, si), d.seg_b(ci, si), ww.t_hi);
                wins.push_back(std::move(ww));
            }
        }
    for (size_t i = wins.size(); i > 1; --i) std::swap(wins[i - 1], wins[rng.below(i)]);
    return wins;
}

inline Rat frac(int num, int den) { return Rat(BigInt(num), BigInt(den)); }

}  // namespace movedetail

// Deterministic in the seed; retries internally until the bounds are met and
// the diagram validates.
inline ValidatedDiagram random_diagram(Surface surface, unsigned max_crossings,
                                       unsigned max_dots, uint64_t seed) {
    for (uint64_t attempt = 0; attempt < 64; ++attempt) {
        Rng rng(seed * 0x100000001b3ULL + attempt);
        ArrowDiagram d;
        d.surface = surface;
        std::set<int> used_x, used_y;
        unsigned ncomp = 1 + static_cast<unsigned>(rng.below(3));
        for (unsigned c = 0; c < ncomp; ++c) {
            for (int tries = 0; tries < 12; ++tries) {
                ArrowDiagram cand = d;
                std::set<int> ux = used_x, uy = used_y;
                bool curl = max_crossings > 0 && rng.below(4) == 0;
                std::vector<Point> comp;
                if (!curl) {
                    int kx[2] = {movedetail::draw_pool(rng, ux), movedetail::draw_pool(rng, ux)};
                    int ky[2] = {movedetail::draw_pool(rng, uy), movedetail::draw_pool(rng, uy)};
                    if (kx[0] > kx[1]) std::swap(kx[0], kx[1]);
                    if (ky[0] > ky[1]) std::swap(ky[0], ky[1]);
                    Rat x1 = movedetail::pool_value(kx[0]), x2 = movedetail::pool_value(kx[1]);
                    Rat y1 = movedetail::pool_value(ky[0]), y2 = movedetail::pool_value(ky[1]);
                    comp = {{x1, y1}, {x2, y1}, {x2, y2}, {x1, y2}};
                } else {
                    int kx[3] = {movedetail::draw_pool(rng, ux), movedetail::draw_pool(rng, ux),
                                 movedetail::draw_pool(rng, ux)};
                    int ky[3] = {movedetail::draw_pool(rng, uy), movedetail::draw_pool(rng, uy),
                                 movedetail::draw_pool(rng, uy)};
                    std::sort(kx, kx + 3);
                    std::sort(ky, ky + 3);
                    Rat xa = movedetail::pool_value(kx[0]), xb = movedetail::pool_value(kx[1]),
                        xc = movedetail::pool_value(kx[2]);
                    Rat ya = movedetail::pool_value(ky[0]), yb = movedetail::pool_value(ky[1]),
                        yc = movedetail::pool_value(ky[2]);
                    comp = {{xa, yb}, {xc, yb}, {xc, yc}, {xb, yc}, {xb, ya}, {xa, ya}};
                }
                cand.comps.push_back(std::move(comp));
                if (movedetail::count_proper_crossings(cand) <= max_crossings) {
                    d = std::move(cand);
                    used_x = std::move(ux);
                    used_y = std::move(uy);
                    break;
                }
            }
        }

        // Decorate every geometric crossing.
        for (size_t ci = 0; ci < d.comps.size(); ++ci)
            for (size_t si = 0; si < d.comps[ci].size(); ++si)
                for (size_t cj = ci; cj < d.comps.size(); ++cj)
                    for (size_t sj = (ci == cj ? si + 1 : size_t(0));
                         sj < d.comps[cj].size(); ++sj) {
                        if (ci == cj &&
                            (sj == si + 1 || (si == 0 && sj == d.comps[ci].size() - 1)))
                            continue;
                        if (seg_intersect(d.seg_a(ci, si), d.seg_b(ci, si),
                                          d.seg_a(cj, sj), d.seg_b(cj, sj))
                                .kind != SegHit::Proper)
                            continue;
                        CrossKey k{static_cast<int>(ci), static_cast<int>(si),
                                   static_cast<int>(cj), static_cast<int>(sj)};
                        k.canonicalize();
                        d.decos[k] = rng.bit();
                    }

        unsigned ndots = max_dots ? static_cast<unsigned>(rng.below(max_dots + 1)) : 0;
        for (unsigned i = 0; i < ndots; ++i) {
            int comp = static_cast<int>(rng.below(d.comps.size()));
            int seg = static_cast<int>(rng.below(d.comps[comp].size()));
            std::vector<Rat> breaks{Rat(0), Rat(1)};
            for (size_t ci = 0; ci < d.comps.size(); ++ci)
                for (size_t si = 0; si < d.comps[ci].size(); ++si) {
                    if (ci == static_cast<size_t>(comp) && si == static_cast<size_t>(seg))
                        continue;
                    if (ci == static_cast<size_t>(comp) &&
                        (si == static_cast<size_t>(seg) + 1 ||
                         (seg == 0 && si == d.comps[ci].size() - 1) ||
                         (si + 1 == static_cast<size_t>(seg)) ||
                         (static_cast<size_t>(seg) == 0 && si == d.comps[ci].size() - 1) ||
                         (seg == static_cast<int>(d.comps[ci].size()) - 1 && si == 0)))
                        continue;
                    SegHit h = seg_intersect(d.seg_a(comp, seg), d.seg_b(comp, seg),
                                             d.seg_a(ci, si), d.seg_b(ci, si));
                    if (h.kind == SegHit::Proper) breaks.push_back(h.ta);
                }
            for (const auto& dot : d.dots)
                if (dot.comp == comp && dot.seg == seg) breaks.push_back(dot.t);
            std::sort(breaks.begin(), breaks.end());
            size_t win = rng.below(breaks.size() - 1);
            if (!(breaks[win] < breaks[win + 1])) continue;
            Rat t = Rat::mid(breaks[win], breaks[win + 1]);
            d.dots.push_back({comp, seg, t, rng.bit() ? 1 : -1});
        }

        try {
            return ValidatedDiagram::validate(std::move(d));
        } catch (const DiagramError&) {
            continue;
        }
    }
    throw MoveError("random_diagram failed to produce a valid diagram");
}

// Splices the requested move into/next to the base diagram. The returned pair
// is identical outside a small box and differs by the move inside it.
inline std::pair<ValidatedDiagram, ValidatedDiagram> make_move_pair(
    const ValidatedDiagram& base, MoveKind kind, uint64_t seed) {
    using namespace movedetail;
    Rng rng(seed);
    const auto& d = base.raw();

    auto finish = [](ArrowDiagram a, ArrowDiagram b) {
        return std::make_pair(ValidatedDiagram::validate(std::move(a)),
                              ValidatedDiagram::validate(std::move(b)));
    };

    if (kind == MoveKind::O4) {
        auto wins = wall_windows(base, rng);
        for (const auto& ww : wins) {
            Rat len = ww.t_hi - ww.t_lo;
            if (!(Rat(0) < len)) continue;
            ArrowDiagram with = d;
            int dir = rng.bit() ? 1 : -1;
            with.dots.push_back({ww.comp, ww.seg, ww.t_lo + len * frac(1, 3), dir});
            with.dots.push_back({ww.comp, ww.seg, ww.t_lo + len * frac(2, 3), -dir});
            return finish(d, std::move(with));
        }
        throw MoveError("omega4: no admissible splice site");
    }

    if (kind == MoveKind::O5) {
        if (base.crossings().empty()) throw MoveError("omega5: base has no crossing");
        const auto& c = base.crossings()[rng.below(base.crossings().size())];
        bool strand_a = rng.bit();
        int comp = strand_a ? c.k.ca : c.k.cb;
        int seg = strand_a ? c.k.sa : c.k.sb;
        Rat tc = strand_a ? c.ta : c.tb;
        auto br = segment_breaks(base, comp, seg);
        Rat prev(0), next(1);
        for (const auto& t : br) {
            if (t < tc && prev < t) prev = t;
            if (tc < t && t < next) next = t;
        }
        int dir = rng.bit() ? 1 : -1;
        ArrowDiagram before = d, after = d;
        before.dots.push_back({comp, seg, Rat::mid(Rat::mid(prev, tc), tc), dir});
        after.dots.push_back({comp, seg, Rat::mid(tc, Rat::mid(tc, next)), dir});
        // The dot pins the strand's fiber height next to it: just past the
        // arrow head the height is near 0, just before the tail it is near 1.
        // The dotted strand is therefore under exactly when the crossing lies
        // on the arrow-head side, and the slide flips the decoration.
        bool dotted_under_before = dir == 1;  // crossing after the dot in traversal
        bool under_a_before = strand_a ? dotted_under_before : !dotted_under_before;
        before.decos[c.k] = under_a_before;
        after.decos[c.k] = !under_a_before;
        return finish(std::move(before), std::move(after));
    }

    if (kind == MoveKind::O1Pos || kind == MoveKind::O1Neg) {
        auto wins = wall_windows(base, rng);
        for (const auto& ww : wins) {
            Frame fr = wall_frame(d.seg_a(ww.comp, ww.seg), d.seg_b(ww.comp, ww.seg),
                                  ww.p_lo);
            Point diff = sub(ww.p_hi, ww.p_lo);
            Rat len = dot_vec(diff, fr.e_dir);
            if (!(Rat(0) < len)) continue;
            Rat u = len * frac(1, 6);
            Box box = frame_box(fr, -u * 2, -u * frac(1, 2), u * 3, len);
            if (!box_clear(base, box, {{ww.comp, ww.seg}})) continue;

            // Curl waypoints; one self-crossing between the wall piece and the
            // west-going run, at eta = u on the wall line.
            std::vector<Point> curl = {fr.at(Rat(0), u * 2), fr.at(u * 2, u * 2),
                                       fr.at(u * 2, u),      fr.at(-u, u),
                                       fr.at(-u, u * 3),     fr.at(Rat(0), u * 3)};
            const int ins = 6;

            ArrowDiagram with = d;
            auto& comp = with.comps[ww.comp];
            comp.insert(comp.begin() + ww.seg + 1, curl.begin(), curl.end());

            // Features on the replaced segment keep their geometric spot:
            // params before the window rescale onto the shortened piece, and
            // anything past the window moves to the last inserted piece.
            Rat t_c0 = ww.t_lo + (ww.t_hi - ww.t_lo) * frac(1, 3);  // param of curl[0]
            Rat t_c5 = ww.t_lo + (ww.t_hi - ww.t_lo) * frac(1, 2);  // param of curl[5]
            std::map<CrossKey, bool> decos;
            for (const auto& [key, ua] : with.decos) {
                CrossKey nk = key;
                bool v = ua;
                auto bump = [&](int& kc, int& ks, const Rat& t) {
                    if (kc != ww.comp) return;
                    if (ks > ww.seg)
                        ks += ins;
                    else if (ks == ww.seg && t > t_c5)
                        ks += ins;
                };
                Rat ta_old, tb_old;
                for (const auto& cr : base.crossings())
                    if (cr.k == key) {
                        ta_old = cr.ta;
                        tb_old = cr.tb;
                    }
                bump(nk.ca, nk.sa, ta_old);
                bump(nk.cb, nk.sb, tb_old);
                bool swapped = std::pair(nk.ca, nk.sa) > std::pair(nk.cb, nk.sb);
                nk.canonicalize();
                decos[nk] = swapped ? !v : v;
            }
            with.decos = std::move(decos);
            for (auto& dot : with.dots) {
                if (dot.comp != ww.comp) continue;
                if (dot.seg > ww.seg) {
                    dot.seg += ins;
                } else if (dot.seg == ww.seg) {
                    if (dot.t < t_c0) {
                        dot.t = dot.t / t_c0;
                    } else {
                        dot.seg += ins;
                        dot.t = (dot.t - t_c5) / (Rat(1) - t_c5);
                    }
                }
            }
            // The new crossing: wall piece (seg) x west run (seg+3).
            // Positive kink: the through-strand (A, the wall) passes over.
            set_deco(with, ww.comp, ww.seg, ww.comp, ww.seg + 3,
                     kind == MoveKind::O1Neg);
            try {
                return finish(d, std::move(with));
            } catch (const DiagramError&) {
                continue;
            }
        }
        throw MoveError("omega1: no admissible splice site");
    }

    if (kind == MoveKind::O2) {
        auto wins = wall_windows(base, rng);
        for (const auto& ww : wins) {
            Frame fr = wall_frame(d.seg_a(ww.comp, ww.seg), d.seg_b(ww.comp, ww.seg),
                                  ww.p_lo);
            Point diff = sub(ww.p_hi, ww.p_lo);
            Rat len = dot_vec(diff, fr.e_dir);
            if (!(Rat(0) < len)) continue;
            Rat w = len * frac(1, 2);
            Box box = frame_box(fr, -w, Rat(0), w, len);
            if (!box_clear(base, box, {{ww.comp, ww.seg}})) continue;

            Rat b1 = len * frac(1, 4), b2 = len * frac(3, 4);
            Rat xr1 = w * frac(1, 2), xr2 = w * frac(3, 4), xp = -w * frac(1, 2);
            auto rect = [&](const Rat& xa, const Rat& xb) {
                return std::vector<Point>{fr.at(xa, b1), fr.at(xb, b1), fr.at(xb, b2),
                                          fr.at(xa, b2)};
            };
            ArrowDiagram apart = d, poked = d;
            apart.comps.push_back(rect(xr1, xr2));
            poked.comps.push_back(rect(xp, xr2));
            int cg = static_cast<int>(d.comps.size());
            bool finger_over = rng.bit();
            for (int s : {0, 2})
                set_deco(poked, ww.comp, ww.seg, cg, s, finger_over);
            if (rng.bit()) {
                int dir = rng.bit() ? 1 : -1;
                apart.dots.push_back({cg, 1, frac(1, 2), dir});
                poked.dots.push_back({cg, 1, frac(1, 2), dir});
            }
            try {
                return finish(std::move(apart), std::move(poked));
            } catch (const DiagramError&) {
                continue;
            }
        }
        throw MoveError("omega2: no admissible splice site");
    }

    // O3: slide a corner of a new rectangle across an existing crossing.
    if (base.crossings().empty()) throw MoveError("omega3: base has no crossing");
    size_t idx = rng.below(base.crossings().size());
    for (size_t probe = 0; probe < base.crossings().size(); ++probe) {
        const auto& c = base.crossings()[(idx + probe) % base.crossings().size()];
        Point da = sub(d.seg_b(c.k.ca, c.k.sa), d.seg_a(c.k.ca, c.k.sa));
        bool a_vertical = da.x.is_zero();
        std::pair<int, int> vs = a_vertical ? std::pair{c.k.ca, c.k.sa}
                                            : std::pair{c.k.cb, c.k.sb};
        std::pair<int, int> hs = a_vertical ? std::pair{c.k.cb, c.k.sb}
                                            : std::pair{c.k.ca, c.k.sa};
        Rat x0 = c.p.x, y0 = c.p.y;
        for (Rat h = frac(1, 2); frac(1, 512) < h; h = h * frac(1, 2)) {
            Box box{x0 - h, y0 - h, x0 + h, y0 + h};
            if (!box_clear(base, box, {vs, hs})) continue;

            Rat dl = h * frac(1, 2);
            Rat xr = x0 + h * frac(3, 4);
            Rat ys = y0 - h * frac(1, 2), yt = y0 + h * frac(3, 4);
            Rat d2 = h * frac(1, 4);
            Rat y1 = y0 + h * frac(1, 2);

            ArrowDiagram sw = d, ne = d;
            int cg = static_cast<int>(d.comps.size());
            sw.comps.push_back({{x0 - dl, ys}, {xr, ys}, {xr, yt}, {x0 - dl, yt}});
            ne.comps.push_back({{x0 + d2, ys},
                                {xr, ys},
                                {xr, yt},
                                {x0 - dl, yt},
                                {x0 - dl, y1},
                                {x0 + d2, y1}});
            bool c_over = rng.bit();
            bool r1 = rng.bit(), r2 = rng.bit();
            // sw: seg0 south x vertical, seg3 west x horizontal (the triangle);
            //     seg2 north x vertical, seg1 east x horizontal (the returns).
            set_deco(sw, vs.first, vs.second, cg, 0, c_over);
            set_deco(sw, hs.first, hs.second, cg, 3, c_over);
            set_deco(sw, vs.first, vs.second, cg, 2, r1);
            set_deco(sw, hs.first, hs.second, cg, 1, r2);
            // ne: seg4 notch-bottom x vertical, seg5 notch-side x horizontal.
            set_deco(ne, vs.first, vs.second, cg, 4, c_over);
            set_deco(ne, hs.first, hs.second, cg, 5, c_over);
            set_deco(ne, vs.first, vs.second, cg, 2, r1);
            set_deco(ne, hs.first, hs.second, cg, 1, r2);
            try {
                return finish(std::move(sw), std::move(ne));
            } catch (const DiagramError&) {
                break;
            }
        }
    }
    throw MoveError("omega3: no admissible splice site");
}

}  // namespace kbsm

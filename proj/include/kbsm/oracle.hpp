#pragma once

// Independent cross-checks for the state-sum bracket: a recursive skein
// evaluator that smooths one crossing at a time geometrically (rebuilding and
// revalidating the diagram at every step), and the Reidemeister-move
// invariance harness.

#include <array>
#include <cstdint>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include "kbsm/moves.hpp"
#include "kbsm/statesum.hpp"

namespace kbsm {

// Param interval of [a,b] inside the closed box (the segment must traverse it).
inline std::pair<Rat, Rat> clip_to_box(const Point& a, const Point& b, const Box& box) {
    Rat t0(0), t1(1);
    auto clip = [&](const Rat& denom, const Rat& numer) -> bool {
        int s = denom.sign();
        if (s == 0) return numer.sign() >= 0;
        Rat t = numer / denom;
        if (s > 0) {
            if (t < t1) t1 = t;
        } else {
            if (t0 < t) t0 = t;
        }
        return true;
    };
    Point dv = sub(b, a);
    bool ok = clip(Rat(0) - dv.x, a.x - box.x1) && clip(dv.x, box.x2 - a.x) &&
              clip(Rat(0) - dv.y, a.y - box.y1) && clip(dv.y, box.y2 - a.y);
    if (!ok || !(t0 < t1)) throw std::logic_error("segment does not traverse the box");
    return {t0, t1};
}

// Replaces one crossing by the two smoothing chords inside a small empty box.
inline ArrowDiagram smooth_crossing(const ValidatedDiagram& vd, size_t kidx, bool positive) {
    const ArrowDiagram& d = vd.raw();
    const Crossing& c = vd.crossings()[kidx];

    Rat h(BigInt(1), BigInt(2));
    Box box;
    for (int iter = 0;; ++iter) {
        if (iter > 128) throw std::logic_error("no clearance around crossing");
        box = Box{c.p.x - h, c.p.y - h, c.p.x + h, c.p.y + h};
        bool ok = true;
        for (size_t ci = 0; ci < d.comps.size() && ok; ++ci)
            for (size_t si = 0; si < d.comps[ci].size() && ok; ++si) {
                bool on_a = static_cast<int>(ci) == c.k.ca && static_cast<int>(si) == c.k.sa;
                bool on_b = static_cast<int>(ci) == c.k.cb && static_cast<int>(si) == c.k.sb;
                if (on_a || on_b) continue;
                if (seg_box_intersects(d.seg_a(ci, si), d.seg_b(ci, si), box)) ok = false;
            }
        ok = ok && !box.contains(d.seg_a(c.k.ca, c.k.sa)) &&
             !box.contains(d.seg_b(c.k.ca, c.k.sa)) && !box.contains(d.seg_a(c.k.cb, c.k.sb)) &&
             !box.contains(d.seg_b(c.k.cb, c.k.sb));
        for (size_t j = 0; ok && j < vd.crossings().size(); ++j)
            if (j != kidx && box.contains(vd.crossings()[j].p)) ok = false;
        for (const auto& dot : d.dots) {
            if (!ok) break;
            if (box.contains(lerp(d.seg_a(dot.comp, dot.seg), d.seg_b(dot.comp, dot.seg), dot.t)))
                ok = false;
        }
        for (const auto& pc : vd.punctures())
            if (box.contains(pc)) ok = false;
        if (ok) break;
        h = h * Rat(BigInt(1), BigInt(2));
    }

    Point a1 = d.seg_a(c.k.ca, c.k.sa), a2 = d.seg_b(c.k.ca, c.k.sa);
    Point b1 = d.seg_a(c.k.cb, c.k.sb), b2 = d.seg_b(c.k.cb, c.k.sb);
    auto [ta0, ta1] = clip_to_box(a1, a2, box);
    auto [tb0, tb1] = clip_to_box(b1, b2, box);

    // Roles: 0 = A before, 1 = A after, 2 = B before, 3 = B after.
    Point cut[4] = {lerp(a1, a2, ta0), lerp(a1, a2, ta1), lerp(b1, b2, tb0), lerp(b1, b2, tb1)};
    auto pr = smoothing_pairing(sub(a2, a1), sub(b2, b1), c.under_a, positive);

    // Cut each involved component into pieces between corridor passages.
    struct Passage {
        int seg;
        Rat t;  // crossing param, used only for ordering
        Rat t_in, t_out;
        int role_in, role_out;
    };
    struct DotMark {
        Point p;
        Point orig_dir;
        int dir;
    };
    struct Piece {
        std::vector<Point> pts;
        int role_start, role_end;
    };
    std::map<int, std::vector<Passage>> by_comp;
    by_comp[c.k.ca].push_back({c.k.sa, c.ta, ta0, ta1, 0, 1});
    by_comp[c.k.cb].push_back({c.k.sb, c.tb, tb0, tb1, 2, 3});

    std::vector<DotMark> marks;
    for (const auto& dot : d.dots)
        marks.push_back({lerp(d.seg_a(dot.comp, dot.seg), d.seg_b(dot.comp, dot.seg), dot.t),
                         sub(d.seg_b(dot.comp, dot.seg), d.seg_a(dot.comp, dot.seg)), dot.dir});

    std::vector<Piece> pieces;
    std::array<std::pair<int, bool>, 4> role_owner{};  // role -> (piece, at_start)
    for (auto& [comp, ps] : by_comp) {
        std::sort(ps.begin(), ps.end(), [](const Passage& x, const Passage& y) {
            if (x.seg != y.seg) return x.seg < y.seg;
            return x.t < y.t;
        });
        const auto& verts = d.comps[comp];
        const int nseg = static_cast<int>(verts.size());
        const size_t m = ps.size();
        for (size_t j = 0; j < m; ++j) {
            const Passage& pj = ps[j];
            const Passage& pk = ps[(j + 1) % m];
            Piece pc;
            pc.role_start = pj.role_out;
            pc.role_end = pk.role_in;
            pc.pts.push_back(cut[pj.role_out]);
            bool same_seg_forward = (j + 1 < m) && pj.seg == pk.seg;
            if (!same_seg_forward) {
                int v = (pj.seg + 1) % nseg;
                while (true) {
                    pc.pts.push_back(verts[v]);
                    if (v == pk.seg) break;
                    v = (v + 1) % nseg;
                }
            }
            pc.pts.push_back(cut[pk.role_in]);
            role_owner[pj.role_out] = {static_cast<int>(pieces.size()), true};
            role_owner[pk.role_in] = {static_cast<int>(pieces.size()), false};
            pieces.push_back(std::move(pc));
        }
    }

    // Stitch pieces into new components following the chosen pairing.
    ArrowDiagram out;
    out.surface = d.surface;
    for (size_t ci = 0; ci < d.comps.size(); ++ci)
        if (static_cast<int>(ci) != c.k.ca && static_cast<int>(ci) != c.k.cb)
            out.comps.push_back(d.comps[ci]);
    std::vector<char> used(pieces.size(), 0);
    for (size_t p0 = 0; p0 < pieces.size(); ++p0) {
        if (used[p0]) continue;
        std::vector<Point> loop;
        int cur = static_cast<int>(p0);
        bool fwd = true;
        while (true) {
            used[cur] = 1;
            const auto& pts = pieces[cur].pts;
            if (fwd)
                loop.insert(loop.end(), pts.begin(), pts.end());
            else
                loop.insert(loop.end(), pts.rbegin(), pts.rend());
            int exit_role = fwd ? pieces[cur].role_end : pieces[cur].role_start;
            int partner = pr[exit_role];
            auto [np, at_start] = role_owner[partner];
            if (np == static_cast<int>(p0) && at_start) break;
            cur = np;
            fwd = at_start;
        }
        out.comps.push_back(std::move(loop));
    }

    // Relocate dots geometrically.
    for (const auto& mk : marks) {
        bool placed = false;
        for (size_t ci = 0; ci < out.comps.size() && !placed; ++ci)
            for (size_t si = 0; si < out.comps[ci].size() && !placed; ++si) {
                Point sa = out.seg_a(ci, si), sb = out.seg_b(ci, si);
                if (mk.p == sa || mk.p == sb || !point_on_segment(mk.p, sa, sb)) continue;
                Point dv = sub(sb, sa);
                Rat t = dv.x.is_zero() ? (mk.p.y - sa.y) / dv.y : (mk.p.x - sa.x) / dv.x;
                int dir = dot_vec(dv, mk.orig_dir).sign() > 0 ? mk.dir : -mk.dir;
                out.dots.push_back({static_cast<int>(ci), static_cast<int>(si), t, dir});
                placed = true;
            }
        if (!placed) throw std::logic_error("failed to relocate a dot after smoothing");
    }

    // Re-derive surviving crossing decorations geometrically.
    for (size_t j = 0; j < vd.crossings().size(); ++j) {
        if (j == kidx) continue;
        const Crossing& cj = vd.crossings()[j];
        Point da = sub(d.seg_b(cj.k.ca, cj.k.sa), d.seg_a(cj.k.ca, cj.k.sa));
        int found_a = -1, found_b = -1;
        int fa_c = 0, fa_s = 0, fb_c = 0, fb_s = 0;
        for (size_t ci = 0; ci < out.comps.size(); ++ci)
            for (size_t si = 0; si < out.comps[ci].size(); ++si) {
                Point sa = out.seg_a(ci, si), sb = out.seg_b(ci, si);
                if (cj.p == sa || cj.p == sb || !point_on_segment(cj.p, sa, sb)) continue;
                if (cross_vec(sub(sb, sa), da).sign() == 0) {
                    found_a = 1;
                    fa_c = static_cast<int>(ci);
                    fa_s = static_cast<int>(si);
                } else {
                    found_b = 1;
                    fb_c = static_cast<int>(ci);
                    fb_s = static_cast<int>(si);
                }
            }
        if (found_a < 0 || found_b < 0)
            throw std::logic_error("failed to relocate a crossing after smoothing");
        movedetail::set_deco(out, fa_c, fa_s, fb_c, fb_s, cj.under_a);
    }
    return out;
}

// K1 recursion: pick one crossing, smooth it both ways geometrically, recurse.
// Crossingless leaves go through classification and reduction.
inline Element bracket_recursive(const ValidatedDiagram& vd, bool highest_first = false) {
    if (vd.crossings().empty()) {
        SmoothContext ctx(vd);
        auto [forest, sum] = ctx.smooth(0);
        Element e = refine_forest(forest)
                        .scaled(Laurent::loop().pow(static_cast<unsigned>(sum.trivial)));
        return normal_form(e, vd.surface());
    }
    size_t k = highest_first ? vd.crossings().size() - 1 : 0;
    ValidatedDiagram pos = ValidatedDiagram::validate(smooth_crossing(vd, k, true));
    ValidatedDiagram neg = ValidatedDiagram::validate(smooth_crossing(vd, k, false));
    return bracket_recursive(pos, highest_first).scaled(Laurent::A(1)) +
           bracket_recursive(neg, highest_first).scaled(Laurent::A(-1));
}

struct TrialRecord {
    int index = 0;
    uint64_t seed = 0;
    MoveKind move = MoveKind::O2;
    bool ok = false;
    bool built = false;
    Element lhs, rhs;
};

struct InvarianceReport {
    std::vector<TrialRecord> trials;
    int failures = 0;

    std::string str() const {
        std::ostringstream out;
        for (const auto& t : trials) {
            out << "TRIAL " << t.index << " seed=" << t.seed << " move=" << move_name(t.move)
                << " result=" << (t.ok ? "OK" : "FAIL") << "\n";
            if (!t.ok) {
                out << "  lhs = " << t.lhs.str() << "\n";
                out << "  rhs = " << t.rhs.str() << "\n";
            }
        }
        out << (failures == 0 ? "OK" : "FAIL") << " " << (trials.size() - failures) << "/"
            << trials.size() << "\n";
        return out.str();
    }
};

// For each trial and move, builds a random base, splices the move pair and
// compares exact brackets. An omega1 pair must differ by exactly -A^{+-3}.
// When a reducer is supplied, both brackets run through it.
inline InvarianceReport check_invariance(Surface surface, const std::vector<MoveKind>& moves,
                                         int trials, uint64_t seed,
                                         unsigned max_crossings = 4, unsigned max_dots = 4,
                                         Reducer* reducer = nullptr) {
    InvarianceReport rep;
    int n = 0;
    for (int t = 0; t < trials; ++t) {
        for (MoveKind mk : moves) {
            ++n;
            uint64_t tseed = seed * 0x9e3779b97f4a7c15ULL + static_cast<uint64_t>(n);
            TrialRecord rec;
            rec.index = n;
            rec.seed = tseed;
            rec.move = mk;
            for (uint64_t a = 0; a < 50 && !rec.built; ++a) {
                uint64_t bs = tseed + a * 0x632be59bd9b4e019ULL;
                try {
                    ValidatedDiagram base = random_diagram(surface, max_crossings, max_dots, bs);
                    auto [lhs_d, rhs_d] = make_move_pair(base, mk, bs ^ 0xabcdefULL);
                    rec.lhs = reducer ? kbsm_bracket(lhs_d, *reducer) : kbsm_bracket(lhs_d);
                    rec.rhs = reducer ? kbsm_bracket(rhs_d, *reducer) : kbsm_bracket(rhs_d);
                    rec.built = true;
                } catch (const MoveError&) {
                    continue;
                }
            }
            if (!rec.built) {
                rec.ok = false;
            } else if (mk == MoveKind::O1Pos) {
                rec.ok = rec.rhs == rec.lhs.scaled(-Laurent::A(3));
            } else if (mk == MoveKind::O1Neg) {
                rec.ok = rec.rhs == rec.lhs.scaled(-Laurent::A(-3));
            } else {
                rec.ok = rec.lhs == rec.rhs;
            }
            rep.failures += rec.ok ? 0 : 1;
            rep.trials.push_back(std::move(rec));
        }
    }
    return rep;
}

}  // namespace kbsm

#pragma once

// State expansion of a validated diagram. Crossings are smoothed
// combinatorially: the diagram is cut into arcs between crossing passages once,
// and each state reconnects arc ends at every crossing according to its
// marker. Each resulting loop is classified by which punctures it encloses
// (exact even-odd ray tests) and by its net arrow count (counterclockwise
// positive; t-type components count clockwise as positive). Trivial loops are
// removed recursively from the inside out, contributing the factor
// (-A^2 - A^-2) each; the survivors form a containment forest.
//
// The refined step collapses X subtrees bottom-up through P_n and P_{n,k} and
// linearizes the remaining y/z/t chains into words.

#include <algorithm>
#include <array>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "kbsm/diagram.hpp"
#include "kbsm/element.hpp"
#include "kbsm/reduce.hpp"
#include "kbsm/xpoly.hpp"

namespace kbsm {

// How a marker reconnects the four strand ends of a crossing. Roles: 0 = A
// before, 1 = A after, 2 = B before, 3 = B after ("before" means the lower
// parameter side; dir_a, dir_b are the segments' direction vectors). Each
// under end joins the over end reached by rotating its outward direction
// counterclockwise by less than pi for a positive marker, clockwise for a
// negative one.
inline std::array<int, 4> smoothing_pairing(const Point& dir_a, const Point& dir_b,
                                            bool under_a, bool positive) {
    Point outward[4] = {{Rat(0) - dir_a.x, Rat(0) - dir_a.y},
                        dir_a,
                        {Rat(0) - dir_b.x, Rat(0) - dir_b.y},
                        dir_b};
    int under0 = under_a ? 0 : 2;
    int over0 = under_a ? 2 : 0;
    std::array<int, 4> pr{-1, -1, -1, -1};
    for (int du : {0, 1}) {
        int u = under0 + du;
        int match = -1;
        for (int dv : {0, 1}) {
            int o = over0 + dv;
            int s = cross_vec(outward[u], outward[o]).sign();
            if ((positive && s > 0) || (!positive && s < 0)) match = o;
        }
        if (match < 0) throw std::logic_error("degenerate crossing pairing");
        pr[u] = match;
        pr[match] = u;
    }
    return pr;
}

struct ForestNode {
    int kind = 0;  // 0 = X, 1 = Y, 2 = Z, 3 = T
    int arrows = 0;
    std::vector<ForestNode> kids;

    std::string key() const {
        std::string k = std::to_string(kind) + ":" + std::to_string(arrows) + "(";
        std::vector<std::string> kk;
        kk.reserve(kids.size());
        for (const auto& c : kids) kk.push_back(c.key());
        std::sort(kk.begin(), kk.end());
        for (const auto& s : kk) k += s + ",";
        return k + ")";
    }
};

using Forest = std::vector<ForestNode>;

inline std::string forest_key(const Forest& f) {
    std::vector<std::string> kk;
    kk.reserve(f.size());
    for (const auto& n : f) kk.push_back(n.key());
    std::sort(kk.begin(), kk.end());
    std::string out;
    for (const auto& s : kk) out += s + ";";
    return out;
}

struct StateSummary {
    int positive = 0;
    int negative = 0;
    int trivial = 0;
};

class SmoothContext {
public:
    explicit SmoothContext(const ValidatedDiagram& vd)
        : SmoothContext(vd, vd.punctures()) {}

    SmoothContext(const ValidatedDiagram& vd, std::vector<Point> punctures)
        : vd_(vd), punctures_(std::move(punctures)) {
        build_arcs();
        build_pairings();
        build_parities();
    }

    size_t num_crossings() const { return vd_.crossings().size(); }

    std::pair<Forest, StateSummary> smooth(uint64_t state) const {
        const size_t nc = num_crossings();
        StateSummary sum;
        for (size_t k = 0; k < nc; ++k)
            (state >> k) & 1 ? ++sum.positive : ++sum.negative;

        // Trace loops.
        struct Loop {
            int first_arc = -1;
            Rat area2;
            int net = 0;
            std::vector<char> parity;
            std::vector<int> arcs;
        };
        std::vector<Loop> loops;
        std::vector<char> visited(arcs_.size(), 0);
        for (size_t a0 = 0; a0 < arcs_.size(); ++a0) {
            if (visited[a0]) continue;
            Loop lp;
            lp.first_arc = static_cast<int>(a0);
            lp.parity.assign(punctures_.size(), 0);
            int arc = static_cast<int>(a0);
            bool fwd = true;
            while (true) {
                visited[arc] = 1;
                lp.arcs.push_back(arc);
                const Arc& A = arcs_[arc];
                lp.area2 += fwd ? A.shoelace2 : -A.shoelace2;
                lp.net += fwd ? A.dot_net : -A.dot_net;
                for (size_t q = 0; q < punctures_.size(); ++q)
                    lp.parity[q] ^= A.punc_parity[q];
                if (A.closed) break;
                int exit_end = fwd ? A.end_end : A.start_end;
                size_t k = static_cast<size_t>(exit_end) / 4;
                int role = exit_end % 4;
                int partner_role =
                    ((state >> k) & 1) ? pos_pair_[k][role] : neg_pair_[k][role];
                int partner = static_cast<int>(4 * k) + partner_role;
                arc = end_owner_[partner].first;
                fwd = end_owner_[partner].second;
                if (arc == static_cast<int>(a0) && fwd) break;
            }
            loops.push_back(std::move(lp));
        }

        // Classify.
        const size_t n = loops.size();
        std::vector<int> kind(n), arrows(n);
        for (size_t i = 0; i < n; ++i) {
            int s = loops[i].area2.sign();
            if (s == 0) throw std::logic_error("smoothed loop with zero area");
            int net_ccw = s > 0 ? loops[i].net : -loops[i].net;
            int kd = 0;
            if (punctures_.size() == 1) {
                kd = loops[i].parity[0] ? 1 : 0;
            } else if (punctures_.size() == 2) {
                bool l = loops[i].parity[0], r = loops[i].parity[1];
                kd = l && r ? 3 : (l ? 1 : (r ? 2 : 0));
            }
            kind[i] = kd;
            arrows[i] = kd == 3 ? -net_ccw : net_ccw;
        }

        // Containment. inside[i][j]: loop i strictly inside loop j.
        std::vector<std::vector<char>> inside(n, std::vector<char>(n, 0));
        for (size_t i = 0; i < n; ++i)
            for (size_t j = 0; j < n; ++j) {
                if (i == j) continue;
                char par = 0;
                for (int b : loops[j].arcs) par ^= rep_parity_[loops[i].first_arc][b];
                inside[i][j] = par;
            }
        std::vector<int> depth(n, 0), parent(n, -1);
        for (size_t i = 0; i < n; ++i)
            for (size_t j = 0; j < n; ++j) depth[i] += inside[i][j];
        for (size_t i = 0; i < n; ++i)
            for (size_t j = 0; j < n; ++j)
                if (inside[i][j] && depth[j] == depth[i] - 1) parent[i] = static_cast<int>(j);

        check_forest_invariants(kind, inside, n);

        // Trivial removal: an X loop whose whole subtree is arrowless.
        std::vector<std::vector<int>> kids(n);
        for (size_t i = 0; i < n; ++i)
            if (parent[i] >= 0) kids[parent[i]].push_back(static_cast<int>(i));
        std::vector<char> subtree_arrowless(n, 0);
        // Process by decreasing depth so children are done first.
        std::vector<size_t> order(n);
        for (size_t i = 0; i < n; ++i) order[i] = i;
        std::sort(order.begin(), order.end(),
                  [&](size_t a, size_t b) { return depth[a] > depth[b]; });
        for (size_t i : order) {
            bool ok = arrows[i] == 0;
            for (int c : kids[i]) ok = ok && subtree_arrowless[c];
            subtree_arrowless[i] = ok;
        }
        std::vector<char> removed(n, 0);
        for (size_t i = 0; i < n; ++i)
            if (kind[i] == 0 && subtree_arrowless[i]) {
                removed[i] = 1;
                ++sum.trivial;
            }

        // Assemble the forest over the survivors. A removed loop's surviving
        // descendants (none exist: removal is subtree-wide for X) need no
        // re-parenting since X subtrees are X-only.
        std::vector<ForestNode> built(n);
        Forest roots;
        for (size_t idx = 0; idx < n; ++idx) {
            size_t i = order[idx];  // children first
            if (removed[i]) continue;
            ForestNode node;
            node.kind = kind[i];
            node.arrows = arrows[i];
            for (int c : kids[i])
                if (!removed[c]) node.kids.push_back(std::move(built[c]));
            built[i] = std::move(node);
        }
        for (size_t i = 0; i < n; ++i)
            if (!removed[i] && parent[i] < 0) roots.push_back(std::move(built[i]));
        return {std::move(roots), sum};
    }

private:
    struct Arc {
        int comp = 0;
        bool closed = false;
        std::vector<Point> pts;
        int start_end = -1, end_end = -1;
        int dot_net = 0;
        Rat shoelace2;
        std::vector<char> punc_parity;
        Point rep;
    };

    const ValidatedDiagram& vd_;
    std::vector<Point> punctures_;
    std::vector<Arc> arcs_;
    std::vector<std::pair<int, bool>> end_owner_;  // end id -> (arc, enters at start)
    std::vector<std::array<int, 4>> pos_pair_, neg_pair_;
    std::vector<std::vector<char>> rep_parity_;

    struct Passage {
        int seg;
        Rat t;
        int end_before, end_after;
        Point p;
    };

    void build_arcs() {
        const auto& d = vd_.raw();
        const auto& xs = vd_.crossings();
        end_owner_.assign(4 * xs.size(), {-1, false});

        for (size_t ci = 0; ci < d.comps.size(); ++ci) {
            std::vector<Passage> ps;
            for (size_t k = 0; k < xs.size(); ++k) {
                const auto& c = xs[k];
                if (c.k.ca == static_cast<int>(ci))
                    ps.push_back({c.k.sa, c.ta, static_cast<int>(4 * k), static_cast<int>(4 * k + 1), c.p});
                if (c.k.cb == static_cast<int>(ci))
                    ps.push_back({c.k.sb, c.tb, static_cast<int>(4 * k + 2), static_cast<int>(4 * k + 3), c.p});
            }
            std::sort(ps.begin(), ps.end(), [](const Passage& a, const Passage& b) {
                if (a.seg != b.seg) return a.seg < b.seg;
                return a.t < b.t;
            });
            const auto& comp = d.comps[ci];
            const int nseg = static_cast<int>(comp.size());

            // Dots of this component in cyclic (seg, t) order.
            std::vector<Dot> cdots;
            for (const auto& dot : d.dots)
                if (dot.comp == static_cast<int>(ci)) cdots.push_back(dot);

            if (ps.empty()) {
                Arc a;
                a.comp = static_cast<int>(ci);
                a.closed = true;
                a.pts = comp;
                for (const auto& dot : cdots) a.dot_net += dot.dir;
                for (int i = 0; i < nseg; ++i)
                    a.shoelace2 += cross_vec(comp[i], comp[(i + 1) % nseg]);
                a.rep = lerp(comp[0], comp[1], Rat(BigInt(1), BigInt(2)));
                arcs_.push_back(std::move(a));
                continue;
            }

            auto cyclic_after = [&](int seg, const Rat& t, int pseg, const Rat& pt,
                                    int nseg_, const Rat& nt, bool wraps) {
                // Is (seg,t) inside the cyclic interval (p, n]?
                auto less = [](int s1, const Rat& t1, int s2, const Rat& t2) {
                    return s1 < s2 || (s1 == s2 && t1 < t2);
                };
                if (!wraps) return less(pseg, pt, seg, t) && less(seg, t, nseg_, nt);
                return less(pseg, pt, seg, t) || less(seg, t, nseg_, nt);
            };

            const size_t m = ps.size();
            for (size_t j = 0; j < m; ++j) {
                const Passage& pj = ps[j];
                const Passage& pk = ps[(j + 1) % m];
                Arc a;
                a.comp = static_cast<int>(ci);
                a.start_end = pj.end_after;
                a.end_end = pk.end_before;
                a.pts.push_back(pj.p);
                bool same_seg_forward = (j + 1 < m) && pj.seg == pk.seg;
                if (!same_seg_forward) {
                    int v = (pj.seg + 1) % nseg;
                    while (true) {
                        a.pts.push_back(comp[v]);
                        if (v == pk.seg) break;
                        v = (v + 1) % nseg;
                    }
                }
                a.pts.push_back(pk.p);
                for (size_t i = 0; i + 1 < a.pts.size(); ++i)
                    a.shoelace2 += cross_vec(a.pts[i], a.pts[i + 1]);
                bool wraps = j + 1 == m;
                for (const auto& dot : cdots)
                    if (m == 1 || cyclic_after(dot.seg, dot.t, pj.seg, pj.t, pk.seg, pk.t, wraps))
                        a.dot_net += dot.dir;
                a.rep = lerp(a.pts[0], a.pts[1], Rat(BigInt(1), BigInt(2)));
                end_owner_[pj.end_after] = {static_cast<int>(arcs_.size()), true};
                end_owner_[pk.end_before] = {static_cast<int>(arcs_.size()), false};
                arcs_.push_back(std::move(a));
            }
        }
    }

    void build_pairings() {
        const auto& d = vd_.raw();
        const auto& xs = vd_.crossings();
        pos_pair_.resize(xs.size());
        neg_pair_.resize(xs.size());
        for (size_t k = 0; k < xs.size(); ++k) {
            const auto& c = xs[k];
            Point ua = sub(d.seg_b(c.k.ca, c.k.sa), d.seg_a(c.k.ca, c.k.sa));
            Point ub = sub(d.seg_b(c.k.cb, c.k.sb), d.seg_a(c.k.cb, c.k.sb));
            pos_pair_[k] = smoothing_pairing(ua, ub, c.under_a, true);
            neg_pair_[k] = smoothing_pairing(ua, ub, c.under_a, false);
        }
    }

    void build_parities() {
        std::vector<Point> sources = punctures_;
        std::vector<Point> verts;
        for (const auto& a : arcs_) {
            sources.push_back(a.rep);
            for (const auto& p : a.pts) verts.push_back(p);
        }
        Point dir = generic_direction(sources, verts);

        auto arc_parity = [&](const Point& origin, const Arc& a) {
            int par = 0;
            auto edge = [&](const Point& u, const Point& v) {
                auto r = ray_crosses(origin, dir, u, v);
                if (!r) throw std::logic_error("degenerate ray despite generic direction");
                if (*r) par ^= 1;
            };
            for (size_t i = 0; i + 1 < a.pts.size(); ++i) edge(a.pts[i], a.pts[i + 1]);
            if (a.closed) edge(a.pts.back(), a.pts.front());
            return par;
        };

        for (auto& a : arcs_) {
            a.punc_parity.clear();
            for (const auto& pc : punctures_) a.punc_parity.push_back(arc_parity(pc, a));
        }
        rep_parity_.assign(arcs_.size(), std::vector<char>(arcs_.size(), 0));
        for (size_t i = 0; i < arcs_.size(); ++i)
            for (size_t j = 0; j < arcs_.size(); ++j)
                if (i != j) rep_parity_[i][j] = arc_parity(arcs_[i].rep, arcs_[j]);
    }

    static void check_forest_invariants(const std::vector<int>& kind,
                                        const std::vector<std::vector<char>>& inside,
                                        size_t n) {
        for (size_t i = 0; i < n; ++i)
            for (size_t j = i + 1; j < n; ++j) {
                if (kind[i] != 0 && kind[i] == kind[j] && !inside[i][j] && !inside[j][i])
                    throw std::logic_error("same-kind loops are not nested");
                if (kind[i] == 3 && (kind[j] == 1 || kind[j] == 2) && !inside[j][i])
                    throw std::logic_error("y/z loop outside a t loop");
                if (kind[j] == 3 && (kind[i] == 1 || kind[i] == 2) && !inside[i][j])
                    throw std::logic_error("y/z loop outside a t loop");
                if (kind[i] == 0 && kind[j] != 0 && inside[j][i])
                    throw std::logic_error("puncture loop inside an x loop");
                if (kind[j] == 0 && kind[i] != 0 && inside[i][j])
                    throw std::logic_error("puncture loop inside an x loop");
            }
    }
};

// Collapses an X subtree to a polynomial in x.
inline XPoly collapse_x(const ForestNode& node) {
    if (node.kind != 0) throw std::logic_error("collapse_x on a puncture loop");
    XPoly prod = XPoly::one();
    for (const auto& kid : node.kids) prod = prod * collapse_x(kid);
    XPoly out;
    for (const auto& [deg, coeff] : prod.coeffs()) out += p_nk(node.arrows, deg).scaled(coeff);
    return out;
}

// Linearizes a forest into an element over words: X subtrees through
// P_n/P_{n,k}, y/z/t chains in region order with attached x-multiplicities.
inline Element refine_forest(const Forest& forest) {
    struct ChainItem {
        int arrows;
        XPoly slot;  // x-circles attached to this letter's region
    };
    std::vector<ChainItem> chains[3];
    XPoly central = XPoly::one();

    // Walk the nest. For each Y/Z/T node record its depth within its own kind.
    XPoly top_x = XPoly::one();
    std::vector<std::pair<const ForestNode*, std::array<int, 3>>> stack;
    for (const auto& r : forest) stack.push_back({&r, {0, 0, 0}});
    std::vector<std::pair<const ForestNode*, std::array<int, 3>>> letter_nodes;
    while (!stack.empty()) {
        auto [node, d] = stack.back();
        stack.pop_back();
        if (node->kind == 0) {
            // X subtree: attach to the region of its parent (handled below via
            // ownership); top-level X handled separately.
            continue;
        }
        letter_nodes.push_back({node, d});
        auto dn = d;
        dn[node->kind - 1] += 1;
        for (const auto& kid : node->kids) stack.push_back({&kid, dn});
    }

    int depth_count[3] = {0, 0, 0};
    for (const auto& [node, d] : letter_nodes)
        depth_count[node->kind - 1] =
            std::max(depth_count[node->kind - 1], d[node->kind - 1] + 1);
    for (int k = 0; k < 3; ++k)
        chains[k].assign(depth_count[k], ChainItem{0, XPoly::one()});

    std::vector<char> seen[3];
    for (int k = 0; k < 3; ++k) seen[k].assign(depth_count[k], 0);
    for (const auto& [node, d] : letter_nodes) {
        int k = node->kind - 1;
        int depth = d[k];
        if (seen[k][depth]) throw std::logic_error("two same-kind loops at equal depth");
        seen[k][depth] = 1;
        // Text index: y/z chains innermost first, t chain outermost first.
        int len = depth_count[k];
        int idx = k == 2 ? depth : len - 1 - depth;
        chains[k][idx].arrows = node->arrows;
        // X children of this node sit immediately inside it.
        XPoly slot = XPoly::one();
        for (const auto& kid : node->kids)
            if (kid.kind == 0) slot = slot * collapse_x(kid);
        if (k == 2) {
            // Inside t_depth: before the next inner t letter, or central.
            if (idx + 1 < len)
                chains[2][idx + 1].slot = chains[2][idx + 1].slot * slot;
            else
                central = central * slot;
        } else {
            chains[k][idx].slot = chains[k][idx].slot * slot;
        }
    }
    for (const auto& r : forest)
        if (r.kind == 0) top_x = top_x * collapse_x(r);
    if (depth_count[2] > 0)
        chains[2][0].slot = chains[2][0].slot * top_x;  // outside the outermost t
    else
        central = central * top_x;

    // Expand multilinearly.
    struct Partial {
        Laurent coeff;
        Word::Chains chains;
    };
    Word::Chains skeleton;
    for (int k = 0; k < 3; ++k)
        for (const auto& item : chains[k]) skeleton.chain[k].push_back({0, item.arrows});
    std::vector<Partial> acc{{Laurent::one(), skeleton}};
    auto apply_slot = [&acc](const XPoly& poly, auto&& assign) {
        std::vector<Partial> next;
        for (const auto& part : acc)
            for (const auto& [deg, coeff] : poly.coeffs()) {
                Partial np = part;
                np.coeff *= coeff;
                assign(np.chains, static_cast<int>(deg));
                next.push_back(std::move(np));
            }
        acc = std::move(next);
    };
    for (int k = 0; k < 3; ++k)
        for (size_t i = 0; i < chains[k].size(); ++i)
            apply_slot(chains[k][i].slot, [k, i](Word::Chains& ch, int deg) {
                ch.chain[k][i].x_before = deg;
            });
    apply_slot(central, [](Word::Chains& ch, int deg) { ch.central = deg; });

    Element out;
    for (const auto& part : acc) out.add_term(part.chains.word(), part.coeff);
    return out;
}

struct RawBracket {
    std::map<std::string, std::pair<Forest, Laurent>> groups;  // by forest key
    size_t states = 0;
};

inline RawBracket bracket_raw(const ValidatedDiagram& vd) {
    SmoothContext ctx(vd);
    const size_t nc = ctx.num_crossings();
    if (nc > 24) throw std::length_error("too many crossings for full state expansion");
    RawBracket out;
    for (uint64_t state = 0; state < (uint64_t(1) << nc); ++state) {
        auto [forest, sum] = ctx.smooth(state);
        Laurent coeff = Laurent::A(sum.positive - sum.negative) *
                        Laurent::loop().pow(static_cast<unsigned>(sum.trivial));
        auto key = forest_key(forest);
        auto it = out.groups.find(key);
        if (it == out.groups.end())
            out.groups.emplace(key, std::make_pair(std::move(forest), coeff));
        else
            it->second.second += coeff;
        ++out.states;
    }
    if (out.states != (uint64_t(1) << nc))
        throw std::logic_error("state count mismatch");
    return out;
}

inline Element kbsm_bracket(const ValidatedDiagram& vd) {
    RawBracket raw = bracket_raw(vd);
    Element e;
    for (const auto& [key, grp] : raw.groups) e += refine_forest(grp.first).scaled(grp.second);
    return normal_form(e, vd.surface());
}

inline Element kbsm_bracket(const ValidatedDiagram& vd, Reducer& reducer) {
    RawBracket raw = bracket_raw(vd);
    Element e;
    for (const auto& [key, grp] : raw.groups) e += refine_forest(grp.first).scaled(grp.second);
    return reducer.normal_form(e);
}

}  // namespace kbsm

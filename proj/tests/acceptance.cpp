// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Every tolerance is exact equality; each criterion also enforces its
// own wall-clock budget.

#include <chrono>
#include <cstdio>
#include <functional>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "kbsm/oracle.hpp"

using namespace kbsm;

namespace {

int g_failures = 0;

void criterion(int number, const std::string& name, double budget_seconds,
               const std::function<bool(std::string&)>& body) {
    std::string detail;
    auto t0 = std::chrono::steady_clock::now();
    bool ok = false;
    try {
        ok = body(detail);
    } catch (const std::exception& e) {
        detail = std::string("exception: ") + e.what();
    }
    double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (dt > budget_seconds) {
        ok = false;
        detail += (detail.empty() ? "" : "; ") + std::string("over time budget");
    }
    ++g_failures;
    if (ok) --g_failures;
    std::printf("%s criterion %d: %s (%.2fs%s%s)\n", ok ? "PASS" : "FAIL", number,
                name.c_str(), dt, detail.empty() ? "" : " - ", detail.c_str());
    std::fflush(stdout);
}

Element term(const char* w, Laurent c, Surface s) {
    return Element::term(Word::parse(w, s), std::move(c));
}

std::vector<Word> basis_words_up_to(Surface s, int max_sum) {
    std::vector<Word> out;
    auto push = [&](std::vector<Token> toks) {
        Word w(std::move(toks));
        if (w.is_basis(s)) out.push_back(std::move(w));
    };
    if (s == Surface::Disk) {
        for (int n = 0; n <= max_sum; ++n) {
            std::vector<Token> t(static_cast<size_t>(n), Token::x());
            push(std::move(t));
        }
        return out;
    }
    int zmax = s == Surface::Pants ? max_sum : 0;
    for (int a = 0; a <= max_sum; ++a)
        for (int ap = 0; ap <= 1; ++ap)
            for (int b = 0; b <= zmax; ++b)
                for (int bp = 0; bp <= (s == Surface::Pants ? 1 : 0); ++bp)
                    for (int c = 0; c <= zmax; ++c)
                        for (int cp = 0; cp <= (s == Surface::Pants ? 1 : 0); ++cp)
                            for (int d = 0; d <= max_sum; ++d) {
                                if (a + ap + b + bp + c + cp + d > max_sum) continue;
                                std::vector<Token> toks;
                                for (int i = 0; i < a; ++i)
                                    toks.push_back(Token::letter(LetterKind::Y, 0));
                                if (ap) toks.push_back(Token::letter(LetterKind::Y, 1));
                                for (int i = 0; i < b; ++i)
                                    toks.push_back(Token::letter(LetterKind::Z, 0));
                                if (bp) toks.push_back(Token::letter(LetterKind::Z, 1));
                                for (int i = 0; i < c; ++i)
                                    toks.push_back(Token::letter(LetterKind::T, 0));
                                if (cp) toks.push_back(Token::letter(LetterKind::T, 1));
                                for (int i = 0; i < d; ++i) toks.push_back(Token::x());
                                push(std::move(toks));
                            }
    return out;
}

// All words over the pants alphabet with the given length bound and arrow
// band, respecting the letter-type order.
void enumerate_words(int max_len, int arrow_lo, int arrow_hi,
                     const std::function<void(const Word&)>& visit) {
    std::vector<Token> cur;
    std::function<void(int)> rec = [&](int min_kind) {
        visit(Word(std::vector<Token>(cur)));
        if (static_cast<int>(cur.size()) == max_len) return;
        cur.push_back(Token::x());
        rec(min_kind);
        cur.pop_back();
        for (int k = min_kind; k < 3; ++k)
            for (int m = arrow_lo; m <= arrow_hi; ++m) {
                cur.push_back(Token::letter(static_cast<LetterKind>(k), m));
                rec(k);
                cur.pop_back();
            }
    };
    rec(0);
}

Element exhaustive_srr(const Word& w, std::map<Word, Element>& memo, bool& agree) {
    auto it = memo.find(w);
    if (it != memo.end()) return it->second;
    auto sites = Reducer::srr_sites(w.chains());
    Element result;
    if (sites.empty()) {
        result = Element::term(w, Laurent::one());
    } else {
        bool first = true;
        for (const auto& site : sites) {
            Element via;
            for (const auto& [c, t] : Reducer::srr_apply(w, site))
                via += exhaustive_srr(t, memo, agree).scaled(c);
            if (first) {
                result = via;
                first = false;
            } else if (via != result) {
                agree = false;
            }
        }
    }
    memo.emplace(w, result);
    return result;
}

}  // namespace

int main() {
    criterion(1, "replacement polynomial values and recursion residuals", 1.0,
              [](std::string& detail) {
                  bool ok = true;
                  ok = ok && p_n(0) == XPoly::constant(Laurent::loop());
                  ok = ok && p_n(1) == XPoly::x_power(1);
                  ok = ok && p_n(-1) == XPoly::term(Laurent::A(-6), 1);
                  ok = ok && p_n(2) == XPoly::term(-Laurent::A(-2), 2) +
                                           XPoly::constant(Laurent::A(4) + Laurent::one());
                  const XPoly x = XPoly::x_power(1);
                  for (int n = -12; n <= 12 && ok; ++n) {
                      XPoly res = p_n(n) + (x * p_n(n - 1)).scaled(Laurent::A(-2)) +
                                  p_n(n - 2).scaled(Laurent::A(2));
                      ok = res.is_zero();
                      if (!ok) detail = "P_n residual at n=" + std::to_string(n);
                  }
                  for (int n = -8; n <= 8 && ok; ++n)
                      for (unsigned k = 0; k <= 6 && ok; ++k) {
                          if (k == 0) {
                              ok = p_nk(n, 0) == p_n(n);
                              continue;
                          }
                          XPoly res = p_nk(n, k) +
                                      p_nk(n + 1, k - 1).scaled(Laurent::A(4) - Laurent::one()) +
                                      (x * p_nk(n, k - 1)).scaled(-Laurent::A(-2));
                          ok = res.is_zero();
                          if (!ok) detail = "P_{n,k} residual at n=" + std::to_string(n);
                      }
                  return ok;
              });

    criterion(2, "golden reduction identities", 1.0, [](std::string& detail) {
        Surface s = Surface::Annulus;
        bool ok = true;
        Element yy = normal_form(Word::parse("y' y", s), s);
        ok = ok && yy == term("x", Laurent::one() - Laurent::A(-4), s) +
                       term("y y'", Laurent::A(2), s);
        if (!ok) detail = "reduce(y'y)";
        Element lhs = Element::from_xpoly(p_n(-1)).scaled(Laurent::A(1)) + yy.scaled(Laurent::A(-1));
        bool ok2 = lhs == term("y y'", Laurent::A(1), s) + term("x", Laurent::A(-1), s);
        if (!ok2) detail = "A P_-1 + A^-1 reduce(y'y)";
        Element lhs2 = normal_form(Word::parse("y_-1 y'", s), s).scaled(Laurent::A(1)) +
                       Element::from_xpoly(p_n(2)).scaled(Laurent::A(-1));
        bool ok3 = lhs2 == Element::unit(-Laurent::A(3) - Laurent::A(-1)) +
                           term("y y", Laurent::A(-1), s);
        if (!ok3) detail = "n=0,m=1 case";
        return ok && ok2 && ok3;
    });

    criterion(3, "basis stability for exponent sums <= 5", 30.0, [](std::string& detail) {
        int checked = 0;
        for (Surface s : {Surface::Disk, Surface::Annulus, Surface::Pants}) {
            for (const Word& w : basis_words_up_to(s, 5)) {
                ++checked;
                if (normal_form(w, s) != Element::term(w, Laurent::one())) {
                    detail = std::string(surface_name(s)) + " word " + w.str();
                    return false;
                }
            }
        }
        detail = std::to_string(checked) + " basis words";
        return checked > 250;
    });

    criterion(4, "move invariance, 500 trials per move per surface", 600.0,
              [](std::string& detail) {
                  const std::vector<std::pair<MoveKind, uint64_t>> moves = {
                      {MoveKind::O1Pos, 11}, {MoveKind::O1Neg, 12}, {MoveKind::O2, 13},
                      {MoveKind::O3, 14},    {MoveKind::O4, 15},    {MoveKind::O5, 16}};
                  int total = 0;
                  for (Surface s : {Surface::Disk, Surface::Annulus, Surface::Pants})
                      for (const auto& [mk, seed] : moves) {
                          InvarianceReport rep = check_invariance(
                              s, {mk}, 500, seed * 1000 + static_cast<uint64_t>(s), 4, 4);
                          total += static_cast<int>(rep.trials.size());
                          for (const auto& t : rep.trials)
                              if (!t.built) {
                                  detail = std::string("no splice site: ") + move_name(mk) +
                                           " on " + surface_name(s);
                                  return false;
                              }
                          if (rep.failures != 0) {
                              detail = std::string(move_name(mk)) + " on " + surface_name(s) +
                                       ": " + std::to_string(rep.failures) + " failures";
                              return false;
                          }
                      }
                  detail = std::to_string(total) + " move pairs";
                  return true;
              });

    criterion(5, "recursive oracle equals the state sum on 200 diagrams per surface", 300.0,
              [](std::string& detail) {
                  for (Surface s : {Surface::Disk, Surface::Annulus, Surface::Pants})
                      for (uint64_t i = 0; i < 200; ++i) {
                          ValidatedDiagram vd = random_diagram(s, 5, 4, 70000 + i * 37 +
                                                                            static_cast<uint64_t>(s));
                          if (bracket_recursive(vd) != kbsm_bracket(vd)) {
                              detail = std::string(surface_name(s)) + " seed " +
                                       std::to_string(70000 + i * 37 + static_cast<uint64_t>(s));
                              return false;
                          }
                      }
                  return true;
              });

    criterion(6, "arrow-pushing relations for all letters, n in [-4,4], contexts <= 3", 60.0,
              [](std::string& detail) {
                  Reducer red(Surface::Pants);
                  auto nf = [&](const Word& w) { return red.nf(w); };
                  int checked = 0;
                  // Context tokens: x and one-arrow-or-less letters.
                  std::vector<Word> contexts;
                  enumerate_words(3, 0, 1, [&](const Word& w) { contexts.push_back(w); });
                  for (const Word& ctx : contexts) {
                      const auto& toks = ctx.tokens();
                      for (size_t cut = 0; cut <= toks.size(); ++cut)
                          for (int kind = 0; kind < 3; ++kind)
                              for (int n = -4; n <= 4; ++n) {
                                  // The letter slots into the context; the side
                                  // circle of the relation sits just inside or
                                  // just beside it, placed by region, not text.
                                  auto mk = [&](int m) -> std::optional<Word> {
                                      std::vector<Token> out(toks.begin(), toks.begin() + cut);
                                      out.push_back(
                                          Token::letter(static_cast<LetterKind>(kind), m));
                                      out.insert(out.end(), toks.begin() + cut, toks.end());
                                      try {
                                          return Word(std::move(out));
                                      } catch (const WordError&) {
                                          return std::nullopt;
                                      }
                                  };
                                  auto u = mk(n);
                                  auto mid = mk(n - 1);
                                  auto dn = mk(n - 2);
                                  if (!u || !mid || !dn) continue;
                                  size_t idx = 0;
                                  for (size_t i = 0; i < cut; ++i)
                                      if (!toks[i].is_x &&
                                          toks[i].kind == static_cast<LetterKind>(kind))
                                          ++idx;
                                  Word::Chains rc = mid->chains();
                                  detail::emit_x_after(rc, kind, idx);
                                  Word r = rc.word();
                                  Word::Chains lc = mid->chains();
                                  lc.chain[kind][idx].x_before += 1;
                                  Word l = lc.word();
                                  ++checked;
                                  if (nf(*u) != nf(r).scaled(-Laurent::A(-2)) +
                                                    nf(*dn).scaled(-Laurent::A(2)) ||
                                      nf(*u) != nf(l).scaled(-Laurent::A(-4)) +
                                                    nf(*dn).scaled(-Laurent::A(-2))) {
                                      detail = "failed at " + u->str();
                                      return false;
                                  }
                              }
                  }
                  detail = std::to_string(checked) + " instances";
                  return checked > 1000;
              });

    criterion(7, "order independence for words of length <= 4, arrows in [-2,2]", 300.0,
              [](std::string& detail) {
                  std::map<Word, Element> memo;
                  Reducer base(Surface::Pants);
                  ReduceOptions o1, o2;
                  o1.order_seed = 10007;
                  o2.order_seed = 900001;
                  Reducer alt1(Surface::Pants, o1), alt2(Surface::Pants, o2);
                  bool agree = true;
                  int checked = 0;
                  bool ok = true;
                  enumerate_words(4, -2, 2, [&](const Word& w) {
                      if (!ok) return;
                      ++checked;
                      Element ex = exhaustive_srr(w, memo, agree);
                      if (!agree || ex != base.srr(w)) {
                          detail = "srr order disagreement at " + w.str();
                          ok = false;
                          return;
                      }
                      Element nf = base.nf(w);
                      if (alt1.nf(w) != nf || alt2.nf(w) != nf) {
                          detail = "pipeline schedule disagreement at " + w.str();
                          ok = false;
                      }
                  });
                  if (ok) detail = std::to_string(checked) + " words";
                  return ok && checked > 5000;
              });

    criterion(8, "trivial circle multiplies the bracket by -A^2-A^-2, 50 diagrams", 60.0,
              [](std::string& detail) {
                  for (uint64_t i = 0; i < 50; ++i) {
                      Surface s = i % 3 == 0   ? Surface::Disk
                                  : i % 3 == 1 ? Surface::Annulus
                                               : Surface::Pants;
                      ValidatedDiagram vd = random_diagram(s, 3, 3, 90000 + i);
                      ArrowDiagram with = vd.raw();
                      with.comps.push_back(
                          {{Rat(BigInt(14), BigInt(5)), Rat(BigInt(-1), BigInt(5))},
                           {Rat(3), Rat(BigInt(-1), BigInt(5))},
                           {Rat(3), Rat(BigInt(1), BigInt(5))},
                           {Rat(BigInt(14), BigInt(5)), Rat(BigInt(1), BigInt(5))}});
                      auto vwith = ValidatedDiagram::validate(std::move(with));
                      if (kbsm_bracket(vwith) != kbsm_bracket(vd).scaled(Laurent::loop())) {
                          detail = "seed " + std::to_string(90000 + i);
                          return false;
                      }
                  }
                  return true;
              });

    if (g_failures == 0)
        std::printf("ACCEPTANCE: all criteria passed\n");
    else
        std::printf("ACCEPTANCE: %d criteria failed\n", g_failures);
    return g_failures == 0 ? 0 : 1;
}

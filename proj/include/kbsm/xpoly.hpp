#pragma once

// Polynomials in the central circle variable x with Laurent coefficients,
// and the replacement families P_n, P_{n,k}:
//
//   P_0 = -A^2 - A^-2,  P_1 = x,  P_n = -A^-2 x P_{n-1} - A^2 P_{n-2}
//   (solved for P_n when walking down: P_n = -A^-4 x P_{n+1} - A^-2 P_{n+2})
//   P_{n,0} = P_n,      P_{n,k} = (-A^4 + 1) P_{n+1,k-1} + A^-2 x P_{n,k-1}
//
// P_n replaces an innermost circle with n arrows; P_{n,k} a circle with n
// arrows enclosing x^k.

#include <map>
#include <mutex>
#include <string>
#include <utility>

#include "kbsm/laurent.hpp"

namespace kbsm {

class XPoly {
public:
    XPoly() = default;

    static XPoly zero() { return XPoly(); }
    static XPoly one() { return term(Laurent::one(), 0); }
    static XPoly x_power(unsigned k) { return term(Laurent::one(), k); }
    static XPoly term(Laurent c, unsigned deg) {
        XPoly r;
        if (!c.is_zero()) r.c_[deg] = std::move(c);
        return r;
    }
    static XPoly constant(Laurent c) { return term(std::move(c), 0); }

    bool is_zero() const { return c_.empty(); }
    unsigned degree() const { return c_.empty() ? 0 : c_.rbegin()->first; }
    Laurent coeff(unsigned deg) const {
        auto it = c_.find(deg);
        return it == c_.end() ? Laurent::zero() : it->second;
    }
    const std::map<unsigned, Laurent>& coeffs() const { return c_; }

    friend XPoly operator+(const XPoly& a, const XPoly& b) {
        XPoly r = a;
        for (const auto& [d, c] : b.c_) {
            Laurent s = r.coeff(d) + c;
            if (s.is_zero())
                r.c_.erase(d);
            else
                r.c_[d] = std::move(s);
        }
        return r;
    }
    friend XPoly operator*(const XPoly& a, const XPoly& b) {
        XPoly r;
        for (const auto& [da, ca] : a.c_)
            for (const auto& [db, cb] : b.c_) {
                Laurent s = r.coeff(da + db) + ca * cb;
                if (s.is_zero())
                    r.c_.erase(da + db);
                else
                    r.c_[da + db] = std::move(s);
            }
        return r;
    }
    XPoly scaled(const Laurent& f) const {
        XPoly r;
        if (f.is_zero()) return r;
        for (const auto& [d, c] : c_) r.c_[d] = c * f;
        return r;
    }
    XPoly& operator+=(const XPoly& o) { return *this = *this + o; }

    friend bool operator==(const XPoly& a, const XPoly& b) { return a.c_ == b.c_; }
    friend bool operator!=(const XPoly& a, const XPoly& b) { return !(a == b); }

    // Terms in decreasing x-exponent. A single positive Laurent term prints
    // bare with spaced '*'; anything else is parenthesized, e.g.
    // "(-A^-2)*x^2 + (A^4+1)" and "A^-6 * x".
    std::string str() const {
        if (c_.empty()) return "0";
        std::string out;
        for (auto it = c_.rbegin(); it != c_.rend(); ++it) {
            const auto& [d, c] = *it;
            if (!out.empty()) out += " + ";
            std::string xs = d == 0 ? "" : (d == 1 ? "x" : "x^" + std::to_string(d));
            if (d == 0) {
                out += c.single_positive_term() ? c.str() : "(" + c.str() + ")";
            } else if (c.is_one()) {
                out += xs;
            } else if (c.single_positive_term()) {
                out += c.str() + " * " + xs;
            } else {
                out += "(" + c.str() + ")*" + xs;
            }
        }
        return out;
    }

private:
    std::map<unsigned, Laurent> c_;  // x-exponent -> nonzero Laurent coefficient
};

// Memoized and safe to call concurrently; all callers observe identical values.
inline XPoly p_n(int n) {
    static std::mutex mu;
    static std::map<int, XPoly> memo;
    std::lock_guard<std::mutex> lk(mu);
    auto it = memo.find(n);
    if (it != memo.end()) return it->second;
    if (memo.empty()) {
        memo[0] = XPoly::constant(Laurent::loop());
        memo[1] = XPoly::x_power(1);
    }
    const XPoly x = XPoly::x_power(1);
    int lo = 0, hi = 1;
    while (memo.count(lo)) --lo;
    while (memo.count(hi)) ++hi;
    ++lo; --hi;
    for (int m = hi + 1; m <= n; ++m)
        memo[m] = (x * memo[m - 1]).scaled(-Laurent::A(-2)) +
                  memo[m - 2].scaled(-Laurent::A(2));
    for (int m = lo - 1; m >= n; --m)
        memo[m] = (x * memo[m + 1]).scaled(-Laurent::A(-4)) +
                  memo[m + 2].scaled(-Laurent::A(-2));
    return memo[n];
}

inline XPoly p_nk(int n, unsigned k) {
    if (k == 0) return p_n(n);
    static std::mutex mu;
    static std::map<std::pair<int, unsigned>, XPoly> memo;
    {
        std::lock_guard<std::mutex> lk(mu);
        auto it = memo.find({n, k});
        if (it != memo.end()) return it->second;
    }
    XPoly r = p_nk(n + 1, k - 1).scaled(Laurent::one() - Laurent::A(4)) +
              (XPoly::x_power(1) * p_nk(n, k - 1)).scaled(Laurent::A(-2));
    std::lock_guard<std::mutex> lk(mu);
    memo.emplace(std::make_pair(n, k), r);
    return r;
}

}  // namespace kbsm

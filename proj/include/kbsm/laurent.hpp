#pragma once

// The coefficient ring Z[A^{±1}]. Canonical form: no zero coefficients stored.

#include <map>
#include <string>

#include "kbsm/bigint.hpp"

namespace kbsm {

class Laurent {
public:
    Laurent() = default;

    static Laurent zero() { return Laurent(); }
    static Laurent one() { return monomial(BigInt(1), 0); }
    static Laurent monomial(BigInt c, int exp) {
        Laurent r;
        if (!c.is_zero()) r.t_[exp] = std::move(c);
        return r;
    }
    // A^exp
    static Laurent A(int exp) { return monomial(BigInt(1), exp); }
    // -A^2 - A^-2, the trivial-circle factor
    static Laurent loop() {
        Laurent r;
        r.t_[2] = BigInt(-1);
        r.t_[-2] = BigInt(-1);
        return r;
    }

    bool is_zero() const { return t_.empty(); }
    bool is_one() const {
        return t_.size() == 1 && t_.begin()->first == 0 && t_.begin()->second.is_one();
    }
    // True when the polynomial is c*A^e with c > 0 (drives print parenthesization).
    bool single_positive_term() const {
        return t_.size() == 1 && t_.begin()->second.sign() > 0;
    }

    friend Laurent operator+(const Laurent& a, const Laurent& b) {
        Laurent r = a;
        for (const auto& [e, c] : b.t_) {
            BigInt s = r.coeff(e) + c;
            if (s.is_zero())
                r.t_.erase(e);
            else
                r.t_[e] = std::move(s);
        }
        return r;
    }
    friend Laurent operator-(const Laurent& a, const Laurent& b) { return a + (-b); }
    Laurent operator-() const {
        Laurent r;
        for (const auto& [e, c] : t_) r.t_[e] = -c;
        return r;
    }
    friend Laurent operator*(const Laurent& a, const Laurent& b) {
        Laurent r;
        for (const auto& [ea, ca] : a.t_)
            for (const auto& [eb, cb] : b.t_) {
                int e = ea + eb;
                BigInt s = r.coeff(e) + ca * cb;
                if (s.is_zero())
                    r.t_.erase(e);
                else
                    r.t_[e] = std::move(s);
            }
        return r;
    }
    Laurent& operator+=(const Laurent& o) { return *this = *this + o; }
    Laurent& operator-=(const Laurent& o) { return *this = *this - o; }
    Laurent& operator*=(const Laurent& o) { return *this = *this * o; }

    Laurent pow(unsigned n) const {
        Laurent r = one(), base = *this;
        while (n) {
            if (n & 1u) r = r * base;
            base = base * base;
            n >>= 1;
        }
        return r;
    }

    friend bool operator==(const Laurent& a, const Laurent& b) { return a.t_ == b.t_; }
    friend bool operator!=(const Laurent& a, const Laurent& b) { return !(a == b); }

    BigInt coeff(int exp) const {
        auto it = t_.find(exp);
        return it == t_.end() ? BigInt(0) : it->second;
    }
    const std::map<int, BigInt>& terms() const { return t_; }

    // Terms in decreasing A-exponent, e.g. "-A^4+1", "A^-6".
    std::string str() const {
        if (t_.empty()) return "0";
        std::string out;
        for (auto it = t_.rbegin(); it != t_.rend(); ++it) {
            const auto& [e, c] = *it;
            std::string mag = c.abs().to_string();
            if (!out.empty()) out += c.sign() < 0 ? "-" : "+";
            else if (c.sign() < 0) out += "-";
            if (e == 0) {
                out += mag;
            } else {
                if (mag != "1") out += mag;
                out += "A";
                if (e != 1) out += "^" + std::to_string(e);
            }
        }
        return out;
    }

private:
    std::map<int, BigInt> t_;  // exponent of A -> nonzero coefficient
};

}  // namespace kbsm

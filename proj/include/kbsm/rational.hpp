#pragma once

// Exact rationals over BigInt. All diagram geometry is decided with these;
// there are no epsilon comparisons anywhere.

#include <stdexcept>
#include <string>
#include <utility>

#include "kbsm/bigint.hpp"

namespace kbsm {

class Rat {
public:
    Rat() : num_(0), den_(1) {}
    Rat(long long v) : num_(v), den_(1) {}
    Rat(BigInt n, BigInt d) : num_(std::move(n)), den_(std::move(d)) { reduce(); }

    // Accepts "p" or "p/q".
    static Rat parse(const std::string& s) {
        size_t slash = s.find('/');
        if (slash == std::string::npos) return Rat(BigInt::from_string(s), BigInt(1));
        return Rat(BigInt::from_string(s.substr(0, slash)),
                   BigInt::from_string(s.substr(slash + 1)));
    }

    const BigInt& num() const { return num_; }
    const BigInt& den() const { return den_; }
    bool is_zero() const { return num_.is_zero(); }
    int sign() const { return num_.sign(); }

    friend Rat operator+(const Rat& a, const Rat& b) {
        return Rat(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
    }
    friend Rat operator-(const Rat& a, const Rat& b) {
        return Rat(a.num_ * b.den_ - b.num_ * a.den_, a.den_ * b.den_);
    }
    friend Rat operator*(const Rat& a, const Rat& b) {
        return Rat(a.num_ * b.num_, a.den_ * b.den_);
    }
    friend Rat operator/(const Rat& a, const Rat& b) {
        if (b.num_.is_zero()) throw std::domain_error("rational division by zero");
        return Rat(a.num_ * b.den_, a.den_ * b.num_);
    }
    Rat operator-() const {
        Rat r = *this;
        r.num_ = -r.num_;
        return r;
    }
    Rat& operator+=(const Rat& o) { return *this = *this + o; }
    Rat& operator-=(const Rat& o) { return *this = *this - o; }
    Rat& operator*=(const Rat& o) { return *this = *this * o; }

    friend bool operator==(const Rat& a, const Rat& b) {
        return a.num_ == b.num_ && a.den_ == b.den_;
    }
    friend bool operator!=(const Rat& a, const Rat& b) { return !(a == b); }
    friend bool operator<(const Rat& a, const Rat& b) {
        return a.num_ * b.den_ < b.num_ * a.den_;
    }
    friend bool operator>(const Rat& a, const Rat& b) { return b < a; }
    friend bool operator<=(const Rat& a, const Rat& b) { return !(b < a); }
    friend bool operator>=(const Rat& a, const Rat& b) { return !(a < b); }

    std::string str() const {
        if (den_.is_one()) return num_.to_string();
        return num_.to_string() + "/" + den_.to_string();
    }

    static Rat mid(const Rat& a, const Rat& b) { return (a + b) * Rat(BigInt(1), BigInt(2)); }

private:
    BigInt num_, den_;  // den_ > 0, gcd(|num_|, den_) = 1, zero is 0/1

    void reduce() {
        if (den_.is_zero()) throw std::domain_error("zero denominator");
        if (den_.sign() < 0) {
            num_ = -num_;
            den_ = -den_;
        }
        if (num_.is_zero()) {
            den_ = BigInt(1);
            return;
        }
        BigInt g = BigInt::gcd(num_, den_);
        if (!g.is_one()) {
            num_ = div_exact(num_, g);
            den_ = div_exact(den_, g);
        }
    }

    // Exact division by a known divisor, via schoolbook reconstruction.
    // Only used for gcd reduction, where divisibility is guaranteed.
    static BigInt div_exact(const BigInt& a, const BigInt& g) {
        // Binary long division: find q with q*g == a.
        BigInt rem = a.abs(), q(0), one(1);
        BigInt divisor = g.abs();
        if (divisor.is_one()) return a;
        // Build shifted divisor chain.
        std::vector<BigInt> shifts{divisor};
        std::vector<BigInt> powers{one};
        while (shifts.back() + shifts.back() <= rem) {
            shifts.push_back(shifts.back() + shifts.back());
            powers.push_back(powers.back() + powers.back());
        }
        for (size_t i = shifts.size(); i-- > 0;) {
            if (shifts[i] <= rem) {
                rem = rem - shifts[i];
                q = q + powers[i];
            }
        }
        if (!rem.is_zero()) throw std::logic_error("non-exact division");
        if (a.sign() < 0) q = -q;
        return q;
    }
};

struct Point {
    Rat x, y;
    friend bool operator==(const Point& a, const Point& b) { return a.x == b.x && a.y == b.y; }
    friend bool operator!=(const Point& a, const Point& b) { return !(a == b); }
};

}  // namespace kbsm

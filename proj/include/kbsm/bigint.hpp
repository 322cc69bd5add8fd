#pragma once

// Arbitrary-precision signed integers. Coefficients in the skein calculus and
// rational coordinates in the diagram geometry both require exactness; state
// sums can overflow any fixed width.

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <stdexcept>
#include <string>
#include <vector>

namespace kbsm {

class BigInt {
public:
    BigInt() = default;
    BigInt(long long v) {
        if (v == 0) return;
        sign_ = v < 0 ? -1 : 1;
        unsigned long long m = v < 0 ? 0ULL - static_cast<unsigned long long>(v)
                                     : static_cast<unsigned long long>(v);
        while (m) {
            mag_.push_back(static_cast<uint32_t>(m & 0xffffffffu));
            m >>= 32;
        }
    }

    static BigInt from_string(const std::string& s) {
        size_t i = 0;
        int sign = 1;
        if (i < s.size() && (s[i] == '+' || s[i] == '-')) {
            if (s[i] == '-') sign = -1;
            ++i;
        }
        if (i == s.size()) throw std::invalid_argument("empty integer literal");
        BigInt r;
        for (; i < s.size(); ++i) {
            if (s[i] < '0' || s[i] > '9')
                throw std::invalid_argument("bad digit in integer literal");
            r.mul_small(10);
            r.add_small(static_cast<uint32_t>(s[i] - '0'));
        }
        if (!r.mag_.empty()) r.sign_ = sign;
        return r;
    }

    bool is_zero() const { return sign_ == 0; }
    int sign() const { return sign_; }
    bool is_one() const { return sign_ == 1 && mag_.size() == 1 && mag_[0] == 1; }

    friend bool operator==(const BigInt& a, const BigInt& b) {
        return a.sign_ == b.sign_ && a.mag_ == b.mag_;
    }
    friend bool operator!=(const BigInt& a, const BigInt& b) { return !(a == b); }
    friend bool operator<(const BigInt& a, const BigInt& b) { return cmp(a, b) < 0; }
    friend bool operator>(const BigInt& a, const BigInt& b) { return cmp(a, b) > 0; }
    friend bool operator<=(const BigInt& a, const BigInt& b) { return cmp(a, b) <= 0; }
    friend bool operator>=(const BigInt& a, const BigInt& b) { return cmp(a, b) >= 0; }

    BigInt operator-() const {
        BigInt r = *this;
        r.sign_ = -r.sign_;
        return r;
    }
    BigInt abs() const {
        BigInt r = *this;
        if (r.sign_ < 0) r.sign_ = 1;
        return r;
    }

    friend BigInt operator+(const BigInt& a, const BigInt& b) {
        if (a.sign_ == 0) return b;
        if (b.sign_ == 0) return a;
        BigInt r;
        if (a.sign_ == b.sign_) {
            r.mag_ = add_mag(a.mag_, b.mag_);
            r.sign_ = a.sign_;
        } else {
            int c = cmp_mag(a.mag_, b.mag_);
            if (c == 0) return BigInt();
            if (c > 0) {
                r.mag_ = sub_mag(a.mag_, b.mag_);
                r.sign_ = a.sign_;
            } else {
                r.mag_ = sub_mag(b.mag_, a.mag_);
                r.sign_ = b.sign_;
            }
        }
        return r;
    }
    friend BigInt operator-(const BigInt& a, const BigInt& b) { return a + (-b); }

    friend BigInt operator*(const BigInt& a, const BigInt& b) {
        if (a.sign_ == 0 || b.sign_ == 0) return BigInt();
        BigInt r;
        r.sign_ = a.sign_ * b.sign_;
        r.mag_.assign(a.mag_.size() + b.mag_.size(), 0);
        for (size_t i = 0; i < a.mag_.size(); ++i) {
            uint64_t carry = 0;
            for (size_t j = 0; j < b.mag_.size(); ++j) {
                uint64_t cur = static_cast<uint64_t>(a.mag_[i]) * b.mag_[j] +
                               r.mag_[i + j] + carry;
                r.mag_[i + j] = static_cast<uint32_t>(cur);
                carry = cur >> 32;
            }
            size_t k = i + b.mag_.size();
            while (carry) {
                uint64_t cur = r.mag_[k] + carry;
                r.mag_[k] = static_cast<uint32_t>(cur);
                carry = cur >> 32;
                ++k;
            }
        }
        r.trim();
        return r;
    }

    BigInt& operator+=(const BigInt& o) { return *this = *this + o; }
    BigInt& operator-=(const BigInt& o) { return *this = *this - o; }
    BigInt& operator*=(const BigInt& o) { return *this = *this * o; }

    // Binary gcd; avoids long division entirely.
    static BigInt gcd(BigInt a, BigInt b) {
        a = a.abs();
        b = b.abs();
        if (a.is_zero()) return b;
        if (b.is_zero()) return a;
        unsigned shift = 0;
        while (a.even() && b.even()) {
            a.shr1();
            b.shr1();
            ++shift;
        }
        while (a.even()) a.shr1();
        while (!b.is_zero()) {
            while (b.even()) b.shr1();
            if (cmp_mag(a.mag_, b.mag_) > 0) std::swap(a.mag_, b.mag_);
            b = b - a;
            b.sign_ = b.mag_.empty() ? 0 : 1;
        }
        for (unsigned i = 0; i < shift; ++i) a.shl1();
        return a;
    }

    std::string to_string() const {
        if (sign_ == 0) return "0";
        std::vector<uint32_t> m = mag_;
        std::string digits;
        while (!m.empty()) {
            uint64_t rem = 0;
            for (size_t i = m.size(); i-- > 0;) {
                uint64_t cur = (rem << 32) | m[i];
                m[i] = static_cast<uint32_t>(cur / 1000000000u);
                rem = cur % 1000000000u;
            }
            while (!m.empty() && m.back() == 0) m.pop_back();
            for (int k = 0; k < 9; ++k) {
                digits.push_back(static_cast<char>('0' + rem % 10));
                rem /= 10;
            }
        }
        while (digits.size() > 1 && digits.back() == '0') digits.pop_back();
        if (sign_ < 0) digits.push_back('-');
        std::reverse(digits.begin(), digits.end());
        return digits;
    }

    long long to_int64() const {
        long long r = 0;
        if (mag_.size() > 2) throw std::overflow_error("BigInt too large for int64");
        for (size_t i = mag_.size(); i-- > 0;) r = (r << 32) | mag_[i];
        if (r < 0) throw std::overflow_error("BigInt too large for int64");
        return sign_ < 0 ? -r : r;
    }

private:
    int sign_ = 0;                 // -1, 0, +1
    std::vector<uint32_t> mag_;    // little-endian limbs, no leading zeros

    void trim() {
        while (!mag_.empty() && mag_.back() == 0) mag_.pop_back();
        if (mag_.empty()) sign_ = 0;
    }
    bool even() const { return mag_.empty() || (mag_[0] & 1u) == 0; }
    void shr1() {
        uint32_t carry = 0;
        for (size_t i = mag_.size(); i-- > 0;) {
            uint32_t next = mag_[i] & 1u;
            mag_[i] = (mag_[i] >> 1) | (carry << 31);
            carry = next;
        }
        trim();
    }
    void shl1() {
        uint32_t carry = 0;
        for (size_t i = 0; i < mag_.size(); ++i) {
            uint32_t next = mag_[i] >> 31;
            mag_[i] = (mag_[i] << 1) | carry;
            carry = next;
        }
        if (carry) mag_.push_back(carry);
    }
    void mul_small(uint32_t f) {
        uint64_t carry = 0;
        for (size_t i = 0; i < mag_.size(); ++i) {
            uint64_t cur = static_cast<uint64_t>(mag_[i]) * f + carry;
            mag_[i] = static_cast<uint32_t>(cur);
            carry = cur >> 32;
        }
        while (carry) {
            mag_.push_back(static_cast<uint32_t>(carry));
            carry >>= 32;
        }
        trim();
        if (!mag_.empty() && sign_ == 0) sign_ = 1;
    }
    void add_small(uint32_t v) {
        if (v == 0) return;
        uint64_t carry = v;
        for (size_t i = 0; i < mag_.size() && carry; ++i) {
            uint64_t cur = mag_[i] + carry;
            mag_[i] = static_cast<uint32_t>(cur);
            carry = cur >> 32;
        }
        while (carry) {
            mag_.push_back(static_cast<uint32_t>(carry));
            carry >>= 32;
        }
        sign_ = 1;
    }

    static int cmp_mag(const std::vector<uint32_t>& a, const std::vector<uint32_t>& b) {
        if (a.size() != b.size()) return a.size() < b.size() ? -1 : 1;
        for (size_t i = a.size(); i-- > 0;)
            if (a[i] != b[i]) return a[i] < b[i] ? -1 : 1;
        return 0;
    }
    static int cmp(const BigInt& a, const BigInt& b) {
        if (a.sign_ != b.sign_) return a.sign_ < b.sign_ ? -1 : 1;
        int c = cmp_mag(a.mag_, b.mag_);
        return a.sign_ >= 0 ? c : -c;
    }
    static std::vector<uint32_t> add_mag(const std::vector<uint32_t>& a,
                                         const std::vector<uint32_t>& b) {
        std::vector<uint32_t> r(std::max(a.size(), b.size()) + 1, 0);
        uint64_t carry = 0;
        for (size_t i = 0; i < r.size(); ++i) {
            uint64_t cur = carry;
            if (i < a.size()) cur += a[i];
            if (i < b.size()) cur += b[i];
            r[i] = static_cast<uint32_t>(cur);
            carry = cur >> 32;
        }
        while (!r.empty() && r.back() == 0) r.pop_back();
        return r;
    }
    // Requires |a| >= |b|.
    static std::vector<uint32_t> sub_mag(const std::vector<uint32_t>& a,
                                         const std::vector<uint32_t>& b) {
        std::vector<uint32_t> r = a;
        int64_t borrow = 0;
        for (size_t i = 0; i < r.size(); ++i) {
            int64_t cur = static_cast<int64_t>(r[i]) - borrow -
                          (i < b.size() ? b[i] : 0);
            if (cur < 0) {
                cur += (1LL << 32);
                borrow = 1;
            } else {
                borrow = 0;
            }
            r[i] = static_cast<uint32_t>(cur);
        }
        while (!r.empty() && r.back() == 0) r.pop_back();
        return r;
    }
};

}  // namespace kbsm

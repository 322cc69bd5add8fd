#pragma once

// Finite R-linear combinations of words. Canonical: no zero coefficients.

#include <algorithm>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "kbsm/laurent.hpp"
#include "kbsm/word.hpp"
#include "kbsm/xpoly.hpp"

namespace kbsm {

class Element {
public:
    Element() = default;

    static Element zero() { return Element(); }
    static Element term(Word w, Laurent c) {
        Element e;
        if (!c.is_zero()) e.m_.emplace(std::move(w), std::move(c));
        return e;
    }
    static Element unit(Laurent c) { return term(Word::empty(), std::move(c)); }
    // A polynomial in x as an element over the words x^k.
    static Element from_xpoly(const XPoly& p) {
        Element e;
        for (const auto& [d, c] : p.coeffs()) e.m_.emplace(Word::x_power(static_cast<int>(d)), c);
        return e;
    }

    bool is_zero() const { return m_.empty(); }
    size_t size() const { return m_.size(); }
    const std::map<Word, Laurent>& terms() const { return m_; }
    Laurent coeff(const Word& w) const {
        auto it = m_.find(w);
        return it == m_.end() ? Laurent::zero() : it->second;
    }

    void add_term(const Word& w, const Laurent& c) {
        if (c.is_zero()) return;
        auto it = m_.find(w);
        if (it == m_.end()) {
            m_.emplace(w, c);
        } else {
            it->second += c;
            if (it->second.is_zero()) m_.erase(it);
        }
    }

    friend Element operator+(const Element& a, const Element& b) {
        Element r = a;
        for (const auto& [w, c] : b.m_) r.add_term(w, c);
        return r;
    }
    friend Element operator-(const Element& a, const Element& b) { return a + b.scaled(-Laurent::one()); }
    Element& operator+=(const Element& o) {
        for (const auto& [w, c] : o.m_) add_term(w, c);
        return *this;
    }
    Element scaled(const Laurent& f) const {
        Element r;
        if (f.is_zero()) return r;
        for (const auto& [w, c] : m_) {
            Laurent p = c * f;
            if (!p.is_zero()) r.m_.emplace(w, std::move(p));
        }
        return r;
    }

    friend bool operator==(const Element& a, const Element& b) { return a.m_ == b.m_; }
    friend bool operator!=(const Element& a, const Element& b) { return !(a == b); }

    // `coeff * word` terms joined by " + ", words ordered lexicographically by
    // canonical print. Coefficient 1 is omitted; a single positive Laurent
    // term prints bare, anything else parenthesized.
    std::string str() const {
        if (m_.empty()) return "0";
        std::vector<std::pair<std::string, const Laurent*>> items;
        items.reserve(m_.size());
        for (const auto& [w, c] : m_) items.emplace_back(w.str(), &c);
        std::sort(items.begin(), items.end(),
                  [](const auto& a, const auto& b) { return a.first < b.first; });
        std::string out;
        for (const auto& [ws, c] : items) {
            if (!out.empty()) out += " + ";
            if (c->is_one()) {
                out += ws;
            } else if (c->single_positive_term()) {
                out += c->str() + " * " + ws;
            } else {
                out += "(" + c->str() + ") * " + ws;
            }
        }
        return out;
    }

private:
    std::map<Word, Laurent> m_;
};

}  // namespace kbsm

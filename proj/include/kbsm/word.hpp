#pragma once

// Words encoding crossingless diagrams.
//
// Tokens are x (a one-arrow circle bounding a disk) and letters y_m, z_m, t_m
// (circles around the left hole, the right hole, or both, carrying m net
// arrows). Letters are ordered y-chain, z-chain, t-chain; x tokens may appear
// anywhere. Reading left to right traces a path from the left hole outward
// through the y-chain, from the right hole outward through the z-chain, then
// from the outer boundary inward through the t-chain, ending in the central
// region. An x-run occupies the region the path is traversing where it is
// written, so a run attaches to the letter that follows it (just inside a
// y/z letter, just outside a t letter); a trailing run lies in the central
// region.

#include <cctype>
#include <stdexcept>
#include <string>
#include <vector>

namespace kbsm {

enum class Surface { Disk, Annulus, Pants };

inline const char* surface_name(Surface s) {
    switch (s) {
        case Surface::Disk: return "disk";
        case Surface::Annulus: return "annulus";
        default: return "pants";
    }
}
inline Surface surface_from_name(const std::string& n) {
    if (n == "disk") return Surface::Disk;
    if (n == "annulus") return Surface::Annulus;
    if (n == "pants") return Surface::Pants;
    throw std::invalid_argument("unknown surface '" + n + "'");
}

struct WordError : std::runtime_error {
    explicit WordError(const std::string& m) : std::runtime_error(m) {}
};

enum class LetterKind : int { Y = 0, Z = 1, T = 2 };

struct Token {
    bool is_x = true;
    LetterKind kind = LetterKind::Y;
    int arrows = 0;

    static Token x() { return Token{}; }
    static Token letter(LetterKind k, int arrows) { return Token{false, k, arrows}; }

    friend bool operator==(const Token& a, const Token& b) {
        if (a.is_x != b.is_x) return false;
        if (a.is_x) return true;
        return a.kind == b.kind && a.arrows == b.arrows;
    }
    friend bool operator!=(const Token& a, const Token& b) { return !(a == b); }
    friend bool operator<(const Token& a, const Token& b) {
        if (a.is_x != b.is_x) return a.is_x;
        if (a.is_x) return false;
        if (a.kind != b.kind) return a.kind < b.kind;
        return a.arrows < b.arrows;
    }

    std::string str() const {
        if (is_x) return "x";
        std::string base(1, "yzt"[static_cast<int>(kind)]);
        if (arrows == 0) return base;
        if (arrows == 1) return base + "'";
        return base + "_" + std::to_string(arrows);
    }
};

class Word {
public:
    Word() = default;
    explicit Word(std::vector<Token> toks) : toks_(std::move(toks)) { check_order(); }

    static Word empty() { return Word(); }
    static Word x_power(int n) {
        Word w;
        w.toks_.assign(static_cast<size_t>(n), Token::x());
        return w;
    }

    const std::vector<Token>& tokens() const { return toks_; }
    bool is_empty() const { return toks_.empty(); }
    size_t letter_count() const {
        size_t n = 0;
        for (const auto& t : toks_)
            if (!t.is_x) ++n;
        return n;
    }
    size_t x_count() const { return toks_.size() - letter_count(); }

    friend bool operator==(const Word& a, const Word& b) { return a.toks_ == b.toks_; }
    friend bool operator!=(const Word& a, const Word& b) { return !(a == b); }
    friend bool operator<(const Word& a, const Word& b) {
        return std::lexicographical_compare(a.toks_.begin(), a.toks_.end(),
                                            b.toks_.begin(), b.toks_.end());
    }

    // Grammar: tokens separated by whitespace; token = `x` | base subscript?,
    // base = y|z|t, subscript = `'` (one arrow) | `_` integer; a trailing
    // `^` positive-integer repeats the token. `1` denotes the empty word.
    static Word parse(const std::string& text, Surface surface) {
        std::vector<std::string> chunks;
        std::string cur;
        for (char ch : text) {
            if (std::isspace(static_cast<unsigned char>(ch))) {
                if (!cur.empty()) chunks.push_back(cur);
                cur.clear();
            } else {
                cur.push_back(ch);
            }
        }
        if (!cur.empty()) chunks.push_back(cur);

        if (chunks.size() == 1 && chunks[0] == "1") return Word();

        std::vector<Token> toks;
        for (const auto& c : chunks) {
            size_t i = 0;
            Token tok;
            if (c[i] == 'x') {
                tok = Token::x();
                ++i;
            } else if (c[i] == 'y' || c[i] == 'z' || c[i] == 't') {
                LetterKind k = c[i] == 'y'   ? LetterKind::Y
                               : c[i] == 'z' ? LetterKind::Z
                                             : LetterKind::T;
                ++i;
                int arrows = 0;
                if (i < c.size() && c[i] == '\'') {
                    arrows = 1;
                    ++i;
                } else if (i < c.size() && c[i] == '_') {
                    ++i;
                    size_t j = i;
                    if (j < c.size() && c[j] == '-') ++j;
                    size_t digits = j;
                    while (j < c.size() && std::isdigit(static_cast<unsigned char>(c[j]))) ++j;
                    if (j == digits) throw WordError("syntax error: bad subscript in '" + c + "'");
                    arrows = std::stoi(c.substr(i, j - i));
                    i = j;
                }
                tok = Token::letter(k, arrows);
            } else {
                throw WordError("syntax error: unexpected token '" + c + "'");
            }
            int reps = 1;
            if (i < c.size() && c[i] == '^') {
                ++i;
                size_t j = i;
                while (j < c.size() && std::isdigit(static_cast<unsigned char>(c[j]))) ++j;
                if (j == i || j != c.size())
                    throw WordError("syntax error: bad power in '" + c + "'");
                reps = std::stoi(c.substr(i, j - i));
                if (reps < 1) throw WordError("syntax error: power must be positive in '" + c + "'");
            } else if (i != c.size()) {
                throw WordError("syntax error: trailing characters in '" + c + "'");
            }
            for (int r = 0; r < reps; ++r) toks.push_back(tok);
        }

        for (const auto& t : toks) {
            if (t.is_x) continue;
            if (surface == Surface::Disk)
                throw WordError("alphabet violation: letter '" + t.str() + "' in disk mode");
            if (surface == Surface::Annulus && t.kind != LetterKind::Y)
                throw WordError("alphabet violation: letter '" + t.str() + "' in annulus mode");
        }

        Word w;
        w.toks_ = std::move(toks);
        w.check_order();
        return w;
    }

    // Canonical print: powers collapsed, `1` for the empty word.
    std::string str() const {
        if (toks_.empty()) return "1";
        std::string out;
        size_t i = 0;
        while (i < toks_.size()) {
            size_t j = i;
            while (j < toks_.size() && toks_[j] == toks_[i]) ++j;
            if (!out.empty()) out += " ";
            out += toks_[i].str();
            if (j - i > 1) out += "^" + std::to_string(j - i);
            i = j;
        }
        return out;
    }

    // --- chain view ------------------------------------------------------

    struct ChainEntry {
        int x_before = 0;  // x-run attached to this letter's region
        int arrows = 0;
    };
    struct Chains {
        std::vector<ChainEntry> chain[3];  // indexed by LetterKind
        int central = 0;

        std::vector<ChainEntry>& of(LetterKind k) { return chain[static_cast<int>(k)]; }
        const std::vector<ChainEntry>& of(LetterKind k) const {
            return chain[static_cast<int>(k)];
        }
        size_t letters() const {
            return chain[0].size() + chain[1].size() + chain[2].size();
        }
        Word word() const {
            std::vector<Token> toks;
            for (int k = 0; k < 3; ++k)
                for (const auto& e : chain[k]) {
                    for (int i = 0; i < e.x_before; ++i) toks.push_back(Token::x());
                    toks.push_back(Token::letter(static_cast<LetterKind>(k), e.arrows));
                }
            for (int i = 0; i < central; ++i) toks.push_back(Token::x());
            Word w;
            w.toks_ = std::move(toks);
            return w;
        }
    };

    Chains chains() const {
        Chains c;
        int pending = 0;
        for (const auto& t : toks_) {
            if (t.is_x) {
                ++pending;
            } else {
                c.of(t.kind).push_back({pending, t.arrows});
                pending = 0;
            }
        }
        c.central = pending;
        return c;
    }

    // --- normal-form shape predicates ------------------------------------

    // All arrows in {0,1} and no x-run inside a chain.
    bool semi_reduced() const {
        Chains c = chains();
        for (int k = 0; k < 3; ++k)
            for (const auto& e : c.chain[k])
                if (e.x_before != 0 || e.arrows < 0 || e.arrows > 1) return false;
        return true;
    }

    // Semi-reduced and each chain is plain letters followed by at most one prime.
    bool reduced() const {
        if (!semi_reduced()) return false;
        Chains c = chains();
        for (int k = 0; k < 3; ++k) {
            const auto& ch = c.chain[k];
            for (size_t i = 0; i + 1 < ch.size(); ++i)
                if (ch[i].arrows != 0) return false;
        }
        return true;
    }

    // Reduced with at most one prime overall, occurring on the last letter.
    bool quasi_final() const {
        if (!reduced()) return false;
        Chains c = chains();
        int primes = 0;
        for (int k = 0; k < 3; ++k)
            for (const auto& e : c.chain[k]) primes += e.arrows;
        if (primes > 1) return false;
        if (primes == 1) {
            bool prime_y = !c.of(LetterKind::Y).empty() && c.of(LetterKind::Y).back().arrows == 1;
            bool prime_z = !c.of(LetterKind::Z).empty() && c.of(LetterKind::Z).back().arrows == 1;
            if (prime_y && (c.of(LetterKind::Z).size() || c.of(LetterKind::T).size()))
                return false;
            if (prime_z && c.of(LetterKind::T).size()) return false;
        }
        return true;
    }

    // Quasi-final and not containing components of all four types.
    bool final_word() const {
        if (!quasi_final()) return false;
        Chains c = chains();
        bool has_x = c.central > 0;
        return !(has_x && !c.of(LetterKind::Y).empty() && !c.of(LetterKind::Z).empty() &&
                 !c.of(LetterKind::T).empty());
    }

    bool is_basis(Surface surface) const {
        switch (surface) {
            case Surface::Disk: {
                for (const auto& t : toks_)
                    if (!t.is_x) return false;
                return true;
            }
            case Surface::Annulus: {
                Chains c = chains();
                if (!c.of(LetterKind::Z).empty() || !c.of(LetterKind::T).empty()) return false;
                return reduced();
            }
            default:
                return final_word();
        }
    }

private:
    std::vector<Token> toks_;

    void check_order() const {
        int max_kind = -1;
        for (const auto& t : toks_) {
            if (t.is_x) continue;
            int k = static_cast<int>(t.kind);
            if (k < max_kind)
                throw WordError("type-order violation: '" + t.str() +
                                "' appears after a later letter type");
            max_kind = k;
        }
    }

    friend struct Chains;
};

}  // namespace kbsm

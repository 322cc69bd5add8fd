#include <doctest.h>

#include <map>
#include <thread>
#include <vector>

#include "kbsm/laurent.hpp"
#include "kbsm/xpoly.hpp"

using namespace kbsm;

namespace {

Laurent mono(long long c, int e) { return Laurent::monomial(BigInt(c), e); }

// Independent oracle: convolution over dense exponent tables.
Laurent naive_mul(const Laurent& a, const Laurent& b) {
    std::map<int, BigInt> acc;
    for (const auto& [ea, ca] : a.terms())
        for (const auto& [eb, cb] : b.terms()) {
            auto& slot = acc[ea + eb];
            slot = slot + ca * cb;
        }
    Laurent r;
    for (const auto& [e, c] : acc) r += Laurent::monomial(c, e);
    return r;
}

Laurent random_laurent(uint64_t& st) {
    auto next = [&st]() {
        st ^= st << 13;
        st ^= st >> 7;
        st ^= st << 17;
        return st;
    };
    Laurent r;
    int nterms = static_cast<int>(next() % 5);
    for (int i = 0; i < nterms; ++i) {
        int e = static_cast<int>(next() % 13) - 6;
        long long c = static_cast<long long>(next() % 9) - 4;
        r += mono(c, e);
    }
    return r;
}

}  // namespace

TEST_CASE("Laurent addition: cancellation, identity, doubling") {
    Laurent p = mono(1, 2) + mono(1, -2);
    CHECK(p + mono(-1, -2) == mono(1, 2));
    CHECK(p + Laurent::zero() == p);
    Laurent loop = Laurent::loop();
    CHECK(loop + loop == mono(-2, 2) + mono(-2, -2));
}

TEST_CASE("Laurent multiplication basics") {
    CHECK(mono(1, 3) * mono(1, -3) == Laurent::one());
    CHECK(mono(-1, 3) * mono(-1, -3) == Laurent::one());
    // (-A^2 - A^-2)^2 = A^4 + 2 + A^-4, cross-checked by the naive oracle.
    Laurent sq = Laurent::loop() * Laurent::loop();
    CHECK(sq == mono(1, 4) + mono(2, 0) + mono(1, -4));
    CHECK(sq == naive_mul(Laurent::loop(), Laurent::loop()));
}

TEST_CASE("ring axioms on randomized triples, exactly") {
    uint64_t st = 0x5bd1e995;
    for (int trial = 0; trial < 200; ++trial) {
        Laurent a = random_laurent(st), b = random_laurent(st), c = random_laurent(st);
        CHECK(a * (b * c) == (a * b) * c);
        CHECK(a * (b + c) == a * b + a * c);
        CHECK(a + b == b + a);
        CHECK(a * b == b * a);
        CHECK(a * b == naive_mul(a, b));
    }
}

TEST_CASE("Laurent rendering, decreasing exponents") {
    CHECK((Laurent::one() - Laurent::A(4)).str() == "-A^4+1");
    CHECK(Laurent::A(-6).str() == "A^-6");
    CHECK(Laurent::loop().str() == "-A^2-A^-2");
    CHECK(Laurent::zero().str() == "0");
    CHECK((mono(2, 4) + mono(2, 0)).str() == "2A^4+2");
    CHECK(mono(1, 1).str() == "A");
    CHECK(mono(-3, -1).str() == "-3A^-1");
}

TEST_CASE("P_n base cases and pinned values") {
    CHECK(p_n(0) == XPoly::constant(Laurent::loop()));
    CHECK(p_n(1) == XPoly::x_power(1));
    CHECK(p_n(-1) == XPoly::term(Laurent::A(-6), 1));
    // P_2 = -A^-2 x^2 + A^4 + 1
    XPoly expect = XPoly::term(-Laurent::A(-2), 2) +
                   XPoly::constant(Laurent::A(4) + Laurent::one());
    CHECK(p_n(2) == expect);
}

TEST_CASE("P_{n,k} base cases and the one-step value") {
    for (int n = -4; n <= 4; ++n) CHECK(p_nk(n, 0) == p_n(n));
    // P_{0,1} = (-A^4 - A^-4) x, expanded by hand from the recursion.
    CHECK(p_nk(0, 1) == XPoly::term(-Laurent::A(4) - Laurent::A(-4), 1));
    CHECK(p_nk(1, 0) == XPoly::x_power(1));
}

TEST_CASE("recursion residuals vanish identically") {
    const XPoly x = XPoly::x_power(1);
    for (int n = -12; n <= 12; ++n) {
        XPoly res = p_n(n) + (x * p_n(n - 1)).scaled(Laurent::A(-2)) +
                    p_n(n - 2).scaled(Laurent::A(2));
        CHECK(res.is_zero());
    }
    for (int n = -8; n <= 8; ++n)
        for (unsigned k = 1; k <= 6; ++k) {
            XPoly res = p_nk(n, k) +
                        p_nk(n + 1, k - 1).scaled(Laurent::A(4) - Laurent::one()) +
                        (x * p_nk(n, k - 1)).scaled(-Laurent::A(-2));
            CHECK(res.is_zero());
        }
}

TEST_CASE("deg_x(P_n) = |n| for n != 0") {
    for (int n = -12; n <= 12; ++n) {
        if (n == 0) continue;
        CHECK(p_n(n).degree() == static_cast<unsigned>(n < 0 ? -n : n));
    }
}

TEST_CASE("XPoly rendering") {
    CHECK(p_n(2).str() == "(-A^-2)*x^2 + (A^4+1)");
    CHECK(p_n(-1).str() == "A^-6 * x");
    CHECK(p_n(1).str() == "x");
    CHECK(p_nk(0, 1).str() == "(-A^4-A^-4)*x");
    CHECK(p_n(0).str() == "(-A^2-A^-2)");
}

TEST_CASE("memo tables behave as pure functions under concurrent callers") {
    XPoly direct = p_n(7);
    XPoly a, b;
    std::thread t1([&] { a = p_n(7); });
    std::thread t2([&] { b = p_nk(3, 4); });
    t1.join();
    t2.join();
    CHECK(a == direct);
    CHECK(b == p_nk(3, 4));
}

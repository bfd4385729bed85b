#include "doctest.h"

#include "../oracles.hpp"
#include "tilelab/errors.hpp"
#include "tilelab/structure.hpp"

#include <set>

using namespace tilelab;

namespace {

TileSet S(const Context& c, std::vector<Int> v)
{
    return TileSet(c, std::move(v));
}

ExactRational Q(Int a, Int b = 1)
{
    return ExactRational(a, b);
}

// A_{x,y} by the definition
std::vector<Int> satpair_oracle(Int M, const std::vector<Int>& A, const std::vector<Int>& B, Int x, Int y)
{
    std::vector<Int> out;
    for (Int a : A)
        for (Int b : B)
            if (oracle::gcdM(x - a, M) == oracle::gcdM(y - b, M)) {
                out.push_back(a);
                break;
            }
    return out;
}

} // namespace

TEST_SUITE("structure")
{
    TEST_CASE("divisor counts")
    {
        auto c4 = factorize(4), c9 = factorize(9);
        auto d = divisor_counts(S(c4, {0, 1}), 0);
        CHECK(d[1] == 1);
        CHECK(d[2] == 0);
        CHECK(d[4] == 1);
        auto e = divisor_counts(S(c4, {0, 2}), 0);
        CHECK(e[2] == 1);
        CHECK(e[4] == 1);
        auto f = divisor_counts(S(c9, {0, 3, 6}), 1);
        CHECK(f[1] == 3);
        CHECK(f.total() == 3);
        auto g = divisor_counts(S(c9, {0, 3, 6}), 0, S(c9, {3, 6}));
        CHECK(g[3] == 2);
        CHECK(g[9] == 0);
    }

    TEST_CASE("box product examples")
    {
        auto c4 = factorize(4), c9 = factorize(9);
        CHECK(box_product(S(c4, {0, 1}), S(c4, {0, 2}), 0, 0) == Q(1));
        CHECK(box_product(S(c9, {0, 1, 2}), S(c9, {0, 3, 6}), 0, 1) == Q(1));
        CHECK(oracle::box(9, {0, 1, 2}, {0, 3, 6}, 0, 1) == oracle::Q(1));
        ExactRational bad = box_product(S(c4, {0, 2}), S(c4, {0, 2}), 0, 0);
        CHECK(bad != Q(1));
        CHECK(bad.numerator() == oracle::box(4, {0, 2}, {0, 2}, 0, 0).numerator());
        CHECK(bad.denominator() == oracle::box(4, {0, 2}, {0, 2}, 0, 0).denominator());
    }

    TEST_CASE("property: box product is one on every tiling")
    {
        for (Int M : {8, 12, 18}) {
            auto c = factorize(M);
            BoxProductKernel kernel(*c);
            for (const Tiling& T : enumerate_tilings(c, true))
                for (Int x = 0; x < M; ++x)
                    for (Int y = 0; y < M; ++y) {
                        ExactRational v = box_product(T.A(), T.B(), x, y);
                        CHECK(v == Q(1));
                        auto o = oracle::box(M, T.A().members(), T.B().members(), x, y);
                        CHECK(v.numerator() == o.numerator());
                        CHECK(v.denominator() == o.denominator());
                        auto da = divisor_counts(T.A(), x), db = divisor_counts(T.B(), y);
                        CHECK(kernel.scaled(da.counts.data(), db.counts.data()) == kernel.scale());
                    }
        }
    }

    TEST_CASE("property: box product differs from one off tilings")
    {
        auto c = factorize(8);
        int off = 0;
        for (std::uint64_t a = 1; a < 256; a += 2)
            for (std::uint64_t b = 1; b < 256; b += 2) {
                auto va = oracle::members(a, 8), vb = oracle::members(b, 8);
                if (va.size() * vb.size() != 8 || oracle::tiles(8, va, vb))
                    continue;
                bool all_one = true;
                for (Int x = 0; x < 8; ++x)
                    for (Int y = 0; y < 8; ++y)
                        all_one = all_one && box_product(S(c, va), S(c, vb), x, y) == Q(1);
                CHECK_FALSE(all_one);
                ++off;
            }
        CHECK(off > 0);
    }

    TEST_CASE("dilation count identity")
    {
        auto c4 = factorize(4), c9 = factorize(9), c1 = factorize(1);
        auto r = dilation_count_identity(Tiling(S(c4, {0, 1}), S(c4, {0, 2})), 0, 0);
        CHECK(r.lhs == 2);
        CHECK(r.rhs == 2);
        r = dilation_count_identity(Tiling(S(c9, {0, 1, 2}), S(c9, {0, 3, 6})), 0, 0);
        CHECK(r.lhs == 6);
        CHECK(r.rhs == 6);
        r = dilation_count_identity(Tiling(S(c1, {0}), S(c1, {0})), 0, 0);
        CHECK(r.lhs == 1);
        CHECK(r.rhs == 1);
    }

    TEST_CASE("property: dilation count identity on every tiling")
    {
        for (Int M : {12, 16, 18}) {
            auto c = factorize(M);
            auto R = oracle::units(M);
            for (const Tiling& T : enumerate_tilings(c, true))
                for (Int x = 0; x < M; x += 3)
                    for (Int y = 0; y < M; y += 2) {
                        auto r = dilation_count_identity(T, x, y);
                        Int triples = 0;
                        for (Int a : T.A())
                            for (Int b : T.B())
                                for (Int u : R)
                                    triples += oracle::mod(u * (a - x) + (b - y), M) == 0;
                        CHECK(r.lhs == triples);
                        CHECK(r.lhs == oracle::phi(M));
                    }
        }
    }

    TEST_CASE("saturating sets")
    {
        auto c4 = factorize(4), c9 = factorize(9);
        auto [a, b] = saturating_pair_sets(S(c4, {0, 1}), S(c4, {0, 2}), 0, 0);
        CHECK(a.members() == std::vector<Int>{0});
        CHECK(b.members() == std::vector<Int>{0});

        auto [a9, b9] = saturating_pair_sets(S(c9, {0, 1, 2}), S(c9, {0, 3, 6}), 0, 0);
        CHECK(a9.members() == satpair_oracle(9, {0, 1, 2}, {0, 3, 6}, 0, 0));
        CHECK(b9.members() == satpair_oracle(9, {0, 3, 6}, {0, 1, 2}, 0, 0));
        CHECK(box_product(divisor_counts(S(c9, {0, 1, 2}), 0, a9), divisor_counts(S(c9, {0, 3, 6}), 0, b9)) == Q(1));

        CHECK(saturating_set(S(c4, {0, 1}), S(c4, {0, 2}), 0).members() == std::vector<Int>{0});
        CHECK(saturating_set(S(c4, {0, 1}), S(c4, {0, 2}), 2).members() == std::vector<Int>{0});
        for (Int x : {0, 1})
            CHECK(saturating_set(S(c4, {0, 1}), S(c4, {0, 2}), x).contains(x));
    }

    TEST_CASE("saturated set dilation equivalence examples")
    {
        auto c4 = factorize(4), c12 = factorize(12);
        CHECK(satset_dilation_equiv(S(c4, {0, 1}), S(c4, {0, 2}), 0, 0, 0, 0));
        CHECK_FALSE(satset_dilation_equiv(S(c4, {0, 1}), S(c4, {0, 2}), 0, 0, 1, 2));
        CHECK_FALSE(satset_dilation_equiv(S(c12, {0, 1, 6, 7}), S(c12, {0, 4, 8}), 1, 4, 7, 8));
    }

    TEST_CASE("membership in both saturated sets is weaker than a matched pair")
    {
        // a ∈ A_{x,y} and b ∈ B_{y,x} can hold through different partners
        auto c = factorize(6);
        TileSet A = S(c, {0, 3}), B = S(c, {0, 1, 2});
        REQUIRE(verify_direct(A, B));
        bool witnessed = false;
        for (Int x = 0; x < 6; ++x)
            for (Int y = 0; y < 6; ++y)
                for (Int a : A)
                    for (Int b : B)
                        if (satset_membership(A, B, x, y, a, b) && !dilation_exists(*c, x - a, y - b))
                            witnessed = true;
        CHECK(satset_membership(A, B, 1, 0, 0, 2));
        CHECK_FALSE(satset_dilation_equiv(A, B, 1, 0, 0, 2));
        CHECK(witnessed);
    }

    TEST_CASE("property: matched pairs are exactly the dilation-related pairs")
    {
        for (Int M : {12, 16, 24}) {
            auto c = factorize(M);
            auto R = oracle::units(M);
            for (const Tiling& T : enumerate_tilings(c, true))
                for (Int x = 0; x < M; x += 5)
                    for (Int y = 0; y < M; y += 3)
                        for (Int a : T.A())
                            for (Int b : T.B()) {
                                bool scan = false;
                                for (Int r : R)
                                    scan = scan || oracle::mod(x - a - r * (y - b), M) == 0;
                                CHECK(satset_dilation_equiv(T.A(), T.B(), x, y, a, b) == scan);
                            }
        }
    }

    TEST_CASE("property: restricted box product saturates")
    {
        for (Int M : {12, 18, 24}) {
            auto c = factorize(M);
            for (const Tiling& T : enumerate_tilings(c, true))
                for (Int x = 0; x < M; x += 1)
                    for (Int y = 0; y < M; y += 5) {
                        auto [ax, by] = saturating_pair_sets(T.A(), T.B(), x, y);
                        CHECK(ax.members() == satpair_oracle(M, T.A().members(), T.B().members(), x, y));
                        CHECK(box_product(divisor_counts(T.A(), x, ax), divisor_counts(T.B(), y, by)) == Q(1));
                        // A_x is the union of A_{x,b}
                        std::set<Int> uni;
                        for (Int b : T.B())
                            for (Int a : saturating_pair_sets(T.A(), T.B(), x, b).first)
                                uni.insert(a);
                        CHECK(saturating_set(T.A(), T.B(), x).members() == std::vector<Int>(uni.begin(), uni.end()));
                    }
        }
    }
}

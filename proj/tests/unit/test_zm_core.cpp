#include "doctest.h"

#include "../oracles.hpp"
#include "tilelab/errors.hpp"
#include "tilelab/zm_core.hpp"

#include <numeric>

using namespace tilelab;

TEST_SUITE("zm_core")
{
    TEST_CASE("factorize examples")
    {
        auto c = factorize(144);
        REQUIRE(c->rank() == 2);
        CHECK(c->prime(0) == 2);
        CHECK(c->exponent(0) == 4);
        CHECK(c->prime(1) == 3);
        CHECK(c->exponent(1) == 2);
        CHECK(c->phi(144) == 48);

        auto d = factorize(900);
        REQUIRE(d->rank() == 3);
        CHECK(d->primes()[0].p == 2);
        CHECK(d->primes()[1].p == 3);
        CHECK(d->primes()[2].p == 5);
        for (const auto& pp : d->primes())
            CHECK(pp.n == 2);

        auto one = factorize(1);
        CHECK(one->rank() == 0);
        CHECK(one->divisors() == std::vector<Int>{1});

        CHECK_THROWS_AS(factorize(0), InvalidInput);
    }

    TEST_CASE("radical quotient")
    {
        CHECK(radical_quotient(12) == 2);
        CHECK(radical_quotient(900) == 30);
        for (Int p : {2, 3, 5, 7, 11, 13, 97})
            CHECK(radical_quotient(p) == 1);
        CHECK(radical_quotient(1) == 1);
    }

    TEST_CASE("gcd divisor")
    {
        auto c12 = factorize(12);
        CHECK(gcd_divisor(*c12, c12->residue(5), c12->residue(1)) == 4);
        CHECK(gcd_divisor(*c12, c12->residue(7), c12->residue(7)) == 12);
        auto c9 = factorize(9);
        CHECK(gcd_divisor(*c9, c9->residue(3), c9->residue(0)) == 3);
    }

    TEST_CASE("coordinates")
    {
        auto c12 = factorize(12);
        CHECK(c12->residue(7).coords == std::vector<Int>{1, 1});
        CHECK(c12->from_coords(std::vector<Int>{0, 0}).value == 0);
        auto c9 = factorize(9);
        CHECK(c9->residue(5).coords == std::vector<Int>{5});
        CHECK_THROWS_AS(c12->from_coords(std::vector<Int>{4, 0}), InvalidInput);
        CHECK_THROWS_AS(c12->from_coords(std::vector<Int>{0, 3}), InvalidInput);
    }

    TEST_CASE("coordinates match a search oracle")
    {
        for (Int M : {12, 36, 60, 72, 90, 120}) {
            auto c = factorize(M);
            for (Int x = 0; x < M; ++x) {
                auto r = c->residue(x);
                CHECK(r.coords == oracle::coords(M, x));
                CHECK(c->from_coords(r.coords).value == x);
            }
        }
    }

    TEST_CASE("grids, fibers, planes and lines")
    {
        auto c12 = factorize(12);
        CHECK(fiber(c12, 1, 0).members() == std::vector<Int>{1, 7});
        CHECK(realize_grid(c12, 1, 4).members() == std::vector<Int>{1, 5, 9});
        auto c9 = factorize(9);
        CHECK(fiber(c9, 0, 0).members() == std::vector<Int>{0, 3, 6});
        CHECK(plane(c12, 0, 0, 2).size() == 3);
        CHECK(line(c12, 0, 0).size() == 4);
        CHECK(line(c12, 0, 1).size() == 3);
        CHECK_THROWS_AS(plane(c12, 0, 0, 3), InvalidInput);
    }

    TEST_CASE("property: context invariants")
    {
        for (Int M = 1; M <= 400; ++M) {
            auto c = factorize(M);
            Int prod = 1;
            for (int j = 0; j < c->rank(); ++j) {
                prod *= c->prime_power(j);
                CHECK(std::gcd(c->crt_basis(j), c->prime(j)) == 1);
                if (j)
                    CHECK(c->prime(j - 1) < c->prime(j));
            }
            CHECK(prod == M);
            Int total = 0;
            for (Int d : c->divisors()) {
                CHECK(c->phi(d) == oracle::phi(d));
                total += c->phi(d);
            }
            CHECK(total == M);
            CHECK(c->divisors() == oracle::divisors(M));
        }
    }

    TEST_CASE("property: grids partition and divisors are translation invariant")
    {
        for (Int M : {12, 24, 36, 60}) {
            auto c = factorize(M);
            for (Int D : c->divisors()) {
                std::vector<int> hit(static_cast<std::size_t>(M), 0);
                for (Int x = 0; x < D; ++x) {
                    TileSet g = realize_grid(c, x, D);
                    CHECK(static_cast<Int>(g.size()) == M / D);
                    for (Int y : g)
                        ++hit[y];
                }
                CHECK(std::all_of(hit.begin(), hit.end(), [](int h) { return h == 1; }));
            }
            for (Int x = 0; x < M; ++x)
                for (Int y = 0; y < M; y += 5)
                    for (Int z = 0; z < M; z += 7)
                        CHECK(c->gcd(x - y) == c->gcd((x + z) - (y + z)));
        }
    }
}

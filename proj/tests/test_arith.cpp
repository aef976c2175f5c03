#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <random>
#include <stdexcept>

#include "oracle.hpp"
#include "twosq/arith.hpp"

using namespace twosq;

TEST_CASE("isqrt and is_perfect_square are exact") {
    CHECK(isqrt(0) == 0);
    CHECK(isqrt(1) == 1);
    CHECK(isqrt(3) == 1);
    CHECK(isqrt(4) == 2);
    CHECK(isqrt(UINT64_MAX) == 4294967295ULL);

    for (uint64_t n = 0; n < 70000; ++n) {
        const uint64_t r = isqrt(n);
        CHECK(r * r <= n);
        CHECK((r + 1) * (r + 1) > n);
    }

    std::mt19937_64 rng(7);
    for (int i = 0; i < 20000; ++i) {
        const uint64_t n = rng();
        const uint64_t r = isqrt(n);
        CHECK(r * r <= n);
        CHECK(((r >= 4294967295ULL) || (r + 1) * (r + 1) > n));
        const uint64_t s = rng() & 0xffffffffULL;
        CHECK(is_perfect_square(s * s));
    }
    CHECK(is_perfect_square(0));
    CHECK(is_perfect_square(1));
    CHECK_FALSE(is_perfect_square(2));
    CHECK_FALSE(is_perfect_square(UINT64_MAX));
}

TEST_CASE("is_prime matches slow trial division on small inputs") {
    for (uint64_t n = 0; n < 20000; ++n) {
        CHECK(is_prime(n) == oracle::is_prime_slow(n));
    }
}

TEST_CASE("is_prime frozen values") {
    CHECK(is_prime(2));
    CHECK_FALSE(is_prime(1));
    CHECK_FALSE(is_prime(0));
    CHECK_FALSE(is_prime(1151121374334ULL));  // divisible by 18
    CHECK(is_prime(2147483647ULL));           // 2^31 - 1
    CHECK(is_prime(2305843009213693951ULL));  // 2^61 - 1
    CHECK_FALSE(is_prime(2305843009213693951ULL * 2));
    CHECK_FALSE(is_prime(3215031751ULL));  // strong pseudoprime to bases 2,3,5,7
}

TEST_CASE("factor frozen values") {
    CHECK(factor(142) == Factorization{142, {{2, 1}, {71, 1}}});
    CHECK(factor(140) == Factorization{140, {{2, 2}, {5, 1}, {7, 1}}});
    CHECK(factor(1) == Factorization{1, {}});
    CHECK(factor(0) == Factorization{0, {}});
    CHECK(factor(1024) == Factorization{1024, {{2, 10}}});
    // Square of a prime above the trial-division bound: exercises the
    // splitting fallback.
    const uint64_t p31 = 2147483647ULL;
    CHECK(factor(p31 * p31) == Factorization{p31 * p31, {{p31, 2}}});
    // Product of two distinct large primes.
    const uint64_t q = 2305843009213693951ULL;  // 2^61 - 1
    CHECK(factor(q * 3) == Factorization{q * 3, {{3, 1}, {q, 1}}});
}

TEST_CASE("factor reconstructs n with increasing certified primes") {
    auto check_factorization = [](uint64_t n) {
        const Factorization f = factor(n);
        CHECK(f.n == n);
        if (n < 2) {
            CHECK(f.factors.empty());
            return;
        }
        uint64_t product = 1;
        uint64_t last_prime = 0;
        for (const PrimePower& pp : f.factors) {
            CHECK(pp.prime > last_prime);
            CHECK(pp.exponent >= 1);
            CHECK(is_prime(pp.prime));
            last_prime = pp.prime;
            for (uint32_t i = 0; i < pp.exponent; ++i) product *= pp.prime;
        }
        CHECK(product == n);
    };

    for (uint64_t n = 0; n < 5000; ++n) check_factorization(n);
    std::mt19937_64 rng(11);
    for (int i = 0; i < 300; ++i) check_factorization(rng());
    for (int i = 0; i < 300; ++i) check_factorization(rng() % 1000000007ULL);
}

TEST_CASE("factor is reproducible run to run") {
    std::mt19937_64 rng(13);
    for (int i = 0; i < 50; ++i) {
        const uint64_t n = rng();
        CHECK(factor(n) == factor(n));
    }
}

TEST_CASE("two_squares_classify frozen values") {
    const TwoSquaresVerdict v141 = two_squares_classify(141);
    CHECK_FALSE(v141.representable);
    REQUIRE(v141.obstruction.has_value());
    CHECK(*v141.obstruction == Obstruction{3, 1});

    const TwoSquaresVerdict v0 = two_squares_classify(0);
    CHECK(v0.representable);
    REQUIRE(v0.witness.has_value());
    CHECK(*v0.witness == SquarePair{0, 0});

    // 25 = 0^2 + 5^2: the witness rule picks the smallest x.
    const TwoSquaresVerdict v25 = two_squares_classify(25);
    CHECK(v25.representable);
    REQUIRE(v25.witness.has_value());
    CHECK(*v25.witness == SquarePair{0, 5});
    CHECK(v25.witness->x * v25.witness->x + v25.witness->y * v25.witness->y == 25);

    const TwoSquaresVerdict v2 = two_squares_classify(2);
    REQUIRE(v2.witness.has_value());
    CHECK(*v2.witness == SquarePair{1, 1});
}

TEST_CASE("two_squares_oracle frozen values and range guard") {
    CHECK(two_squares_oracle(2).representable);
    CHECK(*two_squares_oracle(2).witness == SquarePair{1, 1});
    CHECK_FALSE(two_squares_oracle(3).representable);
    CHECK_FALSE(two_squares_oracle(535903).representable);
    CHECK_FALSE(two_squares_oracle(3).obstruction.has_value());
    CHECK_THROWS_AS((void)two_squares_oracle(1000000001ULL), std::invalid_argument);
    CHECK_NOTHROW((void)two_squares_oracle(1000000000ULL));
}

TEST_CASE("classify agrees with the brute-force oracle up to 100000") {
    for (uint64_t n = 0; n <= 100000; ++n) {
        const TwoSquaresVerdict fast = two_squares_classify(n);
        const TwoSquaresVerdict slow = two_squares_oracle(n);
        REQUIRE(fast.representable == slow.representable);
        if (fast.representable) {
            CHECK(fast.witness->x * fast.witness->x + fast.witness->y * fast.witness->y == n);
            CHECK(fast.witness->x <= fast.witness->y);
        }
    }
}

TEST_CASE("obstructions are valid and minimal") {
    for (uint64_t n = 2; n <= 20000; ++n) {
        const TwoSquaresVerdict v = two_squares_classify(n);
        if (v.representable) continue;
        REQUIRE(v.obstruction.has_value());
        const uint64_t p = v.obstruction->prime;
        const uint32_t e = v.obstruction->exponent;
        CHECK(p % 4 == 3);
        CHECK(e % 2 == 1);
        CHECK(is_prime(p));
        uint64_t m = n;
        uint32_t multiplicity = 0;
        while (m % p == 0) {
            m /= p;
            ++multiplicity;
        }
        CHECK(multiplicity == e);
        // No smaller prime 3 mod 4 with odd exponent exists.
        for (const PrimePower& pp : factor(n).factors) {
            if (pp.prime >= p) break;
            CHECK((pp.prime % 4 != 3 || pp.exponent % 2 == 0));
        }
    }
}

TEST_CASE("doubling preserves non-representability") {
    for (uint64_t n = 2; n <= 10000; ++n) {
        if (two_squares_classify(n).representable) continue;
        for (uint32_t a = 1; a <= 10; ++a) {
            CHECK_FALSE(two_squares_classify(n << a).representable);
        }
    }
}

TEST_CASE("squares_mod frozen values and range guard") {
    CHECK(squares_mod(9) == std::vector<uint32_t>{0, 1, 4, 7});
    CHECK(squares_mod(2) == std::vector<uint32_t>{0, 1});
    CHECK(squares_mod(4) == std::vector<uint32_t>{0, 1});
    CHECK_THROWS_AS((void)squares_mod(1), std::invalid_argument);
    CHECK_THROWS_AS((void)squares_mod(1000001), std::invalid_argument);
    CHECK_THROWS_AS((void)two_square_sums_mod(1000001), std::invalid_argument);
    CHECK_NOTHROW((void)squares_mod(1000000));
}

TEST_CASE("two_square_sums_mod frozen values") {
    CHECK(two_square_sums_mod(8) == std::vector<uint32_t>{0, 1, 2, 4, 5});
    CHECK(two_square_sums_mod(4) == std::vector<uint32_t>{0, 1, 2});
    CHECK(two_square_sums_mod(9) == std::vector<uint32_t>{0, 1, 2, 4, 5, 7, 8});
    const std::vector<uint32_t> mod8 = two_square_sums_mod(8);
    CHECK_FALSE(std::binary_search(mod8.begin(), mod8.end(), 6u));
    const std::vector<uint32_t> mod9 = two_square_sums_mod(9);
    CHECK_FALSE(std::binary_search(mod9.begin(), mod9.end(), 3u));
    CHECK_FALSE(std::binary_search(mod9.begin(), mod9.end(), 6u));
}

TEST_CASE("residue sets match the slow oracle across moduli") {
    for (uint32_t m = 2; m <= 400; ++m) {
        CHECK(squares_mod(m) == oracle::squares_mod_slow(m));
        CHECK(two_square_sums_mod(m) == oracle::two_square_sums_mod_slow(m));
    }
    for (uint32_t m : {720u, 1009u, 2048u, 5040u}) {
        CHECK(squares_mod(m) == oracle::squares_mod_slow(m));
        CHECK(two_square_sums_mod(m) == oracle::two_square_sums_mod_slow(m));
    }
}

TEST_CASE("two_square_sums_mod covers squares and is closed over witnesses") {
    // Every actual value x^2 + y^2 reduces into the set; spot check big m.
    const uint32_t m = 99991;
    const std::vector<uint32_t> sums = two_square_sums_mod(m);
    std::mt19937_64 rng(17);
    for (int i = 0; i < 2000; ++i) {
        const uint64_t x = rng() % 100000, y = rng() % 100000;
        const uint32_t r = static_cast<uint32_t>((x * x + y * y) % m);
        CHECK(std::binary_search(sums.begin(), sums.end(), r));
    }
}

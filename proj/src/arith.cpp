#include "twosq/arith.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>
#include <string>

namespace twosq {

namespace {

using u128 = unsigned __int128;

constexpr uint64_t kTrialDivisionBound = 1'000'000;
constexpr uint64_t kOracleBound = 1'000'000'000;
constexpr uint32_t kResidueSetBound = 1'000'000;

uint64_t mulmod(uint64_t a, uint64_t b, uint64_t m) {
    return static_cast<uint64_t>(u128(a) * b % m);
}

uint64_t powmod(uint64_t base, uint64_t exp, uint64_t m) {
    uint64_t result = 1;
    base %= m;
    while (exp > 0) {
        if (exp & 1) result = mulmod(result, base, m);
        base = mulmod(base, base, m);
        exp >>= 1;
    }
    return result;
}

// Primes below 10^6, built once on first use.
const std::vector<uint32_t>& small_primes() {
    static const std::vector<uint32_t> primes = [] {
        std::vector<char> composite(kTrialDivisionBound + 1, 0);
        std::vector<uint32_t> out;
        for (uint64_t p = 2; p <= kTrialDivisionBound; ++p) {
            if (composite[p]) continue;
            out.push_back(static_cast<uint32_t>(p));
            for (uint64_t q = p * p; q <= kTrialDivisionBound; q += p) composite[q] = 1;
        }
        return out;
    }();
    return primes;
}

// Pollard rho (Brent's cycle finding). n must be odd, composite and free of
// prime factors <= 10^6, so any nontrivial divisor works. Parameters come
// from a caller-owned fixed-seed generator to keep factor() reproducible.
uint64_t pollard_rho(uint64_t n, std::mt19937_64& rng) {
    while (true) {
        const uint64_t c = rng() % (n - 1) + 1;
        uint64_t anchor = rng() % n;
        uint64_t x = anchor;
        uint64_t d = 1;
        uint64_t power = 1, lam = 0;
        while (d == 1) {
            if (lam == power) {
                anchor = x;
                power *= 2;
                lam = 0;
            }
            x = mulmod(x, x, n) + c;
            if (x >= n) x -= n;
            ++lam;
            d = std::gcd(x > anchor ? x - anchor : anchor - x, n);
        }
        if (d != n) return d;  // d == n: degenerate orbit, retry with new parameters
    }
}

void factor_large(uint64_t n, std::mt19937_64& rng, std::vector<uint64_t>& out) {
    if (n == 1) return;
    if (is_prime(n)) {
        out.push_back(n);
        return;
    }
    const uint64_t d = pollard_rho(n, rng);
    factor_large(d, rng, out);
    factor_large(n / d, rng, out);
}

}  // namespace

uint64_t isqrt(uint64_t n) {
    if (n == 0) return 0;
    auto r = static_cast<uint64_t>(std::sqrt(static_cast<double>(n)));
    while (r > 0 && u128(r) * r > n) --r;
    while (u128(r + 1) * (r + 1) <= n) ++r;
    return r;
}

bool is_perfect_square(uint64_t n) {
    // Squares mod 16 are only 0, 1, 4 or 9; cheap reject before the sqrt.
    static constexpr bool kSquareMod16[16] = {true,  true,  false, false, true, false,
                                              false, false, false, true,  false, false,
                                              false, false, false, false};
    if (!kSquareMod16[n & 15]) return false;
    const uint64_t r = isqrt(n);
    return r * r == n;
}

bool is_prime(uint64_t n) {
    if (n < 2) return false;
    for (uint64_t p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        if (n % p == 0) return n == p;
    }
    uint64_t d = n - 1;
    int r = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++r;
    }
    // This base set decides primality exactly for every n < 2^64.
    for (uint64_t a : {2ull, 325ull, 9375ull, 28178ull, 450775ull, 9780504ull, 1795265022ull}) {
        a %= n;
        if (a == 0) continue;
        uint64_t x = powmod(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool witness = true;
        for (int i = 1; i < r; ++i) {
            x = mulmod(x, x, n);
            if (x == n - 1) {
                witness = false;
                break;
            }
        }
        if (witness) return false;
    }
    return true;
}

Factorization factor(uint64_t n) {
    Factorization result;
    result.n = n;
    if (n < 2) return result;

    uint64_t rem = n;
    for (uint32_t p : small_primes()) {
        if (u128(p) * p > rem) break;
        if (rem % p != 0) continue;
        uint32_t e = 0;
        while (rem % p == 0) {
            rem /= p;
            ++e;
        }
        result.factors.push_back({p, e});
    }
    if (rem == 1) return result;
    if (rem <= u128(kTrialDivisionBound) * kTrialDivisionBound || is_prime(rem)) {
        // Past the loop above, any remainder this small must be prime.
        result.factors.push_back({rem, 1});
        return result;
    }

    std::mt19937_64 rng(0x2545F4914F6CDD1DULL);  // fixed seed: factor(n) is a pure function
    std::vector<uint64_t> large;
    factor_large(rem, rng, large);
    std::sort(large.begin(), large.end());
    for (size_t i = 0; i < large.size();) {
        size_t j = i;
        while (j < large.size() && large[j] == large[i]) ++j;
        result.factors.push_back({large[i], static_cast<uint32_t>(j - i)});
        i = j;
    }
    return result;
}

TwoSquaresVerdict two_squares_classify(uint64_t n) {
    TwoSquaresVerdict verdict;
    const Factorization f = factor(n);
    for (const PrimePower& pp : f.factors) {
        // Factors come back in increasing order, so the first hit is the
        // smallest obstructing prime.
        if (pp.prime % 4 == 3 && pp.exponent % 2 == 1) {
            verdict.representable = false;
            verdict.obstruction = Obstruction{pp.prime, pp.exponent};
            return verdict;
        }
    }
    verdict.representable = true;
    for (uint64_t x = 0; 2 * x * x <= n; ++x) {
        const uint64_t rest = n - x * x;
        if (is_perfect_square(rest)) {
            verdict.witness = SquarePair{x, isqrt(rest)};
            return verdict;
        }
    }
    throw std::logic_error("two_squares_classify: criterion and search disagree for n=" +
                           std::to_string(n));
}

TwoSquaresVerdict two_squares_oracle(uint64_t n) {
    if (n > kOracleBound) {
        throw std::invalid_argument("two_squares_oracle: n=" + std::to_string(n) +
                                    " exceeds the documented oracle range 10^9");
    }
    TwoSquaresVerdict verdict;
    for (uint64_t x = 0; 2 * x * x <= n; ++x) {
        const uint64_t rest = n - x * x;
        if (is_perfect_square(rest)) {
            verdict.representable = true;
            verdict.witness = SquarePair{x, isqrt(rest)};
            return verdict;
        }
    }
    verdict.representable = false;
    return verdict;
}

std::vector<uint32_t> squares_mod(uint32_t m) {
    if (m < 2 || m > kResidueSetBound) {
        throw std::invalid_argument("squares_mod: m=" + std::to_string(m) +
                                    " outside supported range [2, 10^6]");
    }
    std::vector<char> seen(m, 0);
    for (uint64_t x = 0; x < m; ++x) seen[x * x % m] = 1;
    std::vector<uint32_t> out;
    for (uint32_t r = 0; r < m; ++r) {
        if (seen[r]) out.push_back(r);
    }
    return out;
}

std::vector<uint32_t> two_square_sums_mod(uint32_t m) {
    const std::vector<uint32_t> squares = squares_mod(m);

    // acc over 2m bits: for each square s, OR in the square bitmap shifted
    // left by s, then fold [m, 2m) back onto [0, m).
    const size_t words = (m + 63) / 64;
    std::vector<uint64_t> base(words, 0);
    for (uint32_t s : squares) base[s / 64] |= uint64_t(1) << (s % 64);

    std::vector<uint64_t> acc(2 * words + 1, 0);
    for (uint32_t s : squares) {
        const uint32_t word_shift = s / 64;
        const uint32_t bit_shift = s % 64;
        for (size_t i = 0; i < words; ++i) {
            acc[i + word_shift] |= base[i] << bit_shift;
            if (bit_shift != 0) acc[i + word_shift + 1] |= base[i] >> (64 - bit_shift);
        }
    }
    std::vector<uint32_t> out;
    for (uint32_t r = 0; r < m; ++r) {
        const uint32_t hi = r + m;
        const bool set = ((acc[r / 64] >> (r % 64)) & 1) || ((acc[hi / 64] >> (hi % 64)) & 1);
        if (set) out.push_back(r);
    }
    return out;
}

}  // namespace twosq

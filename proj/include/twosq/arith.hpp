// Exact 64-bit integer arithmetic: primality, factorization, and the
// two-squares criterion with obstruction extraction.
#pragma once

#include <cstdint>
#include <optional>
#include <vector>

namespace twosq {

struct PrimePower {
    uint64_t prime = 0;
    uint32_t exponent = 0;
    friend bool operator==(const PrimePower&, const PrimePower&) = default;
};

/// Prime-power decomposition of n. Primes are strictly increasing and every
/// exponent is >= 1; n in {0, 1} has an empty factor list.
struct Factorization {
    uint64_t n = 0;
    std::vector<PrimePower> factors;
    friend bool operator==(const Factorization&, const Factorization&) = default;
};

/// A pair with x <= y and x^2 + y^2 equal to the classified value.
struct SquarePair {
    uint64_t x = 0;
    uint64_t y = 0;
    friend bool operator==(const SquarePair&, const SquarePair&) = default;
};

/// A prime p == 3 (mod 4) dividing the classified value to an odd, maximal
/// exponent. Its presence blocks any two-squares representation.
struct Obstruction {
    uint64_t prime = 0;
    uint32_t exponent = 0;
    friend bool operator==(const Obstruction&, const Obstruction&) = default;
};

/// representable == true iff witness is present iff obstruction is absent.
struct TwoSquaresVerdict {
    bool representable = false;
    std::optional<SquarePair> witness;
    std::optional<Obstruction> obstruction;
};

/// Floor of sqrt(n), exact for the whole 64-bit range.
uint64_t isqrt(uint64_t n);

bool is_perfect_square(uint64_t n);

/// Deterministic primality test (Miller-Rabin with a base set that is exact
/// for all 64-bit inputs, no probabilistic false positives).
bool is_prime(uint64_t n);

/// Trial division by primes <= 10^6, then a deterministic compositeness test
/// plus fixed-seed Pollard rho splitting for what remains. Exact and
/// reproducible for any 64-bit n.
Factorization factor(uint64_t n);

/// Two-squares criterion: n = x^2 + y^2 is solvable iff every prime
/// p == 3 (mod 4) divides n to an even power. On failure the obstruction is
/// the smallest such prime with odd exponent; on success the witness is the
/// one with smallest x (so x <= y). Deterministic given n.
TwoSquaresVerdict two_squares_classify(uint64_t n);

/// Brute force over all x <= y with x^2 + y^2 = n; cross-validation only.
/// No obstruction is reported on failure. Rejects n > 10^9.
TwoSquaresVerdict two_squares_oracle(uint64_t n);

/// Sorted set { x^2 mod m : 0 <= x < m }. Rejects m outside [2, 10^6].
std::vector<uint32_t> squares_mod(uint32_t m);

/// Sorted set { (x^2 + y^2) mod m }. Rejects m outside [2, 10^6].
std::vector<uint32_t> two_square_sums_mod(uint32_t m);

}  // namespace twosq

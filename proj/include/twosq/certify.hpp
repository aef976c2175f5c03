// Machine-checkable proofs that an integer is not a sum of two squares plus
// at most k powers of 2, an independent verifier for them, and the tower
// rules that lift one certificate to an infinite doubling family.
#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

#include "twosq/arith.hpp"

namespace twosq {

/// One subtraction case: remainder = n - sum of 2^a over exponents, together
/// with the obstruction prime that blocks remainder = x^2 + y^2.
struct CaseRecord {
    std::vector<uint32_t> exponents;  // strictly decreasing, 0 to 3 entries
    uint64_t remainder = 0;
    Obstruction obstruction;
    friend bool operator==(const CaseRecord&, const CaseRecord&) = default;
};

/// Exhaustive proof that n is not a sum of two squares plus at most k powers
/// of 2: one CaseRecord per subset of <= k distinct exponents whose power-sum
/// is <= n, including the empty subset.
struct Certificate {
    uint64_t n = 0;
    int k = 0;
    std::vector<CaseRecord> cases;
    friend bool operator==(const Certificate&, const Certificate&) = default;
};

/// Counterexample to a certificate request: x^2 + y^2 + sum of 2^a = n.
struct RepresentationWitness {
    uint64_t n = 0;
    int k = 0;
    uint64_t x = 0;
    uint64_t y = 0;
    std::vector<uint32_t> exponents;
};

using CertifyResult = std::variant<Certificate, RepresentationWitness>;

struct EnumeratedCase {
    std::vector<uint32_t> exponents;
    uint64_t remainder = 0;
    friend bool operator==(const EnumeratedCase&, const EnumeratedCase&) = default;
};

/// All subsets of <= k distinct exponents with power-sum <= n, ordered by
/// subset size then ascending exponent tuples. The empty subset (remainder n)
/// comes first; a subset summing exactly to n has remainder 0.
std::vector<EnumeratedCase> enumerate_cases(uint64_t n, int k);

/// Returns a Certificate when every case remainder fails the two-squares
/// criterion, otherwise the first representation found in case order.
CertifyResult certify(uint64_t n, int k);

struct VerifyResult {
    bool ok = false;
    std::string diagnostic;  // empty when ok
    explicit operator bool() const { return ok; }
};

/// Independent checker: recomputes case coverage and verifies each
/// obstruction by divisibility, congruence, parity and primality alone. It
/// never calls certify() or factor().
VerifyResult verify_certificate(const Certificate& cert);

enum class FamilyRule {
    mod18_tower,  // k = 2, requires 18 | n
    even_tower,   // k = 1, requires 2 | n
    doubling,     // k = 0, no divisibility hypothesis
};

const char* family_rule_name(FamilyRule rule);

/// A verified claim that 2^a * base.n is non-representable for every a >= 0.
struct FamilyStatement {
    Certificate base;
    FamilyRule rule = FamilyRule::doubling;
    std::string conclusion;
};

/// Lifts a verified certificate to its doubling family via the strongest
/// applicable rule. Throws std::runtime_error naming the failed divisibility
/// hypothesis when no rule applies.
FamilyStatement lift_family(const Certificate& cert);

/// Directly certifies 2^a * n for each requested a. Throws
/// std::overflow_error if a shift leaves the 64-bit range.
bool spot_check_family(const FamilyStatement& family, const std::vector<uint32_t>& alphas);

// Certificate file format (line-oriented UTF-8): "CERT v1", "N <dec>",
// "K <dec>", one "CASE exps=<comma list or -> rem=<dec> p=<dec> e=<dec>" per
// case, then "END". Parsers reject unknown versions and trailing garbage.
void write_certificate(const Certificate& cert, std::ostream& out);
Certificate parse_certificate(std::istream& in);
void save_certificate(const Certificate& cert, const std::string& path);
Certificate load_certificate(const std::string& path);

}  // namespace twosq

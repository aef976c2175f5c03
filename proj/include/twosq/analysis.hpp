// Counting, density reporting, residue-family exhaustive checks, symbolic
// congruence proofs for residue families, and the N/N-2 shift observation.
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "twosq/sieve.hpp"

namespace twosq {

/// How many integers in [2, limit] have no representation, per a sealed table.
/// density = nonrepresentable_count / (limit - 1), kept as an exact fraction.
struct DensityReport {
    uint64_t limit = 0;
    int k = 0;
    uint64_t nonrepresentable_count = 0;
    uint64_t density_num = 0;
    uint64_t density_den = 1;
    std::vector<uint64_t> sample_listing;  // first <= 100 non-representables
};

/// Precondition: table sealed, unfiltered, k matching, covering [0, limit).
/// Throws std::invalid_argument on any mismatch.
DensityReport density_report(uint64_t limit, int k, const MarkTable& table);

/// Machine-readable line record: "COUNT limit=<..> k=<..> value=<..>".
std::string count_record(uint64_t limit, int k, uint64_t value);

struct ResidueCheck {
    bool holds = false;                      // every family member got a certificate
    std::optional<uint64_t> counterexample;  // smallest representable member, if any
    uint64_t checked = 0;                    // family members examined
};

/// Certifies every n >= 2 with n = residue (mod modulus) and n < limit as
/// non-representable, stopping at the first representable member.
ResidueCheck residue_family_check(uint64_t residue, uint64_t modulus, int k, uint64_t limit);

/// One discharged case of a residue-family congruence proof: subtracting the
/// case's powers of 2 lands every family member in a residue class modulo
/// discharge_modulus that is never a sum of two squares.
struct ProofCase {
    std::string label;              // "no power", "2^0", "2^a (a>=2)", ...
    uint32_t discharge_modulus = 0;
    std::vector<uint32_t> residues;  // impossible classes mod discharge_modulus
};

struct ResidueProof {
    bool ok = false;
    uint64_t residue = 0;
    uint64_t modulus = 0;
    int k = 0;
    int tail_threshold = 0;        // exponents < threshold are split out one by one
    std::vector<ProofCase> cases;  // filled when ok
    std::string stuck_label;       // when !ok: first case no modulus discharges
};

/// Attempts a purely congruential proof that no n = residue (mod modulus) is a
/// sum of two squares plus at most k powers of 2. Cases with exponent below a
/// minimal tail threshold T are handled individually; the tails "a >= T" are
/// discharged with power-of-2 moduli 2^j (j <= T), where every such power
/// vanishes. Discharge moduli are drawn from the fixed list {4, 8, 9, 16, 32,
/// 72}, scanned in that order. Best effort: a failure value names the first
/// case that resists every modulus, it does not prove representability.
ResidueProof residue_family_prove(uint64_t residue, uint64_t modulus, int k);

struct ShiftCheck {
    bool ok = false;
    std::vector<uint64_t> violations;  // non-representable N with N-2 also non-representable
};

/// Checks that for every non-representable N in a sealed k=2 table, N - 2 is
/// representable. Throws std::invalid_argument on k != 2 or a filtered table.
ShiftCheck shift_check(const MarkTable& table);

struct TowerListing {
    uint64_t base = 0;
    uint64_t limit = 0;
    std::vector<uint64_t> values;  // base * 2^alpha < limit, ascending
};

/// Lists the geometric family base * 2^alpha below limit; its size grows like
/// log2(limit), exhibiting the logarithmic density of lifted families.
TowerListing tower_density_listing(uint64_t base, uint64_t limit);

}  // namespace twosq

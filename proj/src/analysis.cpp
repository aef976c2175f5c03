#include "twosq/analysis.hpp"

#include <algorithm>
#include <array>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "twosq/arith.hpp"
#include "twosq/certify.hpp"

namespace twosq {

namespace {

constexpr std::array<uint32_t, 6> kDischargeModuli = {4, 8, 9, 16, 32, 72};
constexpr uint64_t kSubclassCap = 1'000'000;  // lcm(modulus, M) split size guard
constexpr int kMaxTailThreshold = 8;

void require_table(const MarkTable& table, int k, const char* who) {
    if (!table.sealed) throw std::invalid_argument(std::string(who) + ": table is not sealed");
    if (table.config.k != k) {
        throw std::invalid_argument(std::string(who) + ": table was sieved with k=" +
                                    std::to_string(table.config.k) + ", need k=" +
                                    std::to_string(k));
    }
    if (table.config.filter_modulus != 0) {
        throw std::invalid_argument(std::string(who) + ": table has a residue filter, need full coverage");
    }
}

/// A case of the congruence proof: the concrete powers sum to concrete_sum,
/// plus tail_count further powers 2^a with a at least the tail threshold.
struct SymbolicCase {
    std::string label;
    uint64_t concrete_sum;
    int tail_count;
};

std::vector<SymbolicCase> symbolic_cases(int k, int threshold) {
    std::vector<SymbolicCase> cases;
    cases.push_back({"no power", 0, 0});
    if (k >= 1) {
        for (int a = 0; a < threshold; ++a) {
            cases.push_back({"2^" + std::to_string(a), uint64_t(1) << a, 0});
        }
        cases.push_back({"2^a (a>=" + std::to_string(threshold) + ")", 0, 1});
    }
    if (k >= 2) {
        for (int a = 1; a < threshold; ++a) {
            for (int b = 0; b < a; ++b) {
                cases.push_back({"2^" + std::to_string(a) + "+2^" + std::to_string(b),
                                 (uint64_t(1) << a) + (uint64_t(1) << b), 0});
            }
        }
        for (int b = 0; b < threshold; ++b) {
            cases.push_back({"2^a+2^" + std::to_string(b) + " (a>=" + std::to_string(threshold) + ")",
                             uint64_t(1) << b, 1});
        }
        cases.push_back({"2^a+2^b (a>b>=" + std::to_string(threshold) + ")", 0, 2});
    }
    return cases;
}

/// Residues n mod M over the family n = residue (mod modulus): one value per
/// subclass of the family modulo lcm(modulus, M).
std::vector<uint32_t> family_residues_mod(uint64_t residue, uint64_t modulus, uint32_t M) {
    const uint64_t span = std::lcm(modulus, uint64_t(M));
    std::vector<uint32_t> out;
    for (uint64_t r = residue; r < span; r += modulus) {
        out.push_back(static_cast<uint32_t>(r % M));
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

}  // namespace

DensityReport density_report(uint64_t limit, int k, const MarkTable& table) {
    if (limit < 2) throw std::invalid_argument("density_report: limit must be >= 2");
    require_table(table, k, "density_report");
    if (table.config.limit < limit) {
        throw std::invalid_argument("density_report: table covers [0, " +
                                    std::to_string(table.config.limit) +
                                    "), smaller than limit " + std::to_string(limit));
    }
    // The table stores integers below its bound, so n = limit itself is only
    // countable when the table extends past it.
    const uint64_t hi = std::min(limit + 1, table.config.limit);
    DensityReport report;
    report.limit = limit;
    report.k = k;
    report.nonrepresentable_count = unmarked_count(table, 2, hi);
    report.density_num = report.nonrepresentable_count;
    report.density_den = limit - 1;
    report.sample_listing = unmarked_values(table, 2, hi, 100);
    return report;
}

std::string count_record(uint64_t limit, int k, uint64_t value) {
    return "COUNT limit=" + std::to_string(limit) + " k=" + std::to_string(k) +
           " value=" + std::to_string(value);
}

ResidueCheck residue_family_check(uint64_t residue, uint64_t modulus, int k, uint64_t limit) {
    if (modulus == 0 || residue >= modulus) {
        throw std::invalid_argument("residue_family_check: need residue < modulus, modulus >= 1");
    }
    if (k < 0 || k > 3) throw std::invalid_argument("residue_family_check: k must be in {0,1,2,3}");
    ResidueCheck result;
    result.holds = true;
    uint64_t n = residue;
    while (n < 2) n += modulus;
    while (n < limit) {
        ++result.checked;
        if (std::holds_alternative<RepresentationWitness>(certify(n, k))) {
            result.holds = false;
            result.counterexample = n;
            return result;
        }
        if (n > std::numeric_limits<uint64_t>::max() - modulus) break;
        n += modulus;
    }
    return result;
}

ResidueProof residue_family_prove(uint64_t residue, uint64_t modulus, int k) {
    if (modulus == 0 || modulus > 10'000 || residue >= modulus) {
        throw std::invalid_argument("residue_family_prove: need residue < modulus <= 10000");
    }
    if (k < 0 || k > 2) {
        throw std::invalid_argument("residue_family_prove: k must be in {0,1,2}");
    }

    std::array<std::vector<char>, kDischargeModuli.size()> is_sum;
    for (size_t i = 0; i < kDischargeModuli.size(); ++i) {
        is_sum[i].assign(kDischargeModuli[i], 0);
        for (uint32_t s : two_square_sums_mod(kDischargeModuli[i])) is_sum[i][s] = 1;
    }

    ResidueProof proof;
    proof.residue = residue;
    proof.modulus = modulus;
    proof.k = k;

    for (int threshold = 0; threshold <= kMaxTailThreshold; ++threshold) {
        std::vector<ProofCase> discharged;
        std::string stuck;
        for (const SymbolicCase& c : symbolic_cases(k, threshold)) {
            bool done = false;
            for (size_t i = 0; i < kDischargeModuli.size() && !done; ++i) {
                const uint32_t M = kDischargeModuli[i];
                if (c.tail_count > 0) {
                    // A tail power 2^a (a >= threshold) vanishes mod M only
                    // when M = 2^j with j <= threshold.
                    if ((M & (M - 1)) != 0) continue;
                    int j = 0;
                    while ((uint32_t(1) << j) < M) ++j;
                    if (j > threshold) continue;
                }
                if (std::lcm(modulus, uint64_t(M)) > kSubclassCap) continue;
                std::vector<uint32_t> targets;
                bool all_blocked = true;
                for (uint32_t r : family_residues_mod(residue, modulus, M)) {
                    const uint32_t target =
                        static_cast<uint32_t>((r + M - c.concrete_sum % M) % M);
                    if (is_sum[i][target]) {
                        all_blocked = false;
                        break;
                    }
                    targets.push_back(target);
                }
                if (all_blocked) {
                    std::sort(targets.begin(), targets.end());
                    targets.erase(std::unique(targets.begin(), targets.end()), targets.end());
                    discharged.push_back({c.label, M, std::move(targets)});
                    done = true;
                }
            }
            if (!done) {
                stuck = c.label;
                break;
            }
        }
        if (stuck.empty()) {
            proof.ok = true;
            proof.tail_threshold = threshold;
            proof.cases = std::move(discharged);
            return proof;
        }
        proof.stuck_label = stuck;  // report the final attempt's first stuck case
        proof.tail_threshold = threshold;
    }
    proof.ok = false;
    return proof;
}

ShiftCheck shift_check(const MarkTable& table) {
    require_table(table, 2, "shift_check");
    ShiftCheck result;
    result.ok = true;
    for (uint64_t n = 2; n < table.config.limit; ++n) {
        if (table.cells[n] == 1 && table.cells[n - 2] == 1) {
            result.ok = false;
            result.violations.push_back(n);
        }
    }
    return result;
}

TowerListing tower_density_listing(uint64_t base, uint64_t limit) {
    if (base < 1) throw std::invalid_argument("tower_density_listing: base must be positive");
    TowerListing listing;
    listing.base = base;
    listing.limit = limit;
    for (uint64_t v = base; v < limit; v <<= 1) {
        listing.values.push_back(v);
        if (v > (std::numeric_limits<uint64_t>::max() >> 1)) break;
    }
    return listing;
}

}  // namespace twosq

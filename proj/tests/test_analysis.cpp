#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "oracle.hpp"
#include "twosq/analysis.hpp"
#include "twosq/certify.hpp"

using namespace twosq;

namespace {
constexpr uint64_t kN0 = 1151121374334ULL;

MarkTable sieve_to(uint64_t limit, int k, uint64_t mod = 0, uint64_t res = 0) {
    SieveConfig cfg;
    cfg.limit = limit;
    cfg.k = k;
    cfg.filter_modulus = mod;
    cfg.filter_residue = res;
    cfg.workers = 2;
    return run_sieve(cfg);
}
}  // namespace

TEST_CASE("density_report counts the classical non-sums below 10") {
    const MarkTable table = sieve_to(16, 0);
    const DensityReport report = density_report(10, 0, table);
    CHECK(report.limit == 10);
    CHECK(report.k == 0);
    CHECK(report.nonrepresentable_count == 3);
    CHECK(report.density_num == 3);
    CHECK(report.density_den == 9);
    CHECK(report.sample_listing == std::vector<uint64_t>{3, 6, 7});
}

TEST_CASE("density_report matches a per-n brute-force sweep") {
    const uint64_t limit = 100000;
    for (int k = 0; k <= 2; ++k) {
        const MarkTable table = sieve_to(limit + 1, k);
        const DensityReport report = density_report(limit, k, table);
        const std::vector<char> truth = oracle::representable_table(limit + 1, k);
        uint64_t expected = 0;
        for (uint64_t n = 2; n <= limit; ++n) {
            if (!truth[n]) ++expected;
        }
        CHECK(report.nonrepresentable_count == expected);
        CHECK(report.sample_listing.size() <= 100);
        for (uint64_t v : report.sample_listing) CHECK(truth[v] == 0);
    }
}

TEST_CASE("density_report rejects mismatched tables") {
    const MarkTable table = sieve_to(100, 1);
    CHECK_THROWS_AS((void)density_report(50, 2, table), std::invalid_argument);
    CHECK_THROWS_AS((void)density_report(200, 1, table), std::invalid_argument);
    CHECK_THROWS_AS((void)density_report(1, 1, table), std::invalid_argument);

    const MarkTable filtered = sieve_to(100, 1, 18, 0);
    CHECK_THROWS_AS((void)density_report(50, 1, filtered), std::invalid_argument);

    MarkTable unsealed;
    unsealed.config.limit = 100;
    unsealed.config.k = 1;
    unsealed.cells.assign(100, 1);
    CHECK_THROWS_AS((void)density_report(50, 1, unsealed), std::invalid_argument);
}

TEST_CASE("count_record format is stable") {
    CHECK(count_record(10, 0, 3) == "COUNT limit=10 k=0 value=3");
    CHECK(count_record(1048576, 2, 123) == "COUNT limit=1048576 k=2 value=123");
}

TEST_CASE("residue_family_check trivial family 3 mod 4") {
    const ResidueCheck check = residue_family_check(3, 4, 0, 100000);
    CHECK(check.holds);
    CHECK_FALSE(check.counterexample.has_value());
    CHECK(check.checked == 25000);  // 3, 7, ..., 99999
}

TEST_CASE("residue_family_check 23 mod 72 holds for one power") {
    const ResidueCheck check = residue_family_check(23, 72, 1, 100000);
    CHECK(check.holds);
    CHECK(check.checked == 1389);  // 23, 95, ..., 99959
}

TEST_CASE("residue_family_check 23 mod 72 fails immediately for two powers") {
    const ResidueCheck check = residue_family_check(23, 72, 2, 1000000);
    CHECK_FALSE(check.holds);
    CHECK(check.counterexample == 23);  // 23 = 3^2 + 2^2 + 2 + 8
    CHECK(check.checked == 1);
}

TEST_CASE("residue_family_check rejects bad arguments") {
    CHECK_THROWS_AS((void)residue_family_check(4, 4, 0, 100), std::invalid_argument);
    CHECK_THROWS_AS((void)residue_family_check(0, 0, 0, 100), std::invalid_argument);
}

TEST_CASE("residue_family_prove reproduces the four-case split for 23 mod 72") {
    const ResidueProof proof = residue_family_prove(23, 72, 1);
    REQUIRE(proof.ok);
    CHECK(proof.tail_threshold == 2);
    REQUIRE(proof.cases.size() == 4);

    CHECK(proof.cases[0].label == "no power");
    CHECK(proof.cases[0].discharge_modulus == 4);
    CHECK(proof.cases[0].residues == std::vector<uint32_t>{3});

    CHECK(proof.cases[1].label == "2^0");
    CHECK(proof.cases[1].discharge_modulus == 8);
    CHECK(proof.cases[1].residues == std::vector<uint32_t>{6});

    CHECK(proof.cases[2].label == "2^1");
    CHECK(proof.cases[2].discharge_modulus == 9);
    CHECK(proof.cases[2].residues == std::vector<uint32_t>{3});

    CHECK(proof.cases[3].label == "2^a (a>=2)");
    CHECK(proof.cases[3].discharge_modulus == 4);
    CHECK(proof.cases[3].residues == std::vector<uint32_t>{3});
}

TEST_CASE("residue_family_prove handles the k=0 family 3 mod 4") {
    const ResidueProof proof = residue_family_prove(3, 4, 0);
    REQUIRE(proof.ok);
    CHECK(proof.tail_threshold == 0);
    REQUIRE(proof.cases.size() == 1);
    CHECK(proof.cases[0].label == "no power");
    CHECK(proof.cases[0].discharge_modulus == 4);
    CHECK(proof.cases[0].residues == std::vector<uint32_t>{3});
}

TEST_CASE("residue_family_prove gives up on 0 mod 18 with two powers") {
    const ResidueProof proof = residue_family_prove(0, 18, 2);
    CHECK_FALSE(proof.ok);
    CHECK(proof.stuck_label == "no power");
}

TEST_CASE("residue_family_prove rejects out-of-range arguments") {
    CHECK_THROWS_AS((void)residue_family_prove(0, 18, 3), std::invalid_argument);
    CHECK_THROWS_AS((void)residue_family_prove(5, 4, 1), std::invalid_argument);
    CHECK_THROWS_AS((void)residue_family_prove(1, 10001, 1), std::invalid_argument);
}

TEST_CASE("every proof the prover emits is empirically sound") {
    // Scan all residues mod 72: whatever the prover claims, the exhaustive
    // check must confirm; and 23 must be among the proved classes for k=1.
    bool proved_23 = false;
    for (uint64_t r = 0; r < 72; ++r) {
        for (int k = 0; k <= 1; ++k) {
            const ResidueProof proof = residue_family_prove(r, 72, k);
            if (!proof.ok) continue;
            if (r == 23 && k == 1) proved_23 = true;
            const ResidueCheck check = residue_family_check(r, 72, k, 50000);
            CHECK(check.holds);
        }
    }
    CHECK(proved_23);
}

TEST_CASE("the 23 mod 72 proof really blocks every concrete subtraction") {
    // Independent reading of the proof: walk family members, subtract each
    // allowed power subset, and confirm the remainder falls in the impossible
    // residue class of the proof case that covers this subtraction.
    const ResidueProof proof = residue_family_prove(23, 72, 1);
    REQUIRE(proof.ok);
    const uint32_t tail = static_cast<uint32_t>(proof.tail_threshold);
    auto case_for = [&](const std::vector<uint32_t>& exponents) -> const ProofCase& {
        std::string label = "no power";
        if (exponents.size() == 1) {
            label = exponents[0] < tail ? "2^" + std::to_string(exponents[0])
                                        : "2^a (a>=" + std::to_string(tail) + ")";
        }
        for (const ProofCase& pc : proof.cases) {
            if (pc.label == label) return pc;
        }
        FAIL(("no proof case labelled " + label).c_str());
        return proof.cases[0];
    };
    for (uint64_t n = 23; n < 20000; n += 72) {
        for (const EnumeratedCase& c : enumerate_cases(n, 1)) {
            const ProofCase& pc = case_for(c.exponents);
            const uint32_t r = static_cast<uint32_t>(c.remainder % pc.discharge_modulus);
            const bool blocked =
                std::find(pc.residues.begin(), pc.residues.end(), r) != pc.residues.end();
            CHECK(blocked);
        }
    }
}

TEST_CASE("shift_check accepts a clean k=2 table") {
    const MarkTable table = sieve_to(1 << 16, 2);
    const ShiftCheck check = shift_check(table);
    CHECK(check.ok);
    CHECK(check.violations.empty());
}

TEST_CASE("shift_check rejects mismatched tables") {
    CHECK_THROWS_AS((void)shift_check(sieve_to(10, 0)), std::invalid_argument);
    CHECK_THROWS_AS((void)shift_check(sieve_to(100, 2, 18, 0)), std::invalid_argument);
}

TEST_CASE("shift_check reports fabricated violations") {
    MarkTable fake;
    fake.config.limit = 10;
    fake.config.k = 2;
    fake.cells.assign(10, 0);
    fake.cells[5] = 1;
    fake.cells[7] = 1;
    fake.sealed = true;
    const ShiftCheck check = shift_check(fake);
    CHECK_FALSE(check.ok);
    CHECK(check.violations == std::vector<uint64_t>{7});
}

TEST_CASE("tower_density_listing frozen examples") {
    const TowerListing ones = tower_density_listing(1, 9);
    CHECK(ones.values == std::vector<uint64_t>{1, 2, 4, 8});

    CHECK(tower_density_listing(3, 3).values.empty());

    const TowerListing n0 = tower_density_listing(kN0, uint64_t(1) << 46);
    REQUIRE(n0.values.size() == 6);
    for (size_t i = 0; i < 6; ++i) {
        CHECK(n0.values[i] == (kN0 << i));
    }
    CHECK_THROWS_AS((void)tower_density_listing(0, 10), std::invalid_argument);
}

TEST_CASE("tower_density_listing size follows the logarithm formula") {
    for (uint64_t base : {1ULL, 2ULL, 3ULL, 7ULL, 100ULL, 535903ULL}) {
        for (uint64_t limit : {1ULL, 2ULL, 9ULL, 100ULL, 535904ULL, 1ULL << 40}) {
            const TowerListing listing = tower_density_listing(base, limit);
            if (base >= limit) {
                CHECK(listing.values.empty());
            } else {
                const uint64_t expected =
                    static_cast<uint64_t>(std::floor(std::log2(double(limit - 1) / double(base)))) +
                    1;
                CHECK(listing.values.size() == expected);
            }
        }
    }
}

TEST_CASE("every listed tower member is non-representable when the base is") {
    // The doubling family over the k=0 base 3: all members stay below the
    // sieve bound and must all be non-representable.
    const MarkTable table = sieve_to(1 << 14, 0);
    const TowerListing listing = tower_density_listing(3, 1 << 14);
    CHECK(listing.values.size() == 13);
    for (uint64_t v : listing.values) {
        CHECK(table.cells[v] == 1);
    }
}

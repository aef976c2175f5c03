// Parallel byte-per-candidate sieve marking every integer below a limit that
// is a sum of two squares plus at most k powers of 2, with optional
// residue-class compaction. Marking is write-only (stores of the constant 0),
// so workers share the cell array without locks.
#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace twosq {

struct SieveConfig {
    uint64_t limit = 0;           // exclusive upper bound S, >= 2
    int k = 2;                    // max number of powers of 2, in {0,1,2,3}
    uint64_t filter_modulus = 0;  // 0 = track every integer
    uint64_t filter_residue = 0;  // tracked class when filter_modulus > 0
    unsigned workers = 1;
    uint64_t mem_cap_bytes = uint64_t(8) << 30;  // runtime knob, not table identity

    friend bool operator==(const SieveConfig& a, const SieveConfig& b) {
        return a.limit == b.limit && a.k == b.k && a.filter_modulus == b.filter_modulus &&
               a.filter_residue == b.filter_residue;
    }
};

class MemoryCapError : public std::runtime_error {
  public:
    MemoryCapError(uint64_t required, uint64_t cap)
        : std::runtime_error("sieve needs " + std::to_string(required) +
                             " bytes of cells, over the configured cap of " + std::to_string(cap) +
                             " bytes"),
          required_bytes(required),
          cap_bytes(cap) {}
    uint64_t required_bytes;
    uint64_t cap_bytes;
};

class TableIoError : public std::runtime_error {
  public:
    TableIoError(std::string message, uint64_t at)
        : std::runtime_error(std::move(message)), offset(at) {}
    uint64_t offset;
};

/// One byte per tracked integer; 1 until a representation is found, then 0.
/// Tracked integer <-> cell index: n = filter_residue + filter_modulus * index
/// (or n = index when unfiltered).
struct MarkTable {
    SieveConfig config;
    std::vector<uint8_t> cells;
    bool sealed = false;

    bool tracks(uint64_t n) const {
        if (n >= config.limit) return false;
        return config.filter_modulus == 0 || n % config.filter_modulus == config.filter_residue;
    }
    uint64_t index_of(uint64_t n) const {  // pre: tracks(n)
        return config.filter_modulus == 0 ? n : (n - config.filter_residue) / config.filter_modulus;
    }
    uint64_t integer_at(uint64_t index) const {
        return config.filter_modulus == 0 ? index
                                          : config.filter_residue + config.filter_modulus * index;
    }

    friend bool operator==(const MarkTable& a, const MarkTable& b) {
        return a.config == b.config && a.cells == b.cells && a.sealed == b.sealed;
    }
};

/// Number of cells a config tracks: S when unfiltered, else the size of
/// { n in [0, S) : n == r (mod m) }.
uint64_t tracked_cell_count(const SieveConfig& config);

/// Throws std::invalid_argument if the config violates its invariants.
void validate_config(const SieveConfig& config);

/// Runs the sieve and returns a sealed table. The result is bit-identical for
/// any workers >= 1. Throws MemoryCapError (reporting the required bytes)
/// when the cell array would exceed config.mem_cap_bytes.
MarkTable run_sieve(const SieveConfig& config);

/// Smallest tracked integer >= from whose cell is still 1. Rejects unsealed
/// tables.
std::optional<uint64_t> first_unmarked(const MarkTable& table, uint64_t from);

/// Number of tracked integers in [lo, hi) with cell 1. Requires
/// lo <= hi <= limit.
uint64_t unmarked_count(const MarkTable& table, uint64_t lo, uint64_t hi);

/// Up to max_values tracked integers in [lo, hi) with cell 1, ascending.
std::vector<uint64_t> unmarked_values(const MarkTable& table, uint64_t lo, uint64_t hi,
                                      size_t max_values);

// Table file format (byte-exact): magic "S2SP", version byte 0x01, then
// little-endian u64 fields limit, k, filter_modulus, filter_residue, followed
// by the raw cell bytes in index order.
void save_table(const MarkTable& table, std::ostream& out);
void save_table(const MarkTable& table, const std::string& path);
MarkTable load_table(std::istream& in);
MarkTable load_table(const std::string& path);

}  // namespace twosq

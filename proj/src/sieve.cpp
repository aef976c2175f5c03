#include "twosq/sieve.hpp"

#include <algorithm>
#include <atomic>
#include <fstream>
#include <istream>
#include <ostream>
#include <thread>

#include "twosq/arith.hpp"

namespace twosq {

namespace {

constexpr char kMagic[4] = {'S', '2', 'S', 'P'};
constexpr uint8_t kVersion = 0x01;
constexpr uint64_t kHeaderBytes = 4 + 1 + 4 * 8;
constexpr uint64_t kMaxLimit = uint64_t(1) << 62;  // keeps n + 2^a free of overflow

inline void mark(MarkTable& table, uint64_t n) {
    const uint64_t m = table.config.filter_modulus;
    uint64_t index;
    if (m == 0) {
        index = n;
    } else {
        if (n % m != table.config.filter_residue) return;
        index = (n - table.config.filter_residue) / m;
    }
    // Concurrent writers only ever store 0; relaxed byte stores are enough.
    std::atomic_ref<uint8_t>(table.cells[index]).store(0, std::memory_order_relaxed);
}

// Marks x^2 + y^2 (+ up to k strictly decreasing powers of 2) for one x and
// all y <= x. Exponents are distinct with a > b > c, as 2^a + 2^a = 2^(a+1)
// makes repeats redundant.
void sieve_column(MarkTable& table, uint64_t x) {
    const uint64_t limit = table.config.limit;
    const int k = table.config.k;
    const uint64_t x2 = x * x;
    for (uint64_t y = 0; y <= x; ++y) {
        const uint64_t base = x2 + y * y;
        if (base >= limit) break;
        mark(table, base);
        if (k < 1) continue;
        for (int a = 0;; ++a) {
            const uint64_t va = base + (uint64_t(1) << a);
            if (va >= limit) break;
            mark(table, va);
            if (k < 2) continue;
            for (int b = 0; b < a; ++b) {
                const uint64_t vb = va + (uint64_t(1) << b);
                if (vb >= limit) break;
                mark(table, vb);
                if (k < 3) continue;
                for (int c = 0; c < b; ++c) {
                    const uint64_t vc = vb + (uint64_t(1) << c);
                    if (vc >= limit) break;
                    mark(table, vc);
                }
            }
        }
    }
}

// First cell index whose tracked integer is >= n.
uint64_t index_at_or_above(const SieveConfig& c, uint64_t n) {
    if (c.filter_modulus == 0) return n;
    if (n <= c.filter_residue) return 0;
    return (n - c.filter_residue + c.filter_modulus - 1) / c.filter_modulus;
}

uint64_t read_u64_le(const uint8_t* p) {
    uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= uint64_t(p[i]) << (8 * i);
    return v;
}

void write_u64_le(std::ostream& out, uint64_t v) {
    char bytes[8];
    for (int i = 0; i < 8; ++i) bytes[i] = static_cast<char>((v >> (8 * i)) & 0xff);
    out.write(bytes, 8);
}

}  // namespace

uint64_t tracked_cell_count(const SieveConfig& config) {
    if (config.filter_modulus == 0) return config.limit;
    if (config.filter_residue >= config.limit) return 0;
    return (config.limit - config.filter_residue + config.filter_modulus - 1) /
           config.filter_modulus;
}

void validate_config(const SieveConfig& config) {
    if (config.limit < 2) throw std::invalid_argument("sieve config: limit must be >= 2");
    if (config.limit > kMaxLimit) throw std::invalid_argument("sieve config: limit must be <= 2^62");
    if (config.k < 0 || config.k > 3)
        throw std::invalid_argument("sieve config: k must be in {0,1,2,3}");
    if (config.filter_modulus > 0 && config.filter_residue >= config.filter_modulus)
        throw std::invalid_argument("sieve config: filter residue must be below the modulus");
    if (config.workers < 1) throw std::invalid_argument("sieve config: workers must be >= 1");
}

MarkTable run_sieve(const SieveConfig& config) {
    validate_config(config);
    const uint64_t cell_count = tracked_cell_count(config);
    if (cell_count > config.mem_cap_bytes) throw MemoryCapError(cell_count, config.mem_cap_bytes);

    MarkTable table;
    table.config = config;
    table.cells.assign(cell_count, 1);

    const uint64_t x_max = isqrt(config.limit - 1);
    std::atomic<uint64_t> next_x{0};
    const uint64_t chunk =
        std::max<uint64_t>(1, x_max / (uint64_t(config.workers) * 16 + 1) + 1);

    auto worker = [&] {
        for (;;) {
            const uint64_t begin = next_x.fetch_add(chunk, std::memory_order_relaxed);
            if (begin > x_max) return;
            const uint64_t end = std::min(begin + chunk, x_max + 1);
            for (uint64_t x = begin; x < end; ++x) sieve_column(table, x);
        }
    };

    if (config.workers == 1) {
        worker();
    } else {
        std::vector<std::thread> threads;
        threads.reserve(config.workers);
        for (unsigned i = 0; i < config.workers; ++i) threads.emplace_back(worker);
        for (std::thread& t : threads) t.join();  // barrier between building and sealing
    }
    table.sealed = true;
    return table;
}

std::optional<uint64_t> first_unmarked(const MarkTable& table, uint64_t from) {
    if (!table.sealed) throw std::invalid_argument("first_unmarked: table is not sealed");
    for (uint64_t index = index_at_or_above(table.config, from); index < table.cells.size();
         ++index) {
        if (table.cells[index]) return table.integer_at(index);
    }
    return std::nullopt;
}

uint64_t unmarked_count(const MarkTable& table, uint64_t lo, uint64_t hi) {
    if (!table.sealed) throw std::invalid_argument("unmarked_count: table is not sealed");
    if (lo > hi || hi > table.config.limit)
        throw std::invalid_argument("unmarked_count: bounds must satisfy lo <= hi <= limit");
    const uint64_t begin = std::min<uint64_t>(index_at_or_above(table.config, lo),
                                              table.cells.size());
    const uint64_t end = std::min<uint64_t>(index_at_or_above(table.config, hi),
                                            table.cells.size());
    return static_cast<uint64_t>(
        std::count(table.cells.begin() + begin, table.cells.begin() + end, uint8_t(1)));
}

std::vector<uint64_t> unmarked_values(const MarkTable& table, uint64_t lo, uint64_t hi,
                                      size_t max_values) {
    if (!table.sealed) throw std::invalid_argument("unmarked_values: table is not sealed");
    if (lo > hi || hi > table.config.limit)
        throw std::invalid_argument("unmarked_values: bounds must satisfy lo <= hi <= limit");
    const uint64_t end = std::min<uint64_t>(index_at_or_above(table.config, hi),
                                            table.cells.size());
    std::vector<uint64_t> values;
    for (uint64_t index = index_at_or_above(table.config, lo);
         index < end && values.size() < max_values; ++index) {
        if (table.cells[index]) values.push_back(table.integer_at(index));
    }
    return values;
}

void save_table(const MarkTable& table, std::ostream& out) {
    if (!table.sealed) throw std::invalid_argument("save_table: table is not sealed");
    out.write(kMagic, 4);
    out.put(static_cast<char>(kVersion));
    write_u64_le(out, table.config.limit);
    write_u64_le(out, static_cast<uint64_t>(table.config.k));
    write_u64_le(out, table.config.filter_modulus);
    write_u64_le(out, table.config.filter_residue);
    out.write(reinterpret_cast<const char*>(table.cells.data()),
              static_cast<std::streamsize>(table.cells.size()));
    if (!out) throw std::runtime_error("save_table: write failed");
}

void save_table(const MarkTable& table, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("save_table: cannot open " + path);
    save_table(table, out);
}

MarkTable load_table(std::istream& in) {
    uint8_t header[kHeaderBytes];
    in.read(reinterpret_cast<char*>(header), kHeaderBytes);
    const auto got = static_cast<uint64_t>(in.gcount());
    if (got < kHeaderBytes) {
        throw TableIoError("table header truncated: expected " + std::to_string(kHeaderBytes) +
                               " bytes, got " + std::to_string(got),
                           got);
    }
    if (!std::equal(header, header + 4, kMagic)) {
        throw TableIoError("bad magic at offset 0", 0);
    }
    if (header[4] != kVersion) {
        throw TableIoError("unsupported table version " + std::to_string(header[4]) +
                               " at offset 4",
                           4);
    }
    MarkTable table;
    table.config.limit = read_u64_le(header + 5);
    table.config.k = static_cast<int>(read_u64_le(header + 13));
    table.config.filter_modulus = read_u64_le(header + 21);
    table.config.filter_residue = read_u64_le(header + 29);
    try {
        validate_config(table.config);
    } catch (const std::invalid_argument& e) {
        throw TableIoError(std::string("invalid table header (") + e.what() + ") at offset 5", 5);
    }

    const uint64_t cell_count = tracked_cell_count(table.config);
    table.cells.assign(cell_count, 0);
    in.read(reinterpret_cast<char*>(table.cells.data()), static_cast<std::streamsize>(cell_count));
    const auto payload = static_cast<uint64_t>(in.gcount());
    if (payload < cell_count) {
        throw TableIoError("table payload truncated at offset " +
                               std::to_string(kHeaderBytes + payload) + ": expected " +
                               std::to_string(cell_count) + " cell bytes, got " +
                               std::to_string(payload),
                           kHeaderBytes + payload);
    }
    for (uint64_t i = 0; i < cell_count; ++i) {
        if (table.cells[i] > 1) {
            throw TableIoError("invalid cell byte at offset " + std::to_string(kHeaderBytes + i),
                               kHeaderBytes + i);
        }
    }
    in.peek();
    if (!in.eof()) {
        throw TableIoError("trailing bytes after table payload at offset " +
                               std::to_string(kHeaderBytes + cell_count),
                           kHeaderBytes + cell_count);
    }
    table.sealed = true;
    return table;
}

MarkTable load_table(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("load_table: cannot open " + path);
    return load_table(in);
}

}  // namespace twosq

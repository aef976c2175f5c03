// Command-line front end: sieve, find-first, certify, verify, count, family,
// prove-family, shift-check, tower. Results go to stdout (byte-stable across
// runs and thread counts); progress notes go to stderr. Exit status: 0 on
// success, 1 on a negative or failed result, 2 on a usage error.
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "twosq/analysis.hpp"
#include "twosq/certify.hpp"
#include "twosq/sieve.hpp"

namespace {

unsigned default_threads() {
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? hw : 1;
}

uint64_t gib_to_bytes(double gib) {
    return static_cast<uint64_t>(gib * static_cast<double>(uint64_t(1) << 30));
}

std::string join_u64(const std::vector<uint64_t>& values) {
    if (values.empty()) return "-";
    std::string out;
    for (size_t i = 0; i < values.size(); ++i) {
        if (i > 0) out += ' ';
        out += std::to_string(values[i]);
    }
    return out;
}

std::string exponent_list(const std::vector<uint32_t>& exponents) {
    if (exponents.empty()) return "-";
    std::string out;
    for (size_t i = 0; i < exponents.size(); ++i) {
        if (i > 0) out += ',';
        out += std::to_string(exponents[i]);
    }
    return out;
}

std::string residue_set(const std::vector<uint32_t>& residues) {
    if (residues.size() == 1) return std::to_string(residues[0]);
    std::string out = "{";
    for (size_t i = 0; i < residues.size(); ++i) {
        if (i > 0) out += ',';
        out += std::to_string(residues[i]);
    }
    return out + "}";
}

struct SieveOptions {
    uint64_t limit = 0;
    int k = 2;
    unsigned threads = default_threads();
    uint64_t filter_mod = 0;
    uint64_t filter_res = 0;
    double mem_cap_gib = 8.0;

    void attach(CLI::App* cmd, bool with_filter) {
        cmd->add_option("--limit", limit, "exclusive upper bound of the sieve")->required();
        cmd->add_option("--k", k, "max powers of 2 in a representation")
            ->check(CLI::Range(0, 3))
            ->capture_default_str();
        cmd->add_option("--threads", threads, "worker threads for sieving")
            ->check(CLI::PositiveNumber)
            ->capture_default_str();
        cmd->add_option("--mem-cap-gib", mem_cap_gib, "refuse sieves needing more memory than this")
            ->envname("TWOSQ_MEM_CAP_GIB")
            ->check(CLI::PositiveNumber)
            ->capture_default_str();
        if (with_filter) {
            cmd->add_option("--filter-mod", filter_mod, "track only one residue class: modulus");
            cmd->add_option("--filter-res", filter_res, "track only one residue class: residue");
        }
    }

    twosq::SieveConfig config() const {
        twosq::SieveConfig cfg;
        cfg.limit = limit;
        cfg.k = k;
        cfg.filter_modulus = filter_mod;
        cfg.filter_residue = filter_res;
        cfg.workers = threads;
        cfg.mem_cap_bytes = gib_to_bytes(mem_cap_gib);
        return cfg;
    }

    twosq::MarkTable run() const {
        std::cerr << "sieving [2, " << limit << ") with k=" << k << ", " << threads
                  << " thread(s)\n";
        return twosq::run_sieve(config());
    }
};

std::string describe_filter(const twosq::SieveConfig& cfg) {
    if (cfg.filter_modulus == 0) return "none";
    return std::to_string(cfg.filter_residue) + "%" + std::to_string(cfg.filter_modulus);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"decide which integers are a sum of two squares plus at most k powers of 2"};
    app.require_subcommand(1);
    int code = 0;

    // sieve: build a mark table, report totals, optionally write it to a file.
    SieveOptions sieve_opts;
    std::string sieve_out;
    auto* sieve_cmd = app.add_subcommand("sieve", "mark every representable integer below a limit");
    sieve_opts.attach(sieve_cmd, true);
    sieve_cmd->add_option("--out", sieve_out, "write the table to this file");
    sieve_cmd->callback([&] {
        const twosq::MarkTable table = sieve_opts.run();
        std::cout << "SIEVE limit=" << table.config.limit << " k=" << table.config.k
                  << " filter=" << describe_filter(table.config) << " cells=" << table.cells.size()
                  << " unmarked=" << twosq::unmarked_count(table, 2, table.config.limit) << "\n";
        if (!sieve_out.empty()) {
            twosq::save_table(table, sieve_out);
            std::cout << "WROTE " << sieve_out << " bytes=" << std::filesystem::file_size(sieve_out)
                      << "\n";
        }
    });

    // find-first: smallest non-representable integer at or above --from.
    SieveOptions ff_opts;
    uint64_t ff_from = 2;
    auto* ff_cmd = app.add_subcommand("find-first", "smallest unmarked integer in a fresh sieve");
    ff_opts.attach(ff_cmd, true);
    ff_cmd->add_option("--from", ff_from, "search upward from this value")->capture_default_str();
    ff_cmd->callback([&] {
        const twosq::MarkTable table = ff_opts.run();
        if (const auto value = twosq::first_unmarked(table, ff_from)) {
            std::cout << *value << "\n";
        } else {
            std::cout << "none\n";
            code = 1;
        }
    });

    // certify: exhaustive case certificate, or the representation that blocks it.
    uint64_t certify_n = 0;
    int certify_k = 2;
    std::string certify_out;
    auto* certify_cmd =
        app.add_subcommand("certify", "prove one integer non-representable, case by case");
    certify_cmd->add_option("--n", certify_n, "the integer to certify")->required();
    certify_cmd->add_option("--k", certify_k, "max powers of 2")
        ->check(CLI::Range(0, 3))
        ->capture_default_str();
    certify_cmd->add_option("--out", certify_out, "write the certificate to this file");
    certify_cmd->callback([&] {
        const twosq::CertifyResult result = twosq::certify(certify_n, certify_k);
        if (const auto* cert = std::get_if<twosq::Certificate>(&result)) {
            std::cout << "CERTIFICATE n=" << cert->n << " k=" << cert->k
                      << " cases=" << cert->cases.size() << "\n";
            if (!certify_out.empty()) {
                twosq::save_certificate(*cert, certify_out);
                std::cout << "WROTE " << certify_out
                          << " bytes=" << std::filesystem::file_size(certify_out) << "\n";
            }
        } else {
            const auto& w = std::get<twosq::RepresentationWitness>(result);
            std::cout << "REPRESENTABLE n=" << w.n << " k=" << w.k << " x=" << w.x << " y=" << w.y
                      << " powers=" << exponent_list(w.exponents) << "\n";
            code = 1;
        }
    });

    // verify: independent re-check of a stored certificate.
    std::string verify_cert;
    auto* verify_cmd = app.add_subcommand("verify", "re-check a stored certificate from scratch");
    verify_cmd->add_option("--cert", verify_cert, "certificate file to verify")->required();
    verify_cmd->callback([&] {
        twosq::Certificate cert;
        try {
            cert = twosq::load_certificate(verify_cert);
        } catch (const std::exception& e) {
            std::cout << "FAIL " << e.what() << "\n";
            code = 1;
            return;
        }
        const twosq::VerifyResult result = twosq::verify_certificate(cert);
        if (result) {
            std::cout << "OK (" << cert.cases.size() << " cases)\n";
        } else {
            std::cout << "FAIL " << result.diagnostic << "\n";
            code = 1;
        }
    });

    // count: non-representable count and density over [2, limit].
    SieveOptions count_opts;
    auto* count_cmd = app.add_subcommand("count", "count non-representables in [2, limit]");
    count_opts.attach(count_cmd, false);
    count_cmd->callback([&] {
        SieveOptions extended = count_opts;
        extended.limit = count_opts.limit + 1;  // table must cover n = limit itself
        const twosq::MarkTable table = extended.run();
        const twosq::DensityReport report =
            twosq::density_report(count_opts.limit, count_opts.k, table);
        std::cout << twosq::count_record(report.limit, report.k, report.nonrepresentable_count)
                  << "\n";
        std::cout << "DENSITY " << report.density_num << "/" << report.density_den << "\n";
        std::cout << "SAMPLE " << join_u64(report.sample_listing) << "\n";
    });

    // family: exhaustively certify one residue class up to a limit.
    uint64_t family_res = 0, family_mod = 0, family_limit = 0;
    int family_k = 2;
    auto* family_cmd =
        app.add_subcommand("family", "certify every n = res (mod mod) below a limit");
    family_cmd->add_option("--res", family_res, "residue of the family")->required();
    family_cmd->add_option("--mod", family_mod, "modulus of the family")->required();
    family_cmd->add_option("--k", family_k, "max powers of 2")
        ->check(CLI::Range(0, 3))
        ->capture_default_str();
    family_cmd->add_option("--limit", family_limit, "exclusive upper bound")->required();
    family_cmd->callback([&] {
        const twosq::ResidueCheck check =
            twosq::residue_family_check(family_res, family_mod, family_k, family_limit);
        std::cerr << "checked " << check.checked << " family member(s)\n";
        if (check.holds) {
            std::cout << "HOLDS\n";
        } else {
            std::cout << "COUNTEREXAMPLE n=" << *check.counterexample << "\n";
            code = 1;
        }
    });

    // prove-family: congruence argument covering the whole residue class.
    uint64_t prove_res = 0, prove_mod = 0;
    int prove_k = 2;
    auto* prove_cmd = app.add_subcommand(
        "prove-family", "prove a residue class non-representable by congruences alone");
    prove_cmd->add_option("--res", prove_res, "residue of the family")->required();
    prove_cmd->add_option("--mod", prove_mod, "modulus of the family")->required();
    prove_cmd->add_option("--k", prove_k, "max powers of 2")
        ->check(CLI::Range(0, 2))
        ->capture_default_str();
    prove_cmd->callback([&] {
        const twosq::ResidueProof proof =
            twosq::residue_family_prove(prove_res, prove_mod, prove_k);
        if (proof.ok) {
            std::cout << "PROVED res=" << proof.residue << " mod=" << proof.modulus
                      << " k=" << proof.k << " tail=" << proof.tail_threshold
                      << " cases=" << proof.cases.size() << "\n";
            for (const twosq::ProofCase& c : proof.cases) {
                std::cout << "CASE " << c.label << " via " << residue_set(c.residues) << " (mod "
                          << c.discharge_modulus << ")\n";
            }
        } else {
            std::cout << "UNPROVED res=" << proof.residue << " mod=" << proof.modulus
                      << " k=" << proof.k << " stuck=" << proof.stuck_label << "\n";
            code = 1;
        }
    });

    // shift-check: every non-representable N (k=2) must have N-2 representable.
    SieveOptions shift_opts;
    shift_opts.k = 2;
    auto* shift_cmd =
        app.add_subcommand("shift-check", "check N-2 is representable whenever N is not (k=2)");
    shift_opts.attach(shift_cmd, false);
    shift_cmd->get_option("--k")->check(CLI::Range(2, 2));
    shift_cmd->callback([&] {
        const twosq::MarkTable table = shift_opts.run();
        const twosq::ShiftCheck check = twosq::shift_check(table);
        std::cout << "SHIFT-CHECK limit=" << table.config.limit
                  << " k=2 violations=" << check.violations.size() << "\n";
        for (uint64_t n : check.violations) std::cout << "VIOLATION " << n << "\n";
        if (!check.ok) code = 1;
    });

    // tower: the doubling family base * 2^alpha below a limit.
    uint64_t tower_base = 0, tower_limit = 0;
    auto* tower_cmd = app.add_subcommand("tower", "list base * 2^alpha below a limit");
    tower_cmd->add_option("--n", tower_base, "base of the family")->required();
    tower_cmd->add_option("--limit", tower_limit, "exclusive upper bound")->required();
    tower_cmd->callback([&] {
        const twosq::TowerListing listing = twosq::tower_density_listing(tower_base, tower_limit);
        std::cout << "TOWER base=" << listing.base << " limit=" << listing.limit
                  << " count=" << listing.values.size() << "\n";
        for (uint64_t v : listing.values) std::cout << v << "\n";
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int cli_code = app.exit(e);
        return cli_code == 0 ? 0 : 2;  // help/version exit 0, bad usage exits 2
    } catch (const std::invalid_argument& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return code;
}

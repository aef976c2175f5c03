#include "twosq/certify.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace twosq {

namespace {

std::string format_exponents(const std::vector<uint32_t>& exponents) {
    if (exponents.empty()) return "-";
    std::string out;
    for (size_t i = 0; i < exponents.size(); ++i) {
        if (i > 0) out += ',';
        out += std::to_string(exponents[i]);
    }
    return out;
}

std::string case_name(size_t index, const std::vector<uint32_t>& exponents) {
    return "case " + std::to_string(index) + " (exps=" + format_exponents(exponents) + ")";
}

void check_args(uint64_t n, int k, const char* who) {
    if (n < 1) throw std::invalid_argument(std::string(who) + ": n must be positive");
    if (k < 0 || k > 3) throw std::invalid_argument(std::string(who) + ": k must be in {0,1,2,3}");
}

bool parse_u64(std::string_view text, uint64_t& out) {
    if (text.empty()) return false;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
    return ec == std::errc() && ptr == text.data() + text.size();
}

}  // namespace

std::vector<EnumeratedCase> enumerate_cases(uint64_t n, int k) {
    check_args(n, k, "enumerate_cases");
    std::vector<EnumeratedCase> cases;
    cases.push_back({{}, n});
    if (k >= 1) {
        for (int a = 0; a < 64 && (uint64_t(1) << a) <= n; ++a) {
            cases.push_back({{uint32_t(a)}, n - (uint64_t(1) << a)});
        }
    }
    if (k >= 2) {
        for (int a = 1; a < 64 && (uint64_t(1) << a) < n; ++a) {
            const uint64_t pa = uint64_t(1) << a;
            for (int b = 0; b < a; ++b) {
                const uint64_t pb = uint64_t(1) << b;
                if (pb > n - pa) break;
                cases.push_back({{uint32_t(a), uint32_t(b)}, n - pa - pb});
            }
        }
    }
    if (k >= 3) {
        for (int a = 2; a < 64 && (uint64_t(1) << a) < n; ++a) {
            const uint64_t pa = uint64_t(1) << a;
            for (int b = 1; b < a; ++b) {
                const uint64_t pb = uint64_t(1) << b;
                if (pb >= n - pa) break;
                for (int c = 0; c < b; ++c) {
                    const uint64_t pc = uint64_t(1) << c;
                    if (pc > n - pa - pb) break;
                    cases.push_back({{uint32_t(a), uint32_t(b), uint32_t(c)}, n - pa - pb - pc});
                }
            }
        }
    }
    return cases;
}

CertifyResult certify(uint64_t n, int k) {
    check_args(n, k, "certify");
    Certificate cert;
    cert.n = n;
    cert.k = k;
    for (EnumeratedCase& c : enumerate_cases(n, k)) {
        const TwoSquaresVerdict verdict = two_squares_classify(c.remainder);
        if (verdict.representable) {
            return RepresentationWitness{n, k, verdict.witness->x, verdict.witness->y,
                                         std::move(c.exponents)};
        }
        cert.cases.push_back({std::move(c.exponents), c.remainder, *verdict.obstruction});
    }
    return cert;
}

VerifyResult verify_certificate(const Certificate& cert) {
    if (cert.n < 1) return {false, "certificate header: n must be positive"};
    if (cert.k < 0 || cert.k > 3) return {false, "certificate header: k must be in {0,1,2,3}"};

    const std::vector<EnumeratedCase> expected = enumerate_cases(cert.n, cert.k);
    const size_t shared = std::min(cert.cases.size(), expected.size());
    for (size_t i = 0; i < shared; ++i) {
        const CaseRecord& rec = cert.cases[i];
        const EnumeratedCase& want = expected[i];

        // (a) coverage: the certificate must list exactly the enumerated cases.
        if (rec.exponents != want.exponents) {
            return {false, "coverage: " + case_name(i, rec.exponents) + " should be " +
                               case_name(i, want.exponents) +
                               (cert.cases.size() < expected.size() ? "; missing case" : "")};
        }

        // (b) remainder arithmetic.
        uint64_t power_sum = 0;
        for (size_t j = 0; j < rec.exponents.size(); ++j) {
            if (rec.exponents[j] > 63 || (j > 0 && rec.exponents[j] >= rec.exponents[j - 1])) {
                return {false, case_name(i, rec.exponents) + ": exponents not strictly decreasing"};
            }
            power_sum += uint64_t(1) << rec.exponents[j];
        }
        if (power_sum > cert.n || cert.n - power_sum != rec.remainder) {
            return {false, case_name(i, rec.exponents) + ": remainder " +
                               std::to_string(rec.remainder) + " does not equal n minus 2^exps"};
        }

        // (c) the obstruction blocks remainder = x^2 + y^2.
        const uint64_t p = rec.obstruction.prime;
        const uint32_t e = rec.obstruction.exponent;
        if (p < 3 || p % 4 != 3) {
            return {false, case_name(i, rec.exponents) + ": obstruction prime " +
                               std::to_string(p) + " is not 3 mod 4"};
        }
        if (e % 2 == 0) {
            return {false, case_name(i, rec.exponents) + ": even exponent " + std::to_string(e) +
                               " in obstruction"};
        }
        uint64_t reduced = rec.remainder;
        uint32_t multiplicity = 0;
        while (multiplicity <= e && reduced != 0 && reduced % p == 0) {
            reduced /= p;
            ++multiplicity;
        }
        if (rec.remainder == 0 || multiplicity > e) {
            return {false, case_name(i, rec.exponents) + ": obstruction exponent " +
                               std::to_string(e) + " is not the maximal power of " +
                               std::to_string(p)};
        }
        if (multiplicity < e) {
            return {false, case_name(i, rec.exponents) + ": " + std::to_string(p) + "^" +
                               std::to_string(e) + " does not divide remainder " +
                               std::to_string(rec.remainder)};
        }
        if (!is_prime(p)) {
            return {false, case_name(i, rec.exponents) + ": obstruction " + std::to_string(p) +
                               " is not prime"};
        }
    }
    if (cert.cases.size() < expected.size()) {
        return {false, "coverage: missing case; expected " + std::to_string(expected.size()) +
                           " cases, certificate has " + std::to_string(cert.cases.size()) +
                           " (first absent: " +
                           case_name(shared, expected[shared].exponents) + ")"};
    }
    if (cert.cases.size() > expected.size()) {
        return {false, "coverage: extra " + case_name(shared, cert.cases[shared].exponents) +
                           "; only " + std::to_string(expected.size()) + " cases are required"};
    }
    return {true, {}};
}

const char* family_rule_name(FamilyRule rule) {
    switch (rule) {
        case FamilyRule::mod18_tower: return "mod18-tower";
        case FamilyRule::even_tower: return "even-tower";
        case FamilyRule::doubling: return "doubling";
    }
    return "?";
}

FamilyStatement lift_family(const Certificate& cert) {
    FamilyRule rule;
    if (cert.k == 2) {
        if (cert.n % 18 != 0) {
            throw std::runtime_error("lift_family: hypothesis not met for k=2: 18 does not divide n=" +
                                     std::to_string(cert.n));
        }
        rule = FamilyRule::mod18_tower;
    } else if (cert.k == 1) {
        if (cert.n % 2 != 0) {
            throw std::runtime_error("lift_family: hypothesis not met for k=1: 2 does not divide n=" +
                                     std::to_string(cert.n));
        }
        rule = FamilyRule::even_tower;
    } else if (cert.k == 0) {
        rule = FamilyRule::doubling;
    } else {
        throw std::runtime_error("lift_family: hypothesis not met: no tower rule for k=" +
                                 std::to_string(cert.k));
    }
    FamilyStatement family;
    family.base = cert;
    family.rule = rule;
    family.conclusion = "for every alpha >= 0, 2^alpha * " + std::to_string(cert.n) +
                        " is not a sum of two squares plus at most " + std::to_string(cert.k) +
                        " powers of 2";
    return family;
}

bool spot_check_family(const FamilyStatement& family, const std::vector<uint32_t>& alphas) {
    for (uint32_t alpha : alphas) {
        if (alpha >= 64 || family.base.n > (std::numeric_limits<uint64_t>::max() >> alpha)) {
            throw std::overflow_error("spot_check_family: 2^" + std::to_string(alpha) + " * " +
                                      std::to_string(family.base.n) + " leaves the 64-bit range");
        }
        const uint64_t value = family.base.n << alpha;
        if (std::holds_alternative<RepresentationWitness>(certify(value, family.base.k))) {
            return false;
        }
    }
    return true;
}

void write_certificate(const Certificate& cert, std::ostream& out) {
    out << "CERT v1\n";
    out << "N " << cert.n << "\n";
    out << "K " << cert.k << "\n";
    for (const CaseRecord& rec : cert.cases) {
        out << "CASE exps=" << format_exponents(rec.exponents) << " rem=" << rec.remainder
            << " p=" << rec.obstruction.prime << " e=" << rec.obstruction.exponent << "\n";
    }
    out << "END\n";
    if (!out) throw std::runtime_error("write_certificate: write failed");
}

Certificate parse_certificate(std::istream& in) {
    size_t line_number = 0;
    std::string line;
    auto next_line = [&]() -> bool {
        ++line_number;
        return static_cast<bool>(std::getline(in, line));
    };
    auto parse_error = [&](const std::string& what) -> std::runtime_error {
        return std::runtime_error("certificate parse error at line " + std::to_string(line_number) +
                                  ": " + what);
    };

    if (!next_line()) throw parse_error("empty input, expected 'CERT v1'");
    if (line != "CERT v1") {
        if (line.rfind("CERT ", 0) == 0) throw parse_error("unknown certificate version '" + line + "'");
        throw parse_error("not a certificate file, expected 'CERT v1'");
    }

    Certificate cert;
    uint64_t value = 0;
    if (!next_line() || line.rfind("N ", 0) != 0 || !parse_u64(line.substr(2), value)) {
        throw parse_error("expected 'N <decimal>'");
    }
    cert.n = value;
    if (!next_line() || line.rfind("K ", 0) != 0 || !parse_u64(line.substr(2), value) || value > 3) {
        throw parse_error("expected 'K <decimal in 0..3>'");
    }
    cert.k = static_cast<int>(value);

    bool ended = false;
    while (next_line()) {
        if (line == "END") {
            ended = true;
            break;
        }
        if (line.rfind("CASE ", 0) != 0) throw parse_error("expected 'CASE ...' or 'END'");
        std::istringstream fields(line.substr(5));
        std::string exps_field, rem_field, p_field, e_field, extra;
        if (!(fields >> exps_field >> rem_field >> p_field >> e_field) || (fields >> extra)) {
            throw parse_error("CASE line must have exactly exps=, rem=, p=, e= fields");
        }
        if (exps_field.rfind("exps=", 0) != 0 || rem_field.rfind("rem=", 0) != 0 ||
            p_field.rfind("p=", 0) != 0 || e_field.rfind("e=", 0) != 0) {
            throw parse_error("malformed CASE fields");
        }
        CaseRecord rec;
        const std::string exps = exps_field.substr(5);
        if (exps != "-") {
            size_t pos = 0;
            while (pos <= exps.size()) {
                const size_t comma = std::min(exps.find(',', pos), exps.size());
                if (!parse_u64(std::string_view(exps).substr(pos, comma - pos), value) || value > 63) {
                    throw parse_error("bad exponent list '" + exps + "'");
                }
                rec.exponents.push_back(static_cast<uint32_t>(value));
                pos = comma + 1;
            }
        }
        if (!parse_u64(rem_field.substr(4), rec.remainder)) throw parse_error("bad rem= value");
        if (!parse_u64(p_field.substr(2), value)) throw parse_error("bad p= value");
        rec.obstruction.prime = value;
        if (!parse_u64(e_field.substr(2), value) || value > std::numeric_limits<uint32_t>::max()) {
            throw parse_error("bad e= value");
        }
        rec.obstruction.exponent = static_cast<uint32_t>(value);
        cert.cases.push_back(std::move(rec));
    }
    if (!ended) throw parse_error("missing END line");
    if (next_line()) throw parse_error("trailing garbage after END");
    return cert;
}

void save_certificate(const Certificate& cert, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("save_certificate: cannot open " + path);
    write_certificate(cert, out);
}

Certificate load_certificate(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("load_certificate: cannot open " + path);
    return parse_certificate(in);
}

}  // namespace twosq

#include "halfsign/modforms.hpp"

#include <cmath>
#include <istream>
#include <numeric>
#include <ostream>

#include "halfsign/error.hpp"

namespace halfsign::modforms {

NewformTable::NewformTable(std::string label, int weight, std::uint64_t level, std::vector<Integer> coeffs)
    : label_(std::move(label)), weight_(weight), level_(level), coeffs_(std::move(coeffs)) {
    if (weight_ < 2 || weight_ % 2 != 0) throw InvalidInput("form weight must be even and at least 2");
    if (level_ == 0) throw InvalidInput("form level must be positive");
    if (coeffs_.size() < 2) throw InvalidInput("form table needs order >= 2");
    if (coeffs_[1] != 1) throw InvalidInput("form " + label_ + " is not normalized: A(1) != 1");
    coeffs_[0] = 0;
}

const Integer& NewformTable::A(std::uint64_t n) const {
    if (n == 0 || n >= coeffs_.size()) {
        throw InvalidInput("coefficient index " + std::to_string(n) + " outside table of order " +
                           std::to_string(coeffs_.size()));
    }
    return coeffs_[n];
}

NewformTable NewformTable::with_coefficient(std::uint64_t n, Integer value) const {
    auto c = coeffs_;
    c.at(n) = std::move(value);
    return NewformTable(label_, weight_, level_, std::move(c));
}

const std::vector<CatalogEntry>& catalog() {
    static const std::vector<CatalogEntry> entries = {
        {"delta", 12, 1, qseries::EtaQuotient({{1, 24}})},
        {"11a", 2, 11, qseries::EtaQuotient({{1, 2}, {11, 2}})},
        {"5a", 4, 5, qseries::EtaQuotient({{1, 4}, {5, 4}})},
    };
    return entries;
}

NewformTable catalog_form(const std::string& label, std::size_t order) {
    if (order < 2) throw InvalidInput("form order must be at least 2");
    for (const auto& e : catalog()) {
        if (e.label != label) continue;
        const auto series = qseries::expand_eta_quotient(e.eta, order);
        return NewformTable(e.label, e.weight, e.level,
                            std::vector<Integer>(series.coeffs().begin(), series.coeffs().end()));
    }
    throw InvalidInput("unknown form '" + label + "' (known: delta, 11a, 5a)");
}

double lambda_normalized(const NewformTable& form, std::uint64_t n) {
    return form.A(n).get_d() / std::pow(static_cast<double>(n), form.normalization_exponent());
}

HeckeReport verify_hecke(const NewformTable& form, const arith::PrimeSet& primes) {
    HeckeReport r;
    const std::uint64_t order = form.order();
    const auto& a = form.coeffs();

    Integer prod;
    for (std::uint64_t m = 2; m * (m + 1) < order && !r.multiplicativity_violation; ++m) {
        for (std::uint64_t n = m + 1; m * n < order; ++n) {
            if (std::gcd(m, n) != 1) continue;
            ++r.pairs_checked;
            prod = a[m] * a[n];
            if (prod != a[m * n]) {
                r.multiplicativity_violation = {m, n};
                break;
            }
        }
    }

    Integer expect, pk;
    for (const auto p : primes.primes) {
        if (p * p >= order) break;
        const bool good = form.is_good_prime(p);
        mpz_ui_pow_ui(pk.get_mpz_t(), p, static_cast<unsigned long>(form.weight() - 1));
        // A(p^{nu+1}) = A(p) A(p^nu) - p^{2k-1} A(p^{nu-1}) at good p, A(p)^{nu+1} at bad p.
        std::uint64_t prev = 1, cur = p;
        for (unsigned nu = 1; cur <= (order - 1) / p; ++nu) {
            const std::uint64_t next = cur * p;
            expect = a[p] * a[cur];
            if (good) expect -= pk * a[prev];
            ++r.recursions_checked;
            if (expect != a[next]) {
                r.recursion_violation = {p, nu};
                break;
            }
            prev = cur;
            cur = next;
        }
        if (r.recursion_violation) break;
    }

    r.ok = !r.multiplicativity_violation && !r.recursion_violation;
    if (r.ok) {
        r.message = "ok";
    } else if (r.multiplicativity_violation) {
        const auto [m, n] = *r.multiplicativity_violation;
        r.message = "A(mn) != A(m)A(n) at (m, n) = (" + std::to_string(m) + ", " + std::to_string(n) + ")";
    } else {
        const auto [p, nu] = *r.recursion_violation;
        r.message = "prime power recursion fails at (p, nu) = (" + std::to_string(p) + ", " + std::to_string(nu) + ")";
    }
    return r;
}

HeckeReport verify_hecke(const NewformTable& form) {
    return verify_hecke(form, arith::sieve(std::max<std::uint64_t>(2, form.order())));
}

DeligneReport check_deligne(const NewformTable& form, const arith::PrimeSet& primes) {
    DeligneReport r;
    Integer bound, sq;
    for (const auto p : primes.primes) {
        if (p >= form.order()) break;
        if (!form.is_good_prime(p)) continue;
        ++r.checked;
        mpz_ui_pow_ui(bound.get_mpz_t(), p, static_cast<unsigned long>(form.weight() - 1));
        bound *= 4;
        sq = form.A(p) * form.A(p);
        if (sq > bound) {
            r.ok = false;
            r.violation = p;
            break;
        }
        if (sq == bound) r.boundary_primes.push_back(p);
    }
    return r;
}

NewformTable load_form_csv(std::istream& in, std::string label, int weight, std::uint64_t level) {
    std::vector<Integer> coeffs{0};
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos) throw InvalidInput("line " + std::to_string(lineno) + ": expected n,A(n)");
        const std::string ns = line.substr(0, comma), vs = line.substr(comma + 1);
        std::uint64_t n = 0;
        try {
            std::size_t used = 0;
            n = std::stoull(ns, &used);
            if (used != ns.size()) throw std::invalid_argument(ns);
        } catch (const std::exception&) {
            if (lineno == 1) continue;  // header
            throw InvalidInput("line " + std::to_string(lineno) + ": bad index '" + ns + "'");
        }
        if (n != coeffs.size()) {
            throw InvalidInput("line " + std::to_string(lineno) + ": expected index " + std::to_string(coeffs.size()));
        }
        Integer v;
        if (v.set_str(vs, 10) != 0) throw InvalidInput("line " + std::to_string(lineno) + ": bad coefficient");
        coeffs.push_back(std::move(v));
    }
    NewformTable form(std::move(label), weight, level, std::move(coeffs));
    const auto report = verify_hecke(form);
    if (!report.ok) throw ComputationError("imported form " + form.label() + " fails Hecke check: " + report.message);
    return form;
}

void write_form_csv(std::ostream& out, const NewformTable& form) {
    out << "n,A(n)\n";
    for (std::uint64_t n = 1; n < form.order(); ++n) out << n << ',' << form.A(n).get_str() << '\n';
}

}  // namespace halfsign::modforms

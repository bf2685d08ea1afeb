#pragma once

// Integral-weight Hecke eigenforms with exact coefficient tables.

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "halfsign/arith.hpp"
#include "halfsign/qseries.hpp"

namespace halfsign::modforms {

using qseries::Integer;

/// Coefficients A(n), 1 <= n < order, of a normalized eigenform with trivial
/// nebentypus.
class NewformTable {
public:
    NewformTable(std::string label, int weight, std::uint64_t level, std::vector<Integer> coeffs);

    const std::string& label() const noexcept { return label_; }
    /// The even weight 2k.
    int weight() const noexcept { return weight_; }
    int k() const noexcept { return weight_ / 2; }
    std::uint64_t level() const noexcept { return level_; }
    /// One past the largest available index.
    std::size_t order() const noexcept { return coeffs_.size(); }
    const Integer& A(std::uint64_t n) const;
    const std::vector<Integer>& coeffs() const noexcept { return coeffs_; }
    /// k - 1/2, the exponent normalizing A(n) to lambda(n).
    double normalization_exponent() const noexcept { return (weight_ - 1) / 2.0; }
    bool is_good_prime(std::uint64_t p) const noexcept { return level_ % p != 0; }

    NewformTable with_coefficient(std::uint64_t n, Integer value) const;

private:
    std::string label_;
    int weight_;
    std::uint64_t level_;
    std::vector<Integer> coeffs_;  // index 0 unused (zero)
};

struct CatalogEntry {
    std::string label;
    int weight;
    std::uint64_t level;
    qseries::EtaQuotient eta;
};

const std::vector<CatalogEntry>& catalog();

/// Expands a catalog eta quotient to `order` coefficients (order >= 2).
NewformTable catalog_form(const std::string& label, std::size_t order);

/// lambda(n) = A(n) / n^{k - 1/2}.
double lambda_normalized(const NewformTable& form, std::uint64_t n);

struct HeckeReport {
    bool ok = true;
    std::optional<std::pair<std::uint64_t, std::uint64_t>> multiplicativity_violation;  // (m, n)
    std::optional<std::pair<std::uint64_t, unsigned>> recursion_violation;                // (p, nu)
    std::size_t pairs_checked = 0;
    std::size_t recursions_checked = 0;
    std::string message;
};

/// Exhaustive check of A(mn) = A(m)A(n) for coprime m, n and of the prime
/// power recursion within the table. Exact integer arithmetic.
HeckeReport verify_hecke(const NewformTable& form, const arith::PrimeSet& primes);
HeckeReport verify_hecke(const NewformTable& form);

struct DeligneReport {
    bool ok = true;
    std::size_t checked = 0;
    std::optional<std::uint64_t> violation;
    /// Good primes where A(p)^2 = 4 p^{2k-1}, i.e. theta_p in {0, pi}.
    std::vector<std::uint64_t> boundary_primes;
};

/// A(p)^2 <= 4 p^{2k-1} for good primes p in the table.
DeligneReport check_deligne(const NewformTable& form, const arith::PrimeSet& primes);

/// Reads "n,A(n)" rows (an optional header line is skipped), n = 1, 2, ...
/// consecutively. The result is Hecke-verified; violations throw.
NewformTable load_form_csv(std::istream& in, std::string label, int weight, std::uint64_t level);
void write_form_csv(std::ostream& out, const NewformTable& form);

}  // namespace halfsign::modforms

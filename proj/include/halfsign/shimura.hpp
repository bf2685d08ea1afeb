#pragma once

// Coefficient relations of the Shimura correspondence between a half-integral
// weight eigenform (coefficients a(n), normalized so a(t) = 1) and its lift
// with coefficients A_t(n) = A(n).

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "halfsign/arith.hpp"
#include "halfsign/characters.hpp"
#include "halfsign/modforms.hpp"

namespace halfsign::shimura {

using characters::DirichletCharacter;
using characters::RotationNumber;
using modforms::Integer;
using modforms::NewformTable;

/// Lift data (form, chi mod 4N, k, N, t). Exact integer arithmetic needs
/// chi(p) in {+1, -1}, so chi must be real; chi^2 is then trivial, matching
/// the trivial nebentypus of the tables.
class LiftContext {
public:
    LiftContext(std::shared_ptr<const NewformTable> form, DirichletCharacter chi, int k, std::int64_t level_n,
                std::int64_t t);

    const NewformTable& form() const noexcept { return *form_; }
    const DirichletCharacter& chi() const noexcept { return twisted_.base(); }
    const characters::TwistedCharacter& twisted() const noexcept { return twisted_; }
    int k() const noexcept { return k_; }
    std::int64_t level_n() const noexcept { return n_; }
    std::int64_t t() const noexcept { return t_; }

    /// p does not divide 4 N t or the level of the form.
    bool is_good_prime(std::uint64_t p) const noexcept;
    /// chi_{t,N}(d) in {-1, 0, 1}.
    int chi_tn(std::uint64_t d) const { return twisted_.real_value(static_cast<std::int64_t>(d)); }
    int chi0(std::uint64_t d) const { return twisted_.chi0(static_cast<std::int64_t>(d)); }
    /// chi_{t,N}(d) d^{k-1}
    Integer twist_weight(std::uint64_t d) const;
    std::string describe() const;

private:
    std::shared_ptr<const NewformTable> form_;
    characters::TwistedCharacter twisted_;
    int k_;
    std::int64_t n_;
    std::int64_t t_;
    std::uint64_t bad_product_;
};

/// A_t(n) = sum_{d | n} chi_{t,N}(d) d^{k-1} a(t n^2/d^2), where
/// a_values[m] = a(t m^2).
Integer lift_forward(const LiftContext& ctx, std::span<const Integer> a_values, std::uint64_t n);

/// a(t n^2) = sum_{d | n} mu(d) chi_{t,N}(d) d^{k-1} A_t(n/d).
Integer lift_inverse(const LiftContext& ctx, std::span<const Integer> lift_values, std::uint64_t n);
/// Same, with A_t = A from the context's form.
Integer lift_inverse(const LiftContext& ctx, std::uint64_t n);

struct PrimePowerValue {
    std::uint64_t p = 0;
    RotationNumber fiber;      // zeta = chi(p)
    Integer value;             // a(t p^{2 nu})
    Integer scalar;            // a(t p^{2 nu}) / zeta^nu
    int sign = 0;              // exact sign of scalar
    double normalized = 0.0;   // scalar / p^{nu(k - 1/2)}
    double formula = 0.0;      // lambda(p^nu)/zeta^nu - chi0(p)/sqrt(p) lambda(p^{nu-1})/zeta^{nu-1}
    double formula_scale = 0.0;  // |first term| + |second term|, for relative comparisons
};

PrimePowerValue specialize_prime_power(const LiftContext& ctx, unsigned nu, std::uint64_t p);

/// One prime of a family {a(t p^{2 nu})}. The scalar a(t p^{2 nu})/zeta^nu is
/// real; `exact` holds it when it is an integer (exact mode).
struct FamilyEntry {
    std::uint64_t p = 0;
    RotationNumber fiber;
    int scalar_sign = 0;
    double normalized = 0.0;
    std::optional<Integer> exact;
};

struct FamilyParams {
    std::string source;  // form label, or "synthetic"
    DirichletCharacter chi;
    int k = 1;
    std::int64_t level_n = 1;
    std::int64_t t = 1;
    unsigned nu = 1;
};

struct HalfIntegralFamily {
    FamilyParams params;
    std::uint64_t x = 0;            // cutoff actually used
    std::uint64_t prime_count = 0;  // pi(x)
    std::vector<FamilyEntry> entries;    // ascending p
    std::vector<std::uint64_t> excluded;  // bad primes <= x
    // Synthetic mode only: scalars below 1e-12 counted as zero, and sampled
    // angles landing exactly on 0 or pi.
    std::uint64_t tiny_scalars = 0;
    std::uint64_t limiting_angles = 0;
};

/// Validates nu: odd and positive.
void require_odd_nu(std::int64_t nu);

/// Family over primes p <= x, where x is the sieve limit capped so that p^nu
/// stays inside the coefficient table.
HalfIntegralFamily build_family(const LiftContext& ctx, unsigned nu, const arith::PrimeSet& primes,
                                unsigned threads = 1);

/// CSV rows: p, zeta as a/b, exact value (or normalized float), sign.
void write_family_csv(std::ostream& out, const HalfIntegralFamily& family);

/// Every (real chi mod 4N, t) for N in {1, 3} and t in {1, -1, 5}.
std::vector<LiftContext> standard_contexts(const std::shared_ptr<const NewformTable>& form);

}  // namespace halfsign::shimura

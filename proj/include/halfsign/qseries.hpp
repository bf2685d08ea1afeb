#pragma once

// Truncated q-expansions with arbitrary-precision integer coefficients.
//
// A PowerSeries of order n stores the coefficients of q^0 .. q^{n-1}. Every
// binary operation truncates to the smaller order of its operands.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <gmpxx.h>

namespace halfsign::qseries {

using Integer = mpz_class;

class PowerSeries {
public:
    /// Zero series of the given order (order >= 1).
    explicit PowerSeries(std::size_t order);
    explicit PowerSeries(std::vector<Integer> coeffs);

    static PowerSeries one(std::size_t order);

    std::size_t order() const noexcept { return coeffs_.size(); }
    const Integer& operator[](std::size_t n) const { return coeffs_[n]; }
    std::span<const Integer> coeffs() const noexcept { return coeffs_; }

    /// Keeps the first `order` coefficients (order <= this->order()).
    PowerSeries truncated(std::size_t order) const;
    /// Multiplies by q^shift, keeping the order.
    PowerSeries shifted(std::size_t shift) const;
    /// Substitutes q -> q^d, keeping the order.
    PowerSeries substituted(std::size_t d) const;

    friend bool operator==(const PowerSeries&, const PowerSeries&) = default;

private:
    std::vector<Integer> coeffs_;
};

PowerSeries operator+(const PowerSeries& a, const PowerSeries& b);
PowerSeries operator-(const PowerSeries& a, const PowerSeries& b);
PowerSeries operator-(const PowerSeries& a);

enum class MulAlgorithm {
    Automatic,   // schoolbook below the threshold, Kronecker above
    Schoolbook,  // quadratic Cauchy product
    Karatsuba,   // divide and conquer on coefficient vectors
    Kronecker,   // pack into one big integer, let GMP's FFT multiply
};

/// Operands shorter than this use the schoolbook product in Automatic mode.
inline constexpr std::size_t kFastMultiplyThreshold = 48;

PowerSeries multiply(const PowerSeries& a, const PowerSeries& b,
                     MulAlgorithm algorithm = MulAlgorithm::Automatic);
PowerSeries operator*(const PowerSeries& a, const PowerSeries& b);

/// a^e by binary exponentiation, e >= 1.
PowerSeries pow(const PowerSeries& a, std::uint64_t e);

/// Multiplicative inverse by Newton iteration. The constant term must be +1 or -1.
PowerSeries inverse(const PowerSeries& a);

/// prod_{n>=1} (1 - q^n) via the pentagonal number theorem.
PowerSeries euler_series(std::size_t order);

struct EtaFactor {
    std::int64_t scale;     // d in eta(d z)
    std::int64_t exponent;  // r, nonzero
};

/// prod eta(d z)^r. Construction rejects a fractional or negative q-power
/// prefactor sum(d r)/24.
class EtaQuotient {
public:
    EtaQuotient() = default;
    explicit EtaQuotient(std::vector<EtaFactor> factors);

    const std::vector<EtaFactor>& factors() const noexcept { return factors_; }
    /// sum(d r)/24, an integer by construction.
    std::int64_t leading_exponent() const noexcept { return leading_; }
    /// sum(r)/2 as a rational twice-weight; weight is integral iff this is even.
    std::int64_t twice_weight() const noexcept { return twice_weight_; }

    std::string to_string() const;

private:
    std::vector<EtaFactor> factors_;
    std::int64_t leading_ = 0;
    std::int64_t twice_weight_ = 0;
};

PowerSeries expand_eta_quotient(const EtaQuotient& eq, std::size_t order);

}  // namespace halfsign::qseries

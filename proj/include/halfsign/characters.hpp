#pragma once

// Exact Dirichlet characters. Values are roots of unity stored as rotation
// numbers num/den in [0, 1), meaning exp(2 pi i num/den).

#include <complex>
#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "halfsign/arith.hpp"

namespace halfsign::characters {

class RotationNumber {
public:
    RotationNumber() = default;  // the root of unity 1
    /// Reduces num/den modulo 1 to canonical form.
    RotationNumber(std::int64_t num, std::int64_t den);

    static RotationNumber minus_one() { return {1, 2}; }

    std::int64_t num() const noexcept { return num_; }
    std::int64_t den() const noexcept { return den_; }
    /// Multiplicative order of the root of unity.
    std::int64_t order() const noexcept { return den_; }
    bool is_real() const noexcept { return den_ <= 2; }
    /// +1 or -1 for real roots; throws otherwise.
    int real_sign() const;

    RotationNumber operator*(RotationNumber other) const;
    RotationNumber pow(std::int64_t e) const;
    RotationNumber conj() const { return {-num_, den_}; }
    std::complex<double> value() const;
    std::string to_string() const;  // "num/den"

    friend bool operator==(const RotationNumber&, const RotationNumber&) = default;
    friend std::strong_ordering operator<=>(const RotationNumber& a, const RotationNumber& b);

private:
    std::int64_t num_ = 0;
    std::int64_t den_ = 1;
};

/// phi = (num/den) * pi with 0 <= num/den < 1.
class PhaseFraction {
public:
    PhaseFraction() = default;
    PhaseFraction(std::int64_t num, std::int64_t den);
    /// Parses "a/b" or "a" (an integer, so only "0" is in range).
    static PhaseFraction parse(const std::string& text);

    std::int64_t num() const noexcept { return num_; }
    std::int64_t den() const noexcept { return den_; }
    double radians() const;
    std::string to_string() const;

    friend bool operator==(const PhaseFraction&, const PhaseFraction&) = default;

private:
    std::int64_t num_ = 0;
    std::int64_t den_ = 1;
};

struct RotationSign {
    int sign = 0;        // exact sign of Re(zeta^nu e^{-i phi})
    double value = 0.0;  // the real part itself, in floating point
};

/// Sign of Re(zeta^nu e^{-i phi}), decided in rational arithmetic.
RotationSign real_part_of_rotation(RotationNumber zeta, std::int64_t nu, PhaseFraction phi);

/// One cyclic factor of (Z/M)^*: the unit group mod a prime power.
struct CyclicComponent {
    std::uint64_t prime_power;  // 4, 2 or p^e
    std::uint64_t generator;    // generator mod prime_power
    std::uint64_t order;        // size of the component
};

class DirichletCharacter {
public:
    /// The trivial character mod 1.
    DirichletCharacter() : DirichletCharacter(1, {}) {}
    /// Character mod `modulus` sending the generator of component i to
    /// exp(2 pi i exponents[i] / order_i). The modulus must be 2^a m with
    /// a <= 2 and m odd.
    DirichletCharacter(std::uint64_t modulus, std::vector<std::uint64_t> exponents);
    static DirichletCharacter trivial(std::uint64_t modulus);

    std::uint64_t modulus() const noexcept { return modulus_; }
    const std::vector<CyclicComponent>& components() const noexcept { return components_; }
    const std::vector<std::uint64_t>& exponents() const noexcept { return exponents_; }
    /// r_chi, the least m with chi^m trivial.
    std::uint64_t order() const noexcept { return order_; }
    bool is_real() const noexcept { return order_ <= 2; }
    bool is_trivial() const noexcept { return order_ == 1; }

    /// chi(a), or nullopt when gcd(a, modulus) > 1.
    std::optional<RotationNumber> operator()(std::int64_t a) const;
    /// Im(chi), ascending.
    std::vector<RotationNumber> image() const;
    /// #ker(chi) = phi(modulus) / order.
    std::uint64_t kernel_size() const;
    std::uint64_t unit_count() const noexcept { return units_; }

    DirichletCharacter pow(std::uint64_t e) const;
    std::string to_string() const;

    friend bool operator==(const DirichletCharacter& a, const DirichletCharacter& b) {
        return a.modulus_ == b.modulus_ && a.exponents_ == b.exponents_;
    }

private:
    std::uint64_t modulus_;
    std::vector<CyclicComponent> components_;
    std::vector<std::uint64_t> exponents_;
    std::uint64_t order_ = 1;
    std::uint64_t exponent_lcm_ = 1;  // common denominator of all values
    std::uint64_t units_ = 0;
    // value numerator over exponent_lcm_, or -1 for non-units
    std::vector<std::int32_t> table_;
};

/// Validates that modulus = 4N with N odd and square-free; returns N.
std::uint64_t validate_level_modulus(std::uint64_t modulus);

/// All characters mod 4N. Index i is mixed radix over the components with
/// the (Z/4)^* component as the least significant digit.
std::vector<DirichletCharacter> enumerate_characters(std::uint64_t modulus);
DirichletCharacter character_by_index(std::uint64_t modulus, std::uint64_t index);

/// chi_{t,N}(d) = chi(d) * kronecker((-1)^k N^2 t, d).
class TwistedCharacter {
public:
    TwistedCharacter(DirichletCharacter base, std::int64_t k, std::int64_t level_n, std::int64_t t);

    const DirichletCharacter& base() const noexcept { return base_; }
    /// (-1)^k N^2 t
    std::int64_t discriminant() const noexcept { return disc_; }
    /// chi_0(d), the Kronecker factor alone.
    int chi0(std::int64_t d) const;
    /// chi_{t,N}(d), nullopt when it vanishes. A -1 Kronecker factor is folded
    /// into the rotation as +1/2.
    std::optional<RotationNumber> operator()(std::int64_t d) const;
    /// Integer value in {-1, 0, 1}; requires a real base character.
    int real_value(std::int64_t d) const;

private:
    DirichletCharacter base_;
    std::int64_t disc_;
};

struct Fiber {
    RotationNumber zeta;
    bool in_image = true;  // false: zeta not a value of chi, primes is empty
    std::vector<std::uint64_t> primes;
};

/// Primes p <= x with p coprime to the modulus and chi(p) = zeta.
Fiber fiber(const DirichletCharacter& chi, RotationNumber zeta, const arith::PrimeSet& primes);

}  // namespace halfsign::characters

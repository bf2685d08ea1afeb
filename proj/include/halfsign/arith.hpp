#pragma once

// Elementary number theory: primes, Moebius, divisors, Kronecker symbol.

#include <cstdint>
#include <utility>
#include <vector>

namespace halfsign::arith {

/// The primes p <= limit, ascending.
struct PrimeSet {
    std::uint64_t limit = 0;
    std::vector<std::uint64_t> primes;

    std::size_t count() const noexcept { return primes.size(); }
    /// pi(y) for y <= limit.
    std::size_t count_up_to(std::uint64_t y) const;
};

/// Segmented sieve of Eratosthenes over odd numbers; memory O(sqrt(x) + segment).
PrimeSet sieve(std::uint64_t x);

int moebius(std::uint64_t n);
bool is_squarefree(std::int64_t n);

/// Kronecker symbol (a/n), total in both arguments.
int kronecker(std::int64_t a, std::int64_t n);

/// All positive divisors, ascending.
std::vector<std::uint64_t> divisors(std::uint64_t n);
/// 1, p, ..., p^nu.
std::vector<std::uint64_t> prime_power_divisors(std::uint64_t p, unsigned nu);

/// (prime, exponent) pairs by trial division, ascending primes.
std::vector<std::pair<std::uint64_t, unsigned>> factorize(std::uint64_t n);

std::uint64_t euler_phi(std::uint64_t n);
std::uint64_t pow_mod(std::uint64_t base, std::uint64_t exp, std::uint64_t mod);
/// Smallest generator of (Z/p^e)^*, p an odd prime.
std::uint64_t primitive_root(std::uint64_t p, unsigned e = 1);
/// p^e, throws on overflow past 2^63.
std::uint64_t checked_pow(std::uint64_t p, unsigned e);
/// Largest m with m^e <= n.
std::uint64_t integer_root(std::uint64_t n, unsigned e);

}  // namespace halfsign::arith

#include "halfsign/arith.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "halfsign/error.hpp"

namespace halfsign::arith {

namespace {

constexpr std::uint64_t kSegmentBytes = 1u << 16;

std::uint64_t isqrt(std::uint64_t n) {
    auto r = static_cast<std::uint64_t>(std::sqrt(static_cast<long double>(n)));
    while (r * r > n) --r;
    while ((r + 1) * (r + 1) <= n) ++r;
    return r;
}

}  // namespace

std::size_t PrimeSet::count_up_to(std::uint64_t y) const {
    return static_cast<std::size_t>(std::upper_bound(primes.begin(), primes.end(), y) - primes.begin());
}

PrimeSet sieve(std::uint64_t x) {
    if (x < 2) throw InvalidInput("sieve limit must be at least 2");
    PrimeSet out;
    out.limit = x;
    out.primes.push_back(2);
    if (x < 3) return out;

    // Base primes up to sqrt(x) with a plain sieve.
    const std::uint64_t root = isqrt(x);
    std::vector<char> small(root + 1, 1);
    std::vector<std::uint64_t> base;
    for (std::uint64_t i = 3; i <= root; i += 2) {
        if (!small[i]) continue;
        base.push_back(i);
        for (std::uint64_t j = i * i; j <= root; j += 2 * i) small[j] = 0;
    }

    // Segment s covers odd numbers low + 2i, i < kSegmentBytes.
    std::vector<char> seg(kSegmentBytes);
    std::vector<std::uint64_t> next(base.size());
    for (std::size_t i = 0; i < base.size(); ++i) next[i] = base[i] * base[i];

    for (std::uint64_t low = 3; low <= x; low += 2 * kSegmentBytes) {
        const std::uint64_t high = std::min(x, low + 2 * kSegmentBytes - 1);
        std::fill(seg.begin(), seg.end(), 1);
        for (std::size_t i = 0; i < base.size(); ++i) {
            const std::uint64_t p = base[i];
            std::uint64_t m = next[i];
            for (; m <= high; m += 2 * p) seg[(m - low) / 2] = 0;
            next[i] = m;
        }
        for (std::uint64_t n = low; n <= high; n += 2) {
            if (seg[(n - low) / 2]) out.primes.push_back(n);
        }
    }
    return out;
}

int moebius(std::uint64_t n) {
    if (n == 0) throw InvalidInput("moebius(0) is undefined");
    int mu = 1;
    for (const auto& [p, e] : factorize(n)) {
        if (e > 1) return 0;
        mu = -mu;
    }
    return mu;
}

bool is_squarefree(std::int64_t n) {
    if (n == 0) return false;
    const std::uint64_t m = n < 0 ? static_cast<std::uint64_t>(-(n + 1)) + 1 : static_cast<std::uint64_t>(n);
    return moebius(m) != 0;
}

int kronecker(std::int64_t a, std::int64_t n) {
    // Cohen, Algorithm 1.4.10.
    if (n == 0) return (a == 1 || a == -1) ? 1 : 0;
    if (a % 2 == 0 && n % 2 == 0) return 0;

    static constexpr int kTab2[8] = {0, 1, 0, -1, 0, -1, 0, 1};  // (2/a) by a mod 8
    int k = 1;
    int v = 0;
    while (n % 2 == 0) {
        n /= 2;
        ++v;
    }
    if (v % 2 == 1) k = kTab2[((a % 8) + 8) % 8];
    if (n < 0) {
        n = -n;
        if (a < 0) k = -k;
    }
    // n odd positive; reduce a mod n and run Jacobi.
    std::int64_t b = a % n;
    if (b < 0) b += n;
    std::int64_t m = n;
    while (b != 0) {
        v = 0;
        while (b % 2 == 0) {
            b /= 2;
            ++v;
        }
        if (v % 2 == 1) k *= kTab2[m % 8];
        if ((b & m & 2) != 0) k = -k;  // reciprocity: both = 3 mod 4
        const std::int64_t r = m % b;
        m = b;
        b = r;
    }
    return m == 1 ? k : 0;
}

std::vector<std::uint64_t> divisors(std::uint64_t n) {
    if (n == 0) throw InvalidInput("divisors(0) is undefined");
    std::vector<std::uint64_t> lo, hi;
    for (std::uint64_t d = 1; d * d <= n; ++d) {
        if (n % d != 0) continue;
        lo.push_back(d);
        if (d != n / d) hi.push_back(n / d);
    }
    lo.insert(lo.end(), hi.rbegin(), hi.rend());
    return lo;
}

std::vector<std::uint64_t> prime_power_divisors(std::uint64_t p, unsigned nu) {
    std::vector<std::uint64_t> out{1};
    for (unsigned i = 0; i < nu; ++i) out.push_back(out.back() * p);
    return out;
}

std::vector<std::pair<std::uint64_t, unsigned>> factorize(std::uint64_t n) {
    std::vector<std::pair<std::uint64_t, unsigned>> out;
    for (std::uint64_t p = 2; p * p <= n; p += (p == 2 ? 1 : 2)) {
        if (n % p != 0) continue;
        unsigned e = 0;
        while (n % p == 0) {
            n /= p;
            ++e;
        }
        out.emplace_back(p, e);
    }
    if (n > 1) out.emplace_back(n, 1);
    return out;
}

std::uint64_t euler_phi(std::uint64_t n) {
    std::uint64_t phi = n;
    for (const auto& [p, e] : factorize(n)) phi = phi / p * (p - 1);
    return phi;
}

std::uint64_t pow_mod(std::uint64_t base, std::uint64_t exp, std::uint64_t mod) {
    unsigned __int128 r = 1 % mod, b = base % mod;
    while (exp) {
        if (exp & 1) r = r * b % mod;
        b = b * b % mod;
        exp >>= 1;
    }
    return static_cast<std::uint64_t>(r);
}

std::uint64_t primitive_root(std::uint64_t p, unsigned e) {
    if (p < 3 || factorize(p).size() != 1 || factorize(p)[0].second != 1) {
        throw InvalidInput("primitive_root needs an odd prime");
    }
    const auto factors = factorize(p - 1);
    std::uint64_t g = 2;
    for (;; ++g) {
        bool ok = true;
        for (const auto& [q, _] : factors) {
            if (pow_mod(g, (p - 1) / q, p) == 1) {
                ok = false;
                break;
            }
        }
        if (ok) break;
    }
    // A root mod p lifts to all p^e unless g^(p-1) = 1 mod p^2.
    if (e >= 2 && pow_mod(g, p - 1, p * p) == 1) g += p;
    return g;
}

std::uint64_t checked_pow(std::uint64_t p, unsigned e) {
    std::uint64_t r = 1;
    for (unsigned i = 0; i < e; ++i) {
        if (p != 0 && r > (std::uint64_t{1} << 63) / p) throw InvalidInput("integer power overflows");
        r *= p;
    }
    return r;
}

std::uint64_t integer_root(std::uint64_t n, unsigned e) {
    if (e == 0) throw InvalidInput("zeroth root is undefined");
    if (e == 1) return n;
    auto fits = [&](std::uint64_t m) {
        unsigned __int128 r = 1;
        for (unsigned i = 0; i < e; ++i) {
            r *= m;
            if (r > n) return false;
        }
        return true;
    };
    auto m = static_cast<std::uint64_t>(std::pow(static_cast<long double>(n), 1.0L / e));
    while (m > 0 && !fits(m)) --m;
    while (fits(m + 1)) ++m;
    return m;
}

}  // namespace halfsign::arith

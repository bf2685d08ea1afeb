#include "halfsign/qseries.hpp"

#include <algorithm>
#include <bit>
#include <cstdlib>
#include <sstream>
#include <utility>

#include "halfsign/error.hpp"

namespace halfsign::qseries {

namespace {

using Coeffs = std::vector<Integer>;

void require_order(std::size_t order) {
    if (order == 0) throw InvalidInput("power series order must be positive");
}

// Full (untruncated) product of equal-length inputs, written into out[0 .. 2n-1).
void schoolbook_full(std::span<const Integer> a, std::span<const Integer> b, std::span<Integer> out) {
    for (auto& c : out) c = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (sgn(a[i]) == 0) continue;
        for (std::size_t j = 0; j < b.size(); ++j) {
            mpz_addmul(out[i + j].get_mpz_t(), a[i].get_mpz_t(), b[j].get_mpz_t());
        }
    }
}

constexpr std::size_t kKaratsubaBase = 24;

Coeffs karatsuba_full(std::span<const Integer> a, std::span<const Integer> b) {
    const std::size_t n = a.size();
    Coeffs out(2 * n - 1);
    if (n <= kKaratsubaBase) {
        schoolbook_full(a, b, out);
        return out;
    }
    const std::size_t lo = n / 2;
    const std::size_t hi = n - lo;

    Coeffs z0 = karatsuba_full(a.first(lo), b.first(lo));
    Coeffs z2 = karatsuba_full(a.subspan(lo), b.subspan(lo));

    Coeffs as(hi), bs(hi);
    for (std::size_t i = 0; i < hi; ++i) {
        as[i] = a[lo + i];
        bs[i] = b[lo + i];
        if (i < lo) {
            as[i] += a[i];
            bs[i] += b[i];
        }
    }
    Coeffs z1 = karatsuba_full(as, bs);
    for (std::size_t i = 0; i < z0.size(); ++i) z1[i] -= z0[i];
    for (std::size_t i = 0; i < z2.size(); ++i) z1[i] -= z2[i];

    for (std::size_t i = 0; i < z0.size(); ++i) out[i] += z0[i];
    for (std::size_t i = 0; i < z1.size(); ++i) out[i + lo] += z1[i];
    for (std::size_t i = 0; i < z2.size(); ++i) out[i + 2 * lo] += z2[i];
    return out;
}

std::size_t max_bits(std::span<const Integer> a) {
    std::size_t bits = 0;
    for (const auto& c : a) {
        if (sgn(c) != 0) bits = std::max(bits, mpz_sizeinbase(c.get_mpz_t(), 2));
    }
    return bits;
}

// Packs sum c_i 2^(64 L i) into a signed big integer. Positive and negative
// coefficients are packed separately as limb arrays and subtracted.
Integer kronecker_pack(std::span<const Integer> a, std::size_t limbs) {
    std::vector<mp_limb_t> pos(a.size() * limbs, 0), neg(a.size() * limbs, 0);
    for (std::size_t i = 0; i < a.size(); ++i) {
        const int s = sgn(a[i]);
        if (s == 0) continue;
        auto& dst = s > 0 ? pos : neg;
        std::size_t count = 0;
        mpz_export(dst.data() + i * limbs, &count, -1, sizeof(mp_limb_t), 0, 0, a[i].get_mpz_t());
    }
    Integer p, m;
    mpz_import(p.get_mpz_t(), pos.size(), -1, sizeof(mp_limb_t), 0, 0, pos.data());
    mpz_import(m.get_mpz_t(), neg.size(), -1, sizeof(mp_limb_t), 0, 0, neg.data());
    return p - m;
}

Coeffs kronecker_unpack(const Integer& packed, std::size_t count, std::size_t limbs) {
    const int sign = sgn(packed);
    Integer magnitude = abs(packed);
    const std::size_t used = mpz_size(magnitude.get_mpz_t());
    std::vector<mp_limb_t> words(std::max(used, count * limbs) + 1, 0);
    std::size_t written = 0;
    mpz_export(words.data(), &written, -1, sizeof(mp_limb_t), 0, 0, magnitude.get_mpz_t());

    Integer half, full;
    mpz_setbit(half.get_mpz_t(), 64 * limbs - 1);
    mpz_setbit(full.get_mpz_t(), 64 * limbs);

    Coeffs out(count);
    bool carry = false;
    Integer chunk;
    for (std::size_t i = 0; i < count; ++i) {
        mpz_import(chunk.get_mpz_t(), limbs, -1, sizeof(mp_limb_t), 0, 0, words.data() + i * limbs);
        if (carry) chunk += 1;
        carry = chunk >= half;
        if (carry) chunk -= full;
        out[i] = sign < 0 ? Integer(-chunk) : chunk;
    }
    return out;
}

Coeffs kronecker_truncated(std::span<const Integer> a, std::span<const Integer> b) {
    const std::size_t n = a.size();
    const std::size_t ba = max_bits(a);
    const std::size_t bb = max_bits(b);
    if (ba == 0 || bb == 0) return Coeffs(n);
    // |c| < n 2^(ba+bb); one extra bit for the sign of each slot.
    const std::size_t bits = ba + bb + std::bit_width(n) + 1;
    const std::size_t limbs = (bits + 63) / 64;
    const Integer product = kronecker_pack(a, limbs) * kronecker_pack(b, limbs);
    return kronecker_unpack(product, n, limbs);
}

}  // namespace

PowerSeries::PowerSeries(std::size_t order) : coeffs_(order) { require_order(order); }

PowerSeries::PowerSeries(std::vector<Integer> coeffs) : coeffs_(std::move(coeffs)) {
    require_order(coeffs_.size());
}

PowerSeries PowerSeries::one(std::size_t order) {
    PowerSeries s(order);
    s.coeffs_[0] = 1;
    return s;
}

PowerSeries PowerSeries::truncated(std::size_t order) const {
    require_order(order);
    if (order > coeffs_.size()) throw InvalidInput("cannot truncate a series to a larger order");
    return PowerSeries(Coeffs(coeffs_.begin(), coeffs_.begin() + static_cast<std::ptrdiff_t>(order)));
}

PowerSeries PowerSeries::shifted(std::size_t shift) const {
    PowerSeries s(order());
    for (std::size_t n = 0; n + shift < order(); ++n) s.coeffs_[n + shift] = coeffs_[n];
    return s;
}

PowerSeries PowerSeries::substituted(std::size_t d) const {
    if (d == 0) throw InvalidInput("substitution q -> q^0 is not supported");
    PowerSeries s(order());
    for (std::size_t n = 0; n * d < order(); ++n) s.coeffs_[n * d] = coeffs_[n];
    return s;
}

PowerSeries operator+(const PowerSeries& a, const PowerSeries& b) {
    const std::size_t n = std::min(a.order(), b.order());
    Coeffs c(n);
    for (std::size_t i = 0; i < n; ++i) c[i] = a[i] + b[i];
    return PowerSeries(std::move(c));
}

PowerSeries operator-(const PowerSeries& a, const PowerSeries& b) {
    const std::size_t n = std::min(a.order(), b.order());
    Coeffs c(n);
    for (std::size_t i = 0; i < n; ++i) c[i] = a[i] - b[i];
    return PowerSeries(std::move(c));
}

PowerSeries operator-(const PowerSeries& a) {
    Coeffs c(a.order());
    for (std::size_t i = 0; i < a.order(); ++i) c[i] = -a[i];
    return PowerSeries(std::move(c));
}

PowerSeries multiply(const PowerSeries& a, const PowerSeries& b, MulAlgorithm algorithm) {
    const std::size_t n = std::min(a.order(), b.order());
    const auto ac = a.coeffs().first(n);
    const auto bc = b.coeffs().first(n);

    if (algorithm == MulAlgorithm::Automatic) {
        algorithm = n < kFastMultiplyThreshold ? MulAlgorithm::Schoolbook : MulAlgorithm::Kronecker;
    }
    switch (algorithm) {
    case MulAlgorithm::Schoolbook: {
        Coeffs c(n);
        for (std::size_t i = 0; i < n; ++i) {
            if (sgn(ac[i]) == 0) continue;
            for (std::size_t j = 0; i + j < n; ++j) {
                mpz_addmul(c[i + j].get_mpz_t(), ac[i].get_mpz_t(), bc[j].get_mpz_t());
            }
        }
        return PowerSeries(std::move(c));
    }
    case MulAlgorithm::Karatsuba: {
        Coeffs c = karatsuba_full(ac, bc);
        c.resize(n);
        return PowerSeries(std::move(c));
    }
    case MulAlgorithm::Kronecker:
    case MulAlgorithm::Automatic:
        break;
    }
    return PowerSeries(kronecker_truncated(ac, bc));
}

PowerSeries operator*(const PowerSeries& a, const PowerSeries& b) { return multiply(a, b); }

PowerSeries pow(const PowerSeries& a, std::uint64_t e) {
    if (e == 0) throw InvalidInput("series exponent must be positive");
    PowerSeries base = a;
    PowerSeries result = PowerSeries::one(a.order());
    bool first = true;
    while (true) {
        if (e & 1) {
            result = first ? base : multiply(result, base);
            first = false;
        }
        e >>= 1;
        if (e == 0) break;
        base = multiply(base, base);
    }
    return result;
}

PowerSeries inverse(const PowerSeries& a) {
    if (a[0] != 1 && a[0] != -1) {
        throw InvalidInput("series inversion needs constant term +1 or -1");
    }
    const std::size_t n = a.order();
    PowerSeries b = PowerSeries::one(1);
    if (a[0] == -1) b = -b;
    std::size_t prec = 1;
    while (prec < n) {
        prec = std::min(2 * prec, n);
        Coeffs padded(b.coeffs().begin(), b.coeffs().end());
        padded.resize(prec);
        const PowerSeries bp(std::move(padded));
        // b <- b + b (1 - a b)
        const PowerSeries err = PowerSeries::one(prec) - multiply(a.truncated(prec), bp);
        b = bp + multiply(bp, err);
    }
    return b;
}

PowerSeries euler_series(std::size_t order) {
    require_order(order);
    Coeffs c(order);
    c[0] = 1;
    // Exponents k(3k-1)/2 and k(3k+1)/2 for k >= 1, sign (-1)^k.
    for (std::uint64_t k = 1;; ++k) {
        const std::uint64_t e1 = k * (3 * k - 1) / 2;
        if (e1 >= order) break;
        const int sign = (k % 2 == 0) ? 1 : -1;
        c[e1] = sign;
        const std::uint64_t e2 = k * (3 * k + 1) / 2;
        if (e2 < order) c[e2] = sign;
    }
    return PowerSeries(std::move(c));
}

EtaQuotient::EtaQuotient(std::vector<EtaFactor> factors) : factors_(std::move(factors)) {
    std::int64_t weighted = 0;
    for (const auto& f : factors_) {
        if (f.scale <= 0) throw InvalidInput("eta factor scale must be positive");
        if (f.exponent == 0) throw InvalidInput("eta factor exponent must be nonzero");
        weighted += f.scale * f.exponent;
        twice_weight_ += f.exponent;
    }
    if (weighted % 24 != 0) {
        throw InvalidInput("eta quotient " + to_string() + " has fractional q-power prefactor " +
                           std::to_string(weighted) + "/24");
    }
    if (weighted < 0) {
        throw InvalidInput("eta quotient " + to_string() + " has negative q-power prefactor");
    }
    leading_ = weighted / 24;
}

std::string EtaQuotient::to_string() const {
    if (factors_.empty()) return "1";
    std::ostringstream os;
    for (std::size_t i = 0; i < factors_.size(); ++i) {
        if (i) os << '*';
        os << "eta(" << factors_[i].scale << "z)^" << factors_[i].exponent;
    }
    return os.str();
}

PowerSeries expand_eta_quotient(const EtaQuotient& eq, std::size_t order) {
    require_order(order);
    const auto lead = static_cast<std::size_t>(eq.leading_exponent());
    PowerSeries result = PowerSeries::one(order);
    if (lead >= order) return PowerSeries(order);
    // Only order - lead coefficients survive the final shift.
    const std::size_t inner = order - lead;
    const PowerSeries euler = euler_series(inner);
    for (const auto& f : eq.factors()) {
        PowerSeries term = pow(euler.substituted(static_cast<std::size_t>(f.scale)),
                               static_cast<std::uint64_t>(std::llabs(f.exponent)));
        if (f.exponent < 0) term = inverse(term);
        result = multiply(result.truncated(inner), term);
    }
    Coeffs c(order);
    for (std::size_t n = 0; n < inner; ++n) c[n + lead] = result[n];
    return PowerSeries(std::move(c));
}

}  // namespace halfsign::qseries

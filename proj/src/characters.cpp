#include "halfsign/characters.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <set>
#include <sstream>

#include "halfsign/error.hpp"

namespace halfsign::characters {

namespace {

constexpr std::uint64_t kMaxModulus = 10'000'000;

std::int64_t floor_mod(std::int64_t a, std::int64_t m) {
    const std::int64_t r = a % m;
    return r < 0 ? r + m : r;
}

}  // namespace

RotationNumber::RotationNumber(std::int64_t num, std::int64_t den) {
    if (den <= 0) throw InvalidInput("rotation number denominator must be positive");
    num = floor_mod(num, den);
    const std::int64_t g = std::gcd(num, den);
    num_ = num / g;
    den_ = den / g;
}

int RotationNumber::real_sign() const {
    if (!is_real()) throw InvalidInput("root of unity " + to_string() + " is not real");
    return num_ == 0 ? 1 : -1;
}

RotationNumber RotationNumber::operator*(RotationNumber other) const {
    const std::int64_t l = std::lcm(den_, other.den_);
    return {num_ * (l / den_) + other.num_ * (l / other.den_), l};
}

RotationNumber RotationNumber::pow(std::int64_t e) const {
    const auto scaled = static_cast<__int128>(num_) * e % den_;
    return {static_cast<std::int64_t>(scaled), den_};
}

std::complex<double> RotationNumber::value() const {
    switch (den_) {
    case 1: return {1.0, 0.0};
    case 2: return {-1.0, 0.0};
    case 4: return num_ == 1 ? std::complex<double>{0.0, 1.0} : std::complex<double>{0.0, -1.0};
    default: break;
    }
    const double angle = 2.0 * std::numbers::pi * static_cast<double>(num_) / static_cast<double>(den_);
    return std::polar(1.0, angle);
}

std::string RotationNumber::to_string() const {
    return std::to_string(num_) + "/" + std::to_string(den_);
}

std::strong_ordering operator<=>(const RotationNumber& a, const RotationNumber& b) {
    return static_cast<__int128>(a.num_) * b.den_ <=> static_cast<__int128>(b.num_) * a.den_;
}

PhaseFraction::PhaseFraction(std::int64_t num, std::int64_t den) {
    if (den <= 0) throw InvalidInput("phase denominator must be positive");
    if (num < 0 || num >= den) {
        throw InvalidInput("phase " + std::to_string(num) + "/" + std::to_string(den) +
                           " is outside [0, 1) (units of pi)");
    }
    const std::int64_t g = std::gcd(num, den);
    num_ = num / g;
    den_ = den / g;
}

PhaseFraction PhaseFraction::parse(const std::string& text) {
    const auto slash = text.find('/');
    try {
        std::size_t used = 0;
        if (slash == std::string::npos) {
            const std::int64_t n = std::stoll(text, &used);
            if (used != text.size()) throw std::invalid_argument(text);
            return {n, 1};
        }
        const std::string a = text.substr(0, slash), b = text.substr(slash + 1);
        const std::int64_t n = std::stoll(a, &used);
        if (used != a.size()) throw std::invalid_argument(text);
        const std::int64_t d = std::stoll(b, &used);
        if (used != b.size()) throw std::invalid_argument(text);
        return {n, d};
    } catch (const InvalidInput&) {
        throw;
    } catch (const std::exception&) {
        throw InvalidInput("cannot parse phase '" + text + "'; expected a/b meaning (a/b)*pi");
    }
}

double PhaseFraction::radians() const {
    return std::numbers::pi * static_cast<double>(num_) / static_cast<double>(den_);
}

std::string PhaseFraction::to_string() const {
    return std::to_string(num_) + "/" + std::to_string(den_);
}

RotationSign real_part_of_rotation(RotationNumber zeta, std::int64_t nu, PhaseFraction phi) {
    // In full turns: s = nu*num/den - a/(2b) mod 1; Re = cos(2 pi s).
    const std::int64_t d = std::lcm(zeta.den(), 2 * phi.den());
    const std::int64_t s = floor_mod(
        floor_mod(static_cast<std::int64_t>(static_cast<__int128>(nu) * zeta.num() % zeta.den()), zeta.den()) *
                (d / zeta.den()) -
            phi.num() * (d / (2 * phi.den())),
        d);
    RotationSign out;
    const std::int64_t four_s = 4 * s;
    if (four_s == d || four_s == 3 * d) {
        out.sign = 0;
        out.value = 0.0;
    } else {
        out.sign = (four_s < d || four_s > 3 * d) ? 1 : -1;
        out.value = std::cos(2.0 * std::numbers::pi * static_cast<double>(s) / static_cast<double>(d));
    }
    return out;
}

DirichletCharacter::DirichletCharacter(std::uint64_t modulus, std::vector<std::uint64_t> exponents)
    : modulus_(modulus), exponents_(std::move(exponents)) {
    if (modulus == 0) throw InvalidInput("character modulus must be positive");
    if (modulus > kMaxModulus) throw InvalidInput("character modulus too large for a value table");

    for (const auto& [p, e] : arith::factorize(modulus)) {
        if (p == 2) {
            if (e >= 3) throw InvalidInput("moduli divisible by 8 are not supported");
            if (e == 2) components_.push_back({4, 3, 2});
            continue;  // (Z/2)^* is trivial
        }
        const std::uint64_t q = arith::checked_pow(p, e);
        components_.push_back({q, arith::primitive_root(p, e), q / p * (p - 1)});
    }
    if (exponents_.size() != components_.size()) {
        throw InvalidInput("character mod " + std::to_string(modulus) + " needs " +
                           std::to_string(components_.size()) + " component exponents, got " +
                           std::to_string(exponents_.size()));
    }

    for (std::size_t i = 0; i < components_.size(); ++i) {
        const auto ord = components_[i].order;
        exponents_[i] %= ord;
        exponent_lcm_ = std::lcm(exponent_lcm_, ord);
        order_ = std::lcm(order_, ord / std::gcd(exponents_[i], ord));
    }

    // Discrete logarithm tables per component.
    std::vector<std::vector<std::int64_t>> dlog(components_.size());
    for (std::size_t i = 0; i < components_.size(); ++i) {
        const auto& c = components_[i];
        dlog[i].assign(c.prime_power, -1);
        std::uint64_t g = 1;
        for (std::uint64_t j = 0; j < c.order; ++j) {
            dlog[i][g] = static_cast<std::int64_t>(j);
            g = g * c.generator % c.prime_power;
        }
    }

    table_.assign(modulus, -1);
    for (std::uint64_t a = 0; a < modulus; ++a) {
        if (std::gcd(a, modulus) != 1) continue;
        ++units_;
        std::uint64_t v = 0;
        for (std::size_t i = 0; i < components_.size(); ++i) {
            const auto& c = components_[i];
            const auto log = static_cast<std::uint64_t>(dlog[i][a % c.prime_power]);
            v = (v + exponents_[i] * log % c.order * (exponent_lcm_ / c.order)) % exponent_lcm_;
        }
        table_[a] = static_cast<std::int32_t>(v);
    }
}

DirichletCharacter DirichletCharacter::trivial(std::uint64_t modulus) {
    std::size_t n = 0;
    for (const auto& [p, e] : arith::factorize(modulus)) {
        if (p != 2 || e >= 2) ++n;
    }
    return DirichletCharacter(modulus, std::vector<std::uint64_t>(n, 0));
}

std::optional<RotationNumber> DirichletCharacter::operator()(std::int64_t a) const {
    const auto r = static_cast<std::uint64_t>(floor_mod(a, static_cast<std::int64_t>(modulus_)));
    const std::int32_t v = table_[r];
    if (v < 0) return std::nullopt;
    return RotationNumber(v, static_cast<std::int64_t>(exponent_lcm_));
}

std::vector<RotationNumber> DirichletCharacter::image() const {
    std::vector<RotationNumber> out;
    for (std::uint64_t j = 0; j < order_; ++j) {
        out.emplace_back(static_cast<std::int64_t>(j), static_cast<std::int64_t>(order_));
    }
    return out;
}

std::uint64_t DirichletCharacter::kernel_size() const { return units_ / order_; }

DirichletCharacter DirichletCharacter::pow(std::uint64_t e) const {
    std::vector<std::uint64_t> ex = exponents_;
    for (std::size_t i = 0; i < ex.size(); ++i) {
        ex[i] = static_cast<std::uint64_t>(static_cast<unsigned __int128>(ex[i]) * e % components_[i].order);
    }
    return DirichletCharacter(modulus_, std::move(ex));
}

std::string DirichletCharacter::to_string() const {
    std::ostringstream os;
    os << "chi mod " << modulus_ << " [";
    for (std::size_t i = 0; i < exponents_.size(); ++i) os << (i ? "," : "") << exponents_[i];
    os << "] order " << order_;
    return os.str();
}

std::uint64_t validate_level_modulus(std::uint64_t modulus) {
    if (modulus == 0 || modulus % 4 != 0) {
        throw InvalidInput("character modulus " + std::to_string(modulus) + " is not of the form 4N");
    }
    const std::uint64_t n = modulus / 4;
    if (n % 2 == 0) throw InvalidInput("level N = " + std::to_string(n) + " must be odd");
    if (arith::moebius(n) == 0) throw InvalidInput("level N = " + std::to_string(n) + " must be square-free");
    return n;
}

std::vector<DirichletCharacter> enumerate_characters(std::uint64_t modulus) {
    validate_level_modulus(modulus);
    const auto count = arith::euler_phi(modulus);
    std::vector<DirichletCharacter> out;
    out.reserve(count);
    for (std::uint64_t i = 0; i < count; ++i) out.push_back(character_by_index(modulus, i));
    return out;
}

DirichletCharacter character_by_index(std::uint64_t modulus, std::uint64_t index) {
    validate_level_modulus(modulus);
    const auto proto = DirichletCharacter::trivial(modulus);
    if (index >= proto.unit_count()) {
        throw InvalidInput("character index " + std::to_string(index) + " out of range; modulus " +
                           std::to_string(modulus) + " has " + std::to_string(proto.unit_count()) +
                           " characters");
    }
    std::vector<std::uint64_t> ex;
    for (const auto& c : proto.components()) {
        ex.push_back(index % c.order);
        index /= c.order;
    }
    return DirichletCharacter(modulus, std::move(ex));
}

TwistedCharacter::TwistedCharacter(DirichletCharacter base, std::int64_t k, std::int64_t level_n, std::int64_t t)
    : base_(std::move(base)) {
    if (k < 1) throw InvalidInput("k must be positive");
    if (t == 0) throw InvalidInput("t must be nonzero");
    const __int128 d = static_cast<__int128>(level_n) * level_n * t * ((k % 2 == 0) ? 1 : -1);
    if (d > INT64_MAX || d < INT64_MIN) throw InvalidInput("(-1)^k N^2 t overflows 64 bits");
    disc_ = static_cast<std::int64_t>(d);
}

int TwistedCharacter::chi0(std::int64_t d) const { return arith::kronecker(disc_, d); }

std::optional<RotationNumber> TwistedCharacter::operator()(std::int64_t d) const {
    const auto v = base_(d);
    if (!v) return std::nullopt;
    const int kr = chi0(d);
    if (kr == 0) return std::nullopt;
    return kr > 0 ? *v : *v * RotationNumber::minus_one();
}

int TwistedCharacter::real_value(std::int64_t d) const {
    if (!base_.is_real()) throw InvalidInput("integer character values need a real character");
    const auto v = (*this)(d);
    return v ? v->real_sign() : 0;
}

Fiber fiber(const DirichletCharacter& chi, RotationNumber zeta, const arith::PrimeSet& primes) {
    Fiber out;
    out.zeta = zeta;
    const auto img = chi.image();
    out.in_image = std::find(img.begin(), img.end(), zeta) != img.end();
    if (!out.in_image) return out;
    for (const auto p : primes.primes) {
        const auto v = chi(static_cast<std::int64_t>(p));
        if (v && *v == zeta) out.primes.push_back(p);
    }
    return out;
}

}  // namespace halfsign::characters

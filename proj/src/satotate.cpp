#include "halfsign/satotate.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include <boost/math/tools/roots.hpp>

#include "halfsign/error.hpp"

namespace halfsign::satotate {

namespace {

constexpr double kPi = std::numbers::pi;

std::uint64_t splitmix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

}  // namespace

double angle_of(double lambda_over_zeta) {
    if (!std::isfinite(lambda_over_zeta) || std::abs(lambda_over_zeta) > 2.0 + kDeligneSlack) {
        throw ComputationError("Deligne bound violated: |lambda(p)/zeta| = " + std::to_string(lambda_over_zeta) + " > 2");
    }
    return std::acos(std::clamp(lambda_over_zeta / 2.0, -1.0, 1.0));
}

double chebyshev_ratio(double theta, unsigned nu) {
    if (theta <= 0.0) return nu + 1.0;
    if (theta >= kPi) return (nu % 2 == 0 ? 1.0 : -1.0) * (nu + 1.0);
    const double s = std::sin(theta);
    if (std::abs(s) < 1e-6) {
        // Near the ends the quotient loses digits; the three-term recurrence does not.
        const double c2 = 2.0 * std::cos(theta);
        double prev = 1.0, cur = c2;
        if (nu == 0) return 1.0;
        for (unsigned i = 1; i < nu; ++i) {
            const double next = c2 * cur - prev;
            prev = cur;
            cur = next;
        }
        return cur;
    }
    return std::sin((nu + 1.0) * theta) / s;
}

std::complex<double> lambda_prime_power(double theta, unsigned nu, RotationNumber zeta) {
    return chebyshev_ratio(theta, nu) * zeta.pow(nu).value();
}

double st_density(double theta) {
    const double s = std::sin(theta);
    return 2.0 / kPi * s * s;
}

double st_cdf(double theta) {
    if (theta <= 0.0) return 0.0;
    if (theta >= kPi) return 1.0;
    return (theta - std::sin(theta) * std::cos(theta)) / kPi;
}

IntervalUnion interval_union(unsigned nu, double eps, UnionVariant variant) {
    if (nu == 0 || nu % 2 == 0) throw InvalidInput("interval unions need odd nu");
    if (!(eps >= 0.0 && eps <= 1.0)) throw InvalidInput("eps must lie in [0, 1]");
    IntervalUnion u;
    const double shift = std::asin(eps);
    const double m = nu + 1.0;
    const double offset = variant == UnionVariant::Positive ? 0.0 : kPi;
    for (unsigned j = 1; j <= (nu + 1) / 2; ++j) {
        const double base = (2.0 * j - 2.0) * kPi + offset;
        const double lo = (base + shift) / m;
        const double hi = (base + kPi - shift) / m;
        if (lo < hi) {
            u.intervals.push_back({lo, hi});
        } else {
            ++u.dropped;
        }
    }
    return u;
}

double st_measure(const IntervalUnion& u) {
    double total = 0.0;
    for (const auto& iv : u.intervals) total += st_cdf(iv.hi) - st_cdf(iv.lo);
    return total;
}

bool contains(const IntervalUnion& outer, const IntervalUnion& inner) {
    return std::all_of(inner.intervals.begin(), inner.intervals.end(), [&](const Interval& in) {
        return std::any_of(outer.intervals.begin(), outer.intervals.end(),
                           [&](const Interval& out) { return out.lo <= in.lo && in.hi <= out.hi; });
    });
}

double sample_angle(double u) {
    if (!(u >= 0.0 && u <= 1.0)) throw InvalidInput("sample_angle needs u in [0, 1]");
    if (u == 0.0) return 0.0;
    if (u == 1.0) return kPi;
    std::uintmax_t max_iter = 200;
    const auto [lo, hi] = boost::math::tools::bisect(
        [u](double theta) { return st_cdf(theta) - u; }, 0.0, kPi,
        [](double a, double b) { return std::abs(b - a) <= 2e-13; }, max_iter);
    return 0.5 * (lo + hi);
}

double counter_uniform(std::uint64_t seed, std::uint64_t index) {
    const std::uint64_t bits = splitmix64(splitmix64(seed) ^ splitmix64(index ^ 0xd1b54a32d192ed03ULL));
    return (static_cast<double>(bits >> 11) + 0.5) * 0x1.0p-53;
}

namespace {

// (D+, D-) of the sample against F_ST.
std::pair<double, double> one_sided_gaps(std::span<const double> thetas) {
    if (thetas.empty()) throw InvalidInput("equidistribution statistics need a nonempty sample");
    std::vector<double> s(thetas.begin(), thetas.end());
    std::sort(s.begin(), s.end());
    const double n = static_cast<double>(s.size());
    double plus = 0.0, minus = 0.0;
    for (std::size_t i = 0; i < s.size(); ++i) {
        const double f = st_cdf(s[i]);
        plus = std::max(plus, (i + 1.0) / n - f);
        minus = std::max(minus, f - i / n);
    }
    return {plus, minus};
}

}  // namespace

double ks_distance(std::span<const double> thetas) {
    const auto [plus, minus] = one_sided_gaps(thetas);
    return std::max(plus, minus);
}

double interval_discrepancy(std::span<const double> thetas) {
    const auto [plus, minus] = one_sided_gaps(thetas);
    return plus + minus;
}

AngleSet form_angles(const modforms::NewformTable& form, const characters::DirichletCharacter& chi,
                     const arith::PrimeSet& primes, std::uint64_t x) {
    if (!chi.is_real()) throw InvalidInput("form angles need a real character");
    if (x >= form.order()) {
        throw InvalidInput("cutoff " + std::to_string(x) + " needs a table of order > " + std::to_string(x));
    }
    AngleSet out;
    modforms::Integer bound, sq;
    for (const auto p : primes.primes) {
        if (p > x) break;
        const auto zeta = chi(static_cast<std::int64_t>(p));
        if (!form.is_good_prime(p) || !zeta) {
            out.excluded.push_back(p);
            continue;
        }
        mpz_ui_pow_ui(bound.get_mpz_t(), p, static_cast<unsigned long>(form.weight() - 1));
        bound *= 4;
        sq = form.A(p) * form.A(p);
        if (sq > bound) throw ComputationError("Deligne bound violated at p = " + std::to_string(p));
        const double ratio = modforms::lambda_normalized(form, p) * zeta->real_sign();
        double theta = angle_of(ratio);
        if (sq == bound) {
            theta = (sgn(form.A(p)) * zeta->real_sign() > 0) ? 0.0 : kPi;
            out.boundary.push_back(p);
        }
        out.samples.push_back({p, *zeta, theta});
    }
    return out;
}

}  // namespace halfsign::satotate

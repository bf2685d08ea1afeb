#pragma once

// Sato-Tate angles, the Chebyshev form of prime-power eigenvalues, the
// Sato-Tate measure, and equidistribution statistics.

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include "halfsign/arith.hpp"
#include "halfsign/characters.hpp"
#include "halfsign/modforms.hpp"

namespace halfsign::satotate {

using characters::RotationNumber;

/// Inputs in (2, 2 + kDeligneSlack] are rounding noise and clamp to 2.
inline constexpr double kDeligneSlack = 1e-6;

/// theta in [0, pi] with lambda(p)/zeta = 2 cos theta. Throws
/// ComputationError beyond the slack, since that means corrupted data.
double angle_of(double lambda_over_zeta);

/// sin((nu+1) theta) / sin(theta), continuous at 0 and pi.
double chebyshev_ratio(double theta, unsigned nu);

/// lambda(p^nu) = zeta^nu sin((nu+1) theta) / sin(theta); (nu+1) zeta^nu at
/// theta = 0 and (-1)^nu (nu+1) zeta^nu at theta = pi.
std::complex<double> lambda_prime_power(double theta, unsigned nu, RotationNumber zeta);

/// (2/pi) sin^2 theta
double st_density(double theta);
/// (theta - sin theta cos theta) / pi
double st_cdf(double theta);

struct Interval {
    double lo = 0.0;
    double hi = 0.0;
};

struct IntervalUnion {
    std::vector<Interval> intervals;  // ascending, disjoint, open
    std::size_t dropped = 0;          // empty pieces removed during construction
};

enum class UnionVariant {
    Positive,  // sin((nu+1) theta) > eps
    Negative,  // sin((nu+1) theta) < -eps
};

/// The union over j = 1..(nu+1)/2 of the open intervals on which
/// sin((nu+1) theta) exceeds eps (Positive) or stays below -eps (Negative).
IntervalUnion interval_union(unsigned nu, double eps, UnionVariant variant);

double st_measure(const IntervalUnion& u);

/// Every interval of `inner` lies inside some interval of `outer`.
bool contains(const IntervalUnion& outer, const IntervalUnion& inner);

/// Inverse of st_cdf by bracketed root finding, |error| <= 1e-12.
double sample_angle(double u);

/// Uniform in (0, 1), a pure function of (seed, index).
double counter_uniform(std::uint64_t seed, std::uint64_t index);

/// sup |F_emp - F_ST| over the sample, both one-sided gaps.
double ks_distance(std::span<const double> thetas);
/// Kuiper's statistic D+ + D-, the discrepancy over all subintervals.
double interval_discrepancy(std::span<const double> thetas);

struct AngleSample {
    std::uint64_t p = 0;
    RotationNumber fiber;
    double theta = 0.0;
};

struct AngleSet {
    std::vector<AngleSample> samples;     // good primes, ascending
    std::vector<std::uint64_t> excluded;  // primes dividing level * modulus
    std::vector<std::uint64_t> boundary;  // exact theta in {0, pi}
};

/// theta_p for primes p <= x of a form, fibered by a real character.
AngleSet form_angles(const modforms::NewformTable& form, const characters::DirichletCharacter& chi,
                     const arith::PrimeSet& primes, std::uint64_t x);

}  // namespace halfsign::satotate

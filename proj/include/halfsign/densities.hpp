#pragma once

// Sign statistics of families {a(t p^{2 nu})}: per-fiber and global counts,
// predicted densities, sign changes, and the Monte-Carlo driver that samples
// Sato-Tate angles on top of true character values.

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "halfsign/characters.hpp"
#include "halfsign/shimura.hpp"

namespace halfsign::densities {

using characters::PhaseFraction;
using characters::RotationNumber;
using shimura::FamilyEntry;
using shimura::HalfIntegralFamily;

enum class Sign : int { Negative = -1, Zero = 0, Positive = 1 };

/// Sign of Re(a(t p^{2 nu}) e^{-i phi}) = (a/zeta^nu) Re(zeta^nu e^{-i phi}).
Sign classify_sign(const FamilyEntry& entry, unsigned nu, PhaseFraction phi);

struct SignCounts {
    RotationNumber fiber;
    int rotation_sign = 0;        // sign of Re(zeta^nu e^{-i phi})
    double rotation_value = 0.0;
    bool zero_fiber = false;
    std::uint64_t n_fiber = 0;
    // by the sign of a(t p^{2 nu}) / zeta^nu
    std::uint64_t n_pos = 0, n_neg = 0, n_zero = 0;
    // by the sign of Re(a(t p^{2 nu}) e^{-i phi})
    std::uint64_t phi_pos = 0, phi_neg = 0, phi_zero = 0;
    double predicted = 0.0;       // 1 / (2 r_chi)
    double deviation = 0.0;       // max |n_pos/pi(x) - predicted|, |n_neg/pi(x) - predicted|
    double phi_deviation = 0.0;   // same for phi_pos, phi_neg; 0 on zero fibers
};

struct DensityReport {
    shimura::FamilyParams params;
    PhaseFraction phi;
    std::optional<std::uint64_t> seed;
    std::uint64_t x = 0;
    std::uint64_t prime_count = 0;  // pi(x)
    std::uint64_t n_excluded = 0;
    std::uint64_t order = 1;        // r_chi
    std::vector<SignCounts> fibers;  // ascending zeta over Im(chi)

    std::uint64_t pos = 0, neg = 0, zero = 0, nonzero = 0;
    std::uint64_t nonzero_fibers = 0;
    double empirical_pos = 0.0, empirical_neg = 0.0, empirical_nonzero = 0.0;
    double predicted_nonzero = 0.0;  // (#nonzero fibers) / r_chi
    double predicted_pos = 0.0;      // predicted_nonzero / 2
    double deviation_pos = 0.0, deviation_neg = 0.0;
    double half_nonzero_gap = 0.0;   // |empirical_pos - empirical_nonzero / 2|
    double max_fiber_deviation = 0.0;
    double max_phi_fiber_deviation = 0.0;

    std::uint64_t tiny_scalars = 0;
    std::uint64_t limiting_angles = 0;
};

DensityReport fiber_densities(const HalfIntegralFamily& family, PhaseFraction phi);

struct OscillationCheckpoint {
    std::uint64_t x = 0;
    std::uint64_t alternations = 0;
    std::uint64_t pos = 0, neg = 0, zero = 0;
};

struct OscillationRow {
    PhaseFraction phi;
    std::vector<OscillationCheckpoint> checkpoints;  // x/4, x/2, x
    bool both_signs = false;
    bool growing = false;   // alternations strictly increase across checkpoints
    bool evidence = false;  // both_signs && growing
};

/// Sign changes of Re(a(t p^{2 nu}) e^{-i phi}) along ascending p, zeros skipped.
std::vector<OscillationRow> oscillation_report(const HalfIntegralFamily& family, std::span<const PhaseFraction> phis);

struct SyntheticParams {
    characters::DirichletCharacter chi;
    int k = 2;
    std::int64_t level_n = 1;
    std::int64_t t = 1;
    unsigned nu = 1;
    PhaseFraction phi;
    std::uint64_t x = 100000;
    std::uint64_t seed = 0;
    unsigned threads = 1;
};

struct SyntheticRun {
    HalfIntegralFamily family;
    std::vector<double> thetas;  // per family entry
    DensityReport report;
};

/// Scalar threshold below which a synthetic value counts as zero.
inline constexpr double kTinyScalar = 1e-12;

/// For each good prime p <= x: zeta = chi(p), theta_p drawn from the Sato-Tate
/// law keyed by (seed, index of p among all primes), and the normalized scalar
/// U_nu(theta) - chi0(p)/sqrt(p) U_{nu-1}(theta).
SyntheticRun run_synthetic(const SyntheticParams& params);

}  // namespace halfsign::densities

#include "halfsign/densities.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "halfsign/error.hpp"
#include "halfsign/parallel.hpp"
#include "halfsign/satotate.hpp"

namespace halfsign::densities {

Sign classify_sign(const FamilyEntry& entry, unsigned nu, PhaseFraction phi) {
    const int rot = characters::real_part_of_rotation(entry.fiber, nu, phi).sign;
    return static_cast<Sign>(entry.scalar_sign * rot);
}

DensityReport fiber_densities(const HalfIntegralFamily& family, PhaseFraction phi) {
    if (family.entries.empty()) throw InvalidInput("density report needs a nonempty family");
    const auto& chi = family.params.chi;
    const unsigned nu = family.params.nu;

    DensityReport r;
    r.params = family.params;
    r.phi = phi;
    r.x = family.x;
    r.prime_count = family.prime_count;
    r.n_excluded = family.excluded.size();
    r.order = chi.order();
    r.tiny_scalars = family.tiny_scalars;
    r.limiting_angles = family.limiting_angles;

    std::map<RotationNumber, SignCounts> by_fiber;
    for (const auto& zeta : chi.image()) {
        SignCounts c;
        c.fiber = zeta;
        const auto rot = characters::real_part_of_rotation(zeta, nu, phi);
        c.rotation_sign = rot.sign;
        c.rotation_value = rot.value;
        c.zero_fiber = rot.sign == 0;
        by_fiber.emplace(zeta, c);
    }

    for (const auto& e : family.entries) {
        auto it = by_fiber.find(e.fiber);
        if (it == by_fiber.end()) throw ComputationError("family entry fiber " + e.fiber.to_string() + " not in Im(chi)");
        auto& c = it->second;
        ++c.n_fiber;
        if (e.scalar_sign > 0) {
            ++c.n_pos;
        } else if (e.scalar_sign < 0) {
            ++c.n_neg;
        } else {
            ++c.n_zero;
        }
        const int s = e.scalar_sign * c.rotation_sign;
        if (s > 0) {
            ++c.phi_pos;
        } else if (s < 0) {
            ++c.phi_neg;
        } else {
            ++c.phi_zero;
        }
    }

    const double pi_x = static_cast<double>(r.prime_count);
    const double fiber_prediction = 1.0 / (2.0 * static_cast<double>(r.order));
    for (auto& [zeta, c] : by_fiber) {
        c.predicted = fiber_prediction;
        c.deviation = std::max(std::abs(c.n_pos / pi_x - fiber_prediction), std::abs(c.n_neg / pi_x - fiber_prediction));
        if (!c.zero_fiber) {
            c.phi_deviation =
                std::max(std::abs(c.phi_pos / pi_x - fiber_prediction), std::abs(c.phi_neg / pi_x - fiber_prediction));
            ++r.nonzero_fibers;
        }
        r.pos += c.phi_pos;
        r.neg += c.phi_neg;
        r.zero += c.phi_zero;
        r.max_fiber_deviation = std::max(r.max_fiber_deviation, c.deviation);
        r.max_phi_fiber_deviation = std::max(r.max_phi_fiber_deviation, c.phi_deviation);
        r.fibers.push_back(c);
    }
    r.nonzero = r.pos + r.neg;

    r.empirical_pos = r.pos / pi_x;
    r.empirical_neg = r.neg / pi_x;
    r.empirical_nonzero = r.nonzero / pi_x;
    r.predicted_nonzero = static_cast<double>(r.nonzero_fibers) / static_cast<double>(r.order);
    r.predicted_pos = r.predicted_nonzero / 2.0;
    r.deviation_pos = std::abs(r.empirical_pos - r.predicted_pos);
    r.deviation_neg = std::abs(r.empirical_neg - r.predicted_pos);
    r.half_nonzero_gap = std::abs(r.empirical_pos - r.empirical_nonzero / 2.0);
    return r;
}

std::vector<OscillationRow> oscillation_report(const HalfIntegralFamily& family, std::span<const PhaseFraction> phis) {
    const std::uint64_t x = family.x;
    const std::uint64_t marks[3] = {x / 4, x / 2, x};
    std::vector<OscillationRow> rows;
    for (const auto& phi : phis) {
        OscillationRow row;
        row.phi = phi;
        OscillationCheckpoint acc;
        int last = 0;
        std::size_t mark = 0;
        auto flush_until = [&](std::uint64_t p) {
            while (mark < 3 && marks[mark] < p) {
                acc.x = marks[mark++];
                row.checkpoints.push_back(acc);
            }
        };
        for (const auto& e : family.entries) {
            flush_until(e.p);
            const int s = static_cast<int>(classify_sign(e, family.params.nu, phi));
            if (s > 0) {
                ++acc.pos;
            } else if (s < 0) {
                ++acc.neg;
            } else {
                ++acc.zero;
                continue;
            }
            if (last != 0 && s != last) ++acc.alternations;
            last = s;
        }
        flush_until(UINT64_MAX);
        const auto& fin = row.checkpoints.back();
        row.both_signs = fin.pos > 0 && fin.neg > 0;
        row.growing = row.checkpoints[0].alternations < row.checkpoints[1].alternations &&
                      row.checkpoints[1].alternations < row.checkpoints[2].alternations;
        row.evidence = row.both_signs && row.growing;
        rows.push_back(std::move(row));
    }
    return rows;
}

SyntheticRun run_synthetic(const SyntheticParams& params) {
    const auto& chi = params.chi;
    const std::uint64_t level = characters::validate_level_modulus(chi.modulus());
    if (static_cast<std::int64_t>(level) != params.level_n) {
        throw InvalidInput("character modulus " + std::to_string(chi.modulus()) + " is not 4N for N = " +
                           std::to_string(params.level_n));
    }
    shimura::require_odd_nu(params.nu);
    if (params.k < 1) throw InvalidInput("k must be positive");
    if (!arith::is_squarefree(params.t)) throw InvalidInput("t must be a square-free nonzero integer");
    if (params.x < 2) throw InvalidInput("x must be at least 2");

    const characters::TwistedCharacter twisted(chi, params.k, params.level_n, params.t);
    const std::uint64_t bad = 4 * level * static_cast<std::uint64_t>(std::llabs(params.t));
    const auto primes = arith::sieve(params.x);

    SyntheticRun run;
    auto& fam = run.family;
    fam.params = {"synthetic", chi, params.k, params.level_n, params.t, params.nu};
    fam.x = params.x;
    fam.prime_count = primes.count();

    std::vector<std::size_t> good;  // indices into primes
    for (std::size_t i = 0; i < primes.primes.size(); ++i) {
        if (bad % primes.primes[i] == 0) {
            fam.excluded.push_back(primes.primes[i]);
        } else {
            good.push_back(i);
        }
    }
    if (good.empty()) throw InvalidInput("no admissible primes below x = " + std::to_string(params.x));

    fam.entries.resize(good.size());
    run.thetas.resize(good.size());
    std::vector<char> tiny(good.size(), 0), limiting(good.size(), 0);
    parallel_for(good.size(), params.threads, [&](std::size_t i) {
        const std::uint64_t p = primes.primes[good[i]];
        const double theta = satotate::sample_angle(satotate::counter_uniform(params.seed, good[i]));
        const double scalar = satotate::chebyshev_ratio(theta, params.nu) -
                              twisted.chi0(static_cast<std::int64_t>(p)) / std::sqrt(static_cast<double>(p)) *
                                  satotate::chebyshev_ratio(theta, params.nu - 1);
        int sign = scalar > 0 ? 1 : (scalar < 0 ? -1 : 0);
        if (std::abs(scalar) < kTinyScalar) {
            sign = 0;
            tiny[i] = 1;
        }
        limiting[i] = (theta == 0.0 || theta == satotate::sample_angle(1.0)) ? 1 : 0;
        run.thetas[i] = theta;
        fam.entries[i] = FamilyEntry{p, *chi(static_cast<std::int64_t>(p)), sign, scalar, std::nullopt};
    });
    fam.tiny_scalars = static_cast<std::uint64_t>(std::count(tiny.begin(), tiny.end(), 1));
    fam.limiting_angles = static_cast<std::uint64_t>(std::count(limiting.begin(), limiting.end(), 1));

    run.report = fiber_densities(fam, params.phi);
    run.report.seed = params.seed;
    return run;
}

}  // namespace halfsign::densities

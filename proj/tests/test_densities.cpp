#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <memory>

#include "halfsign/densities.hpp"
#include "halfsign/error.hpp"

using namespace halfsign;
using namespace halfsign::densities;
using characters::DirichletCharacter;

namespace {

FamilyEntry entry(RotationNumber zeta, int sign) {
    FamilyEntry e;
    e.p = 3;
    e.fiber = zeta;
    e.scalar_sign = sign;
    e.normalized = sign;
    return e;
}

DirichletCharacter quartic20() {
    for (const auto& chi : characters::enumerate_characters(20)) {
        if (chi.order() == 4) return chi;
    }
    throw std::logic_error("no quartic character mod 20");
}

SyntheticParams synthetic(DirichletCharacter chi, std::int64_t n, unsigned nu, PhaseFraction phi, std::uint64_t x,
                          std::uint64_t seed) {
    SyntheticParams p;
    p.chi = std::move(chi);
    p.level_n = n;
    p.nu = nu;
    p.phi = phi;
    p.x = x;
    p.seed = seed;
    return p;
}

void check_partition(const DensityReport& r) {
    std::uint64_t total = 0, pos = 0, neg = 0, zero = 0;
    for (const auto& f : r.fibers) {
        CHECK(f.n_pos + f.n_neg + f.n_zero == f.n_fiber);
        CHECK(f.phi_pos + f.phi_neg + f.phi_zero == f.n_fiber);
        total += f.n_fiber;
        pos += f.phi_pos;
        neg += f.phi_neg;
        zero += f.phi_zero;
    }
    CHECK(total + r.n_excluded == r.prime_count);
    CHECK(pos == r.pos);
    CHECK(neg == r.neg);
    CHECK(zero == r.zero);
    CHECK(r.nonzero == r.pos + r.neg);
}

}  // namespace

TEST_CASE("classify_sign") {
    const PhaseFraction zero_phase(0, 1);
    CHECK(classify_sign(entry(RotationNumber(), 1), 1, zero_phase) == Sign::Positive);
    CHECK(classify_sign(entry(RotationNumber(1, 4), 1), 1, zero_phase) == Sign::Zero);
    CHECK(classify_sign(entry(RotationNumber(1, 4), -1), 1, zero_phase) == Sign::Zero);
    CHECK(classify_sign(entry(RotationNumber(1, 2), -1), 3, zero_phase) == Sign::Positive);
    CHECK(classify_sign(entry(RotationNumber(), 0), 1, zero_phase) == Sign::Zero);
    CHECK(classify_sign(entry(RotationNumber(1, 4), -1), 1, PhaseFraction(1, 2)) == Sign::Negative);
}

TEST_CASE("order-4 predictions") {
    const auto chi = quartic20();
    const auto run0 = run_synthetic(synthetic(chi, 5, 1, PhaseFraction(0, 1), 20000, 1));
    const auto& r0 = run0.report;
    CHECK(r0.order == 4);
    REQUIRE(r0.fibers.size() == 4);
    CHECK(r0.nonzero_fibers == 2);
    CHECK(r0.predicted_nonzero == 0.5);
    CHECK(r0.predicted_pos == 0.25);
    for (const auto& f : r0.fibers) {
        CHECK(f.predicted == 0.125);
        const bool imaginary = f.fiber == RotationNumber(1, 4) || f.fiber == RotationNumber(3, 4);
        CHECK(f.zero_fiber == imaginary);
        // zero fiber iff every prime in it is classified zero
        CHECK((f.phi_zero == f.n_fiber) == imaginary);
    }
    check_partition(r0);

    const auto run1 = run_synthetic(synthetic(chi, 5, 1, PhaseFraction(1, 4), 20000, 1));
    CHECK(run1.report.nonzero_fibers == 4);
    CHECK(run1.report.predicted_pos == 0.5);
    CHECK(run1.report.zero == 0);
    check_partition(run1.report);

    const auto trivial = run_synthetic(synthetic(DirichletCharacter::trivial(4), 1, 1, PhaseFraction(0, 1), 2000, 1));
    REQUIRE(trivial.report.fibers.size() == 1);
    CHECK(trivial.report.fibers[0].predicted == 0.5);
}

TEST_CASE("synthetic validation") {
    const auto chi = quartic20();
    CHECK_THROWS_AS(run_synthetic(synthetic(chi, 3, 1, PhaseFraction(0, 1), 1000, 1)), InvalidInput);
    CHECK_THROWS_AS(run_synthetic(synthetic(chi, 5, 2, PhaseFraction(0, 1), 1000, 1)), InvalidInput);
    auto bad_t = synthetic(chi, 5, 1, PhaseFraction(0, 1), 1000, 1);
    bad_t.t = 12;
    CHECK_THROWS_AS(run_synthetic(bad_t), InvalidInput);
}

TEST_CASE("partition exactness for exact families") {
    const auto form = std::make_shared<const modforms::NewformTable>(modforms::catalog_form("11a", 20001));
    const auto primes = arith::sieve(20000);
    for (const auto& ctx : shimura::standard_contexts(form)) {
        for (unsigned nu : {1u, 3u}) {
            const auto fam = shimura::build_family(ctx, nu, primes);
            for (const auto& phi : {PhaseFraction(0, 1), PhaseFraction(1, 4), PhaseFraction(1, 2)}) {
                check_partition(fiber_densities(fam, phi));
            }
        }
    }
}

TEST_CASE("scaling invariance") {
    const auto run = run_synthetic(synthetic(quartic20(), 5, 3, PhaseFraction(1, 4), 30000, 5));
    for (const double c : {1e-6, 0.5, 7.0, 1e9}) {
        auto fam = run.family;
        for (auto& e : fam.entries) {
            e.normalized *= c;
            e.scalar_sign = e.normalized > 0 ? 1 : (e.normalized < 0 ? -1 : 0);
        }
        for (std::size_t i = 0; i < fam.entries.size(); ++i) {
            REQUIRE(classify_sign(fam.entries[i], 3, PhaseFraction(1, 4)) ==
                    classify_sign(run.family.entries[i], 3, PhaseFraction(1, 4)));
        }
        const auto r = fiber_densities(fam, PhaseFraction(1, 4));
        CHECK(r.pos == run.report.pos);
        CHECK(r.neg == run.report.neg);
    }
}

TEST_CASE("phase reflection swaps the signs for real characters") {
    // chi real and nu odd: Re(zeta^nu e^{-i(pi - phi)}) = -Re(zeta^nu e^{-i phi})
    const auto form = std::make_shared<const modforms::NewformTable>(modforms::catalog_form("delta", 20001));
    const auto primes = arith::sieve(20000);
    for (const auto& ctx : shimura::standard_contexts(form)) {
        const auto fam = shimura::build_family(ctx, 1, primes);
        for (const auto& [a, b] : {std::pair{1, 4}, std::pair{1, 3}, std::pair{1, 6}}) {
            const auto r = fiber_densities(fam, PhaseFraction(a, b));
            const auto s = fiber_densities(fam, PhaseFraction(b - a, b));
            CHECK(r.pos == s.neg);
            CHECK(r.neg == s.pos);
            for (std::size_t i = 0; i < r.fibers.size(); ++i) {
                CHECK(r.fibers[i].phi_pos == s.fibers[i].phi_neg);
            }
        }
    }
}

TEST_CASE("synthetic convergence for the trivial character") {
    for (const std::uint64_t seed : {1u, 2u, 3u}) {
        const auto run = run_synthetic(synthetic(DirichletCharacter::trivial(4), 1, 1, PhaseFraction(0, 1), 200000, seed));
        const double n = static_cast<double>(run.family.entries.size());
        CHECK(run.report.fibers[0].deviation < 3.0 / std::sqrt(n));
        CHECK(run.report.tiny_scalars == 0);
        CHECK(run.report.limiting_angles == 0);
    }
}

TEST_CASE("synthetic runs are independent of the thread count") {
    auto params = synthetic(quartic20(), 5, 3, PhaseFraction(1, 4), 50000, 9);
    const auto one = run_synthetic(params);
    params.threads = 4;
    const auto four = run_synthetic(params);
    CHECK(one.thetas == four.thetas);
    REQUIRE(one.family.entries.size() == four.family.entries.size());
    for (std::size_t i = 0; i < one.family.entries.size(); ++i) {
        REQUIRE(one.family.entries[i].normalized == four.family.entries[i].normalized);
        REQUIRE(one.family.entries[i].fiber == four.family.entries[i].fiber);
    }
    CHECK(one.report.pos == four.report.pos);
    params.seed = 10;
    CHECK(run_synthetic(params).thetas != one.thetas);
}

TEST_CASE("oscillation") {
    shimura::HalfIntegralFamily constant;
    constant.params.chi = DirichletCharacter::trivial(4);
    constant.x = 1000;
    for (const auto p : arith::sieve(1000).primes) {
        if (p == 2) continue;
        FamilyEntry e = entry(RotationNumber(), 1);
        e.p = p;
        constant.entries.push_back(e);
    }
    const PhaseFraction zero_phase(0, 1);
    const auto rows = oscillation_report(constant, std::span(&zero_phase, 1));
    REQUIRE(rows.size() == 1);
    REQUIRE(rows[0].checkpoints.size() == 3);
    CHECK(rows[0].checkpoints[2].alternations == 0);
    CHECK(!rows[0].both_signs);
    CHECK(!rows[0].evidence);

    const auto form = std::make_shared<const modforms::NewformTable>(modforms::catalog_form("delta", 100001));
    const shimura::LiftContext ctx(form, DirichletCharacter::trivial(4), 6, 1, 1);
    const auto fam = shimura::build_family(ctx, 1, arith::sieve(100000));
    const std::vector<PhaseFraction> grid{PhaseFraction(0, 1), PhaseFraction(1, 4), PhaseFraction(1, 2)};
    const auto osc = oscillation_report(fam, grid);
    REQUIRE(osc.size() == 3);
    CHECK(osc[0].checkpoints[2].alternations >= 1000);
    CHECK(osc[0].evidence);
    for (const auto& row : osc) {
        CHECK(row.checkpoints[0].x == 25000);
        CHECK(row.checkpoints[0].alternations <= row.checkpoints[1].alternations);
        CHECK(row.checkpoints[1].alternations <= row.checkpoints[2].alternations);
    }
    // phi = pi/2 is a zero fiber for trivial chi
    CHECK(osc[2].checkpoints[2].zero == fam.entries.size());

    const auto report = fiber_densities(fam, zero_phase);
    CHECK(std::abs(report.empirical_pos - 0.5) < 0.03);
    CHECK(std::abs(report.empirical_neg - 0.5) < 0.03);
}

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <memory>
#include <sstream>

#include "halfsign/error.hpp"
#include "halfsign/shimura.hpp"

using namespace halfsign;
using namespace halfsign::shimura;

namespace {

std::shared_ptr<const NewformTable> shared_form(const std::string& label, std::size_t order) {
    return std::make_shared<const NewformTable>(modforms::catalog_form(label, order));
}

const DirichletCharacter& trivial4() {
    static const auto chi = characters::enumerate_characters(4)[0];
    return chi;
}

}  // namespace

TEST_CASE("context validation") {
    const auto delta = shared_form("delta", 100);
    CHECK_NOTHROW(LiftContext(delta, trivial4(), 6, 1, 1));
    CHECK_THROWS_AS(LiftContext(delta, trivial4(), 5, 1, 1), InvalidInput);   // weight mismatch
    CHECK_THROWS_AS(LiftContext(delta, trivial4(), 6, 1, 4), InvalidInput);   // t not square-free
    CHECK_THROWS_AS(LiftContext(delta, trivial4(), 6, 3, 1), InvalidInput);   // chi modulus != 4N
    const auto quartic = characters::enumerate_characters(20)[2];
    REQUIRE(quartic.order() == 4);
    CHECK_THROWS_AS(LiftContext(delta, quartic, 6, 5, 1), InvalidInput);      // complex chi
    CHECK_THROWS_AS(require_odd_nu(2), InvalidInput);
    CHECK_THROWS_AS(require_odd_nu(0), InvalidInput);
    CHECK_NOTHROW(require_odd_nu(3));
}

TEST_CASE("small lift values") {
    const LiftContext ctx(shared_form("delta", 1000), trivial4(), 6, 1, 1);
    CHECK(lift_inverse(ctx, 1) == 1);
    // a(9) = tau(3) - 3^5
    CHECK(lift_inverse(ctx, 3) == 9);
    // a(25) = tau(5) - (5/1) 5^5
    CHECK(lift_inverse(ctx, 5) == 4830 - 3125);
    CHECK(ctx.is_good_prime(3));
    CHECK(!ctx.is_good_prime(2));
    CHECK(ctx.twist_weight(3) == 243);

    const auto v = specialize_prime_power(ctx, 1, 3);
    CHECK(v.value == 9);
    CHECK(v.scalar == 9);
    CHECK(v.sign == 1);
    CHECK(v.normalized == doctest::Approx(9.0 / std::pow(3.0, 5.5)).epsilon(1e-14));
}

TEST_CASE("forward and inverse relations are mutually inverse") {
    for (const auto& label : {"delta", "11a", "5a"}) {
        const auto form = shared_form(label, 3000);
        for (const auto& ctx : standard_contexts(form)) {
            const std::uint64_t bound = 300;
            std::vector<Integer> a(bound + 1), lift(bound + 1);
            for (std::uint64_t n = 1; n <= bound; ++n) a[n] = lift_inverse(ctx, n);
            for (std::uint64_t n = 1; n <= bound; ++n) {
                REQUIRE_MESSAGE(lift_forward(ctx, a, n) == ctx.form().A(n), ctx.describe() << " n=" << n);
                lift[n] = ctx.form().A(n);
            }
            for (std::uint64_t n = 1; n <= bound; ++n) REQUIRE(lift_inverse(ctx, lift, n) == a[n]);
        }
    }
}

TEST_CASE("standard contexts cover N, chi and t") {
    const auto ctxs = standard_contexts(shared_form("delta", 100));
    CHECK(ctxs.size() == 18);
    for (const auto& ctx : ctxs) CHECK(ctx.chi().is_real());
}

TEST_CASE("prime power specialization matches Moebius inversion and the normalized formula") {
    const auto primes = arith::sieve(2000);
    for (const auto& label : {"delta", "11a", "5a"}) {
        const auto form = shared_form(label, 20001);
        for (const auto& ctx : standard_contexts(form)) {
            for (unsigned nu : {1u, 3u}) {
                for (const auto p : primes.primes) {
                    if (!ctx.is_good_prime(p)) continue;
                    std::uint64_t pnu = 1;
                    for (unsigned i = 0; i < nu; ++i) pnu *= p;
                    if (pnu >= form->order()) break;
                    const auto v = specialize_prime_power(ctx, nu, p);
                    REQUIRE(v.value == lift_inverse(ctx, pnu));
                    // chi real: zeta^nu = chi(p)
                    REQUIRE(v.scalar == v.value * v.fiber.real_sign());
                    REQUIRE(v.sign == sgn(v.scalar));
                    REQUIRE(std::abs(v.normalized - v.formula) <= 1e-9 * std::max(1.0, v.formula_scale));
                    if (std::abs(v.formula) > 1e-9 * v.formula_scale) {
                        REQUIRE((v.formula > 0 ? 1 : -1) == v.sign);
                    }
                }
            }
        }
    }
}

TEST_CASE("family ranges") {
    const auto primes = arith::sieve(100000);
    const auto form = shared_form("delta", 100001);
    const LiftContext ctx(form, trivial4(), 6, 1, 1);

    const auto f1 = build_family(ctx, 1, primes);
    CHECK(f1.x == 100000);
    CHECK(f1.prime_count == 9592);
    CHECK(f1.excluded == std::vector<std::uint64_t>{2});
    CHECK(f1.entries.size() == 9591);

    const auto f3 = build_family(ctx, 3, primes);
    CHECK(f3.x == 46);
    CHECK(f3.prime_count == 14);
    CHECK(f3.entries.size() == 13);
    for (const auto& e : f3.entries) {
        REQUIRE(e.exact.has_value());
        CHECK(*e.exact == specialize_prime_power(ctx, 3, e.p).scalar);
    }

    const auto threaded = build_family(ctx, 1, primes, 4);
    REQUIRE(threaded.entries.size() == f1.entries.size());
    for (std::size_t i = 0; i < f1.entries.size(); ++i) {
        REQUIRE(threaded.entries[i].p == f1.entries[i].p);
        REQUIRE(threaded.entries[i].normalized == f1.entries[i].normalized);
    }

    std::stringstream ss;
    write_family_csv(ss, f3);
    CHECK(ss.str().rfind("p,zeta,value,sign\n3,0/1,", 0) == 0);
}

TEST_CASE("bad primes of twisted families") {
    const auto form = shared_form("11a", 20001);
    const auto ctxs = standard_contexts(form);
    for (const auto& ctx : ctxs) {
        const auto fam = build_family(ctx, 1, arith::sieve(20000));
        CHECK(fam.entries.size() + fam.excluded.size() == fam.prime_count);
        for (const auto p : fam.excluded) {
            CHECK(!ctx.is_good_prime(p));
        }
        CHECK(std::find(fam.excluded.begin(), fam.excluded.end(), 11u) != fam.excluded.end());
    }
}

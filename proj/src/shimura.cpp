#include "halfsign/shimura.hpp"

#include <cmath>
#include <cstdlib>
#include <ostream>

#include "halfsign/error.hpp"
#include "halfsign/parallel.hpp"

namespace halfsign::shimura {

namespace {

std::uint64_t abs_u64(std::int64_t v) {
    return v < 0 ? static_cast<std::uint64_t>(-(v + 1)) + 1 : static_cast<std::uint64_t>(v);
}

// mant 2^exp / p^{e}, without overflowing doubles for large coefficients.
double scaled_to_double(const Integer& v, double p, double e) {
    if (sgn(v) == 0) return 0.0;
    long exp2 = 0;
    const double mant = mpz_get_d_2exp(&exp2, v.get_mpz_t());
    return mant * std::exp2(static_cast<double>(exp2) - e * std::log2(p));
}

}  // namespace

LiftContext::LiftContext(std::shared_ptr<const NewformTable> form, DirichletCharacter chi, int k,
                         std::int64_t level_n, std::int64_t t)
    : form_(std::move(form)), twisted_(chi, k, level_n, t), k_(k), n_(level_n), t_(t) {
    if (!form_) throw InvalidInput("lift context needs a form");
    if (level_n <= 0 || level_n % 2 == 0 || arith::moebius(static_cast<std::uint64_t>(level_n)) == 0) {
        throw InvalidInput("N must be an odd square-free positive integer, got " + std::to_string(level_n));
    }
    if (!arith::is_squarefree(t)) throw InvalidInput("t must be a square-free nonzero integer, got " + std::to_string(t));
    if (chi.modulus() != 4 * static_cast<std::uint64_t>(level_n)) {
        throw InvalidInput("character modulus " + std::to_string(chi.modulus()) + " is not 4N = " +
                           std::to_string(4 * level_n));
    }
    if (!chi.is_real()) {
        throw InvalidInput("exact lift needs a real character (order <= 2); " + chi.to_string() +
                           " has order " + std::to_string(chi.order()) + " (use the synthetic mode)");
    }
    if (form_->weight() != 2 * k) {
        throw InvalidInput("form " + form_->label() + " has weight " + std::to_string(form_->weight()) +
                           ", which is not 2k for k = " + std::to_string(k));
    }
    bad_product_ = 4 * static_cast<std::uint64_t>(level_n) * abs_u64(t) * form_->level();
}

bool LiftContext::is_good_prime(std::uint64_t p) const noexcept { return bad_product_ % p != 0; }

Integer LiftContext::twist_weight(std::uint64_t d) const {
    const int c = chi_tn(d);
    if (c == 0) return 0;
    Integer w;
    mpz_ui_pow_ui(w.get_mpz_t(), d, static_cast<unsigned long>(k_ - 1));
    return c > 0 ? w : Integer(-w);
}

std::string LiftContext::describe() const {
    return form_->label() + " k=" + std::to_string(k_) + " N=" + std::to_string(n_) + " t=" + std::to_string(t_) +
           " " + chi().to_string();
}

Integer lift_forward(const LiftContext& ctx, std::span<const Integer> a_values, std::uint64_t n) {
    if (n == 0) throw InvalidInput("lift index must be positive");
    if (n >= a_values.size()) {
        throw InvalidInput("missing a-value a(t*" + std::to_string(n) + "^2) for A_t(" + std::to_string(n) + ")");
    }
    Integer sum;
    for (const auto d : arith::divisors(n)) {
        const Integer w = ctx.twist_weight(d);
        if (sgn(w) != 0) sum += w * a_values[n / d];
    }
    return sum;
}

Integer lift_inverse(const LiftContext& ctx, std::span<const Integer> lift_values, std::uint64_t n) {
    if (n == 0) throw InvalidInput("lift index must be positive");
    if (n >= lift_values.size()) {
        throw InvalidInput("index " + std::to_string(n) + " exceeds the coefficient table order " +
                           std::to_string(lift_values.size()));
    }
    Integer sum;
    for (const auto d : arith::divisors(n)) {
        const int mu = arith::moebius(d);
        if (mu == 0) continue;
        const Integer w = ctx.twist_weight(d);
        if (sgn(w) == 0) continue;
        if (mu > 0) {
            sum += w * lift_values[n / d];
        } else {
            sum -= w * lift_values[n / d];
        }
    }
    return sum;
}

Integer lift_inverse(const LiftContext& ctx, std::uint64_t n) { return lift_inverse(ctx, ctx.form().coeffs(), n); }

PrimePowerValue specialize_prime_power(const LiftContext& ctx, unsigned nu, std::uint64_t p) {
    require_odd_nu(nu);
    if (!ctx.is_good_prime(p)) throw InvalidInput("prime " + std::to_string(p) + " divides 4*N*t*level");
    const auto& form = ctx.form();
    const std::uint64_t pnu = arith::checked_pow(p, nu);
    if (pnu >= form.order()) {
        throw InvalidInput("p^nu = " + std::to_string(pnu) + " exceeds the table order " + std::to_string(form.order()));
    }
    const std::uint64_t pprev = pnu / p;

    PrimePowerValue out;
    out.p = p;
    out.fiber = *ctx.chi()(static_cast<std::int64_t>(p));
    const int zeta_nu = out.fiber.pow(nu).real_sign();
    const int zeta_prev = out.fiber.pow(nu - 1).real_sign();

    // a(t p^{2nu}) = A(p^nu) - chi_{t,N}(p) p^{k-1} A(p^{nu-1})
    out.value = form.A(pnu) - ctx.twist_weight(p) * form.A(pprev);
    out.scalar = zeta_nu > 0 ? out.value : Integer(-out.value);
    out.sign = sgn(out.scalar);

    const double ph = form.normalization_exponent();
    const double dp = static_cast<double>(p);
    out.normalized = scaled_to_double(out.scalar, dp, nu * ph);

    const double lam = scaled_to_double(form.A(pnu), dp, nu * ph) * zeta_nu;
    const double lam_prev = scaled_to_double(form.A(pprev), dp, (nu - 1) * ph) * zeta_prev;
    const double second = ctx.chi0(p) / std::sqrt(dp) * lam_prev;
    out.formula = lam - second;
    out.formula_scale = std::abs(lam) + std::abs(second);
    return out;
}

void require_odd_nu(std::int64_t nu) {
    if (nu <= 0 || nu % 2 == 0) throw InvalidInput("nu must be an odd positive integer, got " + std::to_string(nu));
}

HalfIntegralFamily build_family(const LiftContext& ctx, unsigned nu, const arith::PrimeSet& primes, unsigned threads) {
    require_odd_nu(nu);
    HalfIntegralFamily fam;
    fam.params = {ctx.form().label(), ctx.chi(), ctx.k(), ctx.level_n(), ctx.t(), nu};
    fam.x = std::min<std::uint64_t>(primes.limit, arith::integer_root(ctx.form().order() - 1, nu));

    std::vector<std::uint64_t> good;
    for (const auto p : primes.primes) {
        if (p > fam.x) break;
        ++fam.prime_count;
        if (ctx.is_good_prime(p)) {
            good.push_back(p);
        } else {
            fam.excluded.push_back(p);
        }
    }
    if (good.empty()) throw InvalidInput("no admissible primes for " + ctx.describe());

    fam.entries.resize(good.size());
    parallel_for(good.size(), threads, [&](std::size_t i) {
        auto v = specialize_prime_power(ctx, nu, good[i]);
        fam.entries[i] = FamilyEntry{v.p, v.fiber, v.sign, v.normalized, std::move(v.scalar)};
    });
    return fam;
}

void write_family_csv(std::ostream& out, const HalfIntegralFamily& family) {
    out << "p,zeta,value,sign\n";
    for (const auto& e : family.entries) {
        out << e.p << ',' << e.fiber.to_string() << ',';
        if (e.exact) {
            out << e.exact->get_str();
        } else {
            out << e.normalized;
        }
        out << ',' << e.scalar_sign << '\n';
    }
}

std::vector<LiftContext> standard_contexts(const std::shared_ptr<const NewformTable>& form) {
    std::vector<LiftContext> out;
    for (const std::int64_t n : {1, 3}) {
        for (const auto& chi : characters::enumerate_characters(4 * static_cast<std::uint64_t>(n))) {
            if (!chi.is_real()) continue;
            for (const std::int64_t t : {1, -1, 5}) out.emplace_back(form, chi, form->k(), n, t);
        }
    }
    return out;
}

}  // namespace halfsign::shimura

#include "halfsign/commands.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <memory>
#include <numbers>
#include <numeric>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "halfsign/arith.hpp"
#include "halfsign/characters.hpp"
#include "halfsign/error.hpp"
#include "halfsign/modforms.hpp"
#include "halfsign/qseries.hpp"
#include "halfsign/shimura.hpp"

namespace halfsign::cli {

using characters::DirichletCharacter;
using characters::PhaseFraction;
using characters::RotationNumber;

namespace {

constexpr double kPi = std::numbers::pi;

// ---------------------------------------------------------------------------
// output helpers

class Sink {
public:
    Sink(const std::string& path, std::ostream& fallback) {
        if (path.empty() || path == "-") {
            stream_ = &fallback;
            return;
        }
        file_.open(path, std::ios::binary);
        if (!file_) throw InvalidInput("cannot open output file '" + path + "'");
        stream_ = &file_;
    }
    std::ostream& get() { return *stream_; }

private:
    std::ofstream file_;
    std::ostream* stream_ = nullptr;
};

std::string fmt_double(double v) {
    std::ostringstream os;
    os << std::setprecision(17) << v;
    return os.str();
}

Json character_json(const DirichletCharacter& chi) {
    Json j;
    j["modulus"] = chi.modulus();
    j["exponents"] = chi.exponents();
    j["order"] = chi.order();
    return j;
}

// ---------------------------------------------------------------------------
// character flags shared by angles, signs, simulate

struct CharacterFlags {
    std::uint64_t modulus = 0;  // 0: default for the command
    std::optional<std::uint64_t> index;
    std::vector<std::uint64_t> exponents;

    void attach(CLI::App& app) {
        app.add_option("--chi-modulus", modulus, "Character modulus (4N for lift commands)");
        app.add_option("--chi-index", index, "Index into the deterministic enumeration of characters mod 4N");
        app.add_option("--chi-exponents", exponents, "Component exponents, (Z/4)^* first, then odd primes ascending")
            ->delimiter(',');
    }

    DirichletCharacter resolve(std::uint64_t default_modulus) const {
        const std::uint64_t m = modulus ? modulus : default_modulus;
        if (index && !exponents.empty()) throw InvalidInput("give either --chi-index or --chi-exponents, not both");
        if (index) return characters::character_by_index(m, *index);
        if (!exponents.empty()) return DirichletCharacter(m, exponents);
        return DirichletCharacter::trivial(m);
    }
};

std::vector<PhaseFraction> parse_phases(const std::vector<std::string>& texts) {
    std::vector<PhaseFraction> out;
    for (const auto& t : texts) out.push_back(PhaseFraction::parse(t));
    return out;
}

std::shared_ptr<const modforms::NewformTable> load_form(const std::string& label, const std::string& csv_path,
                                                        int weight, std::uint64_t level, std::size_t order) {
    if (!csv_path.empty()) {
        if (weight <= 0 || level == 0) throw InvalidInput("--form-csv needs --weight and --level");
        std::ifstream in(csv_path);
        if (!in) throw InvalidInput("cannot open form table '" + csv_path + "'");
        return std::make_shared<const modforms::NewformTable>(
            modforms::load_form_csv(in, label.empty() ? csv_path : label, weight, level));
    }
    if (label.empty()) throw InvalidInput("a form is required (--form or --form-csv)");
    return std::make_shared<const modforms::NewformTable>(modforms::catalog_form(label, order));
}

// ---------------------------------------------------------------------------
// identity suite

IdentityResult check_euler(bool fault) {
    constexpr std::size_t order = 400;
    auto direct = qseries::PowerSeries::one(order);
    for (std::size_t n = 1; n < order; ++n) {
        std::vector<qseries::Integer> f(order);
        f[0] = 1;
        f[n] = -1;
        direct = qseries::multiply(direct, qseries::PowerSeries(std::move(f)), qseries::MulAlgorithm::Schoolbook);
    }
    auto euler = qseries::euler_series(order);
    if (fault) euler = euler + qseries::PowerSeries::one(order).shifted(7);
    const bool ok = euler == direct;
    return {"euler-pentagonal", ok, ok ? "pentagonal expansion = prod(1-q^n), order 400" : "pentagonal mismatch"};
}

IdentityResult check_fast_multiply(bool fault) {
    const auto base = qseries::pow(qseries::euler_series(1500), 5);
    auto x = qseries::multiply(base, base.shifted(3), qseries::MulAlgorithm::Kronecker);
    const auto y = qseries::multiply(base, base.shifted(3), qseries::MulAlgorithm::Karatsuba);
    const auto z = qseries::multiply(base, base.shifted(3), qseries::MulAlgorithm::Schoolbook);
    if (fault) x = x + qseries::PowerSeries::one(x.order());
    const bool ok = x == y && y == z;
    return {"fast-multiply", ok, ok ? "Kronecker = Karatsuba = schoolbook, order 1500" : "multiplication paths differ"};
}

IdentityResult check_hecke(const std::string& label, std::size_t order, bool fault) {
    auto form = modforms::catalog_form(label, order);
    if (fault) form = form.with_coefficient(6, form.A(6) + 1);
    const auto rep = modforms::verify_hecke(form);
    std::string detail = rep.ok ? std::to_string(rep.pairs_checked) + " coprime pairs, " +
                                      std::to_string(rep.recursions_checked) + " recursions, order " +
                                      std::to_string(order)
                                : rep.message;
    return {"hecke-" + label, rep.ok, detail};
}

IdentityResult check_deligne(std::size_t order, bool fault) {
    const auto primes = arith::sieve(std::max<std::size_t>(order, 2));
    std::size_t checked = 0, boundary = 0;
    for (const auto& entry : modforms::catalog()) {
        auto form = modforms::catalog_form(entry.label, order);
        if (fault && entry.label == "delta") form = form.with_coefficient(3, form.A(3) * 1000);
        const auto rep = modforms::check_deligne(form, primes);
        if (!rep.ok) {
            return {"deligne-bound", false, entry.label + " violates A(p)^2 <= 4p^(2k-1) at p = " +
                                                std::to_string(*rep.violation)};
        }
        checked += rep.checked;
        boundary += rep.boundary_primes.size();
    }
    return {"deligne-bound", true,
            std::to_string(checked) + " good primes, " + std::to_string(boundary) + " on the boundary"};
}

IdentityResult check_moebius_roundtrip(std::size_t order, bool fault) {
    std::size_t contexts = 0;
    for (const auto& entry : modforms::catalog()) {
        auto table = modforms::catalog_form(entry.label, order);
        auto form = std::make_shared<const modforms::NewformTable>(table);
        for (const auto& ctx : shimura::standard_contexts(form)) {
            ++contexts;
            // A -> a -> A
            std::vector<qseries::Integer> a(order);
            for (std::uint64_t n = 1; n < order; ++n) a[n] = shimura::lift_inverse(ctx, n);
            if (fault) a[order / 2] += 1;
            for (std::uint64_t n = 1; n < order; ++n) {
                if (shimura::lift_forward(ctx, a, n) != form->A(n)) {
                    return {"moebius-roundtrip", false,
                            "forward(inverse(A)) != A at n = " + std::to_string(n) + " for " + ctx.describe()};
                }
            }
            // a -> A -> a on an arbitrary sequence with a(t) = 1
            std::vector<qseries::Integer> b(order), lifted(order);
            b[1] = 1;
            for (std::uint64_t n = 2; n < order; ++n) {
                b[n] = static_cast<long>(satotate::counter_uniform(contexts, n) * 2e6) - 1000000;
            }
            for (std::uint64_t n = 1; n < order; ++n) lifted[n] = shimura::lift_forward(ctx, b, n);
            for (std::uint64_t n = 1; n < order; ++n) {
                if (shimura::lift_inverse(ctx, lifted, n) != b[n]) {
                    return {"moebius-roundtrip", false,
                            "inverse(forward(a)) != a at n = " + std::to_string(n) + " for " + ctx.describe()};
                }
            }
        }
    }
    return {"moebius-roundtrip", true,
            std::to_string(contexts) + " contexts, n < " + std::to_string(order) + ", both directions"};
}

IdentityResult check_trig_identity(bool fault) {
    constexpr int kGrid = 1000;
    double worst = 0.0;
    for (std::int64_t m = 1; m <= 8; ++m) {
        for (std::int64_t a = 0; a < m; ++a) {
            if (std::gcd(a, m) != 1) continue;
            const RotationNumber zeta(a, m);
            const auto z = zeta.value();
            for (int j = 0; j < kGrid; ++j) {
                const double theta = kPi * j / (kGrid - 1);
                // Hecke recursion from L(0) = 1, L(1) = 2 zeta cos theta.
                std::complex<double> prev = 1.0, cur = 2.0 * z * std::cos(theta);
                for (unsigned nu = 0; nu <= 9; ++nu) {
                    std::complex<double> expected = nu == 0 ? prev : cur;
                    if (nu >= 2) {
                        const auto next = 2.0 * z * std::cos(theta) * cur - z * z * prev;
                        prev = cur;
                        cur = next;
                        expected = cur;
                    }
                    auto closed = satotate::lambda_prime_power(theta, nu, zeta);
                    if (fault && nu == 9 && j == kGrid / 2) closed += 1e-6;
                    worst = std::max(worst, std::abs(closed - expected));
                }
            }
            // limiting cases
            for (unsigned nu = 0; nu <= 9; ++nu) {
                const auto zn = zeta.pow(nu).value();
                worst = std::max(worst, std::abs(satotate::lambda_prime_power(0.0, nu, zeta) - (nu + 1.0) * zn));
                worst = std::max(worst, std::abs(satotate::lambda_prime_power(kPi, nu, zeta) -
                                                 (nu % 2 ? -1.0 : 1.0) * (nu + 1.0) * zn));
            }
        }
    }
    const bool ok = worst <= 1e-10;
    return {"trig-identity", ok, "max |closed form - recursion| = " + fmt_double(worst)};
}

IdentityResult check_cdf_quadrature(bool fault) {
    double worst = 0.0;
    for (int j = 0; j < 1000; ++j) {
        const double theta = kPi * j / 999.0;
        const double quad =
            boost::math::quadrature::gauss_kronrod<double, 61>::integrate(satotate::st_density, 0.0, theta, 0, 0.0);
        const double closed = satotate::st_cdf(theta) + (fault && j == 500 ? 1e-9 : 0.0);
        worst = std::max(worst, std::abs(quad - closed));
    }
    const bool ok = worst <= 1e-12;
    return {"st-cdf-quadrature", ok, "max |closed form - quadrature| = " + fmt_double(worst)};
}

IdentityResult check_measure_half(bool fault) {
    double worst = 0.0;
    for (unsigned nu = 1; nu <= 21; nu += 2) {
        for (auto v : {satotate::UnionVariant::Positive, satotate::UnionVariant::Negative}) {
            double m = satotate::st_measure(satotate::interval_union(nu, 0.0, v));
            if (fault && nu == 5) m += 1e-3;
            worst = std::max(worst, std::abs(m - 0.5));
        }
    }
    const bool ok = worst <= 1e-12;
    return {"st-measure-half", ok, "max |mu_ST(I_0) - 1/2| over odd nu <= 21 = " + fmt_double(worst)};
}

IdentityResult check_interval_monotonicity(bool fault) {
    const double eps[] = {0.0, 0.01, 0.1, 0.3, 0.5, 0.9};
    for (unsigned nu = 1; nu <= 21; nu += 2) {
        for (auto v : {satotate::UnionVariant::Positive, satotate::UnionVariant::Negative}) {
            for (std::size_t i = 0; i + 1 < std::size(eps); ++i) {
                auto outer = satotate::interval_union(nu, eps[i], v);
                const auto inner = satotate::interval_union(nu, eps[i + 1], v);
                if (fault && nu == 3 && i == 0) outer.intervals.front().lo += 0.5;
                if (!satotate::contains(outer, inner) ||
                    satotate::st_measure(inner) > satotate::st_measure(outer)) {
                    return {"interval-monotonicity", false,
                            "I_eps not nested at nu = " + std::to_string(nu) + ", eps = " + fmt_double(eps[i + 1])};
                }
            }
        }
    }
    return {"interval-monotonicity", true, "I_eps2 inside I_eps1 for eps1 < eps2, odd nu <= 21"};
}

IdentityResult check_characters(bool fault) {
    std::size_t count = 0;
    for (const std::uint64_t m : {4, 12, 20, 60}) {
        for (const auto& chi : characters::enumerate_characters(m)) {
            ++count;
            for (std::uint64_t a = 1; a < m; ++a) {
                const auto ca = chi(static_cast<std::int64_t>(a));
                if (!ca) continue;
                for (std::uint64_t b = 1; b < m; ++b) {
                    const auto cb = chi(static_cast<std::int64_t>(b));
                    if (!cb) continue;
                    auto prod = *ca * *cb;
                    if (fault && m == 20 && a == 3 && b == 7) prod = prod * RotationNumber(1, 4);
                    if (prod != *chi(static_cast<std::int64_t>(a * b))) {
                        return {"character-multiplicativity", false,
                                chi.to_string() + " fails at (" + std::to_string(a) + ", " + std::to_string(b) + ")"};
                    }
                }
            }
            if (chi.kernel_size() * chi.order() != arith::euler_phi(m)) {
                return {"character-multiplicativity", false, chi.to_string() + " kernel size mismatch"};
            }
        }
    }
    return {"character-multiplicativity", true, std::to_string(count) + " characters mod 4, 12, 20, 60"};
}

// ---------------------------------------------------------------------------
// subcommands

struct CommonFlags {
    std::string out = "-";
    unsigned threads = 1;
};

int cmd_expand(const std::string& form_label, std::size_t order, const CommonFlags& c, std::ostream& out) {
    if (order < 2) throw InvalidInput("order must be at least 2");
    const auto form = modforms::catalog_form(form_label, order);
    Sink sink(c.out, out);
    modforms::write_form_csv(sink.get(), form);
    return kSuccess;
}

int cmd_verify(std::size_t order, const std::string& fault, std::ostream& out) {
    if (order < 100) throw InvalidInput("verify needs --order >= 100");
    const auto results = run_identity_suite(order, fault);
    bool all = true;
    out << std::left << std::setw(28) << "identity" << std::setw(8) << "result" << "detail\n";
    for (const auto& r : results) {
        out << std::setw(28) << r.name << std::setw(8) << (r.passed ? "PASS" : "FAIL") << r.detail << '\n';
        all = all && r.passed;
    }
    out << (all ? "all identities hold\n" : "identity suite FAILED\n");
    return all ? kSuccess : kAcceptanceFailure;
}

Json angle_stats_json(const std::vector<satotate::AngleSample>& samples, const std::string& fiber) {
    std::vector<double> th;
    for (const auto& s : samples) th.push_back(s.theta);
    Json j;
    j["fiber"] = fiber;
    j["n"] = th.size();
    j["ks"] = th.empty() ? 0.0 : satotate::ks_distance(th);
    j["discrepancy"] = th.empty() ? 0.0 : satotate::interval_discrepancy(th);
    return j;
}

int cmd_angles(const std::string& form_label, const std::string& form_csv, int weight, std::uint64_t level,
               std::uint64_t x, const CharacterFlags& chi_flags, const std::string& stats_path, const CommonFlags& c,
               std::ostream& out) {
    if (x < 2) throw InvalidInput("x must be at least 2");
    const auto form = load_form(form_label, form_csv, weight, level, x + 1);
    const auto chi = chi_flags.resolve(1);
    if (!chi.is_real()) throw InvalidInput("angles need a real character; " + chi.to_string());
    const auto primes = arith::sieve(x);
    const std::uint64_t cutoff = std::min<std::uint64_t>(x, form->order() - 1);
    const auto set = satotate::form_angles(*form, chi, primes, cutoff);

    Sink sink(c.out, out);
    auto& os = sink.get();
    os << "p,fiber_num,fiber_den,theta\n";
    for (const auto& s : set.samples) {
        os << s.p << ',' << s.fiber.num() << ',' << s.fiber.den() << ',' << fmt_double(s.theta) << '\n';
    }

    if (!stats_path.empty()) {
        Json doc;
        doc["schema"] = kAngleStatsSchema;
        doc["form"] = form->label();
        doc["character"] = character_json(chi);
        doc["x"] = cutoff;
        doc["excluded"] = set.excluded.size();
        doc["boundary_angles"] = set.boundary.size();
        Json stats = Json::array();
        stats.push_back(angle_stats_json(set.samples, "all"));
        for (const auto& zeta : chi.image()) {
            std::vector<satotate::AngleSample> part;
            for (const auto& s : set.samples) {
                if (s.fiber == zeta) part.push_back(s);
            }
            stats.push_back(angle_stats_json(part, zeta.to_string()));
        }
        doc["stats"] = stats;
        require_finite(doc);
        Sink ssink(stats_path, out);
        ssink.get() << doc.dump(2) << '\n';
    }
    return kSuccess;
}

struct LiftFlags {
    std::int64_t t = 1;
    std::int64_t nu = 1;
    std::string phi = "0/1";
    std::uint64_t x = 100000;
    std::uint64_t seed = 0;
    std::vector<std::string> phi_grid{"0/1", "1/4", "1/2", "3/4"};
    std::string dump_csv;
};

void emit_report(Json doc, const CommonFlags& c, std::ostream& out) {
    require_finite(doc);
    Sink sink(c.out, out);
    sink.get() << doc.dump(2) << '\n';
}

int cmd_signs_exact(const std::string& form_label, const std::string& form_csv, int weight, std::uint64_t level,
                    std::size_t order, std::int64_t level_n, const CharacterFlags& chi_flags, const LiftFlags& f,
                    const CommonFlags& c, std::ostream& out) {
    shimura::require_odd_nu(f.nu);
    if (f.x < 2) throw InvalidInput("x must be at least 2");
    if (order == 0) order = f.nu == 1 ? f.x + 1 : 100001;
    const auto form = load_form(form_label, form_csv, weight, level, order);
    const auto chi = chi_flags.resolve(4 * static_cast<std::uint64_t>(std::max<std::int64_t>(level_n, 1)));
    const shimura::LiftContext ctx(form, chi, form->k(), level_n, f.t);
    const auto phi = PhaseFraction::parse(f.phi);
    const auto grid = parse_phases(f.phi_grid);

    const auto family = shimura::build_family(ctx, static_cast<unsigned>(f.nu), arith::sieve(f.x), c.threads);
    const auto report = densities::fiber_densities(family, phi);
    const auto osc = densities::oscillation_report(family, grid);

    std::uint64_t disagreements = 0;
    for (const auto& e : family.entries) {
        const int fs = e.normalized > 0 ? 1 : (e.normalized < 0 ? -1 : 0);
        if (std::abs(e.normalized) > 1e-9 && fs != e.scalar_sign) ++disagreements;
    }
    Json doc = report_to_json(report, "exact", osc);
    doc["diagnostics"]["float_sign_disagreements"] = disagreements;
    doc["diagnostics"]["table_order"] = form->order();
    if (!f.dump_csv.empty()) {
        Sink dump(f.dump_csv, out);
        shimura::write_family_csv(dump.get(), family);
    }
    emit_report(std::move(doc), c, out);
    return kSuccess;
}

int cmd_simulate(const CharacterFlags& chi_flags, int k, const LiftFlags& f, const CommonFlags& c,
                 std::ostream& out) {
    if (chi_flags.modulus == 0) throw InvalidInput("simulate needs --chi-modulus (4N)");
    const auto chi = chi_flags.resolve(chi_flags.modulus);
    const auto n = characters::validate_level_modulus(chi.modulus());
    shimura::require_odd_nu(f.nu);

    densities::SyntheticParams params;
    params.chi = chi;
    params.k = k;
    params.level_n = static_cast<std::int64_t>(n);
    params.t = f.t;
    params.nu = static_cast<unsigned>(f.nu);
    params.phi = PhaseFraction::parse(f.phi);
    params.x = f.x;
    params.seed = f.seed;
    params.threads = c.threads;
    const auto grid = parse_phases(f.phi_grid);

    const auto run = densities::run_synthetic(params);
    const auto osc = densities::oscillation_report(run.family, grid);
    Json doc = report_to_json(run.report, "synthetic", osc);
    doc["diagnostics"]["sampled_angle_ks"] = satotate::ks_distance(run.thetas);
    if (!f.dump_csv.empty()) {
        Sink dump(f.dump_csv, out);
        shimura::write_family_csv(dump.get(), run.family);
    }
    emit_report(std::move(doc), c, out);
    return kSuccess;
}

int cmd_report(const std::vector<std::string>& inputs, std::ostream& out) {
    for (const auto& path : inputs) {
        std::ifstream in(path);
        if (!in) throw InvalidInput("cannot open report '" + path + "'");
        Json doc;
        try {
            doc = Json::parse(in);
        } catch (const std::exception& e) {
            throw InvalidInput("report '" + path + "' is not valid JSON: " + e.what());
        }
        if (doc.value("schema", "") != kReportSchema) {
            throw InvalidInput("report '" + path + "' does not carry schema " + std::string(kReportSchema));
        }
        const auto count = [](const Json& v) { return v.get<std::uint64_t>(); };
        const auto& p = doc["parameters"];
        out << path << ": " << doc["mode"].get<std::string>() << " " << doc["source"].get<std::string>()
            << "  chi mod " << p["character"]["modulus"] << " order " << p["character"]["order"] << "  t=" << p["t"]
            << " nu=" << p["nu"] << " phi=" << p["phi"].get<std::string>() << "*pi x=" << p["x"] << '\n';
        out << "  pi(x) = " << doc["prime_count"] << ", excluded = " << doc["excluded"] << '\n';
        out << "  " << std::left << std::setw(10) << "zeta" << std::setw(6) << "zero" << std::setw(9) << "size"
            << std::setw(9) << "a/z^nu>0" << std::setw(9) << "a/z^nu<0" << std::setw(9) << "Re>0" << std::setw(9)
            << "Re<0" << "predicted\n";
        for (const auto& fb : doc["fibers"]) {
            out << "  " << std::setw(10) << fb["zeta"].get<std::string>() << std::setw(6)
                << (fb["zero_fiber"].get<bool>() ? "yes" : "no") << std::setw(9) << count(fb["size"])
                << std::setw(9) << count(fb["positive"]) << std::setw(9) << count(fb["negative"]) << std::setw(9)
                << count(fb["phi_positive"]) << std::setw(9) << count(fb["phi_negative"])
                << fb["predicted"].get<double>() << '\n';
        }
        const auto& g = doc["global"];
        out << "  P>0: " << g["empirical"]["positive"].get<double>() << " (predicted "
            << g["predicted"]["positive"].get<double>() << ")  P<0: " << g["empirical"]["negative"].get<double>()
            << "  P!=0: " << g["empirical"]["nonzero"].get<double>() << " (predicted "
            << g["predicted"]["nonzero"].get<double>() << ")\n";
        for (const auto& row : doc["oscillation"]) {
            out << "  phi=" << row["phi"].get<std::string>() << "*pi sign changes:";
            for (const auto& cp : row["checkpoints"]) out << ' ' << cp["alternations"] << "@" << cp["x"];
            out << (row["evidence"].get<bool>() ? "  oscillatory" : "  no evidence") << '\n';
        }
    }
    return kSuccess;
}

}  // namespace

// ---------------------------------------------------------------------------

Json report_to_json(const densities::DensityReport& r, std::string_view mode,
                    std::span<const densities::OscillationRow> oscillation) {
    Json doc;
    doc["schema"] = kReportSchema;
    doc["mode"] = mode;
    doc["source"] = r.params.source;

    Json p;
    p["character"] = character_json(r.params.chi);
    p["k"] = r.params.k;
    p["N"] = r.params.level_n;
    p["t"] = r.params.t;
    p["nu"] = r.params.nu;
    p["phi"] = r.phi.to_string();
    p["x"] = r.x;
    if (r.seed) {
        p["seed"] = *r.seed;
    } else {
        p["seed"] = nullptr;
    }
    doc["parameters"] = p;
    doc["prime_count"] = r.prime_count;
    doc["excluded"] = r.n_excluded;

    Json fibers = Json::array();
    for (const auto& c : r.fibers) {
        Json f;
        f["zeta"] = c.fiber.to_string();
        f["rotation_sign"] = c.rotation_sign;
        f["rotation_real"] = c.rotation_value;
        f["zero_fiber"] = c.zero_fiber;
        f["size"] = c.n_fiber;
        f["positive"] = c.n_pos;
        f["negative"] = c.n_neg;
        f["zero"] = c.n_zero;
        f["phi_positive"] = c.phi_pos;
        f["phi_negative"] = c.phi_neg;
        f["phi_zero"] = c.phi_zero;
        f["predicted"] = c.predicted;
        f["deviation"] = c.deviation;
        f["phi_deviation"] = c.phi_deviation;
        fibers.push_back(std::move(f));
    }
    doc["fibers"] = fibers;

    Json g;
    g["positive"] = r.pos;
    g["negative"] = r.neg;
    g["zero"] = r.zero;
    g["nonzero"] = r.nonzero;
    g["nonzero_fibers"] = r.nonzero_fibers;
    g["empirical"] = {{"positive", r.empirical_pos}, {"negative", r.empirical_neg}, {"nonzero", r.empirical_nonzero}};
    g["predicted"] = {{"positive", r.predicted_pos}, {"negative", r.predicted_pos}, {"nonzero", r.predicted_nonzero}};
    g["deviation"] = {
        {"positive", r.deviation_pos}, {"negative", r.deviation_neg}, {"half_nonzero_gap", r.half_nonzero_gap}};
    doc["global"] = g;

    Json osc = Json::array();
    for (const auto& row : oscillation) {
        Json o;
        o["phi"] = row.phi.to_string();
        Json cps = Json::array();
        for (const auto& cp : row.checkpoints) {
            cps.push_back({{"x", cp.x},
                           {"alternations", cp.alternations},
                           {"positive", cp.pos},
                           {"negative", cp.neg},
                           {"zero", cp.zero}});
        }
        o["checkpoints"] = cps;
        o["both_signs"] = row.both_signs;
        o["growing"] = row.growing;
        o["evidence"] = row.evidence;
        osc.push_back(std::move(o));
    }
    doc["oscillation"] = osc;

    Json d;
    d["max_fiber_deviation"] = r.max_fiber_deviation;
    d["max_phi_fiber_deviation"] = r.max_phi_fiber_deviation;
    d["tiny_scalars"] = r.tiny_scalars;
    d["limiting_angles"] = r.limiting_angles;
    doc["diagnostics"] = d;
    return doc;
}

void require_finite(const Json& doc) {
    if (doc.is_number_float() && !std::isfinite(doc.get<double>())) {
        throw ComputationError("non-finite number in output document");
    }
    if (doc.is_structured()) {
        for (const auto& v : doc) require_finite(v);
    }
}

std::vector<IdentityResult> run_identity_suite(std::size_t order, const std::string& fault) {
    static const std::vector<std::string> kGroups = {
        "euler-pentagonal", "fast-multiply",     "hecke-delta",       "hecke-11a",
        "hecke-5a",         "deligne-bound",     "moebius-roundtrip", "trig-identity",
        "st-cdf-quadrature", "st-measure-half",  "interval-monotonicity", "character-multiplicativity",
    };
    if (!fault.empty() && std::find(kGroups.begin(), kGroups.end(), fault) == kGroups.end()) {
        throw InvalidInput("unknown identity group '" + fault + "'");
    }
    const auto f = [&](const char* name) { return fault == name; };
    std::vector<IdentityResult> out;
    out.push_back(check_euler(f("euler-pentagonal")));
    out.push_back(check_fast_multiply(f("fast-multiply")));
    out.push_back(check_hecke("delta", order, f("hecke-delta")));
    out.push_back(check_hecke("11a", order, f("hecke-11a")));
    out.push_back(check_hecke("5a", order, f("hecke-5a")));
    out.push_back(check_deligne(order, f("deligne-bound")));
    out.push_back(check_moebius_roundtrip(order, f("moebius-roundtrip")));
    out.push_back(check_trig_identity(f("trig-identity")));
    out.push_back(check_cdf_quadrature(f("st-cdf-quadrature")));
    out.push_back(check_measure_half(f("st-measure-half")));
    out.push_back(check_interval_monotonicity(f("interval-monotonicity")));
    out.push_back(check_characters(f("character-multiplicativity")));
    return out;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Sign statistics of half-integral weight coefficient families a(t p^(2 nu))"};
    app.require_subcommand(1);
    CommonFlags common;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("-o,--out", common.out, "Output path ('-' for stdout)");
        sub->add_option("--threads", common.threads, "Worker threads (output does not depend on it)")
            ->check(CLI::Range(1u, 256u));
    };

    std::string form_label, form_csv;
    int weight = 0;
    std::uint64_t level = 0;
    auto add_form = [&](CLI::App* sub, bool required) {
        auto* opt = sub->add_option("--form", form_label, "Catalog form: delta, 11a, 5a");
        if (required) opt->required();
        sub->add_option("--form-csv", form_csv, "Import coefficients A(n) from a CSV of n,A(n)");
        sub->add_option("--weight", weight, "Weight 2k of an imported form");
        sub->add_option("--level", level, "Level of an imported form");
    };

    // expand
    std::size_t order = 100001;
    auto* expand = app.add_subcommand("expand", "Write the coefficients A(n) of a catalog form as CSV");
    expand->add_option("--form", form_label, "Catalog form: delta, 11a, 5a")->required();
    expand->add_option("--order", order, "Number of coefficients q^0..q^(order-1)");
    add_common(expand);

    // verify
    std::size_t verify_order = 10000;
    std::string fault;
    auto* verify = app.add_subcommand("verify", "Run the exact and numerical identity suite");
    verify->add_option("--order", verify_order, "Coefficient table order for exact checks");
    verify->add_option("--inject-fault", fault, "Corrupt one identity group (testing hook)")->group("");

    // angles
    std::uint64_t x = 100000;
    CharacterFlags chi_flags;
    std::string stats_path;
    auto* angles = app.add_subcommand("angles", "Sato-Tate angles theta_p of a form as CSV, with K-S statistics");
    add_form(angles, false);
    angles->add_option("--x", x, "Prime cutoff");
    angles->add_option("--stats", stats_path, "Write K-S / discrepancy statistics JSON here");
    chi_flags.attach(*angles);
    add_common(angles);

    // signs
    LiftFlags lift;
    std::int64_t level_n = 1;
    std::size_t signs_order = 0;
    int k = 2;
    auto add_lift = [&](CLI::App* sub) {
        sub->add_option("--t", lift.t, "Square-free t");
        sub->add_option("--nu", lift.nu, "Odd exponent nu");
        sub->add_option("--phi", lift.phi, "Phase as a/b, meaning (a/b)*pi, 0 <= a/b < 1");
        sub->add_option("--x", lift.x, "Prime cutoff");
        sub->add_option("--phi-grid", lift.phi_grid, "Phases for the sign-change report")->delimiter(',');
        sub->add_option("--dump-csv", lift.dump_csv, "Also write the per-prime family as CSV");
        chi_flags.attach(*sub);
        add_common(sub);
    };
    auto* signs = app.add_subcommand("signs", "Sign densities of a(t p^(2 nu)) for a catalog form (exact)");
    add_form(signs, false);
    signs->add_option("--N", level_n, "Odd square-free N; the character lives mod 4N");
    signs->add_option("--order", signs_order, "Coefficient table order (default x+1 for nu = 1, else 100001)");
    signs->add_option("--k", k, "k for the synthetic mode (used when no form is given)");
    signs->add_option("--seed", lift.seed, "Seed for the synthetic mode");
    add_lift(signs);

    // simulate
    auto* simulate = app.add_subcommand("simulate", "Monte-Carlo sign densities with Sato-Tate sampled angles");
    simulate->add_option("--k", k, "Half-integral weight is k + 1/2");
    simulate->add_option("--seed", lift.seed, "Generator seed");
    add_lift(simulate);

    // report
    std::vector<std::string> inputs;
    auto* report = app.add_subcommand("report", "Summarize density report JSON files as text");
    report->add_option("inputs", inputs, "Report files")->required();

    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return kSuccess;
    } catch (const CLI::CallForAllHelp& e) {
        out << app.help("", CLI::AppFormatMode::All);
        return kSuccess;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kValidationFailure;
    }

    try {
        if (expand->parsed()) return cmd_expand(form_label, order, common, out);
        if (verify->parsed()) return cmd_verify(verify_order, fault, out);
        if (angles->parsed()) {
            return cmd_angles(form_label, form_csv, weight, level, x, chi_flags, stats_path, common, out);
        }
        if (signs->parsed()) {
            if (form_label.empty() && form_csv.empty()) {
                if (chi_flags.modulus == 0) chi_flags.modulus = 4 * static_cast<std::uint64_t>(level_n);
                return cmd_simulate(chi_flags, k, lift, common, out);
            }
            return cmd_signs_exact(form_label, form_csv, weight, level, signs_order, level_n, chi_flags, lift, common,
                                   out);
        }
        if (simulate->parsed()) return cmd_simulate(chi_flags, k, lift, common, out);
        if (report->parsed()) return cmd_report(inputs, out);
    } catch (const InvalidInput& e) {
        err << "error: " << e.what() << '\n';
        return kValidationFailure;
    } catch (const ComputationError& e) {
        err << "computation failed: " << e.what() << '\n';
        return kComputationFailure;
    }
    return kValidationFailure;
}

}  // namespace halfsign::cli

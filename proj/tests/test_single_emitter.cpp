#include "doctest.h"

#include <cmath>
#include <functional>

#include "matterwave/kernels.hpp"
#include "matterwave/single_emitter.hpp"
#include "matterwave/volterra.hpp"

using namespace matterwave;

namespace {

constexpr cplx kI{0.0, 1.0};

// Independent evaluation of the branch integral: u = tan(theta), composite Simpson.
cplx branch_oracle(double alpha, double detuning, double t, int n = 400000)
{
    auto f = [&](double th) -> cplx {
        if (th >= 0.5 * kPi) return t > 0.0 ? cplx{} : cplx{2.0, 0.0};
        const double u = std::tan(th);
        const double x = u * u;
        const cplx d{-x, detuning};
        const double jac = 1.0 + x;
        return 2.0 * x * std::exp(-x * t) / (d * d + kI * alpha * alpha * x) * jac;
    };
    const double h = 0.5 * kPi / n;
    cplx s = f(0.0) + f(0.5 * kPi);
    for (int i = 1; i < n; ++i) s += f(i * h) * (i % 2 ? 4.0 : 2.0);
    s *= h / 3.0;
    return alpha * std::exp(kI * (kPi / 4.0)) / kPi * std::exp(kI * detuning * t) * s;
}

ModelParams trap50(double detuning_over_a2)
{
    ModelParams p;
    p.rabi = 1.0;
    p.trap = 50.0;
    p.detuning = detuning_over_a2 * alpha_squared(p);
    return p;
}

}  // namespace

TEST_CASE("laplace_roots: cases, Vieta and residues")
{
    const auto b = laplace_roots(1.0, -8.0);
    CHECK(b.pole_case == PoleCase::real_pole);
    CHECK(b.r1.real() == doctest::Approx(2.37228).epsilon(1e-5));
    CHECK(b.c1.real() == doctest::Approx(0.82592).epsilon(1e-5));
    CHECK(std::norm(b.c1) == doctest::Approx(0.68214).epsilon(1e-5));
    CHECK(b.c1.imag() == 0.0);

    const auto n = laplace_roots(1.0, 0.3);
    CHECK(n.pole_case == PoleCase::no_pole);
    CHECK(n.c1 == cplx{});

    const auto c = laplace_roots(1.0, 8.0);
    CHECK(c.pole_case == PoleCase::complex_pole);
    CHECK(std::abs(c.r1 - cplx{-0.5, -2.78388}) < 1e-5);
    CHECK(std::abs(c.c1 - cplx{1.0, -0.17960}) < 1e-5);
    CHECK(c.pole_amplitude_rate == doctest::Approx(2.78388).epsilon(1e-5));
    CHECK(c.pole_amplitude_rate == doctest::Approx(std::sqrt(8.0 - 0.25)).epsilon(1e-13));

    for (double d : {-8.0, -1.0, -0.01, 0.0, 0.2, 0.49, 0.51, 8.0, 100.0}) {
        const auto s = laplace_roots(1.0, d);
        CHECK(std::abs(s.r1 + s.r2 + 1.0) < 1e-12);
        CHECK(std::abs(s.r1 * s.r2 - d) < 1e-12 * (1.0 + std::abs(d)));
    }
    CHECK(laplace_roots(1.0, 0.0).pole_case == PoleCase::no_pole);
    CHECK(laplace_roots(1.0, 0.499).pole_case == PoleCase::no_pole);
    CHECK(laplace_roots(1.0, 0.501).pole_case == PoleCase::complex_pole);
    CHECK(laplace_roots(2.0, 1.999).pole_case == PoleCase::no_pole);
    CHECK(laplace_roots(2.0, 2.001).pole_case == PoleCase::complex_pole);
    CHECK_THROWS_AS((void)laplace_roots(0.0, 1.0), ParameterError);
}

TEST_CASE("branch_integral normalization and decay")
{
    for (double d : {-8.0, -1.0, 0.2, 0.3, 8.0}) {
        const auto s = laplace_roots(1.0, d);
        CAPTURE(d);
        CHECK(std::abs(branch_integral(1.0, d, 0.0) + s.c1 - 1.0) < 1e-7);
    }
    CHECK(std::abs(branch_integral(1.0, -8.0, 50.0)) < 1e-2);
}

TEST_CASE("branch_integral against an independent Simpson oracle")
{
    for (double d : {-1.0, 0.2, 8.0}) {
        for (double t : {0.0, 0.5, 4.0}) {
            CAPTURE(d);
            CAPTURE(t);
            const cplx a = branch_integral(1.0, d, t);
            const cplx b = branch_oracle(1.0, d, t);
            CHECK(std::abs(a - b) < 1e-6);
        }
    }
}

TEST_CASE("amplitude_analytic")
{
    const TimeGrid grid(0.25, 40);
    const auto a = amplitude_analytic(1.0, -1.0, grid);
    CHECK(std::abs(a[0] - 1.0) < 1e-6);
    CHECK(std::norm(a[a.size() - 1]) == doctest::Approx(0.30557).epsilon(0.01));

    // Pole dominance above the band, before the algebraic branch tail takes over.
    const auto c = laplace_roots(1.0, 8.0);
    const TimeGrid g2(0.05, 20);
    const auto b = amplitude_analytic(1.0, 8.0, g2);
    const double slope = (std::log(std::norm(b[20])) - std::log(std::norm(b[5]))) / (g2.time(20) - g2.time(5));
    CHECK(slope == doctest::Approx(-2.0 * c.pole_amplitude_rate).epsilon(0.05));
}

TEST_CASE("steady_population")
{
    CHECK(steady_population(1.0, 0.2) == 0.0);
    CHECK(steady_population(1.0, 0.0) == 0.0);
    CHECK(steady_population(1.0, -8.0) == doctest::Approx(0.68214).epsilon(1e-5));
    CHECK(steady_population(1.0, -1.0) == doctest::Approx(0.30557).epsilon(1e-5));
    double prev = 0.0;
    for (int i = 0; i < 20; ++i) {
        const double d = -0.01 - 0.5 * i;
        const double s = steady_population(1.0, d);
        CHECK(s > 0.0);
        CHECK(s >= prev);  // nonincreasing in detuning
        prev = s;
    }
    // Continuous from the left at 0.
    CHECK(steady_population(1.0, -1e-10) < 1e-4);
}

TEST_CASE("volterra: trivial kernels")
{
    const auto zero = solve_volterra([](double) { return cplx{}; }, 5.0, 0.1);
    for (const auto& a : zero.amplitude.values) CHECK(std::abs(a - 1.0) < 1e-15);
    CHECK(zero.converged);

    const double c = 1.3;
    const auto cosine = solve_volterra([&](double) { return cplx{c * c, 0.0}; }, 10.0 / c, 0.01 / c);
    for (std::size_t k = 0; k < cosine.amplitude.size(); ++k)
        CHECK(std::abs(cosine.amplitude[k] - std::cos(c * cosine.amplitude.time(k))) < 1e-4);
    CHECK(cosine.converged);
    CHECK(cosine.observed_order == doctest::Approx(2.0).epsilon(0.05));
}

TEST_CASE("volterra: exponential memory has a closed form")
{
    // G(t) = g^2 e^{-k t}: A'' + k A' + g^2 A = 0, A(0) = 1, A'(0) = 0.
    const double g = 0.8, k = 3.0;
    const auto r = solve_volterra([&](double t) { return cplx{g * g * std::exp(-k * t), 0.0}; }, 6.0, 0.005);
    const cplx disc = std::sqrt(cplx{k * k / 4 - g * g, 0.0});
    const cplx l1 = -k / 2 + disc, l2 = -k / 2 - disc;
    for (std::size_t i = 0; i < r.amplitude.size(); i += 50) {
        const double t = r.amplitude.time(i);
        const cplx exact = (l2 * std::exp(l1 * t) - l1 * std::exp(l2 * t)) / (l2 - l1);
        CHECK(std::abs(r.amplitude[i] - exact) < 1e-5);
    }
    // Halving the step changes the solution by no more than 4x the reported estimate.
    const auto half = solve_volterra([&](double t) { return cplx{g * g * std::exp(-k * t), 0.0}; }, 6.0, 0.0025,
                                     0.0, VolterraOptions{false});
    double change = 0.0;
    for (std::size_t i = 0; i < r.amplitude.size(); ++i)
        change = std::max(change, std::abs(r.amplitude[i] - half.amplitude[2 * i]));
    CHECK(change < 4.0 * r.error_estimate);
}

TEST_CASE("volterra: exact trap moments agree with sampled moments")
{
    ModelParams p;
    p.trap = 5.0;
    p.detuning = 0.7;
    const double dt = 0.002;
    const std::size_t n = 300;
    const auto exact = lag_moments_trap(p, dt, n);
    const auto sampled =
        lag_moments_sampled([&](double t) { return kernel_full(p, t); }, p.detuning, dt, n, 24);
    for (std::size_t k = 0; k < n; ++k) {
        CHECK(std::abs(exact.older[k] - sampled.older[k]) < 1e-12);
        CHECK(std::abs(exact.newer[k] - sampled.newer[k]) < 1e-12);
    }
}

TEST_CASE("finite-trap bound state")
{
    const ModelParams p = trap50(-8.0);
    const auto b = finite_trap_bound_state(p);
    CHECK(b.energy < 0.0);
    // E + S(E) reproduces the bare detuning.
    CHECK(b.energy + self_energy(p, b.energy) == doctest::Approx(bare_detuning(p)).epsilon(1e-12));
    CHECK(b.population == doctest::Approx(0.684).epsilon(2e-3));
    CHECK(std::abs(b.population - steady_population(derive(p).alpha, p.detuning)) < 5e-3);

    // Oracle: direct k-integrals for S and S'.
    const double x0 = derive(p).x0;
    const double C = 4.0 * x0 * x0 * x0 / std::sqrt(kPi);
    const double e = b.energy;
    auto simpson = [&](const std::function<double(double)>& f) {
        const int n = 400000;
        const double kmax = 14.0 / x0, h = kmax / n;
        double s = f(0.0) + f(kmax);
        for (int i = 1; i < n; ++i) s += f(i * h) * (i % 2 ? 4.0 : 2.0);
        return s * h / 3.0;
    };
    const double S = simpson([&](double k) { return C * k * k * std::exp(-x0 * x0 * k * k) / (k * k / 2.0 - e); });
    const double Sp =
        simpson([&](double k) { return C * k * k * std::exp(-x0 * x0 * k * k) / std::pow(k * k / 2.0 - e, 2); });
    CHECK(self_energy(p, e) == doctest::Approx(S).epsilon(1e-6));
    CHECK(self_energy_derivative(p, e) == doctest::Approx(Sp).epsilon(1e-5));
    CHECK(self_energy(p, -1e-300) == doctest::Approx(2.0 / 50.0).epsilon(1e-12));

    // Weaker coupling approaches the ideal residue from above.
    double prev = 1.0;
    for (double trap : {20.0, 40.0, 100.0}) {
        ModelParams q;
        q.trap = trap;
        q.detuning = -1.0 * alpha_squared(q);
        const double pop = finite_trap_bound_state(q).population;
        CHECK(pop < prev);
        CHECK(pop > steady_population(derive(q).alpha, q.detuning));
        prev = pop;
    }
}

TEST_CASE("erfcx")
{
    for (double x : {0.0, 0.1, 1.0, 5.0, 20.0}) CHECK(erfcx(x) == doctest::Approx(std::exp(x * x) * std::erfc(x)));
    CHECK(erfcx(30.0) == doctest::Approx(0.018795888861416751).epsilon(1e-12));
}

TEST_CASE("single emitter via Volterra matches the ideal solution")
{
    const ModelParams p = trap50(-1.0);
    const double a2 = alpha_squared(p);
    const auto v = solve_single_emitter(p, 10.0 / a2);
    CHECK(v.converged);
    CHECK(v.max_abs <= 1.02);
    CHECK(std::abs(v.amplitude[0] - 1.0) < 1e-12);
    const double alpha = derive(p).alpha;
    const double t_end = v.amplitude.time(v.amplitude.size() - 1);
    const cplx an = branch_integral(alpha, p.detuning, t_end) +
                    laplace_roots(alpha, p.detuning).c1 *
                        std::exp(kI * (laplace_roots(alpha, p.detuning).r1 * laplace_roots(alpha, p.detuning).r1 +
                                       p.detuning) *
                                 t_end);
    CHECK(std::abs(std::norm(v.amplitude.values.back()) - std::norm(an)) < 0.05);
}

TEST_CASE("bound_state_profile")
{
    ModelParams p;
    p.trap = 1.0;
    p.rabi = 1.0;
    p.mass = 0.5;
    p.detuning = -8.0;
    const auto s = laplace_roots(1.0, -8.0);
    const auto b = bound_state_profile(p, s);
    const double r1 = s.r1.real();
    const double expect = std::sqrt(2.0 * 0.5 * (8.0 + r1 * r1));
    CHECK(b.k0e.real() == doctest::Approx(0.0));
    CHECK(b.k0e.imag() == doctest::Approx(expect).epsilon(1e-13));
    REQUIRE(b.localization_length.has_value());
    CHECK(*b.localization_length == doctest::Approx(1.0 / expect).epsilon(1e-13));

    const double l = *b.localization_length;
    for (double r : {0.1, 0.5, 2.0}) {
        const double ratio = bound_state_density(p, s, 2 * r, 0.0) / bound_state_density(p, s, r, 0.0);
        CHECK(ratio == doctest::Approx(std::exp(-r / l) / 4.0).epsilon(1e-12));
        // Below the band the density does not decay in time.
        CHECK(bound_state_density(p, s, r, 7.0) == doctest::Approx(bound_state_density(p, s, r, 0.0)));
    }
    CHECK_THROWS_AS((void)bound_state_profile(p, laplace_roots(1.0, 0.3)), ParameterError);
    CHECK_THROWS_AS((void)bound_state_density(p, s, 0.0, 0.0), ParameterError);
}

TEST_CASE("classify_single_regime")
{
    CHECK(classify_single_regime(1.0, -1.0) == SingleRegime::bound);
    CHECK(classify_single_regime(1.0, 0.3) == SingleRegime::strong_nonmarkov);
    CHECK(classify_single_regime(1.0, 8.0) == SingleRegime::quasi_markov);
    CHECK(classify_single_regime(1.0, 100.0) == SingleRegime::markovian);
    CHECK(classify_single_regime(2.0, 8.0 * 4.0) == SingleRegime::quasi_markov);
}

#include "matterwave/single_emitter.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "matterwave/quadrature.hpp"

namespace matterwave {

namespace {

constexpr cplx kI{0.0, 1.0};
const cplx kEighth = std::exp(kI * (kPi / 4.0));

}  // namespace

LaplaceSolution laplace_roots(double alpha, double detuning)
{
    if (!(alpha > 0.0)) throw ParameterError("laplace_roots: alpha must be > 0");
    LaplaceSolution s;
    s.alpha = alpha;
    s.detuning = detuning;
    const cplx disc = std::sqrt(cplx{0.25 * alpha * alpha - detuning, 0.0});
    const cplx rp = -0.5 * alpha + disc;
    const cplx rm = -0.5 * alpha - disc;
    // Physical sheet: Re(e^{i pi/4} r) > 0.
    const double tiny = 1e-14 * (alpha + std::sqrt(std::abs(detuning)));
    for (const auto& [a, b] : {std::pair{rp, rm}, std::pair{rm, rp}}) {
        if ((kEighth * a).real() > tiny) {
            s.r1 = a;
            s.r2 = b;
            s.c1 = 2.0 * a / (a - b);
            s.pole_case = detuning < 0.0 ? PoleCase::real_pole : PoleCase::complex_pole;
            if (s.pole_case == PoleCase::complex_pole) s.pole_amplitude_rate = (a * a).imag();
            if (s.pole_case == PoleCase::real_pole) {
                s.r1 = a.real();
                s.c1 = s.c1.real();
            }
            return s;
        }
    }
    s.r1 = rp;
    s.r2 = rm;
    s.c1 = 0.0;
    s.pole_case = PoleCase::no_pole;
    return s;
}

cplx branch_integral(double alpha, double detuning, double t)
{
    if (!(alpha > 0.0)) throw ParameterError("branch_integral: alpha must be > 0");
    if (t < 0.0) throw ParameterError("branch_integral: t must be >= 0");
    const double a2 = alpha * alpha;
    auto f = [&](double u) -> cplx {
        const double x = u * u;
        const cplx d = cplx{-x, detuning};
        return 2.0 * x * std::exp(-x * t) / (d * d + kI * a2 * x);
    };
    std::vector<double> breaks{0.0};
    if (detuning != 0.0) {
        const double s = std::sqrt(std::abs(detuning));
        for (double c : {0.3, 0.6, 0.8, 0.9, 0.95, 1.0, 1.05, 1.1, 1.25, 1.5, 2.0, 3.0}) breaks.push_back(c * s);
    }
    for (double c : {0.1, 0.3, 1.0, 3.0}) breaks.push_back(c * alpha);
    if (t > 0.0) {
        const double s = 1.0 / std::sqrt(t);
        for (double c : {0.3, 1.0, 3.0}) breaks.push_back(c * s);
    }
    std::sort(breaks.begin(), breaks.end());
    breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());
    quad::Options opt;
    opt.rel_tol = 1e-10;
    opt.abs_tol = 1e-15;
    opt.max_panels = 20000;
    const auto body = quad::integrate_panels(f, breaks, opt);
    const auto tail = quad::integrate_to_infinity(f, breaks.back(), breaks.back(), opt);
    const double err = body.error + tail.error;
    const cplx total = body.value + tail.value;
    if (!body.converged || !tail.converged || !std::isfinite(std::abs(total)))
        throw NumericalError("branch_integral: quadrature did not converge (error estimate " + std::to_string(err) +
                             ")");
    return alpha * kEighth / kPi * std::exp(kI * detuning * t) * total;
}

ComplexSeries amplitude_analytic(double alpha, double detuning, const TimeGrid& grid)
{
    const LaplaceSolution s = laplace_roots(alpha, detuning);
    std::vector<cplx> a(grid.size());
    for (std::size_t k = 0; k < a.size(); ++k) {
        const double t = grid.time(k);
        cplx v = branch_integral(alpha, detuning, t);
        if (s.pole_case != PoleCase::no_pole) v += s.c1 * std::exp(kI * (s.r1 * s.r1 + detuning) * t);
        a[k] = v;
    }
    return ComplexSeries(0.0, grid.dt, std::move(a));
}

double steady_population(double alpha, double detuning)
{
    if (!(alpha > 0.0)) throw ParameterError("steady_population: alpha must be > 0");
    if (detuning >= 0.0) return 0.0;
    return std::norm(laplace_roots(alpha, detuning).c1);
}

double default_single_dt(const ModelParams& p)
{
    return 0.01 / std::max(alpha_squared(p), std::abs(p.detuning));
}

VolterraResult solve_single_emitter(const ModelParams& p, double T, double dt, const VolterraOptions& opt)
{
    ModelParams bare = p;
    bare.detuning = bare_detuning(p);
    return solve_volterra_full(bare, T, dt > 0.0 ? dt : default_single_dt(p), opt);
}

double erfcx(double x)
{
    if (x < 0.0) throw ParameterError("erfcx: x must be >= 0");
    if (x < 25.0) return std::exp(x * x) * std::erfc(x);
    // Asymptotic series; the first omitted term is below 1e-12 relative here.
    const double i2 = 1.0 / (2.0 * x * x);
    return (1.0 - i2 * (1.0 - 3.0 * i2 * (1.0 - 5.0 * i2))) / (x * std::sqrt(kPi));
}

namespace {

struct SelfEnergyScales {
    double x0, c;
};

SelfEnergyScales self_energy_scales(const ModelParams& p)
{
    const double x0 = 1.0 / std::sqrt(2.0 * p.mass * p.trap);
    return {x0, 4.0 * p.rabi * p.rabi * x0 * x0 * x0 / std::sqrt(kPi)};
}

// S(E) - S(0) = -m C pi q erfcx(q x0), q = sqrt(-2 m E).
double self_energy_drop(const ModelParams& p, double energy)
{
    const auto s = self_energy_scales(p);
    const double q = std::sqrt(-2.0 * p.mass * energy);
    return -p.mass * s.c * kPi * q * erfcx(q * s.x0);
}

}  // namespace

double self_energy(const ModelParams& p, double energy)
{
    if (energy > 0.0) throw ParameterError("self_energy: defined here for E <= 0 only");
    return 2.0 * p.rabi * p.rabi / p.trap + self_energy_drop(p, energy);
}

double self_energy_derivative(const ModelParams& p, double energy)
{
    if (!(energy < 0.0)) throw ParameterError("self_energy_derivative: requires E < 0");
    const auto s = self_energy_scales(p);
    const double q = std::sqrt(-2.0 * p.mass * energy);
    const double x = q * s.x0;
    const double bracket = erfcx(x) * (1.0 + 2.0 * x * x) - 2.0 * x / std::sqrt(kPi);
    return 2.0 * p.mass * s.c * 0.5 * kPi * bracket * p.mass / q;
}

FiniteTrapBoundState finite_trap_bound_state(const ModelParams& p)
{
    const auto report = validate(p);
    if (!report.ok()) throw ParameterError(report.errors.front());
    if (!(p.detuning < 0.0)) throw ParameterError("finite_trap_bound_state: requires detuning < 0");
    // E + S(E) = detuning + S(0)  <=>  E + (S(E) - S(0)) - detuning = 0, bracketed by [detuning, 0).
    auto f = [&](double e) { return e + self_energy_drop(p, e) - p.detuning; };
    double lo = p.detuning, hi = 0.0;
    for (int it = 0; it < 300 && hi - lo > 1e-15 * std::abs(lo); ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid == lo || mid == hi) break;
        (f(mid) > 0.0 ? hi : lo) = mid;
    }
    FiniteTrapBoundState b;
    b.energy = 0.5 * (lo + hi);
    b.residue = 1.0 / (1.0 + self_energy_derivative(p, b.energy));
    b.population = b.residue * b.residue;
    return b;
}

BoundStateProfile bound_state_profile(const ModelParams& p, const LaplaceSolution& s)
{
    if (s.pole_case == PoleCase::no_pole) throw ParameterError("bound_state_profile: no pole, no bound component");
    const double x0 = 1.0 / std::sqrt(2.0 * p.mass * p.trap);
    BoundStateProfile b;
    b.k0e = std::sqrt(2.0 * p.mass * (cplx{p.detuning, 0.0} - s.r1 * s.r1));
    if (b.k0e.imag() > 0.0) b.localization_length = 1.0 / b.k0e.imag();
    b.amplitude_prefactor = std::abs(s.c1) * p.rabi * p.mass * x0 * x0 * x0 / (2.0 * kPi);
    return b;
}

double bound_state_density(const ModelParams& p, const LaplaceSolution& s, double r, double t)
{
    if (!(r > 0.0)) throw ParameterError("bound_state_density: r must be > 0");
    const auto b = bound_state_profile(p, s);
    const double a = b.amplitude_prefactor / r;
    return a * a * std::exp(-b.k0e.imag() * r) * std::exp(-(s.r1 * s.r1).imag() * t);
}

SingleRegime classify_single_regime(double alpha, double detuning)
{
    if (!(alpha > 0.0)) throw ParameterError("classify_single_regime: alpha must be > 0");
    const double a2 = alpha * alpha;
    if (detuning < 0.0) return SingleRegime::bound;
    if (detuning > kMarkovianThreshold * a2) return SingleRegime::markovian;
    if (detuning <= 0.5 * a2) return SingleRegime::strong_nonmarkov;
    return SingleRegime::quasi_markov;
}

std::string to_string(SingleRegime r)
{
    switch (r) {
    case SingleRegime::bound: return "bound";
    case SingleRegime::strong_nonmarkov: return "strong_nonmarkov";
    case SingleRegime::quasi_markov: return "quasi_markov";
    case SingleRegime::markovian: return "markovian";
    }
    return "unknown";
}

std::string to_string(PoleCase c)
{
    switch (c) {
    case PoleCase::no_pole: return "no_pole";
    case PoleCase::complex_pole: return "complex_pole";
    case PoleCase::real_pole: return "real_pole";
    }
    return "unknown";
}

}  // namespace matterwave

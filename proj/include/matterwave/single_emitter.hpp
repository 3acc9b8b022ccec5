#pragma once

#include <optional>
#include <string>

#include "matterwave/params.hpp"
#include "matterwave/series.hpp"
#include "matterwave/volterra.hpp"

namespace matterwave {

enum class PoleCase { no_pole, complex_pole, real_pole };

/// Roots of r^2 + alpha r + detuning = 0 and the residue of the pole that lies on
/// the physical sheet (Re e^{i pi/4} r > 0), if any.
struct LaplaceSolution {
    double alpha = 0.0;
    double detuning = 0.0;
    PoleCase pole_case = PoleCase::no_pole;
    cplx r1{}, r2{};
    cplx c1{};
    double pole_amplitude_rate = 0.0;  // Im r1^2; 0 unless complex_pole
};

[[nodiscard]] LaplaceSolution laplace_roots(double alpha, double detuning);

/// (alpha e^{i pi/4}/pi) int_0^inf sqrt(x) e^{(-x + i detuning) t} / ((-x + i detuning)^2 + i alpha^2 x) dx,
/// evaluated in u = sqrt(x). Throws NumericalError if the quadrature does not converge.
[[nodiscard]] cplx branch_integral(double alpha, double detuning, double t);

/// A(t) = c1 e^{i(r1^2 + detuning) t} + branch_integral, sampled on the grid.
[[nodiscard]] ComplexSeries amplitude_analytic(double alpha, double detuning, const TimeGrid& grid);

/// |c1|^2 below the band, 0 otherwise.
[[nodiscard]] double steady_population(double alpha, double detuning);

/// Volterra solution of the finite-trap model whose dressed level sits at
/// p.detuning, i.e. kernel_full evaluated at bare_detuning(p).
/// dt <= 0 picks 0.01 / max(alpha^2, |detuning|).
[[nodiscard]] VolterraResult solve_single_emitter(const ModelParams& p, double T, double dt = 0.0,
                                                  const VolterraOptions& opt = {});

/// Default step used by solve_single_emitter.
[[nodiscard]] double default_single_dt(const ModelParams& p);

/// Finite-trap bound state below the band: energy E < 0 solving E + S(E) = bare detuning
/// with the exact self-energy of the Gaussian coupling, and its weight Z = 1/(1 + S'(E)).
struct FiniteTrapBoundState {
    double energy = 0.0;
    double residue = 0.0;     // Z
    double population = 0.0;  // Z^2
};

/// Requires p.detuning < 0 (dressed convention as in solve_single_emitter).
[[nodiscard]] FiniteTrapBoundState finite_trap_bound_state(const ModelParams& p);

/// Self-energy S(E) for E < 0 and its derivative.
[[nodiscard]] double self_energy(const ModelParams& p, double energy);
[[nodiscard]] double self_energy_derivative(const ModelParams& p, double energy);

/// exp(x^2) erfc(x) for x >= 0.
[[nodiscard]] double erfcx(double x);

struct BoundStateProfile {
    cplx k0e{};                                // sqrt(2 m (detuning - r1^2))
    std::optional<double> localization_length;  // 1 / Im k0e when positive
    double amplitude_prefactor = 0.0;          // |c1| rabi m x0^3 / (2 pi)
};

[[nodiscard]] BoundStateProfile bound_state_profile(const ModelParams& p, const LaplaceSolution& s);

/// (|c1| rabi m x0^3 / (2 pi r))^2 e^{-Im[k0e] r} e^{-Im[r1^2] t}. Throws for the no_pole case or r <= 0.
[[nodiscard]] double bound_state_density(const ModelParams& p, const LaplaceSolution& s, double r, double t);

enum class SingleRegime { bound, strong_nonmarkov, quasi_markov, markovian };

/// Above this multiple of alpha^2 the decay counts as Markovian.
inline constexpr double kMarkovianThreshold = 25.0;

[[nodiscard]] SingleRegime classify_single_regime(double alpha, double detuning);
[[nodiscard]] std::string to_string(SingleRegime r);
[[nodiscard]] std::string to_string(PoleCase c);

}  // namespace matterwave

#pragma once

#include <cstddef>
#include <vector>

#include "matterwave/lattice.hpp"
#include "matterwave/params.hpp"

namespace matterwave {

/// Site-averaged coherence y = sum <sigma-_j> / M and inversion z = sum <sigma3_j> / M.
struct MeanFieldState {
    cplx y{};
    double z = 1.0;
};

struct MeanFieldOptions {
    std::size_t stride = 1;
    std::size_t max_steps = 200000;  // guards the O(steps^2) history
    int gl_nodes = 48;               // per step, for the off-site kernel moments
    int max_corrector_iterations = 50;
};

struct MeanFieldTrajectory {
    std::vector<double> times;
    std::vector<cplx> y;
    std::vector<double> z;
    double max_length_drift = 0.0;  // max |z^2 + 4|y|^2 - initial|
    bool z_out_of_range = false;    // any |z| > 1.05
};

/// dy/dt = z int_0^t G_coll(t - u) y(u) du,  dz/dt = -4 Re[conj(y) int_0^t G_coll(t - u) y(u) du].
/// The history integral is advanced through the integrated kernel with y linear per step
/// (on-site part exact, off-site part by Gauss-Legendre); the step is an implicit
/// midpoint rule iterated to convergence, which conserves z^2 + 4|y|^2.
/// Works in the frame rotating at the detuning; y is returned in the lab frame.
[[nodiscard]] MeanFieldTrajectory solve_meanfield(const ModelParams& p, const Lattice& lattice,
                                                  const MeanFieldState& initial, double T, double dt,
                                                  const MeanFieldOptions& opt = {});

/// 0.25 / rabi, capped at 0.1/|detuning|.
[[nodiscard]] double default_meanfield_dt(const ModelParams& p);

struct PolarizationSummary {
    cplx y_st{};               // tail mean of |y| with the phase of the last sample
    double y_abs_st = 0.0;
    double z_st = 0.0;
    double rotation_frequency = 0.0;  // mean d(arg y)/dt over the tail
    double drift = 0.0;               // relative tail drift, max over |y| and z
    bool converged = false;           // drift < 1%
};

/// Averages over the last tail_fraction of the samples. Drift compares the means of
/// the two halves of the tail, relative to max(|tail mean|, 0.1).
[[nodiscard]] PolarizationSummary polarization_summary(const MeanFieldTrajectory& tr, double tail_fraction = 0.25);

}  // namespace matterwave

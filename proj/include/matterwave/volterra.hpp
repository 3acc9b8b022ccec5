#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "matterwave/params.hpp"
#include "matterwave/series.hpp"

namespace matterwave {

using KernelFn = std::function<cplx(double)>;

/// Per-interval moments of the lag function L on [k dt, (k+1) dt]. With B linear on
/// each step, `older` multiplies the sample at the larger lag and `newer` the one
/// at the smaller lag.
struct LagMoments {
    double dt = 0.0;
    std::vector<cplx> older;
    std::vector<cplx> newer;
};

/// Moments of L(s) = i frame + int_0^s G(v) e^{-i frame v} dv, the lag function of
/// A' = -G*A written in the frame B = A e^{-i frame t}. Gauss-Legendre per interval.
[[nodiscard]] LagMoments lag_moments_sampled(const KernelFn& G, double frame, double dt, std::size_t intervals,
                                             int gl_nodes = 12);

/// Exact moments for kernel_full in the frame rotating at its own detuning:
/// L(s) = i(detuning - 2 rabi^2/trap) + (2 i rabi^2/trap)(1 + i trap s)^{-1/2}.
[[nodiscard]] LagMoments lag_moments_trap(const ModelParams& p, double dt, std::size_t intervals);

/// Solves B(t) = 1 - int_0^t L(t-u) B(u) du with product trapezoidal weights.
/// Returns B on the grid 0, dt, ..., steps dt.
[[nodiscard]] std::vector<cplx> solve_second_kind(const LagMoments& m, std::size_t steps);

struct VolterraOptions {
    bool richardson = true;  // compare against dt/2 and dt/4
};

struct VolterraResult {
    ComplexSeries amplitude;
    double error_estimate = 0.0;  // max |A_dt - A_exact| estimate from the halving sequence
    double observed_order = 0.0;  // NaN when the differences vanish
    bool converged = true;
    double max_abs = 0.0;         // max |A(t)|, boundedness diagnostic
};

/// A' = -int_0^t G(t - tau) A(tau) d tau, A(0) = 1, for a finite kernel G.
/// `frame` is a frequency removed analytically; choose the kernel's carrier.
[[nodiscard]] VolterraResult solve_volterra(const KernelFn& G, double T, double dt, double frame = 0.0,
                                            const VolterraOptions& opt = {});

/// Same equation with G = kernel_full(p, .) and exact lag moments.
[[nodiscard]] VolterraResult solve_volterra_full(const ModelParams& p, double T, double dt,
                                                 const VolterraOptions& opt = {});

}  // namespace matterwave

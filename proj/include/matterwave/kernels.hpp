#pragma once

#include <vector>

#include "matterwave/lattice.hpp"
#include "matterwave/params.hpp"
#include "matterwave/series.hpp"

namespace matterwave {

/// G(t) = rabi^2 e^{i detuning t} (1 + i trap t)^{-3/2}. The detuning is used as
/// given; pass bare_detuning() when the dressed level should sit at p.detuning.
[[nodiscard]] cplx kernel_full(const ModelParams& p, double t);

/// Same kernel at complex time, used for contour-deformed quadrature.
[[nodiscard]] cplx kernel_full(const ModelParams& p, cplx t);

/// Long-time form -alpha_k e^{i(detuning t + pi/4)} t^{-3/2}. Throws for t <= 0.
[[nodiscard]] cplx kernel_ideal(double alpha_kernel, double detuning, double t);

/// Kernel between sites separated by r (physical units):
/// kernel_full(t) exp(-r^2 / (4 x0^2 (1 + i trap t))) exp(-i laser_k . r).
[[nodiscard]] cplx kernel_pair(const ModelParams& p, const Vec3& r, double t);
[[nodiscard]] cplx kernel_pair(const ModelParams& p, const Vec3& r, cplx t);

/// Sum of kernel_pair over all sites of a lattice seen from a reference site
/// (the central site for open lattices). Evaluated per axis as a product of
/// one-dimensional theta-like sums, so cost is independent of M.
class CollectiveKernel {
public:
    CollectiveKernel(const ModelParams& p, const Lattice& lattice);

    /// G_coll(t).
    [[nodiscard]] cplx operator()(double t) const;
    /// G_coll(t) - kernel_full(t): the contribution of all other sites.
    [[nodiscard]] cplx off_site(double t) const;
    /// Sum_n exp(-r_n^2/(4 x0^2 w)) e^{-i k.r_n} - 1, computed without cancellation.
    [[nodiscard]] cplx lattice_factor_minus_one(double t) const;

    [[nodiscard]] const ModelParams& params() const { return p_; }

private:
    [[nodiscard]] cplx axis_sum_minus_one(int axis, cplx q) const;

    ModelParams p_;
    double x0_;
    int dim_;
    std::vector<std::pair<int, int>> ranges_;
};

/// kernel_collective sampled on a grid.
[[nodiscard]] ComplexSeries kernel_collective(const ModelParams& p, const Lattice& lattice, const TimeGrid& grid);

/// Markovian amplitude rate alpha sqrt(detuning). Throws for detuning <= 0.
[[nodiscard]] double rate_markov(const ModelParams& p);

enum class RateMethod { closed_form, quadrature };

struct PairRate {
    cplx value{};
    Vec3 separation{0.0, 0.0, 0.0};  // lattice units
    double distance = 0.0;          // |separation|, lattice units
    RateMethod method = RateMethod::closed_form;
    double error = 0.0;             // absolute error bound (quadrature only)
    bool converged = true;
};

/// Closed-form pairwise rate for separation n (lattice units, n != 0):
///   detuning > 0:  |G0| xi (sin x - i cos x) / |n|
///   detuning < 0: -i |G0| xi e^{-x} / |n|
/// with x = k0 |n| d0, times the phase e^{-i laser_k . r_n}.
[[nodiscard]] PairRate rate_pair(const ModelParams& p, const Vec3& n);

/// Integral of kernel_pair over [0, inf). For detuning > 0 (and = 0) the real axis
/// is followed up to corner_time and the remainder is integrated along the
/// vertical line t = corner_time + i tau; for detuning < 0 the whole path is rotated
/// to t = -i tau. corner_time <= 0 picks max(4 m r^2, 10/trap, 10/|detuning|).
/// Never throws on non-convergence; check `converged`.
[[nodiscard]] PairRate rate_pair_numeric(const ModelParams& p, const Vec3& n, double corner_time = 0.0,
                                         double tol = 1e-8);

}  // namespace matterwave

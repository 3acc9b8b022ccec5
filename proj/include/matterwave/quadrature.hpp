#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <vector>

namespace matterwave::quad {

using cplx = std::complex<double>;
using Integrand = std::function<cplx(double)>;

struct Result {
    cplx value{};
    double error = 0.0;  // Kronrod error estimate, summed over panels
    bool converged = false;
    std::size_t evaluations = 0;
};

struct Options {
    double rel_tol = 1e-8;
    double abs_tol = 1e-14;
    std::size_t max_panels = 4000;
};

/// Globally adaptive 7/15-point Gauss-Kronrod on a finite interval.
[[nodiscard]] Result integrate(const Integrand& f, double a, double b, const Options& opt = {});

/// Integral over [a, inf) via x = a + scale u/(1-u). `scale` should be the width
/// over which f carries most of its weight.
[[nodiscard]] Result integrate_to_infinity(const Integrand& f, double a, double scale, const Options& opt = {});

/// Integral over consecutive panels [b_k, b_{k+1}] of a breakpoint list, sharing one
/// tolerance budget. Useful for oscillatory integrands with a known period.
[[nodiscard]] Result integrate_panels(const Integrand& f, const std::vector<double>& breaks, const Options& opt = {});

/// n-point Gauss-Legendre rule on [-1, 1].
struct GaussLegendre {
    std::vector<double> nodes;
    std::vector<double> weights;
    explicit GaussLegendre(int n);
};

}  // namespace matterwave::quad

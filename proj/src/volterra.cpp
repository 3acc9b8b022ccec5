#include "matterwave/volterra.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "matterwave/quadrature.hpp"

namespace matterwave {

namespace {

constexpr cplx kI{0.0, 1.0};

std::size_t steps_for(double T, double dt)
{
    if (!(T > 0.0) || !(dt > 0.0)) throw ParameterError("volterra: T and dt must be > 0");
    const double n = std::ceil(T / dt - 1e-9);
    if (n > 5e6) throw ParameterError("volterra: too many steps (T/dt > 5e6)");
    return static_cast<std::size_t>(n);
}

using Solver = std::function<ComplexSeries(double dt, std::size_t steps)>;

VolterraResult with_richardson(const Solver& solve, double T, double dt, const VolterraOptions& opt)
{
    const std::size_t n = steps_for(T, dt);
    const double h = T / static_cast<double>(n);
    VolterraResult res;
    res.amplitude = solve(h, n);
    for (const auto& a : res.amplitude.values) res.max_abs = std::max(res.max_abs, std::abs(a));
    if (!opt.richardson) {
        res.observed_order = std::numeric_limits<double>::quiet_NaN();
        return res;
    }
    const ComplexSeries half = solve(h / 2.0, 2 * n);
    const ComplexSeries quarter = solve(h / 4.0, 4 * n);
    double e1 = 0.0, e2 = 0.0;
    for (std::size_t k = 0; k <= n; ++k) {
        e1 = std::max(e1, std::abs(res.amplitude[k] - half[2 * k]));
        e2 = std::max(e2, std::abs(half[2 * k] - quarter[4 * k]));
    }
    const double floor = 1e-12;
    if (e1 < floor && e2 < floor) {
        res.observed_order = std::numeric_limits<double>::quiet_NaN();
        res.error_estimate = e1;
        res.converged = true;
        return res;
    }
    const double p = std::log2(std::max(e1, floor) / std::max(e2, floor));
    res.observed_order = p;
    // A_h - A = C h^p  =>  |A_h - A| = e1 / (1 - 2^-p).
    const double pc = std::clamp(p, 0.5, 4.0);
    res.error_estimate = e1 / (1.0 - std::pow(2.0, -pc));
    res.converged = std::isfinite(p) && p >= 1.0 && std::isfinite(res.error_estimate);
    return res;
}

}  // namespace

LagMoments lag_moments_sampled(const KernelFn& G, double frame, double dt, std::size_t intervals, int gl_nodes)
{
    const quad::GaussLegendre gl(gl_nodes);
    LagMoments m;
    m.dt = dt;
    m.older.resize(intervals);
    m.newer.resize(intervals);
    const double h = dt;
    cplx k1a{};  // int_0^a G(v) e^{-i frame v} dv
    for (std::size_t k = 0; k < intervals; ++k) {
        const double a = static_cast<double>(k) * h;
        const double b = a + h;
        cplx integral{}, tot{}, older{};
        for (int j = 0; j < gl_nodes; ++j) {
            const double v = a + 0.5 * h * (1.0 + gl.nodes[j]);
            const double w = 0.5 * h * gl.weights[j];
            const cplx g = G(v) * std::exp(-kI * frame * v) * w;
            integral += g;
            tot += g * (b - v);
            older += g * 0.5 * (h * h - (v - a) * (v - a));
        }
        tot += kI * frame * h + k1a * h;
        older = older / h + kI * frame * h * 0.5 + k1a * h * 0.5;
        m.older[k] = older;
        m.newer[k] = tot - older;
        k1a += integral;
    }
    return m;
}

LagMoments lag_moments_trap(const ModelParams& p, double dt, std::size_t intervals)
{
    LagMoments m;
    m.dt = dt;
    m.older.resize(intervals);
    m.newer.resize(intervals);
    const double h = dt;
    const double shift = 2.0 * p.rabi * p.rabi / p.trap;
    const cplx c = kI * shift;
    const cplx lin = kI * (p.detuning - shift);
    cplx x = 1.0;  // sqrt(w) at the interval start
    for (std::size_t k = 0; k < intervals; ++k) {
        const double b = static_cast<double>(k + 1) * h;
        const cplx y = std::sqrt(1.0 + kI * p.trap * b);
        const cplx sum = x + y;
        // int_a^b w^{-1/2} ds = 2h/(x+y);  (1/h) int_a^b (s-a) w^{-1/2} ds = (2/3) h (y+2x)/(x+y)^2
        const cplx tot = lin * h + c * (2.0 * h / sum);
        const cplx older = lin * (0.5 * h) + c * ((2.0 / 3.0) * h * (y + 2.0 * x) / (sum * sum));
        m.older[k] = older;
        m.newer[k] = tot - older;
        x = y;
    }
    return m;
}

std::vector<cplx> solve_second_kind(const LagMoments& m, std::size_t steps)
{
    if (m.older.size() < steps) throw ParameterError("solve_second_kind: not enough lag moments");
    // Weight on B_{n-k}: W_0 = newer_0, W_k = newer_k + older_{k-1}, last = older_{n-1}.
    std::vector<double> wr(steps + 1), wi(steps + 1);
    for (std::size_t k = 1; k < steps; ++k) {
        const cplx w = m.newer[k] + m.older[k - 1];
        wr[k] = w.real();
        wi[k] = w.imag();
    }
    std::vector<double> br(steps + 1), bi(steps + 1);
    br[0] = 1.0;
    bi[0] = 0.0;
    const cplx denom = 1.0 + m.newer[0];
    for (std::size_t n = 1; n <= steps; ++n) {
        double sr = 0.0, si = 0.0;
        for (std::size_t k = 1; k < n; ++k) {
            const double xr = br[n - k], xi = bi[n - k];
            sr += wr[k] * xr - wi[k] * xi;
            si += wr[k] * xi + wi[k] * xr;
        }
        const cplx tail = m.older[n - 1] * cplx{br[0], bi[0]};
        const cplx bn = (1.0 - cplx{sr, si} - tail) / denom;
        br[n] = bn.real();
        bi[n] = bn.imag();
    }
    std::vector<cplx> out(steps + 1);
    for (std::size_t n = 0; n <= steps; ++n) out[n] = {br[n], bi[n]};
    return out;
}

VolterraResult solve_volterra(const KernelFn& G, double T, double dt, double frame, const VolterraOptions& opt)
{
    const Solver solve = [&](double h, std::size_t n) {
        const auto b = solve_second_kind(lag_moments_sampled(G, frame, h, n), n);
        std::vector<cplx> a(b.size());
        for (std::size_t k = 0; k < b.size(); ++k) a[k] = b[k] * std::exp(kI * frame * (static_cast<double>(k) * h));
        return ComplexSeries(0.0, h, std::move(a));
    };
    return with_richardson(solve, T, dt, opt);
}

VolterraResult solve_volterra_full(const ModelParams& p, double T, double dt, const VolterraOptions& opt)
{
    const auto report = validate(p);
    if (!report.ok()) throw ParameterError(report.errors.front());
    const Solver solve = [&](double h, std::size_t n) {
        const auto b = solve_second_kind(lag_moments_trap(p, h, n), n);
        std::vector<cplx> a(b.size());
        for (std::size_t k = 0; k < b.size(); ++k)
            a[k] = b[k] * std::exp(kI * p.detuning * (static_cast<double>(k) * h));
        return ComplexSeries(0.0, h, std::move(a));
    };
    return with_richardson(solve, T, dt, opt);
}

}  // namespace matterwave

#include "matterwave/meanfield.hpp"

#include <cmath>
#include <sstream>

#include "matterwave/kernels.hpp"
#include "matterwave/volterra.hpp"

namespace matterwave {

namespace {

constexpr cplx kI{0.0, 1.0};

// Moments of K(s) = int_0^s G_coll(v) e^{-i detuning v} dv; both builders add
// i*detuning to the lag function, which is removed here.
LagMoments integrated_kernel_moments(const ModelParams& p, const Lattice& lattice, double h, std::size_t n,
                                     int gl_nodes)
{
    LagMoments m = lag_moments_trap(p, h, n);
    const CollectiveKernel ck(p, lattice);
    const LagMoments off =
        lag_moments_sampled([&ck](double t) { return ck.off_site(t); }, p.detuning, h, n, gl_nodes);
    const cplx frame_half = kI * p.detuning * (0.5 * h);
    for (std::size_t k = 0; k < n; ++k) {
        m.older[k] += off.older[k] - 2.0 * frame_half;
        m.newer[k] += off.newer[k] - 2.0 * frame_half;
    }
    return m;
}

}  // namespace

double default_meanfield_dt(const ModelParams& p)
{
    double dt = 0.25 / p.rabi;
    if (p.detuning != 0.0) dt = std::min(dt, 0.1 / std::abs(p.detuning));
    return dt;
}

MeanFieldTrajectory solve_meanfield(const ModelParams& p, const Lattice& lattice, const MeanFieldState& initial,
                                    double T, double dt, const MeanFieldOptions& opt)
{
    if (!(std::abs(initial.y) <= 1.0) || !(std::abs(initial.z) <= 1.0))
        throw ParameterError("solve_meanfield: initial |y| and |z| must be <= 1");
    if (!(T > 0.0) || !(dt > 0.0)) throw ParameterError("solve_meanfield: T and dt must be > 0");
    const auto n = static_cast<std::size_t>(std::ceil(T / dt - 1e-9));
    if (n > opt.max_steps) {
        std::ostringstream os;
        os << "solve_meanfield: " << n << " steps exceed max_steps = " << opt.max_steps;
        throw ParameterError(os.str());
    }
    const double h = T / static_cast<double>(n);
    const LagMoments m = integrated_kernel_moments(p, lattice, h, n, opt.gl_nodes);

    // Psi_k = int_0^{t_k} K(t_k - u) Y(u) du with weights on Y_{k-j}: W_0 = newer_0,
    // W_j = newer_j + older_{j-1}, and older_{k-1} on Y_0.
    std::vector<cplx> w(n + 1);
    w[0] = m.newer[0];
    for (std::size_t j = 1; j < n; ++j) w[j] = m.newer[j] + m.older[j - 1];

    std::vector<cplx> y(n + 1);
    std::vector<double> z(n + 1);
    y[0] = initial.y;
    z[0] = initial.z;
    cplx psi_prev{};
    const double length0 = z[0] * z[0] + 4.0 * std::norm(y[0]);
    const cplx rot = -kI * p.detuning * h;
    const std::size_t stride = std::max<std::size_t>(opt.stride, 1);

    MeanFieldTrajectory tr;
    auto record = [&](std::size_t k) {
        const double t = static_cast<double>(k) * h;
        tr.times.push_back(t);
        tr.y.push_back(y[k] * std::exp(kI * p.detuning * t));
        tr.z.push_back(z[k]);
    };
    record(0);

    for (std::size_t k = 1; k <= n; ++k) {
        cplx rest = m.older[k - 1] * y[0];
        for (std::size_t j = 1; j < k; ++j) rest += w[j] * y[k - j];

        cplx yk = y[k - 1];
        double zk = z[k - 1];
        cplx psi{};
        bool done = false;
        for (int it = 0; it < opt.max_corrector_iterations && !done; ++it) {
            psi = w[0] * yk + rest;
            const cplx dpsi = psi - psi_prev;
            const cplx ym = 0.5 * (y[k - 1] + yk);
            const double zm = 0.5 * (z[k - 1] + zk);
            const cplx ynew = y[k - 1] + zm * dpsi + rot * ym;
            const double znew = z[k - 1] - 4.0 * (std::conj(ym) * dpsi).real();
            done = std::abs(ynew - yk) <= 1e-14 * std::abs(ynew) && std::abs(znew - zk) <= 1e-15;
            yk = ynew;
            zk = znew;
        }
        if (!done) {
            std::ostringstream os;
            os << "solve_meanfield: corrector did not converge at t = " << static_cast<double>(k) * h << "; reduce dt";
            throw NumericalError(os.str());
        }
        y[k] = yk;
        z[k] = zk;
        psi_prev = w[0] * yk + rest;

        if (!(std::abs(zk) <= 2.0)) {
            std::ostringstream os;
            os << "solve_meanfield: divergence, |z| > 2 at t = " << static_cast<double>(k) * h;
            throw NumericalError(os.str());
        }
        if (std::abs(zk) > 1.05) tr.z_out_of_range = true;
        tr.max_length_drift = std::max(tr.max_length_drift, std::abs(zk * zk + 4.0 * std::norm(yk) - length0));
        if (k % stride == 0 || k == n) record(k);
    }
    return tr;
}

PolarizationSummary polarization_summary(const MeanFieldTrajectory& tr, double tail_fraction)
{
    const std::size_t n = tr.times.size();
    if (n < 10) throw ParameterError("polarization_summary: need at least 10 samples");
    if (!(tail_fraction > 0.0 && tail_fraction <= 1.0))
        throw ParameterError("polarization_summary: tail_fraction must be in (0, 1]");
    const auto count = std::max<std::size_t>(4, static_cast<std::size_t>(std::floor(tail_fraction * n)));
    const std::size_t first = n - std::min(count, n);
    const std::size_t mid = first + (n - first) / 2;

    auto mean = [&](std::size_t a, std::size_t b, auto f) {
        double s = 0.0;
        for (std::size_t k = a; k < b; ++k) s += f(k);
        return s / static_cast<double>(b - a);
    };
    const auto yabs = [&](std::size_t k) { return std::abs(tr.y[k]); };
    const auto zval = [&](std::size_t k) { return tr.z[k]; };

    PolarizationSummary s;
    s.y_abs_st = mean(first, n, yabs);
    s.z_st = mean(first, n, zval);
    s.y_st = std::polar(s.y_abs_st, std::arg(tr.y.back()));
    const double dy = std::abs(mean(mid, n, yabs) - mean(first, mid, yabs)) / std::max(s.y_abs_st, 0.1);
    const double dz = std::abs(mean(mid, n, zval) - mean(first, mid, zval)) / std::max(std::abs(s.z_st), 0.1);
    s.drift = std::max(dy, dz);
    s.converged = s.drift < 0.01;

    double phase = 0.0;
    for (std::size_t k = first + 1; k < n; ++k) phase += std::arg(tr.y[k] * std::conj(tr.y[k - 1]));
    const double span = tr.times.back() - tr.times[first];
    s.rotation_frequency = span > 0.0 ? phase / span : 0.0;
    return s;
}

}  // namespace matterwave

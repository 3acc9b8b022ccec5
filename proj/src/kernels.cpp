#include "matterwave/kernels.hpp"

#include <algorithm>
#include <cmath>

#include "matterwave/quadrature.hpp"

namespace matterwave {

namespace {

constexpr cplx kI{0.0, 1.0};

void require_valid(const ModelParams& p)
{
    const auto report = validate(p);
    if (!report.ok()) throw ParameterError(report.errors.front());
}

double x0_of(const ModelParams& p)
{
    return 1.0 / std::sqrt(2.0 * p.mass * p.trap);
}

Vec3 scaled(const Vec3& n, double s)
{
    return {n[0] * s, n[1] * s, n[2] * s};
}

}  // namespace

cplx kernel_full(const ModelParams& p, cplx t)
{
    const cplx w = 1.0 + kI * p.trap * t;
    return p.rabi * p.rabi * std::exp(kI * p.detuning * t - 1.5 * std::log(w));
}

cplx kernel_full(const ModelParams& p, double t)
{
    return kernel_full(p, cplx{t, 0.0});
}

cplx kernel_ideal(double alpha_kernel, double detuning, double t)
{
    if (!(t > 0.0)) throw ParameterError("kernel_ideal is singular at t <= 0; use kernel_full near 0");
    return -alpha_kernel * std::exp(kI * (detuning * t + kPi / 4.0)) / (t * std::sqrt(t));
}

cplx kernel_pair(const ModelParams& p, const Vec3& r, cplx t)
{
    const double x0 = x0_of(p);
    const double r2 = dot(r, r);
    const cplx w = 1.0 + kI * p.trap * t;
    const cplx expo = kI * p.detuning * t - 1.5 * std::log(w) - r2 / (4.0 * x0 * x0 * w) - kI * dot(p.laser_k, r);
    return p.rabi * p.rabi * std::exp(expo);
}

cplx kernel_pair(const ModelParams& p, const Vec3& r, double t)
{
    return kernel_pair(p, r, cplx{t, 0.0});
}

CollectiveKernel::CollectiveKernel(const ModelParams& p, const Lattice& lattice)
    : p_(p), x0_(x0_of(p)), dim_(lattice.dim())
{
    require_valid(p);
    if (std::abs(lattice.spacing() - p.spacing) > 1e-12 * p.spacing)
        throw ParameterError("lattice spacing differs from model spacing");
    for (int axis = 0; axis < dim_; ++axis) ranges_.push_back(lattice.axis_offset_range(axis));
}

cplx CollectiveKernel::axis_sum_minus_one(int axis, cplx q) const
{
    const auto [lo, hi] = ranges_[static_cast<std::size_t>(axis)];
    const double kd = p_.laser_k[static_cast<std::size_t>(axis)] * p_.spacing;
    const cplx q2 = q * q;
    cplx acc{};
    // q^{n^2} via q^{n^2} = q^{(n-1)^2} q^{2n-1}; the phase is e^{-i kd n}.
    for (int sign : {+1, -1}) {
        const int nmax = sign > 0 ? hi : -lo;
        const cplx step_phase = std::exp(-kI * (kd * sign));
        cplx power{1.0, 0.0};
        cplx g = q;
        cplx phase{1.0, 0.0};
        for (int n = 1; n <= nmax; ++n) {
            power *= g;
            phase *= step_phase;
            acc += power * phase;
            g *= q2;
            if (power == cplx{}) break;
            if (std::abs(g) < 0.5 && std::abs(power) <= 1e-18 * std::abs(acc)) break;
        }
    }
    return acc;
}

cplx CollectiveKernel::lattice_factor_minus_one(double t) const
{
    const cplx w = 1.0 + kI * p_.trap * t;
    const cplx q = std::exp(-p_.spacing * p_.spacing / (4.0 * x0_ * x0_ * w));
    cplx prod_minus_one{};
    for (int axis = 0; axis < dim_; ++axis) {
        const cplx s = axis_sum_minus_one(axis, q);
        prod_minus_one += s + prod_minus_one * s;
    }
    return prod_minus_one;
}

cplx CollectiveKernel::operator()(double t) const
{
    return kernel_full(p_, t) * (1.0 + lattice_factor_minus_one(t));
}

cplx CollectiveKernel::off_site(double t) const
{
    return kernel_full(p_, t) * lattice_factor_minus_one(t);
}

ComplexSeries kernel_collective(const ModelParams& p, const Lattice& lattice, const TimeGrid& grid)
{
    const CollectiveKernel k(p, lattice);
    std::vector<cplx> v(grid.size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = k(grid.time(i));
    return ComplexSeries(0.0, grid.dt, std::move(v));
}

double rate_markov(const ModelParams& p)
{
    if (!(p.detuning > 0.0)) throw ParameterError("rate_markov requires detuning > 0");
    return *derive(p).gamma0;
}

PairRate rate_pair(const ModelParams& p, const Vec3& n)
{
    const double dist = norm(n);
    if (dist == 0.0) throw ParameterError("rate_pair: separation must be nonzero (diagonal is a convention)");
    if (p.detuning == 0.0) throw ParameterError("rate_pair: detuning = 0 leaves xi undefined");
    const DerivedParams d = derive(p);
    const Vec3 r = scaled(n, p.spacing);
    const double x = *d.k0 * dist * p.spacing;
    const double env = d.gamma0_abs / x;  // |G0| xi / |n|
    cplx v = p.detuning > 0.0 ? env * cplx{std::sin(x), -std::cos(x)} : cplx{0.0, -env * std::exp(-x)};
    v *= std::exp(-kI * dot(p.laser_k, r));
    PairRate out;
    out.value = v;
    out.separation = n;
    out.distance = dist;
    out.method = RateMethod::closed_form;
    return out;
}

PairRate rate_pair_numeric(const ModelParams& p, const Vec3& n, double corner_time, double tol)
{
    require_valid(p);
    if (!(tol > 0.0)) throw ParameterError("rate_pair_numeric: tol must be > 0");
    const Vec3 r = scaled(n, p.spacing);
    const double r2 = dot(r, r);
    const double x0 = x0_of(p);
    const double w0 = p.trap;
    const double delta = p.detuning;
    const double adelta = std::abs(delta);

    quad::Options opt;
    opt.rel_tol = tol;
    opt.abs_tol = 1e-300;
    opt.max_panels = 200000;

    PairRate out;
    out.separation = n;
    out.distance = norm(n);
    out.method = RateMethod::quadrature;

    cplx value{};
    double error = 0.0;
    bool ok = true;
    auto add = [&](const quad::Result& res, cplx factor) {
        value += factor * res.value;
        error += std::abs(factor) * res.error;
        ok = ok && res.converged;
    };

    if (delta < 0.0) {
        // t = -i tau: the integrand is real and decays like e^{-|delta| tau}.
        auto f = [&](double tau) { return kernel_pair(p, r, cplx{0.0, -tau}); };
        const double saddle = std::sqrt(r2 / (4.0 * x0 * x0 * w0 * adelta));
        const double end = 60.0 / adelta + 4.0 * saddle;
        std::vector<double> breaks{0.0};
        for (double b = 1e-3 / w0; b < end; b *= 2.0) breaks.push_back(b);
        breaks.push_back(end);
        add(quad::integrate_panels(f, breaks, opt), -kI);
        add(quad::integrate_to_infinity(f, end, 1.0 / adelta, opt), -kI);
    } else {
        double T = corner_time;
        if (!(T > 0.0)) {
            T = std::max(4.0 * p.mass * r2, 10.0 / w0);
            if (adelta > 0.0) T = std::max(T, 10.0 / adelta);
        }
        auto f_real = [&](double t) { return kernel_pair(p, r, t); };

        // Real segment: panels resolving the local phase of the integrand.
        const double g = r2 / (4.0 * x0 * x0);
        auto phase_rate = [&](double t) {
            const double u = w0 * t;
            const double den = 1.0 + u * u;
            return std::abs(delta + g * w0 * (1.0 - u * u) / (den * den) - 1.5 * w0 / den);
        };
        std::vector<double> breaks{0.0};
        double t = 0.0;
        // Skip the stretch where the Gaussian factor is below e^{-60}.
        if (g > 60.0) {
            const double start = std::sqrt(g / 60.0 - 1.0) / w0;
            if (start < T) {
                breaks.push_back(start);
                t = start;
            }
        }
        while (t < T) {
            double step = 0.5 * kPi / std::max(phase_rate(t), 1e-300);
            step = std::min(step, std::max(t, 1.0 / w0));
            step = std::max(step, 1e-9 * T);
            t = std::min(t + step, T);
            breaks.push_back(t);
        }
        add(quad::integrate_panels(f_real, breaks, opt), 1.0);

        // Vertical leg t = T + i tau.
        auto f_vert = [&](double tau) { return kernel_pair(p, r, cplx{T, tau}); };
        if (adelta > 0.0) {
            const double end = 60.0 / adelta;
            std::vector<double> vb{0.0};
            for (double b = 0.05 * std::min(T, 1.0 / adelta); b < end; b *= 2.0) vb.push_back(b);
            vb.push_back(end);
            add(quad::integrate_panels(f_vert, vb, opt), kI);
            add(quad::integrate_to_infinity(f_vert, end, 1.0 / adelta, opt), kI);
        } else {
            // Algebraic decay ~ tau^{-3/2}: integrate far out, then add the asymptotic tail.
            const double end = 1e8 * T;
            std::vector<double> vb{0.0};
            for (double b = 0.05 * T; b < end; b *= 2.0) vb.push_back(b);
            vb.push_back(end);
            add(quad::integrate_panels(f_vert, vb, opt), kI);
            // For tau >> T the integrand tends to i rabi^2 (w0 tau)^{-3/2} e^{-i k.r}.
            const cplx tail_c = -2.0 * p.rabi * p.rabi / (w0 * std::sqrt(w0 * end)) * std::exp(-kI * dot(p.laser_k, r));
            value += tail_c;
            error += std::abs(tail_c) * (T / end + 1.0 / (w0 * end));
        }
    }

    out.value = value;
    out.error = error;
    out.converged = ok && std::isfinite(std::abs(value)) && error <= std::max(tol * std::abs(value), 1e-300);
    return out;
}

}  // namespace matterwave

#include "matterwave/params.hpp"

#include <cmath>
#include <sstream>

namespace matterwave {

long ModelParams::site_count() const
{
    long m = 1;
    for (int n : shape) m *= n;
    return m;
}

ValidationReport validate(const ModelParams& p)
{
    ValidationReport r;
    auto positive = [&](double v, const char* name) {
        if (!(v > 0.0) || !std::isfinite(v)) r.errors.push_back(std::string(name) + " must be finite and > 0");
    };
    positive(p.rabi, "rabi");
    positive(p.trap, "trap");
    positive(p.mass, "mass");
    positive(p.spacing, "spacing");
    if (!std::isfinite(p.detuning)) r.errors.push_back("detuning must be finite");
    for (double k : p.laser_k)
        if (!std::isfinite(k)) r.errors.push_back("laser_k must be finite");
    if (p.dim < 1 || p.dim > 3) r.errors.push_back("dim must be 1, 2 or 3");
    if (static_cast<int>(p.shape.size()) != p.dim) {
        std::ostringstream os;
        os << "shape has " << p.shape.size() << " entries but dim = " << p.dim;
        r.errors.push_back(os.str());
    }
    for (int n : p.shape)
        if (n < 1) r.errors.push_back("shape entries must be >= 1");
    if (r.errors.empty() && p.rabi / p.trap > 0.1) {
        std::ostringstream os;
        os << "rabi/trap = " << p.rabi / p.trap << " > 0.1: higher Bloch bands are not modeled";
        r.warnings.push_back(os.str());
    }
    return r;
}

DerivedParams derive(const ModelParams& p)
{
    const auto report = validate(p);
    if (!report.ok()) throw ParameterError(report.errors.front());

    DerivedParams d;
    d.x0 = 1.0 / std::sqrt(2.0 * p.mass * p.trap);
    d.alpha_kernel = p.rabi * p.rabi / std::pow(p.trap, 1.5);
    d.alpha = 2.0 * std::sqrt(kPi) * d.alpha_kernel;
    d.lamb_shift = 2.0 * p.rabi * p.rabi / p.trap;
    d.gamma0_abs = d.alpha * std::sqrt(std::abs(p.detuning));
    if (p.detuning > 0.0) d.gamma0 = d.gamma0_abs;
    if (p.detuning != 0.0) {
        d.k0 = std::sqrt(2.0 * p.mass * std::abs(p.detuning));
        d.xi = 1.0 / (*d.k0 * p.spacing);
        d.chi = std::cbrt(static_cast<double>(p.site_count())) * *d.xi * *d.xi;
    }
    return d;
}

double bare_detuning(const ModelParams& p)
{
    return p.detuning + 2.0 * p.rabi * p.rabi / p.trap;
}

double alpha_squared(const ModelParams& p)
{
    return 4.0 * kPi * std::pow(p.rabi, 4) / std::pow(p.trap, 3);
}

double detuning_for_xi(double xi, double mass, double spacing)
{
    if (!(xi > 0.0)) throw ParameterError("xi must be > 0");
    const double k0 = 1.0 / (xi * spacing);
    return k0 * k0 / (2.0 * mass);
}

}  // namespace matterwave

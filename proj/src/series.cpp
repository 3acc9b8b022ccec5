#include "matterwave/series.hpp"

#include <cmath>

namespace matterwave {

TimeGrid::TimeGrid(double dt_, std::size_t steps_) : dt(dt_), steps(steps_)
{
    if (!(dt > 0.0) || !std::isfinite(dt)) throw ParameterError("time step must be finite and > 0");
}

TimeGrid TimeGrid::covering(double T, double dt_max)
{
    if (!(T > 0.0) || !(dt_max > 0.0)) throw ParameterError("grid needs T > 0 and dt > 0");
    const auto n = static_cast<std::size_t>(std::ceil(T / dt_max - 1e-9));
    return TimeGrid(T / static_cast<double>(n), n);
}

ComplexSeries::ComplexSeries(double t0_, double dt_, std::vector<cplx> values_)
    : t0(t0_), dt(dt_), values(std::move(values_))
{
    if (!(dt > 0.0)) throw ParameterError("series dt must be > 0");
    if (values.empty()) throw ParameterError("series must hold at least one sample");
}

std::vector<double> ComplexSeries::abs2() const
{
    std::vector<double> out(values.size());
    for (std::size_t k = 0; k < values.size(); ++k) out[k] = std::norm(values[k]);
    return out;
}

}  // namespace matterwave

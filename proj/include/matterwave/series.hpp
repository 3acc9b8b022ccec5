#pragma once

#include <cstddef>
#include <vector>

#include "matterwave/params.hpp"

namespace matterwave {

/// Uniform time grid t_k = k dt, k = 0..steps.
struct TimeGrid {
    double dt = 0.01;
    std::size_t steps = 100;

    TimeGrid() = default;
    TimeGrid(double dt_, std::size_t steps_);
    /// Grid covering [0, T] with step close to (never above) dt_max.
    static TimeGrid covering(double T, double dt_max);

    [[nodiscard]] double time(std::size_t k) const { return static_cast<double>(k) * dt; }
    [[nodiscard]] double end() const { return time(steps); }
    [[nodiscard]] std::size_t size() const { return steps + 1; }
};

/// Uniformly sampled complex time series.
struct ComplexSeries {
    double t0 = 0.0;
    double dt = 1.0;
    std::vector<cplx> values;

    ComplexSeries() = default;
    ComplexSeries(double t0_, double dt_, std::vector<cplx> values_);

    [[nodiscard]] std::size_t size() const { return values.size(); }
    [[nodiscard]] double time(std::size_t k) const { return t0 + static_cast<double>(k) * dt; }
    [[nodiscard]] const cplx& operator[](std::size_t k) const { return values[k]; }
    [[nodiscard]] std::vector<double> abs2() const;
};

}  // namespace matterwave

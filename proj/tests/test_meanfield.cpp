#include "doctest.h"

#include <cmath>

#include "matterwave/kernels.hpp"
#include "matterwave/meanfield.hpp"
#include "matterwave/volterra.hpp"

using namespace matterwave;

namespace {

ModelParams ring(int sites, double detuning = 0.0)
{
    ModelParams p;
    p.trap = 50.0;
    p.spacing = 1.0;  // d0 / x0 = 10
    p.shape = {sites};
    p.detuning = detuning;
    return p;
}

double max_abs_y(const MeanFieldTrajectory& tr)
{
    double v = 0.0;
    for (const auto& y : tr.y) v = std::max(v, std::abs(y));
    return v;
}

}  // namespace

TEST_CASE("unpolarized inverted state is a fixed point")
{
    const ModelParams p = ring(200);
    const auto tr = solve_meanfield(p, lattice_from(p, true), {0.0, 1.0}, 100.0, 0.25);
    for (std::size_t k = 0; k < tr.times.size(); ++k) {
        CHECK(tr.y[k] == cplx{});
        CHECK(tr.z[k] == 1.0);
    }
}

TEST_CASE("phase covariance")
{
    for (double detuning : {0.0, -0.3}) {
        const ModelParams p = ring(60, detuning);
        const auto lat = lattice_from(p, true);
        const double phi = 0.813;
        const auto a = solve_meanfield(p, lat, {1e-3, 1.0}, 150.0, 0.2);
        const auto b = solve_meanfield(p, lat, {std::polar(1e-3, phi), 1.0}, 150.0, 0.2);
        const double scale = max_abs_y(a);
        for (std::size_t k = 0; k < a.times.size(); ++k) {
            CHECK(std::abs(b.y[k] - a.y[k] * std::polar(1.0, phi)) <= 1e-12 * scale);
            CHECK(std::abs(b.z[k] - a.z[k]) <= 1e-12);
        }
    }
}

TEST_CASE("spin length is conserved")
{
    const ModelParams p = ring(100, 0.2);
    const auto tr = solve_meanfield(p, lattice_from(p, true), {0.3, 0.5}, 200.0, 0.2);
    CHECK(tr.max_length_drift <= 1e-12);
    CHECK_FALSE(tr.z_out_of_range);
}

TEST_CASE("linear regime matches the Volterra solver")
{
    // For |y| << 1 and z = 1, y / y0 solves A' = + int G_coll A, i.e. the
    // single-emitter equation with kernel -G_coll.
    for (double detuning : {0.0, 0.4}) {
        CAPTURE(detuning);
        const ModelParams p = ring(30, detuning);
        const auto lat = lattice_from(p, true);
        const CollectiveKernel ck(p, lat);
        const double T = 60.0;
        const double y0 = 1e-9;
        const auto mf = solve_meanfield(p, lat, {y0, 1.0}, T, 0.05);
        const auto ref = solve_volterra([&ck](double t) { return -ck(t); }, T, 0.005, detuning,
                                        VolterraOptions{false});
        double worst = 0.0, scale = 0.0;
        for (std::size_t k = 0; k < mf.times.size(); ++k) {
            const cplx r = ref.amplitude[k * 10];
            worst = std::max(worst, std::abs(mf.y[k] / y0 - r));
            scale = std::max(scale, std::abs(r));
        }
        CHECK(worst <= 2e-3 * scale);
    }
}

TEST_CASE("polarization summary")
{
    MeanFieldTrajectory c;
    for (int k = 0; k < 40; ++k) {
        c.times.push_back(k);
        c.y.push_back({0.3, 0.4});
        c.z.push_back(-0.2);
    }
    const auto s = polarization_summary(c, 0.5);
    CHECK(s.y_abs_st == doctest::Approx(0.5));
    CHECK(std::abs(s.y_st - cplx{0.3, 0.4}) < 1e-15);
    CHECK(s.z_st == doctest::Approx(-0.2));
    CHECK(s.converged);
    CHECK(s.rotation_frequency == 0.0);

    MeanFieldTrajectory r = c;
    for (int k = 0; k < 40; ++k) {
        r.y[k] = std::polar(0.5, 0.05 * k);
        r.z[k] = -0.2 + 0.01 * k;
    }
    const auto sr = polarization_summary(r, 0.5);
    CHECK(sr.rotation_frequency == doctest::Approx(0.05));
    CHECK_FALSE(sr.converged);

    MeanFieldTrajectory shortt;
    shortt.times = {0.0};
    shortt.y = {0.0};
    shortt.z = {1.0};
    CHECK_THROWS_AS((void)polarization_summary(shortt, 0.5), ParameterError);
}

TEST_CASE("spontaneous polarization on a ring of 1000 sites")
{
    const ModelParams p = ring(1000);
    const auto lat = lattice_from(p, true);
    const double dt = default_meanfield_dt(p);
    MeanFieldOptions opt;
    opt.stride = 4;
    const auto a = solve_meanfield(p, lat, {1e-6, 1.0}, 2000.0, dt, opt);
    const auto sa = polarization_summary(a, 0.25);
    CHECK(sa.converged);
    CHECK(sa.y_abs_st > 10.0 * 1e-6);
    CHECK(sa.z_st > -0.95);

    const auto b = solve_meanfield(p, lat, {1e-8, 1.0}, 2000.0, dt, opt);
    const auto sb = polarization_summary(b, 0.25);
    CHECK(sb.converged);
    CHECK(std::abs(sa.z_st - sb.z_st) < 1e-2);
}

TEST_CASE("argument checks")
{
    const ModelParams p = ring(10);
    const auto lat = lattice_from(p, true);
    CHECK_THROWS_AS((void)solve_meanfield(p, lat, {1.5, 0.0}, 10.0, 0.1), ParameterError);
    CHECK_THROWS_AS((void)solve_meanfield(p, lat, {0.0, 1.0}, -1.0, 0.1), ParameterError);
    MeanFieldOptions opt;
    opt.max_steps = 10;
    CHECK_THROWS_AS((void)solve_meanfield(p, lat, {0.0, 1.0}, 10.0, 0.1, opt), ParameterError);
}

TEST_CASE("step halving at the default step")
{
    const ModelParams p = ring(1000);
    const auto lat = lattice_from(p, true);
    const double dt = default_meanfield_dt(p);
    MeanFieldOptions coarse_opt;
    coarse_opt.stride = 1;
    MeanFieldOptions fine_opt;
    fine_opt.stride = 2;
    const auto a = solve_meanfield(p, lat, {1e-6, 1.0}, 2000.0, dt, coarse_opt);
    const auto b = solve_meanfield(p, lat, {1e-6, 1.0}, 2000.0, 0.5 * dt, fine_opt);
    REQUIRE(a.times.size() == b.times.size());
    double dy = 0.0, dz = 0.0;
    for (std::size_t k = 0; k < a.times.size(); ++k) {
        dy = std::max(dy, std::abs(a.y[k] - b.y[k]));
        dz = std::max(dz, std::abs(a.z[k] - b.z[k]));
    }
    MESSAGE("step halving: max |dy| = " << dy << ", max |dz| = " << dz);
    CHECK(dy < 1e-3);
    CHECK(dz < 1e-3);
}

#include "doctest.h"

#include <cmath>

#include "matterwave/params.hpp"

using namespace matterwave;

TEST_CASE("derive reproduces the defining identities")
{
    ModelParams p;
    p.rabi = 1.0;
    p.trap = 1.0;
    p.detuning = 8.0;
    p.mass = 0.5;
    p.spacing = 1.0;
    const auto d = derive(p);
    CHECK(d.alpha_kernel == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(d.alpha == doctest::Approx(2.0 * std::sqrt(kPi)).epsilon(1e-15));
    CHECK(d.alpha == doctest::Approx(3.5449077018).epsilon(1e-10));
    REQUIRE(d.gamma0.has_value());
    CHECK(*d.gamma0 == doctest::Approx(10.0265).epsilon(1e-5));
    CHECK(*d.gamma0 == doctest::Approx(2.0 * std::sqrt(kPi * 8.0)).epsilon(1e-14));
    CHECK(d.x0 == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("k0 and xi")
{
    ModelParams p;
    p.mass = 0.5;
    p.detuning = 2.0;
    p.spacing = 1.0;
    const auto d = derive(p);
    CHECK(*d.k0 == doctest::Approx(std::sqrt(2.0)).epsilon(1e-14));
    CHECK(*d.xi == doctest::Approx(0.70711).epsilon(1e-5));
}

TEST_CASE("chi uses M^{1/3} xi^2")
{
    ModelParams p;
    p.dim = 3;
    p.shape = {10, 10, 10};
    p.mass = 1.0;
    p.spacing = 1.0;
    p.detuning = detuning_for_xi(2.0, p.mass, p.spacing);
    const auto d = derive(p);
    CHECK(*d.xi == doctest::Approx(2.0).epsilon(1e-13));
    CHECK(*d.chi == doctest::Approx(40.0).epsilon(1e-12));
}

TEST_CASE("gamma0 only above the band, |gamma0| always")
{
    ModelParams p;
    p.detuning = -3.0;
    const auto d = derive(p);
    CHECK_FALSE(d.gamma0.has_value());
    CHECK(d.gamma0_abs == doctest::Approx(d.alpha * std::sqrt(3.0)));

    p.detuning = 0.0;
    const auto z = derive(p);
    CHECK_FALSE(z.k0.has_value());
    CHECK_FALSE(z.xi.has_value());
    CHECK_FALSE(z.chi.has_value());
    CHECK(z.gamma0_abs == 0.0);
}

TEST_CASE("derive is pure and rates scale as rabi^2")
{
    ModelParams p;
    p.detuning = 0.7;
    const auto a = derive(p);
    const auto b = derive(p);
    CHECK(a.alpha == b.alpha);
    CHECK(*a.gamma0 == *b.gamma0);
    CHECK(*a.xi == *b.xi);

    ModelParams q = p;
    q.rabi = 2.0 * p.rabi;
    const auto c = derive(q);
    CHECK(c.alpha == doctest::Approx(4.0 * a.alpha).epsilon(1e-14));
    CHECK(*c.gamma0 == doctest::Approx(4.0 * *a.gamma0).epsilon(1e-14));
}

TEST_CASE("validation errors and warnings")
{
    ModelParams p;
    p.rabi = 0.0;
    CHECK_FALSE(validate(p).ok());
    CHECK_THROWS_AS((void)derive(p), ParameterError);

    p = ModelParams{};
    p.dim = 2;
    p.shape = {3};
    CHECK_FALSE(validate(p).ok());

    p = ModelParams{};
    p.shape = {0};
    CHECK_FALSE(validate(p).ok());

    p = ModelParams{};
    p.trap = 5.0;
    const auto r = validate(p);
    CHECK(r.ok());
    CHECK(r.warnings.size() == 1);

    p.trap = 50.0;
    CHECK(validate(p).warnings.empty());
}

TEST_CASE("alpha squared and bare detuning")
{
    ModelParams p;
    p.trap = 50.0;
    p.detuning = -1.0;
    const auto d = derive(p);
    CHECK(alpha_squared(p) == doctest::Approx(d.alpha * d.alpha).epsilon(1e-14));
    CHECK(bare_detuning(p) == doctest::Approx(-1.0 + 0.04).epsilon(1e-14));
}

#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "matterwave/config.hpp"
#include "matterwave/scenario.hpp"

using namespace matterwave;

namespace {

std::vector<ConfigIssue> issues_of(const std::string& text)
{
    try {
        (void)parse_config(text);
    } catch (const ConfigError& e) {
        return e.issues();
    }
    return {};
}

bool mentions(const std::vector<ConfigIssue>& issues, const std::string& what, int line = -1)
{
    for (const auto& i : issues)
        if (i.message.find(what) != std::string::npos && (line < 0 || i.line == line)) return true;
    return false;
}

}  // namespace

TEST_CASE("minimal single_decay config gets defaults")
{
    const auto c = parse_config("scenario = single_decay\n[model]\ndetuning_alpha2 = -8\n");
    CHECK(c.kind == ScenarioKind::single_decay);
    CHECK(c.name == "single_decay");
    CHECK(c.model.rabi == 1.0);
    CHECK(c.model.trap == 50.0);
    REQUIRE(c.model.detuning_alpha2);
    CHECK(*c.model.detuning_alpha2 == -8.0);
    CHECK(c.run.T == 0.0);
    CHECK(c.run.stride == 1);
    CHECK(c.output.csv);
    CHECK(c.output.json);

    const ModelParams p = resolve_model(c.model);
    CHECK(p.detuning == doctest::Approx(-8.0 * alpha_squared(p)).epsilon(1e-14));

    const auto literal = parse_config("scenario = single_decay\n[model]\ndetuning = -8\n");
    CHECK(resolve_model(literal.model).detuning == -8.0);
}

TEST_CASE("misspelled key is reported with its line and a suggestion")
{
    const auto issues = issues_of("scenario = single_decay\n\n[model]\ndetunning = -8\n");
    REQUIRE(issues.size() == 1);
    CHECK(issues[0].line == 4);
    CHECK(mentions(issues, "detunning"));
    CHECK(mentions(issues, "did you mean 'detuning'"));
}

TEST_CASE("all errors are collected")
{
    const std::string text = "scenario = superradiance\n"
                             "[model]\n"
                             "rabi = abc\n"
                             "trapp = 50\n"
                             "rabi = 2\n"
                             "[run]\n"
                             "detunings_alpha2 = 1\n"
                             "[plots]\n";
    const auto issues = issues_of(text);
    CHECK(issues.size() == 5);
    CHECK(mentions(issues, "rabi", 3));
    CHECK(mentions(issues, "trapp", 4));
    CHECK(mentions(issues, "duplicate", 5));
    CHECK(mentions(issues, "not used by scenario kind superradiance", 7));
    CHECK(mentions(issues, "unknown section", 8));
    for (std::size_t i = 1; i < issues.size(); ++i) CHECK(issues[i - 1].line <= issues[i].line);

    CHECK(mentions(issues_of("[model]\nrabi = 1\n"), "missing required key 'scenario'"));
    CHECK(mentions(issues_of("scenario = decay\n"), "unknown scenario kind"));
    CHECK(mentions(issues_of("scenario = meanfield\nrabi\n"), "expected 'key = value'", 2));
}

TEST_CASE("validation rules")
{
    // The pair rates need a range parameter, which needs a nonzero detuning.
    const auto rates = issues_of("scenario = rates_table\n[model]\ndetuning = 0\n");
    REQUIRE_FALSE(rates.empty());
    CHECK(mentions(rates, "detuning"));
    CHECK(issues_of("scenario = rates_table\n[model]\ndetuning = 0.1\n").empty());
    CHECK(issues_of("scenario = rates_table\n[run]\nxi_values = 1, 2\n").empty());

    CHECK_FALSE(issues_of("scenario = single_decay\n[model]\ntrap = -1\n").empty());
    CHECK_FALSE(issues_of("scenario = single_decay\n[model]\ndetuning = 1\ndetuning_alpha2 = 2\n").empty());
    CHECK_FALSE(issues_of("scenario = meanfield\n[model]\ndim = 2\nshape = 10\n").empty());
    CHECK_FALSE(issues_of("scenario = lattice_decay\n[model]\ndetuning = -1\nshape = 4\n").empty());
    CHECK_FALSE(issues_of("scenario = hopping\n[model]\ndetuning = 1\nshape = 4\n").empty());
    CHECK_FALSE(issues_of("scenario = superradiance\n[model]\nxi = 1\nshape = 300\n").empty());
    CHECK_FALSE(issues_of("scenario = meanfield\n[run]\nstride = 0\n").empty());
    CHECK_FALSE(issues_of("scenario = meanfield\nname = a/b\n").empty());
    CHECK_FALSE(issues_of("scenario = single_decay\n[model]\nxi = 1\nband = sideways\n").empty());
    CHECK_FALSE(issues_of("scenario = single_decay\n[model]\nlaser_k = 1,0,0\nlaser_k_k0 = 1,0,0\ndetuning=1\n").empty());
    CHECK_FALSE(issues_of("scenario = single_decay\n[output]\nformats = csv, png\n").empty());
    CHECK(issues_of("scenario = hopping\n[model]\nxi = 1\nband = below\nshape = 4\n").empty());
}

TEST_CASE("xi and laser in units of k0 resolve consistently")
{
    const auto c = parse_config("scenario = lattice_decay\n[model]\nxi = 0.5\nspacing = 2\nmass = 3\n"
                                "laser_k_k0 = 0, 1, 0\ndim = 2\nshape = 3, 3\n");
    const ModelParams p = resolve_model(c.model);
    const DerivedParams d = derive(p);
    REQUIRE(d.xi);
    CHECK(*d.xi == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(p.detuning > 0.0);
    CHECK(p.laser_k[0] == 0.0);
    CHECK(p.laser_k[1] == doctest::Approx(*d.k0).epsilon(1e-14));

    const auto below = parse_config("scenario = hopping\n[model]\nxi = 2\nband = below\nshape = 5\n");
    CHECK(resolve_model(below.model).detuning < 0.0);
    CHECK(*derive(resolve_model(below.model)).xi == doctest::Approx(2.0).epsilon(1e-14));

    const ModelParams q = with_xi(p, 4.0, -1.0);
    CHECK(q.detuning < 0.0);
    CHECK(*derive(q).xi == doctest::Approx(4.0).epsilon(1e-14));
}

TEST_CASE("serialize then parse gives back the same config")
{
    for (const auto& b : builtin_scenarios()) {
        CAPTURE(b.name);
        const auto c = parse_config(b.text);
        CHECK(c.name == b.name);
        const std::string text = serialize_config(c);
        CHECK(parse_config(text) == c);
        CHECK(serialize_config(parse_config(text)) == text);
    }

    auto c = parse_config("scenario = meanfield\ndescription = ring, seeded\n[model]\nrabi = 0.1\ntrap = 3.3\n"
                          "detuning = -0.012345678901234567\ndim = 1\nshape = 7\nperiodic = yes\n"
                          "[run]\ny0_re = 1e-300\ny0_im = -2.5e-7\nT = 12.5\n[output]\nformats = json\n");
    CHECK(parse_config(serialize_config(c)) == c);
    c.model.laser_k = {0.1, 1.0 / 3.0, 0.0};
    CHECK(parse_config(serialize_config(c)) == c);
}

TEST_CASE("set_config_value")
{
    auto c = parse_config("scenario = superradiance\n[model]\nxi = 1\nshape = 10\n");
    set_config_value(c, "model.trap", "80");
    CHECK(c.model.trap == 80.0);
    set_config_value(c, "run.xi_values", "1, 2 3");
    CHECK(c.run.xi_values == std::vector<double>{1.0, 2.0, 3.0});
    set_config_value(c, "name", "sweep_a");
    CHECK(c.name == "sweep_a");

    const auto before = c;
    CHECK_THROWS_AS(set_config_value(c, "model.trapp", "1"), ConfigError);
    CHECK_THROWS_AS(set_config_value(c, "model.trap", "-1"), ConfigError);
    CHECK_THROWS_AS(set_config_value(c, "model.trap", "fast"), ConfigError);
    CHECK_THROWS_AS(set_config_value(c, "run.ratios", "0.1"), ConfigError);
    CHECK(c == before);
}

TEST_CASE("config keys per kind")
{
    for (auto k : all_scenario_kinds()) {
        CHECK(scenario_kind_from(to_string(k)) == k);
        const auto keys = config_keys(k);
        CHECK(std::find(keys.begin(), keys.end(), "model.rabi") != keys.end());
        CHECK(std::find(keys.begin(), keys.end(), "output.directory") != keys.end());
    }
    const auto rates = config_keys(ScenarioKind::rates_table);
    CHECK(std::find(rates.begin(), rates.end(), "run.T") == rates.end());
    const auto mf = config_keys(ScenarioKind::meanfield);
    CHECK(std::find(mf.begin(), mf.end(), "run.y0_re") != mf.end());
}
